#include "qbat/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbat {

SectorBasis::SectorBasis(const Matrix& charge) {
    if (charge.rows() != charge.cols()) {
        throw std::invalid_argument("charge operator must be square");
    }
    const Index dim = charge.rows();
    std::vector<long> q(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            if (i != j && charge(i, j) != Complex(0.0)) {
                throw std::invalid_argument("charge operator must be diagonal");
            }
        }
        const Complex v = charge(i, i);
        const double r = std::round(v.real());
        if (v.imag() != 0.0 || std::abs(v.real() - r) > 1e-12) {
            throw std::invalid_argument("charge operator must have integer eigenvalues");
        }
        q[static_cast<std::size_t>(i)] = static_cast<long>(r);
    }
    order_.resize(static_cast<std::size_t>(dim));
    std::iota(order_.begin(), order_.end(), Index{0});
    std::stable_sort(order_.begin(), order_.end(), [&](Index x, Index y) {
        return q[static_cast<std::size_t>(x)] < q[static_cast<std::size_t>(y)];
    });
    for (std::size_t p = 0; p < order_.size(); ++p) {
        const long qp = q[static_cast<std::size_t>(order_[p])];
        if (charges_.empty() || charges_.back() != qp) {
            charges_.push_back(qp);
            offsets_.push_back(static_cast<Index>(p));
            sizes_.push_back(0);
        }
        ++sizes_.back();
    }
}

SectorBasis SectorBasis::trivial(Index dim) {
    SectorBasis b;
    b.order_.resize(static_cast<std::size_t>(dim));
    std::iota(b.order_.begin(), b.order_.end(), Index{0});
    b.offsets_ = {0};
    b.sizes_ = {dim};
    b.charges_ = {0};
    return b;
}

Matrix SectorBasis::to_sectors(const Matrix& x) const {
    const Index n = dim();
    Matrix out(n, n);
    for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) {
            out(r, c) = x(order_[r], order_[c]);
        }
    }
    return out;
}

Matrix SectorBasis::from_sectors(const Matrix& x) const {
    const Index n = dim();
    Matrix out(n, n);
    for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) {
            out(order_[r], order_[c]) = x(r, c);
        }
    }
    return out;
}

bool SectorBasis::is_block_diagonal(const Matrix& x) const {
    const Matrix s = to_sectors(x);
    for (std::size_t a = 0; a < sector_count(); ++a) {
        for (std::size_t b = 0; b < sector_count(); ++b) {
            if (a == b) continue;
            if (!(s.block(offsets_[a], offsets_[b], sizes_[a], sizes_[b]).array() == Complex(0.0)).all()) {
                return false;
            }
        }
    }
    return true;
}

std::vector<long> SectorBasis::shifts(const Matrix& x) const {
    const Matrix s = to_sectors(x);
    std::set<long> found;
    for (std::size_t a = 0; a < sector_count(); ++a) {
        for (std::size_t b = 0; b < sector_count(); ++b) {
            if (!(s.block(offsets_[a], offsets_[b], sizes_[a], sizes_[b]).array() == Complex(0.0)).all()) {
                found.insert(charges_[a] - charges_[b]);
            }
        }
    }
    return {found.begin(), found.end()};
}

namespace {

std::vector<std::vector<Index>> connected_blocks(const SectorBasis& basis,
                                                 std::span<const BlockSupport::Pair> pairs) {
    const std::size_t n = basis.sector_count();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::vector<bool> covered(n, false);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& p : pairs) {
        covered[p.row] = covered[p.col] = true;
        const std::size_t ra = find(p.row);
        const std::size_t rb = find(p.col);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::vector<std::vector<Index>> groups;
    std::vector<long> group_of(n, -1);
    for (std::size_t s = 0; s < n; ++s) {
        if (!covered[s]) continue;
        const std::size_t root = find(s);
        if (group_of[root] < 0) {
            group_of[root] = static_cast<long>(groups.size());
            groups.emplace_back();
        }
        auto& g = groups[static_cast<std::size_t>(group_of[root])];
        for (Index i = 0; i < basis.size(s); ++i) {
            g.push_back(basis.offset(s) + i);
        }
    }
    return groups;
}

}  // namespace

BlockSupport BlockSupport::of_state(const SectorBasis& basis, const Matrix& rho_sorted,
                                    std::optional<long> jump_shift) {
    const std::size_t n = basis.sector_count();
    std::vector<std::vector<bool>> live(n, std::vector<bool>(n, false));
    std::vector<std::pair<std::size_t, std::size_t>> pending;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            auto blk = rho_sorted.block(basis.offset(a), basis.offset(b), basis.size(a), basis.size(b));
            if (!(blk.array() == Complex(0.0)).all()) {
                live[a][b] = true;
                pending.emplace_back(a, b);
            }
        }
    }
    if (jump_shift) {
        auto sector_of = [&](long q) -> std::optional<std::size_t> {
            for (std::size_t s = 0; s < n; ++s) {
                if (basis.charge(s) == q) return s;
            }
            return std::nullopt;
        };
        while (!pending.empty()) {
            const auto [a, b] = pending.back();
            pending.pop_back();
            const auto na = sector_of(basis.charge(a) + *jump_shift);
            const auto nb = sector_of(basis.charge(b) + *jump_shift);
            if (na && nb && !live[*na][*nb]) {
                live[*na][*nb] = true;
                pending.emplace_back(*na, *nb);
            }
        }
    }
    BlockSupport s;
    s.dim_ = basis.dim();
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t a = 0; a < n; ++a) {
            if (live[a][b]) s.pairs_.push_back({a, b});
        }
    }
    for (const auto& p : s.pairs_) {
        for (Index c = 0; c < basis.size(p.col); ++c) {
            for (Index r = 0; r < basis.size(p.row); ++r) {
                const Index col = basis.offset(p.col) + c;
                const Index row = basis.offset(p.row) + r;
                s.entries_.push_back(col * s.dim_ + row);
            }
        }
    }
    std::sort(s.entries_.begin(), s.entries_.end());
    s.components_ = connected_blocks(basis, s.pairs_);
    return s;
}

BlockSupport BlockSupport::full(const SectorBasis& basis) {
    const Matrix ones = Matrix::Ones(basis.dim(), basis.dim());
    return of_state(basis, ones);
}

void BlockSupport::gather(const Matrix& x, std::span<Complex> out) const {
    if (out.size() != entries_.size() || x.rows() != dim_ || x.cols() != dim_) {
        throw std::invalid_argument("BlockSupport::gather shape mismatch");
    }
    const Complex* src = x.data();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        out[i] = src[entries_[i]];
    }
}

void BlockSupport::scatter(std::span<const Complex> in, Matrix& x) const {
    if (in.size() != entries_.size()) {
        throw std::invalid_argument("BlockSupport::scatter shape mismatch");
    }
    x.setZero(dim_, dim_);
    Complex* dst = x.data();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        dst[entries_[i]] = in[i];
    }
}

SpectralPropagator::SpectralPropagator(const SectorBasis& basis, const Matrix& h_sorted) : basis_(basis) {
    if (h_sorted.rows() != basis.dim() || h_sorted.cols() != basis.dim()) {
        throw std::invalid_argument("Hamiltonian dimension does not match sector basis");
    }
    for (std::size_t s = 0; s < basis.sector_count(); ++s) {
        const Matrix blk = h_sorted.block(basis.offset(s), basis.offset(s), basis.size(s), basis.size(s));
        Eigen::SelfAdjointEigenSolver<Matrix> solver(blk);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("failed to diagonalize Hamiltonian sector");
        }
        vectors_.push_back(solver.eigenvectors());
        values_.push_back(solver.eigenvalues());
    }
}

std::vector<Matrix> SpectralPropagator::unitary(double t) const {
    std::vector<Matrix> out;
    out.reserve(vectors_.size());
    for (std::size_t s = 0; s < vectors_.size(); ++s) {
        const Eigen::VectorXcd phase = (Complex(0.0, -t) * values_[s].cast<Complex>()).array().exp();
        out.push_back(vectors_[s] * phase.asDiagonal() * vectors_[s].adjoint());
    }
    return out;
}

void SpectralPropagator::conjugate(std::span<const Matrix> u_blocks, const BlockSupport& support, const Matrix& x,
                                   Matrix& out) const {
    out.setZero(x.rows(), x.cols());
    for (const auto& p : support.pairs()) {
        const Index r0 = basis_.offset(p.row), rn = basis_.size(p.row);
        const Index c0 = basis_.offset(p.col), cn = basis_.size(p.col);
        out.block(r0, c0, rn, cn).noalias() =
            u_blocks[p.row] * x.block(r0, c0, rn, cn) * u_blocks[p.col].adjoint();
    }
}

Eigen::VectorXd block_eigenvalues(const Matrix& rho_sorted, const BlockSupport& support) {
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(rho_sorted.rows()));
    for (const auto& idx : support.components()) {
        const Index n = static_cast<Index>(idx.size());
        Matrix sub(n, n);
        for (Index c = 0; c < n; ++c) {
            for (Index r = 0; r < n; ++r) {
                sub(r, c) = rho_sorted(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sub, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("failed to diagonalize density matrix block");
        }
        for (Index i = 0; i < n; ++i) all.push_back(solver.eigenvalues()(i));
    }
    all.resize(static_cast<std::size_t>(rho_sorted.rows()), 0.0);
    std::sort(all.begin(), all.end());
    return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Index>(all.size()));
}

}  // namespace qbat
