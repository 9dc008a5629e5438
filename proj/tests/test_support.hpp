// Shared helpers for the unit tests: seeded random states and brute-force oracles.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qbat/operators.hpp"

namespace qbat::testing {

inline Matrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline Matrix random_hermitian(Index d, std::mt19937_64& rng) {
    const Matrix a = random_complex(d, d, rng);
    return 0.5 * (a + a.adjoint());
}

// Ginibre construction: G G^dagger / Tr.
inline Matrix random_density(Index d, std::mt19937_64& rng) {
    const Matrix g = random_complex(d, d, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

inline Matrix random_unitary(Index d, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_complex(d, d, rng));
    return qr.householderQ();
}

inline Matrix pure(const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd v = psi / psi.norm();
    return v * v.adjoint();
}

// min over all pairings of ρ-eigenvalues with H-eigenvalues.
inline double brute_force_ergotropy(const Matrix& rho, const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> rs(rho, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> hs(h, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd r = rs.eigenvalues();
    const Eigen::VectorXd e = hs.eigenvalues();
    std::vector<int> perm(static_cast<std::size_t>(r.size()));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0;
        for (std::size_t k = 0; k < perm.size(); ++k) s += r(perm[k]) * e(static_cast<Index>(k));
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return (rho * h).trace().real() - best;
}

// Partial trace by explicit basis labels: ρ_A(a, a') = Σ_b ρ((a,b), (a',b)).
inline Matrix index_sum_partial_trace(const Matrix& rho, const HilbertLayout& layout,
                                      const std::vector<std::size_t>& keep) {
    const auto dims = layout.dims();
    auto project = [&](const std::vector<Index>& levels, bool kept) {
        std::vector<Index> out;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            if ((std::find(keep.begin(), keep.end(), s) != keep.end()) == kept) out.push_back(levels[s]);
        }
        return out;
    };
    Index kd = 1;
    for (std::size_t s : keep) kd *= dims[s];
    auto flat = [&](const std::vector<Index>& levels) {
        Index idx = 0;
        for (std::size_t k = 0; k < keep.size(); ++k) idx = idx * dims[keep[k]] + levels[k];
        return idx;
    };
    Matrix out = Matrix::Zero(kd, kd);
    for (Index i = 0; i < layout.dim(); ++i) {
        const auto li = layout.levels_of(i);
        for (Index j = 0; j < layout.dim(); ++j) {
            const auto lj = layout.levels_of(j);
            if (project(li, false) != project(lj, false)) continue;
            out(flat(project(li, true)), flat(project(lj, true))) += rho(i, j);
        }
    }
    return out;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace qbat::testing
