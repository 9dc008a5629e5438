#include "qbat/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qbat {

HilbertLayout::HilbertLayout(Index d_photon, std::size_t n_spins, Index d_cat)
    : d_photon_(d_photon), n_spins_(n_spins), d_cat_(d_cat) {
    if (d_photon < 2) {
        throw std::invalid_argument("d_photon must be >= 2");
    }
    if (n_spins < 1) {
        throw std::invalid_argument("n_spins must be >= 1");
    }
    if (n_spins > 12) {
        throw std::invalid_argument("n_spins must be <= 12 for dense matrices");
    }
    if (d_cat != 1 && d_cat != 2) {
        throw std::invalid_argument("d_cat must be 2 (qubit catalyst) or 1 (no catalyst)");
    }
    dims_.reserve(n_spins + 2);
    dims_.push_back(d_photon);
    for (std::size_t i = 0; i < n_spins; ++i) {
        dims_.push_back(2);
    }
    dims_.push_back(d_cat);
    dim_ = 1;
    for (Index d : dims_) {
        dim_ *= d;
    }
}

std::size_t HilbertLayout::spin_slot(std::size_t site) const {
    if (site >= n_spins_) {
        throw std::out_of_range("spin site out of range");
    }
    return site + 1;
}

Index HilbertLayout::index_of(std::span<const Index> levels) const {
    if (levels.size() != dims_.size()) {
        throw std::invalid_argument("level list must have one entry per slot");
    }
    Index idx = 0;
    for (std::size_t s = 0; s < dims_.size(); ++s) {
        if (levels[s] < 0 || levels[s] >= dims_[s]) {
            throw std::out_of_range("slot level out of range");
        }
        idx = idx * dims_[s] + levels[s];
    }
    return idx;
}

std::vector<Index> HilbertLayout::levels_of(Index index) const {
    std::vector<Index> levels(dims_.size());
    for (std::size_t s = dims_.size(); s-- > 0;) {
        levels[s] = index % dims_[s];
        index /= dims_[s];
    }
    return levels;
}

std::vector<std::size_t> HilbertLayout::spin_slots() const {
    std::vector<std::size_t> out(n_spins_);
    for (std::size_t i = 0; i < n_spins_; ++i) {
        out[i] = i + 1;
    }
    return out;
}

HilbertLayout reference_layout() { return HilbertLayout(6, 3, 2); }

void PhysicalParams::validate() const {
    auto check_finite = [](double v, const char* name) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(name) + " must be finite");
        }
    };
    check_finite(omega_c, "omega_c");
    check_finite(omega_a, "omega_a");
    check_finite(J, "J");
    check_finite(g, "g");
    check_finite(omega_cat, "omega_cat");
    check_finite(lambda, "lambda");
    if (omega_c <= 0) throw std::invalid_argument("omega_c must be > 0");
    if (omega_a <= 0) throw std::invalid_argument("omega_a must be > 0");
    if (omega_cat <= 0) throw std::invalid_argument("omega_cat must be > 0");
    if (g < 0) throw std::invalid_argument("g must be >= 0");
    if (lambda < 0) throw std::invalid_argument("lambda must be >= 0");
}

namespace local {

Matrix annihilation(Index d) {
    Matrix m = Matrix::Zero(d, d);
    for (Index n = 1; n < d; ++n) {
        m(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return m;
}

Matrix number(Index d) {
    Matrix m = Matrix::Zero(d, d);
    for (Index n = 0; n < d; ++n) {
        m(n, n) = static_cast<double>(n);
    }
    return m;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

Matrix sigma_plus() { return sigma_minus().adjoint(); }

Matrix sigma_z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}

}  // namespace local

Matrix embed(const Matrix& op, std::size_t slot, std::span<const Index> dims) {
    if (slot >= dims.size()) {
        throw std::out_of_range("slot index out of range");
    }
    if (op.rows() != op.cols() || op.rows() != dims[slot]) {
        std::ostringstream msg;
        msg << "operator of shape " << op.rows() << "x" << op.cols() << " does not match slot " << slot
            << " of local dimension " << dims[slot];
        throw std::invalid_argument(msg.str());
    }
    Index left = 1;
    for (std::size_t s = 0; s < slot; ++s) left *= dims[s];
    Index right = 1;
    for (std::size_t s = slot + 1; s < dims.size(); ++s) right *= dims[s];
    const Index d = op.rows();
    const Index dim = left * d * right;

    // index = (l * d + i) * right + r
    Matrix out = Matrix::Zero(dim, dim);
    for (Index l = 0; l < left; ++l) {
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                const Complex v = op(i, j);
                if (v == Complex(0.0)) continue;
                const Index row0 = (l * d + i) * right;
                const Index col0 = (l * d + j) * right;
                for (Index r = 0; r < right; ++r) {
                    out(row0 + r, col0 + r) = v;
                }
            }
        }
    }
    return out;
}

Matrix embed_local(const Matrix& op, std::size_t slot, const HilbertLayout& layout) {
    return embed(op, slot, layout.dims());
}

namespace {

// Spin-chain terms over an arbitrary slot list; spin i sits at slot first_spin + i.
Matrix chain_hamiltonian(const PhysicalParams& p, std::size_t n_spins, std::size_t first_spin,
                         std::span<const Index> dims) {
    Index dim = 1;
    for (Index d : dims) dim *= d;
    Matrix h = Matrix::Zero(dim, dim);
    std::vector<Matrix> sm(n_spins);
    for (std::size_t i = 0; i < n_spins; ++i) {
        sm[i] = embed(local::sigma_minus(), first_spin + i, dims);
    }
    for (std::size_t i = 0; i < n_spins; ++i) {
        h += p.omega_a * sm[i].adjoint() * sm[i];
    }
    // open chain
    for (std::size_t i = 0; i + 1 < n_spins; ++i) {
        h += p.J * (sm[i].adjoint() * sm[i + 1] + sm[i + 1].adjoint() * sm[i]);
    }
    return h;
}

}  // namespace

Matrix build_hamiltonian(const PhysicalParams& p, const HilbertLayout& layout) {
    return build_system_operators(p, layout).h_tot;
}

BatteryHamiltonian build_battery_hamiltonian(const PhysicalParams& p, const HilbertLayout& layout) {
    BatteryHamiltonian out;
    out.embedded = chain_hamiltonian(p, layout.n_spins(), 1, layout.dims());
    const std::vector<Index> spin_dims(layout.n_spins(), 2);
    out.local = chain_hamiltonian(p, layout.n_spins(), 0, spin_dims);
    return out;
}

SystemOperators build_system_operators(const PhysicalParams& p, const HilbertLayout& layout) {
    p.validate();
    SystemOperators ops{layout, p, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    const Index dim = layout.dim();

    ops.a = embed_local(local::annihilation(layout.d_photon()), layout.photon_slot(), layout);
    ops.a_dag = ops.a.adjoint();
    for (std::size_t i = 0; i < layout.n_spins(); ++i) {
        ops.sigma_minus.push_back(embed_local(local::sigma_minus(), layout.spin_slot(i), layout));
        ops.sigma_plus.push_back(ops.sigma_minus.back().adjoint());
    }
    if (layout.has_catalyst()) {
        ops.c = embed_local(local::sigma_minus(), layout.catalyst_slot(), layout);
        ops.h_cat = 0.5 * p.omega_cat * embed_local(local::sigma_z(), layout.catalyst_slot(), layout);
    } else {
        ops.c = Matrix::Zero(dim, dim);
        ops.h_cat = Matrix::Zero(dim, dim);
    }
    ops.c_dag = ops.c.adjoint();

    const BatteryHamiltonian hb = build_battery_hamiltonian(p, layout);
    ops.h_battery = hb.embedded;
    ops.h_battery_local = hb.local;

    const Matrix n_photon = ops.a_dag * ops.a;
    Matrix coupling_cavity = Matrix::Zero(dim, dim);
    Matrix coupling_cat = Matrix::Zero(dim, dim);
    Matrix n_spin = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < layout.n_spins(); ++i) {
        const Matrix& sm = ops.sigma_minus[i];
        const Matrix& sp = ops.sigma_plus[i];
        coupling_cavity += ops.a_dag * sm + sp * ops.a;
        coupling_cat += ops.c_dag * sm + sp * ops.c;
        n_spin += sp * sm;
    }

    ops.h_tot = p.omega_c * n_photon + ops.h_battery + ops.h_cat + p.g * coupling_cavity + p.lambda * coupling_cat;
    ops.n_exc = n_photon + n_spin + ops.c_dag * ops.c;
    ops.jump = ops.a;
    return ops;
}

Matrix product_state(const HilbertLayout& layout, std::span<const Index> levels) {
    const Index idx = layout.index_of(levels);
    Matrix rho = Matrix::Zero(layout.dim(), layout.dim());
    rho(idx, idx) = 1.0;
    return rho;
}

Matrix cavity_fock_state(const HilbertLayout& layout, Index n) {
    if (n < 0 || n >= layout.d_photon()) {
        throw std::invalid_argument("Fock level must satisfy 0 <= n < d_photon");
    }
    std::vector<Index> levels(layout.slot_count(), 0);
    levels[layout.photon_slot()] = n;
    return product_state(layout, levels);
}

}  // namespace qbat
