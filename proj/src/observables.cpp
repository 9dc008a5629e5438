#include "qbat/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbat {

Matrix partial_trace(const Matrix& rho, std::span<const Index> dims, std::span<const std::size_t> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace needs at least one kept slot");
    }
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t s : keep) {
        if (s >= dims.size()) throw std::out_of_range("partial_trace slot out of range");
        if (kept[s]) throw std::invalid_argument("partial_trace slot listed twice");
        kept[s] = true;
    }
    Index dim = 1;
    Index kept_dim = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        dim *= dims[s];
        if (kept[s]) kept_dim *= dims[s];
    }
    if (rho.rows() != dim || rho.cols() != dim) {
        throw std::invalid_argument("partial_trace: matrix does not match slot dimensions");
    }

    // Split every composite index into (kept part, traced part).
    std::vector<Index> kept_idx(static_cast<std::size_t>(dim));
    std::vector<Index> traced_idx(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) {
        Index rem = i;
        Index k = 0, kstride = 1, t = 0, tstride = 1;
        for (std::size_t s = dims.size(); s-- > 0;) {
            const Index level = rem % dims[s];
            rem /= dims[s];
            if (kept[s]) {
                k += level * kstride;
                kstride *= dims[s];
            } else {
                t += level * tstride;
                tstride *= dims[s];
            }
        }
        kept_idx[static_cast<std::size_t>(i)] = k;
        traced_idx[static_cast<std::size_t>(i)] = t;
    }

    Matrix out = Matrix::Zero(kept_dim, kept_dim);
    for (Index j = 0; j < dim; ++j) {
        const Index tj = traced_idx[static_cast<std::size_t>(j)];
        const Index kj = kept_idx[static_cast<std::size_t>(j)];
        for (Index i = 0; i < dim; ++i) {
            if (traced_idx[static_cast<std::size_t>(i)] == tj) {
                out(kept_idx[static_cast<std::size_t>(i)], kj) += rho(i, j);
            }
        }
    }
    return out;
}

Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout, std::span<const std::size_t> keep) {
    return partial_trace(rho, layout.dims(), keep);
}

PassiveDecomposition passive_state(const Matrix& rho, const Matrix& h, double reject_floor) {
    if (rho.rows() != rho.cols() || h.rows() != h.cols() || rho.rows() != h.rows()) {
        throw std::invalid_argument("passive_state: rho and H must be square and of equal size");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> rho_solver(rho, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> h_solver(h);
    if (rho_solver.info() != Eigen::Success || h_solver.info() != Eigen::Success) {
        throw std::runtime_error("passive_state: eigendecomposition failed");
    }
    PassiveDecomposition out;
    out.populations = rho_solver.eigenvalues().reverse();
    out.energies = h_solver.eigenvalues();
    const double min_pop = out.populations.minCoeff();
    if (min_pop < reject_floor) {
        std::ostringstream msg;
        msg << "passive_state: density matrix eigenvalue " << min_pop << " is below " << reject_floor;
        throw std::domain_error(msg.str());
    }
    out.energy = expectation(rho, h);
    out.passive_energy = out.populations.dot(out.energies);
    out.ergotropy = out.energy - out.passive_energy;
    const Matrix& vecs = h_solver.eigenvectors();
    out.state = vecs * out.populations.cast<Complex>().asDiagonal() * vecs.adjoint();
    return out;
}

double ergotropy(const Matrix& rho, const Matrix& h, double reject_floor) {
    const double w = passive_state(rho, h, reject_floor).ergotropy;
    if (w < 0.0 && w >= -1e-10) {
        return 0.0;
    }
    return w;
}

double battery_ergotropy(const Matrix& rho_full, const HilbertLayout& layout, const Matrix& h_battery_local,
                         double reject_floor) {
    const std::vector<std::size_t> spins = layout.spin_slots();
    return ergotropy(partial_trace(rho_full, layout, spins), h_battery_local, reject_floor);
}

double expectation(const Matrix& rho, const Matrix& x) {
    if (rho.rows() != x.cols() || rho.cols() != x.rows()) {
        throw std::invalid_argument("expectation: shape mismatch");
    }
    // Tr[rho X] = sum_ij rho_ij X_ji
    const Complex v = (rho.transpose().array() * x.array()).sum();
    if (std::abs(v.imag()) > 1e-10) {
        std::ostringstream msg;
        msg << "expectation value has imaginary residue " << v.imag();
        throw std::runtime_error(msg.str());
    }
    return v.real();
}

EnergyRecord energies(const Matrix& rho_full, const SystemOperators& ops) {
    return EnergyRecord{
        .battery = expectation(rho_full, ops.h_battery),
        .catalyst = expectation(rho_full, ops.h_cat),
        .excitations = expectation(rho_full, ops.n_exc),
    };
}

}  // namespace qbat
