// observables.hpp: reduced states, passive states, ergotropy and energies.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qbat/operators.hpp"

namespace qbat {

/// Reduced density matrix on the kept slots (ascending slot order), tracing
/// out the rest. dims lists every slot's local dimension.
Matrix partial_trace(const Matrix& rho, std::span<const Index> dims, std::span<const std::size_t> keep);
Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout, std::span<const std::size_t> keep);

/// Eigenvalues of rho sorted descending, paired with eigenvalues of H sorted
/// ascending.
struct PassiveDecomposition {
    Eigen::VectorXd populations;  // descending
    Eigen::VectorXd energies;     // ascending
    double energy{0.0};           // Tr[rho H]
    double passive_energy{0.0};   // sum_k populations[k] * energies[k]
    double ergotropy{0.0};        // energy - passive_energy
    Matrix state;                 // sum_k populations[k] |e_k><e_k|
};

/// Population floor below which a state is rejected as too unphysical to rank.
inline constexpr double kPassiveRejectFloor = -1e-4;

/// Throws std::domain_error if an eigenvalue of rho lies below reject_floor.
/// Pass -infinity to rank any Hermitian rho as-is (trajectory monitoring).
PassiveDecomposition passive_state(const Matrix& rho, const Matrix& h, double reject_floor = kPassiveRejectFloor);

/// Tr[rho H] minus the passive energy. Values in [-1e-10, 0) are reported as 0.
double ergotropy(const Matrix& rho, const Matrix& h, double reject_floor = kPassiveRejectFloor);

/// Ergotropy of the reduced spin-chain state against the chain-local H_B.
double battery_ergotropy(const Matrix& rho_full, const HilbertLayout& layout, const Matrix& h_battery_local,
                         double reject_floor = kPassiveRejectFloor);

struct EnergyRecord {
    double battery{0.0};   // Tr[rho H_B]
    double catalyst{0.0};  // Tr[rho H_cat]
    double excitations{0.0};
};

/// Real part of Tr[rho X]; throws std::runtime_error if the imaginary part
/// exceeds 1e-10.
double expectation(const Matrix& rho, const Matrix& x);

EnergyRecord energies(const Matrix& rho_full, const SystemOperators& ops);

}  // namespace qbat
