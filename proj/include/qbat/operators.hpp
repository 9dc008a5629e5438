// operators.hpp: truncated composite Hilbert space, local operator embedding,
// and the cavity / spin-chain / catalyst Hamiltonians.
//
// Slot order is fixed as photon ⊗ spin_1 ⊗ ... ⊗ spin_N ⊗ catalyst. Within a
// two-level slot, basis index 0 is the ground state |g> and 1 is |e>.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbat {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Shape of the composite space. d_cat = 1 is a model with the catalyst
/// slot removed (used to cross-check lambda = 0 runs); the physical
/// catalyst is a qubit, d_cat = 2.
class HilbertLayout {
public:
    HilbertLayout(Index d_photon, std::size_t n_spins, Index d_cat = 2);

    Index d_photon() const noexcept { return d_photon_; }
    std::size_t n_spins() const noexcept { return n_spins_; }
    Index d_cat() const noexcept { return d_cat_; }
    bool has_catalyst() const noexcept { return d_cat_ > 1; }

    /// Total dimension d_photon * 2^n_spins * d_cat.
    Index dim() const noexcept { return dim_; }

    std::size_t slot_count() const noexcept { return dims_.size(); }
    std::size_t photon_slot() const noexcept { return 0; }
    std::size_t spin_slot(std::size_t site) const;
    std::size_t catalyst_slot() const noexcept { return n_spins_ + 1; }

    Index local_dim(std::size_t slot) const { return dims_.at(slot); }
    std::span<const Index> dims() const noexcept { return dims_; }

    /// Composite basis index of a product of slot levels (one per slot).
    Index index_of(std::span<const Index> levels) const;
    /// Inverse of index_of.
    std::vector<Index> levels_of(Index index) const;

    /// Slot numbers of all spins, in chain order.
    std::vector<std::size_t> spin_slots() const;

    bool operator==(const HilbertLayout&) const = default;

private:
    Index d_photon_;
    std::size_t n_spins_;
    Index d_cat_;
    Index dim_;
    std::vector<Index> dims_;
};

/// The layout used throughout the reference study: 6 Fock levels, 3 spins, qubit catalyst.
HilbertLayout reference_layout();

struct PhysicalParams {
    double omega_c{2.5};    // cavity frequency
    double omega_a{2.5};    // spin excitation energy
    double J{1.5};          // nearest-neighbour exchange
    double g{0.2};          // cavity-spin coupling
    double omega_cat{0.25}; // catalyst level splitting
    double lambda{0.0};     // catalyst-spin coupling

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

namespace local {
Matrix annihilation(Index d);   // a|n> = sqrt(n)|n-1>
Matrix number(Index d);         // a^dagger a
Matrix sigma_minus();           // |g><e|
Matrix sigma_plus();            // |e><g|
Matrix sigma_z();               // |e><e| - |g><g|
}  // namespace local

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I over an arbitrary list of slot dimensions.
Matrix embed(const Matrix& op, std::size_t slot, std::span<const Index> dims);

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I in the layout's slot order.
Matrix embed_local(const Matrix& op, std::size_t slot, const HilbertLayout& layout);

Matrix build_hamiltonian(const PhysicalParams& p, const HilbertLayout& layout);

struct BatteryHamiltonian {
    Matrix embedded;  // H_spin + H_J on the composite space
    Matrix local;     // same operator on the 2^N spin-chain space
};

BatteryHamiltonian build_battery_hamiltonian(const PhysicalParams& p, const HilbertLayout& layout);

/// Prebuilt embedded operators shared by the integrators and observables.
/// Immutable after construction.
struct SystemOperators {
    HilbertLayout layout;
    PhysicalParams params;

    Matrix a, a_dag;
    std::vector<Matrix> sigma_minus, sigma_plus;
    Matrix c, c_dag;  // zero when the layout has no catalyst slot

    Matrix h_tot;
    Matrix h_battery;
    Matrix h_battery_local;
    Matrix h_cat;
    Matrix n_exc;  // a^dagger a + sum sigma+ sigma- + c^dagger c
    Matrix jump;   // photon loss, L = a
};

SystemOperators build_system_operators(const PhysicalParams& p, const HilbertLayout& layout);

/// Density matrix of a product basis state, one level per slot.
Matrix product_state(const HilbertLayout& layout, std::span<const Index> levels);

/// |n> photon ⊗ all spins and catalyst in |g>. n = 0 is the vacuum.
Matrix cavity_fock_state(const HilbertLayout& layout, Index n);

}  // namespace qbat
