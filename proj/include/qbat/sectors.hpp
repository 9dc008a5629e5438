// sectors.hpp: block structure from a conserved excitation number.
//
// The total Hamiltonian commutes with N_exc and photon loss lowers N_exc by
// exactly one on both sides of rho, so the nonzero charge blocks of a density
// matrix can only move diagonally downwards. The integrators work in a basis
// sorted by charge and touch only the blocks reachable from the initial state.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qbat/operators.hpp"

namespace qbat {

class SectorBasis {
public:
    /// Groups basis states by the diagonal of an integer-valued diagonal charge.
    /// Throws if the charge is not diagonal with integer entries.
    explicit SectorBasis(const Matrix& charge);

    /// A single sector holding every state.
    static SectorBasis trivial(Index dim);

    Index dim() const noexcept { return static_cast<Index>(order_.size()); }
    std::size_t sector_count() const noexcept { return offsets_.size(); }
    Index offset(std::size_t s) const { return offsets_.at(s); }
    Index size(std::size_t s) const { return sizes_.at(s); }
    long charge(std::size_t s) const { return charges_.at(s); }

    /// order()[p] is the product-basis index at sorted position p.
    std::span<const Index> order() const noexcept { return order_; }

    Matrix to_sectors(const Matrix& x) const;
    Matrix from_sectors(const Matrix& x) const;

    /// True when x (in product basis) has no entries outside its diagonal blocks.
    bool is_block_diagonal(const Matrix& x) const;

    /// Charge shift delta if x maps every sector q to q + delta only; empty otherwise.
    std::vector<long> shifts(const Matrix& x) const;

private:
    SectorBasis() = default;
    std::vector<Index> order_;
    std::vector<Index> offsets_;
    std::vector<Index> sizes_;
    std::vector<long> charges_;
};

/// Sector pairs (row sector, column sector) that may be nonzero, and the
/// column-major linear indices of their entries in the sorted basis.
class BlockSupport {
public:
    /// Nonzero blocks of rho (sorted basis), closed under the map
    /// (q_row, q_col) -> (q_row + shift, q_col + shift) of a jump operator with
    /// a single charge shift. Without a shift only the nonzero blocks are kept,
    /// which is closed under charge-conserving unitary evolution.
    static BlockSupport of_state(const SectorBasis& basis, const Matrix& rho_sorted,
                                 std::optional<long> jump_shift = std::nullopt);
    static BlockSupport full(const SectorBasis& basis);

    struct Pair {
        std::size_t row;
        std::size_t col;
    };

    std::span<const Pair> pairs() const noexcept { return pairs_; }
    std::size_t entry_count() const noexcept { return entries_.size(); }

    void gather(const Matrix& x, std::span<Complex> out) const;
    void scatter(std::span<const Complex> in, Matrix& x) const;  // entries outside the support are zeroed

    /// Index lists of the decoupled diagonal blocks (connected sector groups).
    /// Indices outside every supported pair are not listed.
    const std::vector<std::vector<Index>>& components() const noexcept { return components_; }

private:
    std::vector<Pair> pairs_;
    std::vector<Index> entries_;
    std::vector<std::vector<Index>> components_;
    Index dim_{0};
};

/// Exact evolution under a charge-conserving Hamiltonian, diagonalised one
/// sector at a time.
class SpectralPropagator {
public:
    /// h_sorted must be block diagonal in the sorted basis.
    SpectralPropagator(const SectorBasis& basis, const Matrix& h_sorted);

    /// Per-sector blocks of exp(-i H t).
    std::vector<Matrix> unitary(double t) const;

    /// out = U x U^dagger on the supported blocks; other blocks of out are zero.
    void conjugate(std::span<const Matrix> u_blocks, const BlockSupport& support, const Matrix& x, Matrix& out) const;

    const SectorBasis& basis() const noexcept { return basis_; }

private:
    SectorBasis basis_;
    std::vector<Matrix> vectors_;
    std::vector<Eigen::VectorXd> values_;
};

/// Hermitian eigenvalues of rho (sorted basis), one decoupled block at a time,
/// in ascending order. Indices outside the support contribute exact zeros.
Eigen::VectorXd block_eigenvalues(const Matrix& rho_sorted, const BlockSupport& support);

}  // namespace qbat
