// kernels.hpp: data-parallel inner loops of the memory integral.
//
// Every kernel has an OpenMP version and a serial version under
// kernels::reference. Both evaluate each output entry with the same
// sequence of floating-point operations, so their results are bitwise equal;
// the serial path is kept as the test oracle and as the benchmark baseline.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qbat/operators.hpp"

namespace qbat::kernels {

/// out[i] = sum_k weights[k] * terms[k][i], terms summed in order k = 0, 1, ...
void weighted_sum(std::span<const Complex* const> terms, std::span<const double> weights, std::span<Complex> out);

namespace reference {
void weighted_sum(std::span<const Complex* const> terms, std::span<const double> weights, std::span<Complex> out);
}  // namespace reference

/// Ring buffer of the most recent dissipator snapshots, each stored as a
/// compressed vector over a fixed support of matrix entries.
class MemoryHistory {
public:
    MemoryHistory(std::size_t capacity, std::size_t entries);

    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return size_; }

    /// Appends a snapshot; the oldest one is dropped once full.
    void push(std::span<const Complex> snapshot);

    /// Snapshot with lag j >= 1 (j = 1 is the most recent push).
    std::span<const Complex> lagged(std::size_t lag) const;

    /// Trapezoidal history part of the memory integral at the next grid time:
    /// sum over stored lags j of lag_weights[j] * snapshot(j), with the oldest
    /// stored snapshot at half weight. lag_weights[0] belongs to the endpoint
    /// and is not used here.
    void trapezoid(std::span<const double> lag_weights, std::span<Complex> out, bool parallel = true) const;

private:
    std::size_t capacity_;
    std::size_t entries_;
    std::size_t size_{0};
    std::size_t head_{0};  // slot of the next push
    std::vector<Complex> buffer_;
    mutable std::vector<const Complex*> terms_;
    mutable std::vector<double> weights_;
};

}  // namespace qbat::kernels
