#include "qbat/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace qbat::kernels {

namespace {

constexpr std::ptrdiff_t kBlock = 512;  // doubles per work item

void check_shapes(std::span<const Complex* const> terms, std::span<const double> weights) {
    if (terms.size() != weights.size()) {
        throw std::invalid_argument("weighted_sum: terms and weights differ in length");
    }
}

// Complex arrays are addressed as interleaved doubles; the weights are real.
inline void accumulate_block(std::span<const Complex* const> terms, std::span<const double> weights, double* dst,
                             std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t i = lo; i < hi; ++i) dst[i] = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const double* src = reinterpret_cast<const double*>(terms[k]);
        const double w = weights[k];
        for (std::ptrdiff_t i = lo; i < hi; ++i) {
            dst[i] += w * src[i];
        }
    }
}

}  // namespace

void weighted_sum(std::span<const Complex* const> terms, std::span<const double> weights, std::span<Complex> out) {
    check_shapes(terms, weights);
    double* dst = reinterpret_cast<double*>(out.data());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(2 * out.size());
    const std::ptrdiff_t blocks = (n + kBlock - 1) / kBlock;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::ptrdiff_t lo = b * kBlock;
        const std::ptrdiff_t hi = std::min(n, lo + kBlock);
        accumulate_block(terms, weights, dst, lo, hi);
    }
}

namespace reference {

void weighted_sum(std::span<const Complex* const> terms, std::span<const double> weights, std::span<Complex> out) {
    check_shapes(terms, weights);
    double* dst = reinterpret_cast<double*>(out.data());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(2 * out.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const double* src = reinterpret_cast<const double*>(terms[k]);
        const double w = weights[k];
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            dst[i] += w * src[i];
        }
    }
}

}  // namespace reference

MemoryHistory::MemoryHistory(std::size_t capacity, std::size_t entries)
    : capacity_(capacity), entries_(entries), buffer_(capacity * entries) {
    if (capacity == 0) {
        throw std::invalid_argument("MemoryHistory capacity must be positive");
    }
    terms_.reserve(capacity);
    weights_.reserve(capacity);
}

void MemoryHistory::push(std::span<const Complex> snapshot) {
    if (snapshot.size() != entries_) {
        throw std::invalid_argument("MemoryHistory snapshot has the wrong length");
    }
    std::copy(snapshot.begin(), snapshot.end(), buffer_.begin() + static_cast<std::ptrdiff_t>(head_ * entries_));
    head_ = (head_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

std::span<const Complex> MemoryHistory::lagged(std::size_t lag) const {
    if (lag == 0 || lag > size_) {
        throw std::out_of_range("MemoryHistory lag out of range");
    }
    const std::size_t slot = (head_ + capacity_ - lag) % capacity_;
    return {buffer_.data() + slot * entries_, entries_};
}

void MemoryHistory::trapezoid(std::span<const double> lag_weights, std::span<Complex> out, bool parallel) const {
    if (out.size() != entries_) {
        throw std::invalid_argument("MemoryHistory output has the wrong length");
    }
    if (lag_weights.size() <= size_) {
        throw std::invalid_argument("MemoryHistory needs a weight for every stored lag");
    }
    terms_.clear();
    weights_.clear();
    for (std::size_t lag = 1; lag <= size_; ++lag) {
        terms_.push_back(lagged(lag).data());
        weights_.push_back(lag == size_ ? 0.5 * lag_weights[lag] : lag_weights[lag]);
    }
    if (parallel) {
        weighted_sum(terms_, weights_, out);
    } else {
        reference::weighted_sum(terms_, weights_, out);
    }
}

}  // namespace qbat::kernels
