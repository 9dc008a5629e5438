// kernel.hpp: memory kernels for the time-nonlocal dissipator.
#pragma once

#include <cstddef>
#include <vector>

namespace qbat {

enum class KernelKind { Gaussian, Delta };

/// Gaussian: Gamma(t, s) = kappa1 * exp(-kappa2 (t - s)^2).
/// Delta: Markovian limit gamma * delta(t - s), applied as a local term.
struct KernelSpec {
    KernelKind kind{KernelKind::Gaussian};
    double kappa1{1.8};
    double kappa2{1.8};
    double rate{0.0};

    static KernelSpec gaussian(double kappa1, double kappa2);
    static KernelSpec delta(double rate);

    void validate() const;

    /// Integral of the kernel over [0, inf). Equals the Lindblad rate of the Markovian limit.
    double integrated_strength() const;
};

/// Gamma(t, s) for s <= t. Throws for s > t and for the delta kernel,
/// which has no pointwise value.
double kernel_eval(const KernelSpec& spec, double t, double s);

/// Lag beyond which the Gaussian kernel drops below rel_tol * kappa1:
/// sqrt(ln(1 / rel_tol) / kappa2).
double memory_cutoff(const KernelSpec& spec, double rel_tol = 1e-12);

/// Quadrature weights h * Gamma(j h) for lags j = 0 .. window.
std::vector<double> lag_weights(const KernelSpec& spec, double h, std::size_t window);

}  // namespace qbat
