#include "qbat/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbat {

KernelSpec KernelSpec::gaussian(double kappa1, double kappa2) {
    KernelSpec s{.kind = KernelKind::Gaussian, .kappa1 = kappa1, .kappa2 = kappa2, .rate = 0.0};
    s.validate();
    return s;
}

KernelSpec KernelSpec::delta(double rate) {
    KernelSpec s{.kind = KernelKind::Delta, .kappa1 = 0.0, .kappa2 = 1.0, .rate = rate};
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (kind == KernelKind::Gaussian) {
        if (!std::isfinite(kappa1) || kappa1 < 0) {
            throw std::invalid_argument("kappa1 must be finite and >= 0");
        }
        if (!std::isfinite(kappa2) || kappa2 <= 0) {
            throw std::invalid_argument("kappa2 must be finite and > 0");
        }
    } else if (!std::isfinite(rate) || rate < 0) {
        throw std::invalid_argument("delta kernel rate must be finite and >= 0");
    }
}

double KernelSpec::integrated_strength() const {
    if (kind == KernelKind::Delta) {
        return rate;
    }
    return 0.5 * kappa1 * std::sqrt(std::numbers::pi / kappa2);
}

double kernel_eval(const KernelSpec& spec, double t, double s) {
    if (s > t) {
        throw std::invalid_argument("kernel_eval requires s <= t");
    }
    if (spec.kind == KernelKind::Delta) {
        throw std::invalid_argument("delta kernel has no pointwise value");
    }
    const double tau = t - s;
    return spec.kappa1 * std::exp(-spec.kappa2 * tau * tau);
}

double memory_cutoff(const KernelSpec& spec, double rel_tol) {
    if (spec.kind == KernelKind::Delta) {
        return 0.0;
    }
    if (!(rel_tol > 0 && rel_tol < 1)) {
        throw std::invalid_argument("rel_tol must be in (0, 1)");
    }
    return std::sqrt(std::log(1.0 / rel_tol) / spec.kappa2);
}

std::vector<double> lag_weights(const KernelSpec& spec, double h, std::size_t window) {
    std::vector<double> w(window + 1);
    for (std::size_t j = 0; j <= window; ++j) {
        w[j] = h * kernel_eval(spec, static_cast<double>(j) * h, 0.0);
    }
    return w;
}

}  // namespace qbat
