// dynamics.hpp: time evolution of the battery-catalyst-cavity density matrix.
//
// integrate_nz solves
//     d rho/dt = -i [H, rho] + int_0^t Gamma(t - s) D[rho(s)] ds
// on a uniform grid. The commutator is propagated exactly through the
// spectral decomposition of H and the memory term is advanced with a Heun
// predictor-corrector in that integrating-factor frame:
//
//     pred      = U (rho_n + h M_n) U^dagger
//     rho_{n+1} = U (rho_n + h/2 M_n) U^dagger + h/2 M(t_{n+1}; pred)
//
// with U = exp(-i H h). M is the trapezoidal sum of cached dissipator
// snapshots over the window [t - tau_cut, t]. The scheme is second order,
// and exact when the kernel vanishes.
//
// integrate_lindblad uses the same stepping with the local term gamma D[rho(t)];
// integrate_unitary evaluates exp(-iHt) rho_0 exp(iHt) directly.

#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbat/kernel.hpp"
#include "qbat/operators.hpp"

namespace qbat {

struct IntegratorConfig {
    double h{0.01};
    double t_max{20.0};
    double tau_cut{0.0};  // <= 0: memory_cutoff(kernel, kernel_rel_tol)
    double kernel_rel_tol{1e-12};

    double trace_abort{1e-6};       // |Tr rho - 1|
    double hermiticity_abort{1e-6};  // ||rho - rho^dagger||_F before symmetrisation
    double positivity_warn{-1e-6};   // min eigenvalue below this is flagged

    bool observables{true};        // fill E_B, W, E_cat, N_exc
    std::size_t retain_stride{0};  // keep rho every k-th step; 0 keeps none

    void validate() const;
    std::size_t steps() const;  // number of steps; the last grid point is >= t_max
};

struct TrajectorySample {
    double t{0.0};
    double battery_energy{0.0};
    double ergotropy{0.0};
    double catalyst_energy{0.0};
    double excitations{0.0};
    double trace_error{0.0};
    double hermiticity_error{0.0};
    double min_eigenvalue{0.0};
};

struct Trajectory {
    double h{0.0};
    std::vector<TrajectorySample> samples;
    std::vector<Matrix> states;  // retained states, product basis
    std::vector<double> state_times;
    bool positivity_flagged{false};
    std::size_t memory_window{0};  // cached snapshots used by the memory integral

    std::vector<double> times() const;
    std::vector<double> ergotropies() const;
    std::vector<double> catalyst_energies() const;
    double min_eigenvalue() const;
};

/// Called after every grid point with the density matrix in the product basis.
using StepObserver = std::function<void(std::size_t step, double t, const Matrix& rho)>;

/// Raised when a step violates the trace or Hermiticity abort thresholds.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

/// L rho L^dagger - 1/2 {L^dagger L, rho}.
Matrix dissipator(const Matrix& rho, const Matrix& jump);

/// Checks that rho is square, Hermitian and of unit trace to the given tolerance.
void validate_density_matrix(const Matrix& rho, Index dim, double tol = 1e-8);

Trajectory integrate_nz(const SystemOperators& ops, const KernelSpec& kernel, const Matrix& rho0,
                        const IntegratorConfig& cfg, const StepObserver& observer = {});

Trajectory integrate_lindblad(const SystemOperators& ops, double gamma, const Matrix& rho0,
                              const IntegratorConfig& cfg, const StepObserver& observer = {});

Trajectory integrate_unitary(const SystemOperators& ops, const Matrix& rho0, const IntegratorConfig& cfg,
                             const StepObserver& observer = {});

}  // namespace qbat
