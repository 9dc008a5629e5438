#include "qbat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/SparseCore>

#include "qbat/kernels.hpp"
#include "qbat/observables.hpp"
#include "qbat/sectors.hpp"

namespace qbat {

void IntegratorConfig::validate() const {
    if (!std::isfinite(h) || h <= 0) throw std::invalid_argument("step size h must be > 0");
    if (!std::isfinite(t_max) || t_max <= 0) throw std::invalid_argument("t_max must be > 0");
    if (h > t_max) throw std::invalid_argument("step size h must not exceed t_max");
    if (!std::isfinite(tau_cut)) throw std::invalid_argument("tau_cut must be finite");
    if (!(kernel_rel_tol > 0 && kernel_rel_tol < 1)) throw std::invalid_argument("kernel_rel_tol must be in (0, 1)");
    if (!(trace_abort > 0) || !(hermiticity_abort > 0)) {
        throw std::invalid_argument("abort thresholds must be positive");
    }
}

std::size_t IntegratorConfig::steps() const {
    return static_cast<std::size_t>(std::ceil(t_max / h - 1e-9));
}

std::vector<double> Trajectory::times() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.t);
    return out;
}

std::vector<double> Trajectory::ergotropies() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.ergotropy);
    return out;
}

std::vector<double> Trajectory::catalyst_energies() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.catalyst_energy);
    return out;
}

double Trajectory::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::min(m, s.min_eigenvalue);
    return m;
}

Matrix dissipator(const Matrix& rho, const Matrix& jump) {
    if (rho.rows() != jump.rows() || rho.cols() != jump.cols() || rho.rows() != rho.cols()) {
        throw std::invalid_argument("dissipator: dimension mismatch");
    }
    const Matrix ldl = jump.adjoint() * jump;
    return jump * rho * jump.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

void validate_density_matrix(const Matrix& rho, Index dim, double tol) {
    if (rho.rows() != dim || rho.cols() != dim) {
        std::ostringstream msg;
        msg << "density matrix must be " << dim << "x" << dim << ", got " << rho.rows() << "x" << rho.cols();
        throw std::invalid_argument(msg.str());
    }
    if (!rho.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
    if ((rho - rho.adjoint()).norm() > tol) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > tol) throw std::invalid_argument("density matrix trace is not 1");
}

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

enum class Mode { Unitary, Local, Memory };

// Shared machinery of the three integrators: sorted basis, exact propagator,
// support of the state, dissipator and per-sample diagnostics.
class Engine {
public:
    Engine(const SystemOperators& ops, const Matrix& rho0, const IntegratorConfig& cfg, bool dissipative,
           const StepObserver& observer)
        : ops_(ops), cfg_(cfg), observer_(observer), basis_(choose_basis(ops, dissipative)),
          propagator_(basis_, basis_.to_sectors(ops.h_tot)) {
        cfg.validate();
        validate_density_matrix(rho0, ops.layout.dim());
        rho0_sorted_ = basis_.to_sectors(rho0);
        std::optional<long> shift;
        if (dissipative) {
            const auto shifts = basis_.shifts(ops.jump);
            if (shifts.size() == 1) shift = shifts.front();
        }
        support_ = trivial_ ? BlockSupport::full(basis_) : BlockSupport::of_state(basis_, rho0_sorted_, shift);
        const Matrix jump_sorted = basis_.to_sectors(ops.jump);
        jump_ = jump_sorted.sparseView();
        jump_dag_ = Sparse(jump_.adjoint());
        ldl_ = Sparse(jump_dag_ * jump_);
        traj_.h = cfg.h;
    }

    const BlockSupport& support() const { return support_; }
    const Matrix& rho0_sorted() const { return rho0_sorted_; }
    Trajectory& trajectory() { return traj_; }

    Matrix dissipate(const Matrix& x) const {
        Matrix lx = jump_ * x;
        Matrix out = (lx * jump_dag_);
        out.noalias() -= 0.5 * (ldl_ * x);
        out.noalias() -= 0.5 * (x * ldl_);
        return out;
    }

    void conjugate(std::span<const Matrix> u, const Matrix& x, Matrix& out) const {
        propagator_.conjugate(u, support_, x, out);
    }

    std::vector<Matrix> unitary(double t) const { return propagator_.unitary(t); }

    // Hermiticity error of the raw step, then symmetrise in place.
    static double symmetrize(Matrix& rho) {
        const double err = (rho - rho.adjoint()).norm();
        const Matrix sym = 0.5 * (rho + rho.adjoint());
        rho = sym;
        return err;
    }

    void record(std::size_t step, double t, const Matrix& rho_sorted, double herm_err) {
        TrajectorySample s;
        s.t = t;
        s.hermiticity_error = herm_err;
        s.trace_error = std::abs(rho_sorted.trace() - Complex(1.0));
        if (!rho_sorted.allFinite()) {
            throw IntegrationError(describe("density matrix became non-finite", t), t);
        }
        if (s.trace_error > cfg_.trace_abort) {
            std::ostringstream msg;
            msg << "trace drift " << s.trace_error << " exceeds " << cfg_.trace_abort;
            throw IntegrationError(describe(msg.str(), t), t);
        }
        if (herm_err > cfg_.hermiticity_abort) {
            std::ostringstream msg;
            msg << "Hermiticity drift " << herm_err << " exceeds " << cfg_.hermiticity_abort;
            throw IntegrationError(describe(msg.str(), t), t);
        }
        s.min_eigenvalue = block_eigenvalues(rho_sorted, support_)(0);
        if (s.min_eigenvalue < cfg_.positivity_warn) traj_.positivity_flagged = true;

        const bool retain = cfg_.retain_stride > 0 && step % cfg_.retain_stride == 0;
        if (cfg_.observables || observer_ || retain) {
            const Matrix rho = basis_.from_sectors(rho_sorted);
            if (cfg_.observables) {
                const EnergyRecord e = energies(rho, ops_);
                s.battery_energy = e.battery;
                s.catalyst_energy = e.catalyst;
                s.excitations = e.excitations;
                // NZ evolution is not completely positive; rank the spectrum as-is
                // and leave the min_eigenvalue column to flag it.
                s.ergotropy = battery_ergotropy(rho, ops_.layout, ops_.h_battery_local,
                                                -std::numeric_limits<double>::infinity());
            }
            if (retain) {
                traj_.states.push_back(rho);
                traj_.state_times.push_back(t);
            }
            if (observer_) observer_(step, t, rho);
        }
        traj_.samples.push_back(s);
    }

private:
    static std::string describe(const std::string& what, double t) {
        std::ostringstream msg;
        msg << what << " at t = " << t << " (reduce the step size or check the kernel)";
        return msg.str();
    }

    SectorBasis choose_basis(const SystemOperators& ops, bool dissipative) {
        try {
            SectorBasis b(ops.n_exc);
            bool ok = b.is_block_diagonal(ops.h_tot);
            if (ok && dissipative) ok = b.shifts(ops.jump).size() <= 1;
            if (ok) return b;
        } catch (const std::invalid_argument&) {
        }
        trivial_ = true;
        return SectorBasis::trivial(ops.layout.dim());
    }

    const SystemOperators& ops_;
    IntegratorConfig cfg_;
    StepObserver observer_;
    bool trivial_{false};
    SectorBasis basis_;
    SpectralPropagator propagator_;
    Matrix rho0_sorted_;
    BlockSupport support_;
    Sparse jump_, jump_dag_, ldl_;
    Trajectory traj_;
};

// Integrating-factor Heun for a local dissipative term rate * D[rho(t)].
Trajectory run_local(const SystemOperators& ops, double rate, const Matrix& rho0, const IntegratorConfig& cfg,
                     const StepObserver& observer) {
    if (!std::isfinite(rate) || rate < 0) throw std::invalid_argument("Lindblad rate must be finite and >= 0");
    Engine eng(ops, rho0, cfg, rate > 0, observer);
    const std::size_t steps = cfg.steps();
    const auto u = eng.unitary(cfg.h);
    Matrix rho = eng.rho0_sorted();
    Matrix pred, base, tmp;
    eng.trajectory().samples.reserve(steps + 1);
    eng.record(0, 0.0, rho, 0.0);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t_next = static_cast<double>(n + 1) * cfg.h;
        if (rate > 0) {
            const Matrix m = rate * eng.dissipate(rho);
            tmp = rho + cfg.h * m;
            eng.conjugate(u, tmp, pred);
            tmp = rho + (0.5 * cfg.h) * m;
            eng.conjugate(u, tmp, base);
            rho = base + (0.5 * cfg.h * rate) * eng.dissipate(pred);
        } else {
            eng.conjugate(u, rho, base);
            rho = base;
        }
        const double herm = Engine::symmetrize(rho);
        eng.record(n + 1, t_next, rho, herm);
    }
    return std::move(eng.trajectory());
}

}  // namespace

Trajectory integrate_nz(const SystemOperators& ops, const KernelSpec& kernel, const Matrix& rho0,
                        const IntegratorConfig& cfg, const StepObserver& observer) {
    kernel.validate();
    if (kernel.kind == KernelKind::Delta) {
        return run_local(ops, kernel.rate, rho0, cfg, observer);
    }
    cfg.validate();
    const bool dissipative = kernel.kappa1 > 0;
    Engine eng(ops, rho0, cfg, dissipative, observer);
    const std::size_t steps = cfg.steps();
    const auto u = eng.unitary(cfg.h);
    eng.trajectory().samples.reserve(steps + 1);

    Matrix rho = eng.rho0_sorted();
    eng.record(0, 0.0, rho, 0.0);
    if (!dissipative) {
        Matrix next;
        for (std::size_t n = 0; n < steps; ++n) {
            eng.conjugate(u, rho, next);
            rho = next;
            const double herm = Engine::symmetrize(rho);
            eng.record(n + 1, static_cast<double>(n + 1) * cfg.h, rho, herm);
        }
        return std::move(eng.trajectory());
    }

    const double tau_cut = cfg.tau_cut > 0 ? cfg.tau_cut : memory_cutoff(kernel, cfg.kernel_rel_tol);
    const auto window = static_cast<std::size_t>(std::max(1.0, std::ceil(tau_cut / cfg.h - 1e-9)));
    eng.trajectory().memory_window = window;
    const std::vector<double> weights = lag_weights(kernel, cfg.h, window);
    const double endpoint = 0.5 * weights[0];

    const BlockSupport& support = eng.support();
    const std::size_t m = support.entry_count();
    kernels::MemoryHistory history(window, m);
    std::vector<Complex> snapshot(m), hist(m), mem(m);

    support.gather(eng.dissipate(rho), snapshot);
    history.push(snapshot);
    Matrix memory = Matrix::Zero(rho.rows(), rho.cols());  // M(0) = 0
    Matrix pred, base, tmp, mem_pred;

    for (std::size_t n = 0; n < steps; ++n) {
        const double t_next = static_cast<double>(n + 1) * cfg.h;
        history.trapezoid(weights, hist);

        tmp = rho + cfg.h * memory;
        eng.conjugate(u, tmp, pred);
        tmp = rho + (0.5 * cfg.h) * memory;
        eng.conjugate(u, tmp, base);

        support.gather(eng.dissipate(pred), snapshot);
        for (std::size_t i = 0; i < m; ++i) mem[i] = hist[i] + endpoint * snapshot[i];
        support.scatter(mem, mem_pred);
        rho = base + (0.5 * cfg.h) * mem_pred;
        const double herm = Engine::symmetrize(rho);

        support.gather(eng.dissipate(rho), snapshot);
        history.push(snapshot);
        for (std::size_t i = 0; i < m; ++i) mem[i] = hist[i] + endpoint * snapshot[i];
        support.scatter(mem, memory);

        eng.record(n + 1, t_next, rho, herm);
    }
    return std::move(eng.trajectory());
}

Trajectory integrate_lindblad(const SystemOperators& ops, double gamma, const Matrix& rho0,
                              const IntegratorConfig& cfg, const StepObserver& observer) {
    return run_local(ops, gamma, rho0, cfg, observer);
}

Trajectory integrate_unitary(const SystemOperators& ops, const Matrix& rho0, const IntegratorConfig& cfg,
                             const StepObserver& observer) {
    Engine eng(ops, rho0, cfg, false, observer);
    const std::size_t steps = cfg.steps();
    eng.trajectory().samples.reserve(steps + 1);
    const Matrix& rho0_sorted = eng.rho0_sorted();
    Matrix rho;
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * cfg.h;
        const auto u = eng.unitary(t);
        eng.conjugate(u, rho0_sorted, rho);
        const double herm = Engine::symmetrize(rho);
        eng.record(n, t, rho, herm);
    }
    return std::move(eng.trajectory());
}

}  // namespace qbat
