// scenarios.hpp: named presets, parameter sweeps and tail-window metrics.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qbat/dynamics.hpp"
#include "qbat/kernel.hpp"
#include "qbat/operators.hpp"

namespace qbat {

struct InitialState {
    enum class Kind { PaperVacuum, CavityFock, Product };
    Kind kind{Kind::CavityFock};
    Index fock{3};
    std::vector<Index> levels;  // one per slot, Kind::Product only

    static InitialState paper_vacuum() { return {Kind::PaperVacuum, 0, {}}; }
    static InitialState cavity_fock(Index n) { return {Kind::CavityFock, n, {}}; }
    static InitialState product(std::vector<Index> levels) { return {Kind::Product, 0, std::move(levels)}; }

    /// "paper-vacuum", "fock:<n>" or "product:<l0>,<l1>,...".
    static InitialState parse(std::string_view text);
    std::string to_string() const;

    void validate(const HilbertLayout& layout) const;
    Matrix density_matrix(const HilbertLayout& layout) const;
};

struct Scenario {
    std::string name;
    HilbertLayout layout{reference_layout()};
    PhysicalParams params;
    KernelSpec kernel;
    IntegratorConfig grid;
    std::string sweep_param;
    std::vector<double> sweep_values;
    InitialState initial;
    double tail_fraction{0.25};  // tail window is [(1 - f) t_max, t_max]

    /// Throws std::invalid_argument with a field-level message.
    void validate() const;
    PhysicalParams params_at(double sweep_value) const;
};

/// Names accepted by sweep_param.
const std::vector<std::string>& sweep_parameter_names();

/// Sets the named physical parameter; throws for unknown names.
void set_parameter(PhysicalParams& p, std::string_view name, double value);
double get_parameter(const PhysicalParams& p, std::string_view name);

const std::vector<std::string>& preset_names();

/// Throws std::invalid_argument listing the valid presets for unknown names.
Scenario preset(std::string_view name);

struct TailWindow {
    double begin;
    double end;
};

TailWindow default_tail_window(const Trajectory& traj, double fraction = 0.25);

/// max W - min W over the samples with t in the window.
double tail_amplitude(const Trajectory& traj, TailWindow window);
double tail_mean(const Trajectory& traj, TailWindow window);

/// max_t |E_cat(t) - E_cat(0)|.
double catalyst_drift(const Trajectory& traj);

struct SweepPoint {
    double value{0.0};
    Trajectory trajectory;
    double tail_mean_w{0.0};
    double tail_amplitude{0.0};
    double catalyst_drift{0.0};
    double min_eigenvalue{0.0};
};

struct SweepResult {
    std::string name;
    std::string sweep_param;
    std::vector<SweepPoint> points;
};

/// Integration failure at one sweep value.
class SweepError : public std::runtime_error {
public:
    SweepError(const std::string& param, double value, const std::string& what);
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Integrates every sweep point, concurrently across OpenMP threads.
SweepResult run_scenario(const Scenario& s);

namespace reference {
/// Serial sweep, one point after another.
SweepResult run_scenario(const Scenario& s);
}  // namespace reference

/// Single sweep point; shared by both sweep drivers.
SweepPoint run_point(const Scenario& s, double value);

}  // namespace qbat
