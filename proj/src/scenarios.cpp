#include "qbat/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "qbat/operators.hpp"

namespace qbat {

namespace {

Index parse_index(std::string_view text, std::string_view what) {
    Index v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

InitialState InitialState::parse(std::string_view text) {
    if (text == "paper-vacuum" || text == "vacuum") {
        return paper_vacuum();
    }
    if (text.starts_with("fock:")) {
        return cavity_fock(parse_index(text.substr(5), "Fock level"));
    }
    if (text.starts_with("product:")) {
        std::vector<Index> levels;
        std::string_view rest = text.substr(8);
        while (true) {
            const auto comma = rest.find(',');
            levels.push_back(parse_index(rest.substr(0, comma), "product level"));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return product(std::move(levels));
    }
    throw std::invalid_argument("unknown initial state '" + std::string(text) +
                                "' (expected paper-vacuum, fock:<n> or product:<l0>,<l1>,...)");
}

std::string InitialState::to_string() const {
    switch (kind) {
        case Kind::PaperVacuum:
            return "paper-vacuum";
        case Kind::CavityFock:
            return "fock:" + std::to_string(fock);
        case Kind::Product: {
            std::string out = "product:";
            for (std::size_t i = 0; i < levels.size(); ++i) {
                if (i) out += ',';
                out += std::to_string(levels[i]);
            }
            return out;
        }
    }
    return {};
}

void InitialState::validate(const HilbertLayout& layout) const {
    if (kind == Kind::CavityFock && (fock < 0 || fock >= layout.d_photon())) {
        std::ostringstream msg;
        msg << "initial: Fock level " << fock << " violates the photon cutoff (must be < d_photon = "
            << layout.d_photon() << ")";
        throw std::invalid_argument(msg.str());
    }
    if (kind == Kind::Product) {
        if (levels.size() != layout.slot_count()) {
            throw std::invalid_argument("initial: product state needs one level per slot (" +
                                        std::to_string(layout.slot_count()) + ")");
        }
        for (std::size_t s = 0; s < levels.size(); ++s) {
            if (levels[s] < 0 || levels[s] >= layout.local_dim(s)) {
                throw std::invalid_argument("initial: product level for slot " + std::to_string(s) +
                                            " is out of range");
            }
        }
    }
}

Matrix InitialState::density_matrix(const HilbertLayout& layout) const {
    validate(layout);
    switch (kind) {
        case Kind::PaperVacuum:
            return cavity_fock_state(layout, 0);
        case Kind::CavityFock:
            return cavity_fock_state(layout, fock);
        case Kind::Product:
            return product_state(layout, levels);
    }
    throw std::logic_error("unreachable");
}

const std::vector<std::string>& sweep_parameter_names() {
    static const std::vector<std::string> names{"omega_c", "omega_a", "J", "g", "omega_cat", "lambda"};
    return names;
}

void set_parameter(PhysicalParams& p, std::string_view name, double value) {
    if (name == "omega_c") p.omega_c = value;
    else if (name == "omega_a") p.omega_a = value;
    else if (name == "J") p.J = value;
    else if (name == "g") p.g = value;
    else if (name == "omega_cat") p.omega_cat = value;
    else if (name == "lambda") p.lambda = value;
    else throw std::invalid_argument("unknown physical parameter '" + std::string(name) + "'");
}

double get_parameter(const PhysicalParams& p, std::string_view name) {
    if (name == "omega_c") return p.omega_c;
    if (name == "omega_a") return p.omega_a;
    if (name == "J") return p.J;
    if (name == "g") return p.g;
    if (name == "omega_cat") return p.omega_cat;
    if (name == "lambda") return p.lambda;
    throw std::invalid_argument("unknown physical parameter '" + std::string(name) + "'");
}

void Scenario::validate() const {
    if (name.empty()) throw std::invalid_argument("name: scenario name must not be empty");
    auto tagged = [](const char* field, const std::exception& e) {
        return std::invalid_argument(std::string(field) + ": " + e.what());
    };
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw tagged("params", e);
    }
    try {
        kernel.validate();
    } catch (const std::invalid_argument& e) {
        throw tagged("kernel", e);
    }
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw tagged("grid", e);
    }
    const auto& names = sweep_parameter_names();
    if (std::find(names.begin(), names.end(), sweep_param) == names.end()) {
        throw std::invalid_argument("sweep.param: unknown parameter '" + sweep_param + "'");
    }
    if (sweep_values.empty()) throw std::invalid_argument("sweep.values: must not be empty");
    for (std::size_t i = 1; i < sweep_values.size(); ++i) {
        if (!(sweep_values[i] > sweep_values[i - 1])) {
            throw std::invalid_argument("sweep.values: must be strictly increasing");
        }
    }
    for (double v : sweep_values) {
        try {
            params_at(v).validate();
        } catch (const std::invalid_argument& e) {
            throw tagged("sweep.values", e);
        }
    }
    if (!(tail_fraction > 0 && tail_fraction <= 1)) {
        throw std::invalid_argument("tail_fraction: must be in (0, 1]");
    }
    initial.validate(layout);
}

PhysicalParams Scenario::params_at(double sweep_value) const {
    PhysicalParams p = params;
    set_parameter(p, sweep_param, sweep_value);
    return p;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig3a", "fig3b", "fig4a",
                                                "fig4b", "fig5a", "fig5b", "fig5c"};
    return names;
}

Scenario preset(std::string_view name) {
    Scenario s;
    s.name = std::string(name);
    s.layout = reference_layout();
    s.kernel = KernelSpec::gaussian(1.8, 1.8);
    s.grid = IntegratorConfig{};
    s.initial = InitialState::cavity_fock(3);
    // weak-energy catalyst base point
    s.params = PhysicalParams{.omega_c = 2.5, .omega_a = 2.5, .J = 1.5, .g = 0.2, .omega_cat = 0.25, .lambda = 0.0};

    if (name == "fig2a") {
        s.sweep_param = "lambda";
        s.sweep_values = {0.0};
    } else if (name == "fig2b") {
        s.sweep_param = "lambda";
        s.sweep_values = {0.8, 1.8, 2.8};
    } else if (name == "fig3a" || name == "fig3b") {
        s.params.lambda = name == "fig3b" ? 1.8 : 0.0;
        s.sweep_param = "omega_c";
        s.sweep_values = {1.5, 2.5, 3.5};
    } else if (name == "fig4a" || name == "fig4b") {
        s.params.lambda = name == "fig4b" ? 0.8 : 0.0;
        s.params.omega_c = 0.85;
        s.sweep_param = "omega_a";
        s.sweep_values = {2.0, 2.5, 3.0};
    } else if (name == "fig5a") {
        s.params.lambda = 1.5;
        s.params.omega_c = 0.75;
        s.sweep_param = "omega_cat";
        s.sweep_values = {1.05, 1.15, 1.35};
    } else if (name == "fig5b" || name == "fig5c") {
        s.params.lambda = name == "fig5b" ? 0.85 : 0.0;
        s.params.omega_cat = 1.35;
        s.params.omega_a = 2.45;
        s.params.omega_c = 2.25;
        s.params.J = 2.5;
        s.sweep_param = "g";
        s.sweep_values = {0.2, 0.5, 0.8};
    } else {
        std::string msg = "unknown preset '" + std::string(name) + "'; valid presets:";
        for (const auto& n : preset_names()) msg += " " + n;
        throw std::invalid_argument(msg);
    }
    return s;
}

TailWindow default_tail_window(const Trajectory& traj, double fraction) {
    if (traj.samples.empty()) throw std::invalid_argument("trajectory is empty");
    const double t_end = traj.samples.back().t;
    return {(1.0 - fraction) * t_end, t_end};
}

namespace {

template <class F>
void for_window(const Trajectory& traj, TailWindow window, F&& f) {
    if (traj.samples.empty()) throw std::invalid_argument("trajectory is empty");
    if (window.begin > window.end || window.begin < traj.samples.front().t - 1e-12 ||
        window.end > traj.samples.back().t + 1e-12) {
        throw std::invalid_argument("tail window must lie within the trajectory span");
    }
    // Grid times carry rounding; a small relative slack keeps boundary samples.
    const double slack = 1e-9 * std::max(1.0, std::abs(window.end));
    std::size_t count = 0;
    for (const auto& s : traj.samples) {
        if (s.t >= window.begin - slack && s.t <= window.end + slack) {
            f(s);
            ++count;
        }
    }
    if (count == 0) throw std::invalid_argument("tail window contains no samples");
}

}  // namespace

double tail_amplitude(const Trajectory& traj, TailWindow window) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for_window(traj, window, [&](const TrajectorySample& s) {
        lo = std::min(lo, s.ergotropy);
        hi = std::max(hi, s.ergotropy);
    });
    return hi - lo;
}

double tail_mean(const Trajectory& traj, TailWindow window) {
    double sum = 0.0;
    std::size_t n = 0;
    for_window(traj, window, [&](const TrajectorySample& s) {
        sum += s.ergotropy;
        ++n;
    });
    return sum / static_cast<double>(n);
}

double catalyst_drift(const Trajectory& traj) {
    if (traj.samples.empty()) return 0.0;
    const double e0 = traj.samples.front().catalyst_energy;
    double drift = 0.0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::abs(s.catalyst_energy - e0));
    return drift;
}

SweepError::SweepError(const std::string& param, double value, const std::string& what)
    : std::runtime_error(param + " = " + [&] {
          std::ostringstream v;
          v << value;
          return v.str();
      }() + ": " + what),
      value_(value) {}

SweepPoint run_point(const Scenario& s, double value) {
    SweepPoint point;
    point.value = value;
    const SystemOperators ops = build_system_operators(s.params_at(value), s.layout);
    const Matrix rho0 = s.initial.density_matrix(s.layout);
    try {
        point.trajectory = integrate_nz(ops, s.kernel, rho0, s.grid);
    } catch (const IntegrationError& e) {
        throw SweepError(s.sweep_param, value, e.what());
    }
    const TailWindow window = default_tail_window(point.trajectory, s.tail_fraction);
    point.tail_mean_w = tail_mean(point.trajectory, window);
    point.tail_amplitude = tail_amplitude(point.trajectory, window);
    point.catalyst_drift = catalyst_drift(point.trajectory);
    point.min_eigenvalue = point.trajectory.min_eigenvalue();
    return point;
}

SweepResult run_scenario(const Scenario& s) {
    s.validate();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.sweep_values.size());
    SweepResult out{s.name, s.sweep_param, std::vector<SweepPoint>(s.sweep_values.size())};
    std::vector<std::exception_ptr> errors(s.sweep_values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out.points[static_cast<std::size_t>(i)] = run_point(s, s.sweep_values[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

namespace reference {

SweepResult run_scenario(const Scenario& s) {
    s.validate();
    SweepResult out{s.name, s.sweep_param, {}};
    for (double v : s.sweep_values) {
        out.points.push_back(run_point(s, v));
    }
    return out;
}

}  // namespace reference

}  // namespace qbat
