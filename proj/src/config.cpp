#include "qbat/config.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qbat {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            std::string msg = std::string(where) + ": unknown key '" + key + "'";
            throw ConfigError(where.empty() ? msg.substr(2) : msg);
        }
    }
}

const json& object_at(const json& root, const char* key) {
    const json& v = root.at(key);
    if (!v.is_object()) throw ConfigError(std::string(key) + ": expected an object");
    return v;
}

double number_at(const json& obj, const std::string& field, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(field + ": expected a number");
    return v.get<double>();
}

std::string string_at(const json& obj, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(std::string(key) + ": expected a string");
    return v.get<std::string>();
}

Index integer_at(const json& obj, const std::string& field, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(field + ": expected an integer");
    return v.get<Index>();
}

template <class F>
void tagged(const char* field, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(field) + ": " + e.what());
    }
}

Scenario base_scenario(const std::optional<std::string>& name) {
    if (!name) {
        Scenario s;
        s.name = "custom";
        return s;
    }
    try {
        return preset(*name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("preset: ") + e.what());
    }
}

void apply(const json& root, Scenario& s, FileConfig& out) {
    reject_unknown(root, "", {"preset", "name", "layout", "params", "kernel", "grid", "sweep", "initial",
                              "tail_fraction", "out", "plots"});
    if (root.contains("name")) s.name = string_at(root, "name");

    if (root.contains("layout")) {
        const json& l = object_at(root, "layout");
        reject_unknown(l, "layout", {"d_photon", "n_spins", "d_cat"});
        Index d_photon = s.layout.d_photon();
        Index n_spins = static_cast<Index>(s.layout.n_spins());
        Index d_cat = s.layout.d_cat();
        if (l.contains("d_photon")) d_photon = integer_at(l, "layout.d_photon", "d_photon");
        if (l.contains("n_spins")) n_spins = integer_at(l, "layout.n_spins", "n_spins");
        if (l.contains("d_cat")) d_cat = integer_at(l, "layout.d_cat", "d_cat");
        if (n_spins < 1) throw ConfigError("layout: n_spins must be >= 1");
        tagged("layout", [&] { s.layout = HilbertLayout(d_photon, static_cast<std::size_t>(n_spins), d_cat); });
    }

    if (root.contains("params")) {
        const json& p = object_at(root, "params");
        const auto& names = sweep_parameter_names();
        reject_unknown(p, "params", std::set<std::string>(names.begin(), names.end()));
        for (const auto& [key, _] : p.items()) {
            set_parameter(s.params, key, number_at(p, "params." + key, key.c_str()));
        }
    }

    if (root.contains("kernel")) {
        const json& k = object_at(root, "kernel");
        reject_unknown(k, "kernel", {"type", "kappa1", "kappa2", "rate"});
        const std::string type = k.contains("type") ? string_at(k, "type") : "gaussian";
        if (type == "gaussian") {
            if (k.contains("rate")) throw ConfigError("kernel.rate: only valid for type 'delta'");
            if (k.contains("kappa1")) s.kernel.kappa1 = number_at(k, "kernel.kappa1", "kappa1");
            if (k.contains("kappa2")) s.kernel.kappa2 = number_at(k, "kernel.kappa2", "kappa2");
            s.kernel.kind = KernelKind::Gaussian;
        } else if (type == "delta") {
            if (k.contains("kappa1") || k.contains("kappa2")) {
                throw ConfigError("kernel: kappa1/kappa2 are only valid for type 'gaussian'");
            }
            if (!k.contains("rate")) throw ConfigError("kernel.rate: required for type 'delta'");
            s.kernel = KernelSpec::delta(number_at(k, "kernel.rate", "rate"));
        } else {
            throw ConfigError("kernel.type: expected 'gaussian' or 'delta', got '" + type + "'");
        }
    }

    if (root.contains("grid")) {
        const json& g = object_at(root, "grid");
        reject_unknown(g, "grid", {"h", "t_max", "tau_cut"});
        if (g.contains("h")) s.grid.h = number_at(g, "grid.h", "h");
        if (g.contains("t_max")) s.grid.t_max = number_at(g, "grid.t_max", "t_max");
        if (g.contains("tau_cut")) s.grid.tau_cut = number_at(g, "grid.tau_cut", "tau_cut");
    }

    if (root.contains("sweep")) {
        const json& sw = object_at(root, "sweep");
        reject_unknown(sw, "sweep", {"param", "values"});
        if (sw.contains("param")) s.sweep_param = string_at(sw, "param");
        if (sw.contains("values")) {
            const json& v = sw.at("values");
            if (!v.is_array()) throw ConfigError("sweep.values: expected an array of numbers");
            s.sweep_values.clear();
            for (const json& x : v) {
                if (!x.is_number()) throw ConfigError("sweep.values: expected an array of numbers");
                s.sweep_values.push_back(x.get<double>());
            }
        } else if (sw.contains("param")) {
            throw ConfigError("sweep.values: required when sweep.param is given");
        }
    }

    if (root.contains("initial")) {
        const std::string text = string_at(root, "initial");
        tagged("initial", [&] { s.initial = InitialState::parse(text); });
    }
    if (root.contains("tail_fraction")) s.tail_fraction = number_at(root, "tail_fraction", "tail_fraction");
    if (root.contains("out")) out.out_dir = string_at(root, "out");
    if (root.contains("plots")) {
        if (!root.at("plots").is_boolean()) throw ConfigError("plots: expected true or false");
        out.plots = root.at("plots").get<bool>();
    }
}

// A config without a preset or sweep runs a single point at its own params.
void default_sweep(Scenario& s) {
    if (s.sweep_param.empty()) s.sweep_param = "lambda";
    if (s.sweep_values.empty()) s.sweep_values = {get_parameter(s.params, s.sweep_param)};
}

void validate_scenario(const Scenario& s) {
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

FileConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    std::optional<std::string> name;
    if (root.contains("preset")) name = string_at(root, "preset");
    FileConfig out{base_scenario(name), std::nullopt, std::nullopt};
    apply(root, out.scenario, out);
    default_sweep(out.scenario);
    validate_scenario(out.scenario);
    return out;
}

FileConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot open " + file.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

ResolvedRun resolve(const RunConfig& cfg) {
    ResolvedRun run{Scenario{}, ".", cfg.plots};
    if (cfg.config_file) {
        FileConfig file = load_config(*cfg.config_file);
        if (cfg.preset && file.scenario.name != *cfg.preset) {
            throw ConfigError("preset: --preset " + *cfg.preset + " conflicts with the config file");
        }
        run.scenario = std::move(file.scenario);
        if (file.out_dir) run.out_dir = *file.out_dir;
        if (file.plots) run.plots = run.plots || *file.plots;
    } else if (cfg.preset) {
        run.scenario = base_scenario(cfg.preset);
    } else {
        throw ConfigError("either --preset or --config is required");
    }

    Scenario& s = run.scenario;
    if (cfg.h) s.grid.h = *cfg.h;
    if (cfg.t_max) s.grid.t_max = *cfg.t_max;
    if (cfg.initial) tagged("initial", [&] { s.initial = InitialState::parse(*cfg.initial); });
    if (cfg.out_dir) run.out_dir = *cfg.out_dir;
    validate_scenario(s);
    return run;
}

std::string describe(const Scenario& s) {
    std::ostringstream o;
    o << std::setprecision(15);
    o << "name             " << s.name << "\n";
    o << "layout           d_photon=" << s.layout.d_photon() << " n_spins=" << s.layout.n_spins()
      << " d_cat=" << s.layout.d_cat() << " (dim " << s.layout.dim() << ")\n";
    const auto& names = sweep_parameter_names();
    for (const auto& n : names) {
        o << "params." << std::left << std::setw(10) << n << get_parameter(s.params, n);
        if (n == s.sweep_param) o << " (swept)";
        o << "\n";
    }
    if (s.kernel.kind == KernelKind::Gaussian) {
        o << "kernel           gaussian kappa1=" << s.kernel.kappa1 << " kappa2=" << s.kernel.kappa2
          << " (tau_cut=" << (s.grid.tau_cut > 0 ? s.grid.tau_cut : memory_cutoff(s.kernel, s.grid.kernel_rel_tol))
          << ")\n";
    } else {
        o << "kernel           delta rate=" << s.kernel.rate << "\n";
    }
    o << "grid             h=" << s.grid.h << " t_max=" << s.grid.t_max << " steps=" << s.grid.steps() << "\n";
    o << "sweep            " << s.sweep_param << " =";
    for (double v : s.sweep_values) o << " " << v;
    o << "\n";
    o << "initial          " << s.initial.to_string() << "\n";
    o << "tail_fraction    " << s.tail_fraction << "\n";
    return o.str();
}

}  // namespace qbat
