// config.hpp: run configuration from a preset name, a JSON file and flag overrides.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qbat/scenarios.hpp"

namespace qbat {

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<std::filesystem::path> config_file;
    std::optional<std::filesystem::path> out_dir;
    std::optional<double> h;
    std::optional<double> t_max;
    std::optional<std::string> initial;
    bool plots{false};
};

/// Contents of a JSON config file. Every key is optional; absent keys keep
/// the preset (or default) values.
///
///   {
///     "preset": "fig2b",
///     "name": "my_run",
///     "layout": {"d_photon": 6, "n_spins": 3, "d_cat": 2},
///     "params": {"omega_c": 2.5, "omega_a": 2.5, "J": 1.5, "g": 0.2, "omega_cat": 0.25, "lambda": 0},
///     "kernel": {"kappa1": 1.8, "kappa2": 1.8}  or  {"type": "delta", "rate": 0.1},
///     "grid": {"h": 0.01, "t_max": 20},
///     "sweep": {"param": "lambda", "values": [0.8, 1.8, 2.8]},
///     "initial": "fock:3",
///     "tail_fraction": 0.25,
///     "out": "results",
///     "plots": true
///   }
struct FileConfig {
    Scenario scenario;
    std::optional<std::filesystem::path> out_dir;
    std::optional<bool> plots;
};

/// Parses and validates JSON text. Throws ConfigError.
FileConfig parse_config(std::string_view json_text);
FileConfig load_config(const std::filesystem::path& file);

struct ResolvedRun {
    Scenario scenario;
    std::filesystem::path out_dir;
    bool plots{false};
};

/// Applies preset, config file and flag overrides in that order, then
/// validates the scenario. Nothing is allocated for an invalid config.
ResolvedRun resolve(const RunConfig& cfg);

/// Multi-line listing of every resolved parameter.
std::string describe(const Scenario& s);

}  // namespace qbat
