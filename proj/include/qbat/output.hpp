// output.hpp: CSV and SVG writers for trajectories and sweep summaries.
#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qbat/scenarios.hpp"

namespace qbat {

inline constexpr const char* kTrajectoryHeader = "t,E_B,W,E_cat,N_exc,trace_err,herm_err,min_eig";
inline constexpr const char* kSummaryHeader =
    "sweep_param,sweep_value,tail_mean_W,tail_amplitude,catalyst_drift,min_eig_global";

/// Shortest decimal text that round-trips to the same double.
std::string format_value(double v);

/// "<name>_<param><value>.csv", e.g. fig2b_lambda0.8.csv.
std::string trajectory_filename(const SweepResult& r, double value);
std::string summary_filename(const SweepResult& r);
std::string plot_filename(const SweepResult& r);

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_summary_csv(std::ostream& out, const SweepResult& r);

/// Line chart of W(t), one series per sweep point.
void write_svg_plot(std::ostream& out, const SweepResult& r);

/// Writes every trajectory CSV, the summary CSV and optionally the plot into
/// dir (created if missing). Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const SweepResult& r, const std::filesystem::path& dir,
                                                 bool plots);

}  // namespace qbat
