#include "qbat/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace qbat {

namespace {

// 15 significant digits, fixed across runs so output is byte-stable.
std::string num(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.15g", v);
    return buf.data();
}

std::ofstream open_for_write(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

}  // namespace

std::string format_value(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string trajectory_filename(const SweepResult& r, double value) {
    return r.name + "_" + r.sweep_param + format_value(value) + ".csv";
}

std::string summary_filename(const SweepResult& r) { return r.name + "_summary.csv"; }

std::string plot_filename(const SweepResult& r) { return r.name + "_W.svg"; }

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << kTrajectoryHeader << "\n";
    for (const auto& s : traj.samples) {
        out << num(s.t) << ',' << num(s.battery_energy) << ',' << num(s.ergotropy) << ',' << num(s.catalyst_energy)
            << ',' << num(s.excitations) << ',' << num(s.trace_error) << ',' << num(s.hermiticity_error) << ','
            << num(s.min_eigenvalue) << "\n";
    }
}

void write_summary_csv(std::ostream& out, const SweepResult& r) {
    out << kSummaryHeader << "\n";
    for (const auto& p : r.points) {
        out << r.sweep_param << ',' << num(p.value) << ',' << num(p.tail_mean_w) << ',' << num(p.tail_amplitude)
            << ',' << num(p.catalyst_drift) << ',' << num(p.min_eigenvalue) << "\n";
    }
}

void write_svg_plot(std::ostream& out, const SweepResult& r) {
    constexpr double width = 720, height = 420;
    constexpr double left = 70, right = 160, top = 30, bottom = 50;
    constexpr std::array<const char*, 6> colours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

    double t_max = 0, w_min = 0, w_max = 0;
    for (const auto& p : r.points) {
        for (const auto& s : p.trajectory.samples) {
            t_max = std::max(t_max, s.t);
            w_min = std::min(w_min, s.ergotropy);
            w_max = std::max(w_max, s.ergotropy);
        }
    }
    if (t_max <= 0) t_max = 1;
    if (w_max - w_min < 1e-12) w_max = w_min + 1;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto x = [&](double t) { return left + pw * t / t_max; };
    auto y = [&](double w) { return top + ph * (1.0 - (w - w_min) / (w_max - w_min)); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double t = t_max * i / 4.0;
        const double w = w_min + (w_max - w_min) * i / 4.0;
        out << "<text x=\"" << x(t) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
            << num(std::round(t * 100) / 100) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << y(w) + 4 << "\" text-anchor=\"end\">"
            << num(std::round(w * 1000) / 1000) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">t</text>\n";
    out << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
        << ")\" text-anchor=\"middle\">W(t)</text>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"18\" text-anchor=\"middle\">" << r.name << "</text>\n";

    for (std::size_t k = 0; k < r.points.size(); ++k) {
        const auto& p = r.points[k];
        const char* colour = colours[k % colours.size()];
        const auto& samples = p.trajectory.samples;
        // Thin long trajectories to about 2000 vertices.
        const std::size_t stride = std::max<std::size_t>(1, samples.size() / 2000);
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < samples.size(); i += stride) {
            out << num(std::round(x(samples[i].t) * 100) / 100) << ','
                << num(std::round(y(samples[i].ergotropy) * 100) / 100) << ' ';
        }
        out << "\"/>\n";
        const double ly = top + 16 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << width - right + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - right + 36
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - right + 42 << "\" y=\"" << ly << "\">" << r.sweep_param << " = "
            << format_value(p.value) << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<std::filesystem::path> write_outputs(const SweepResult& r, const std::filesystem::path& dir,
                                                 bool plots) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& p : r.points) {
        const auto path = dir / trajectory_filename(r, p.value);
        auto f = open_for_write(path);
        write_trajectory_csv(f, p.trajectory);
        written.push_back(path);
    }
    {
        const auto path = dir / summary_filename(r);
        auto f = open_for_write(path);
        write_summary_csv(f, r);
        written.push_back(path);
    }
    if (plots) {
        const auto path = dir / plot_filename(r);
        auto f = open_for_write(path);
        write_svg_plot(f, r);
        written.push_back(path);
    }
    return written;
}

}  // namespace qbat
