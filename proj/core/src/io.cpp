#include "qb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qb {

namespace {

using nlohmann::json;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json echo_json(const ExperimentConfig& cfg) {
    json out = json::object();
    for (const auto& [k, v] : cfg.echo()) out[k] = v;
    return out;
}

// Linear map of [lo, hi] onto [a, b].
struct Scale {
    double lo, hi, a, b;
    double operator()(double x) const {
        if (hi == lo) return 0.5 * (a + b);
        return a + (x - lo) / (hi - lo) * (b - a);
    }
};

// Piecewise-linear blue-green-yellow ramp.
std::string ramp(double u) {
    static const double stops[][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    u = std::clamp(u, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(u));
    const double f = u - i;
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kMargin = 56;

}  // namespace

std::string trajectory_csv(const TrajectoryRecord& rec) {
    std::ostringstream os;
    os << "# " << rec.command << ", N=" << rec.n_cells
       << "; energies in units of omega0, time in units of 1/omega0\n";
    os << "t,energy,ergotropy,efficiency,coherence,diag_norm_or_trace_err,min_eig\n";
    for (const auto& r : rec.rows) {
        os << num(r.t) << ',' << num(r.energy) << ',' << num(r.ergotropy) << ','
           << num(r.efficiency) << ',' << num(r.coherence) << ',' << num(r.diag_error) << ','
           << num(r.min_eig) << '\n';
    }
    return os.str();
}

std::string summary_json(const TrajectoryRecord& rec, const ExperimentConfig& cfg) {
    json out;
    out["command"] = rec.command;
    out["config_echo"] = echo_json(cfg);
    if (rec.peak) {
        out["peak_efficiency"] = rec.peak->value;
        out["tau_c"] = rec.peak->t;
        out["peak_is_monotone_endpoint"] = rec.peak->monotone;
    } else {
        out["peak_efficiency"] = nullptr;
        out["tau_c"] = nullptr;
    }
    out["final_ergotropy_per_cell"] = rec.final_ergotropy_per_cell();
    out["diagnostics"] = {{"max_norm_err", rec.max_diag_error()},
                          {"min_eig", rec.min_eigenvalue()}};
    if (rec.peak) out["diagnostics"]["fock_leakage_to_peak"] = rec.leakage_to_peak;
    return out.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
    const std::string a1 = to_string(result.grid.axis1.axis);
    const std::string a2 = to_string(result.grid.axis2.axis);
    std::ostringstream os;
    os << "# " << to_string(result.grid.observable) << "; rows " << a2 << ", columns " << a1
       << "; energies in units of omega0, time in units of 1/omega0\n";
    os << a2 << '\\' << a1;
    for (double x : result.axis1) os << ',' << num(x);
    os << '\n';
    for (std::size_t r = 0; r < result.axis2.size(); ++r) {
        os << num(result.axis2[r]);
        for (std::size_t c = 0; c < result.axis1.size(); ++c) {
            os << ',' << num(result.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        }
        os << '\n';
    }
    return os.str();
}

std::string sweep_json(const SweepResult& result, const ExperimentConfig& cfg) {
    json out;
    out["command"] = "sweep";
    out["config_echo"] = echo_json(cfg);
    out["observable"] = to_string(result.grid.observable);
    out["axis1"] = {{"name", to_string(result.grid.axis1.axis)}, {"values", result.axis1}};
    out["axis2"] = {{"name", to_string(result.grid.axis2.axis)}, {"values", result.axis2}};
    json rows = json::array();
    for (Eigen::Index r = 0; r < result.values.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < result.values.cols(); ++c) {
            row.push_back(number_or_null(result.values(r, c)));
        }
        rows.push_back(row);
    }
    out["values"] = rows;
    out["errors"] = result.errors;
    return out.dump(2) + "\n";
}

std::string trajectory_svg(const TrajectoryRecord& rec) {
    struct Series {
        const char* name;
        const char* color;
        double TrajectoryRow::*field;
    };
    const Series series[] = {{"efficiency", "#1f77b4", &TrajectoryRow::efficiency},
                             {"coherence", "#d62728", &TrajectoryRow::coherence}};
    double tmin = rec.rows.empty() ? 0.0 : rec.rows.front().t;
    double tmax = rec.rows.empty() ? 1.0 : rec.rows.back().t;
    double vmin = 0.0, vmax = 1e-12;
    for (const auto& r : rec.rows) {
        for (const auto& s : series) {
            vmin = std::min(vmin, r.*s.field);
            vmax = std::max(vmax, r.*s.field);
        }
    }
    const Scale sx{tmin, tmax, kMargin, kWidth - 16.0};
    const Scale sy{vmin, vmax, kHeight - kMargin, 16.0};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - 16
       << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kMargin << "\" y1=\"16\" x2=\"" << kMargin << "\" y2=\""
       << kHeight - kMargin << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\">t</text>\n";
    os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\">" << num(tmin)
       << "</text>\n";
    os << "<text x=\"" << kWidth - 56 << "\" y=\"" << kHeight - kMargin + 16 << "\">" << num(tmax)
       << "</text>\n";
    os << "<text x=\"4\" y=\"20\">" << num(vmax) << "</text>\n";
    os << "<text x=\"4\" y=\"" << kHeight - kMargin << "\">" << num(vmin) << "</text>\n";
    int legend = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        const std::size_t stride = std::max<std::size_t>(1, rec.rows.size() / 1000);
        for (std::size_t i = 0; i < rec.rows.size(); i += stride) {
            os << sx(rec.rows[i].t) << ',' << sy(rec.rows[i].*s.field) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << kWidth - 120 << "\" y=\"" << 32 + 16 * legend++ << "\" fill=\""
           << s.color << "\">" << s.name << "</text>\n";
    }
    if (rec.peak && !rec.peak->monotone) {
        os << "<circle cx=\"" << sx(rec.peak->t) << "\" cy=\"" << sy(rec.peak->value)
           << "\" r=\"3\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string sweep_svg(const SweepResult& result) {
    const auto& v = result.values;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::isfinite(v.data()[i])) {
            lo = std::min(lo, v.data()[i]);
            hi = std::max(hi, v.data()[i]);
        }
    }
    const int rows = static_cast<int>(v.rows());
    const int cols = static_cast<int>(v.cols());
    const double cw = (kWidth - kMargin - 16.0) / std::max(1, cols);
    const double ch = (kHeight - kMargin - 16.0) / std::max(1, rows);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double x = v(r, c);
            const std::string fill =
                std::isfinite(x) ? ramp(hi > lo ? (x - lo) / (hi - lo) : 0.5) : std::string("#cccccc");
            // Row 0 at the bottom.
            os << "<rect x=\"" << kMargin + c * cw << "\" y=\"" << 16 + (rows - 1 - r) * ch
               << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"" << fill
               << "\"><title>" << num(x) << "</title></rect>\n";
        }
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16 << "\">"
       << to_string(result.grid.axis1.axis) << " [" << num(result.grid.axis1.start) << ", "
       << num(result.grid.axis1.stop) << "]</text>\n";
    os << "<text x=\"4\" y=\"" << kHeight / 2 << "\">" << to_string(result.grid.axis2.axis)
       << "</text>\n";
    os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 28 << "\">"
       << to_string(result.grid.observable) << " in [" << num(lo) << ", " << num(hi)
       << "]</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace qb
