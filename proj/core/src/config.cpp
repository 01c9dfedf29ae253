#include "qb/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace qb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

// Strips a trailing "# comment" that is not inside quotes.
std::string strip_comment(const std::string& line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "system.N",         "system.omega0",       "system.omega_c",     "system.g",
        "system.n_max",     "system.variant",      "system.initial_state",
        "modulation.xi",    "modulation.nu",
        "window.tau_c",
        "channel.kind",     "channel.gamma",       "channel.omega",      "channel.gamma0",
        "channel.spectrum", "channel.Omega",       "channel.lambda",     "channel.omega_a",
        "grid.t0",          "grid.t1",             "grid.samples",       "grid.dt_max",
        "output.csv",       "output.json",         "output.plot",        "output.log_base",
        "sweep.axis1",      "sweep.axis1_start",   "sweep.axis1_stop",   "sweep.axis1_count",
        "sweep.axis2",      "sweep.axis2_start",   "sweep.axis2_stop",   "sweep.axis2_count",
        "sweep.observable", "sweep.threads",
    };
    return keys;
}

void check_key(const std::string& key) {
    if (known_keys().count(key) == 0) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

double to_double(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    double out = 0.0;
    const auto* first = v.data();
    const auto* last = v.data() + v.size();
    const auto res = std::from_chars(first, last, out);
    if (v.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(out)) {
        throw ConfigError("key '" + key + "': expected a number, got '" + raw + "'");
    }
    return out;
}

int to_int(const std::string& key, const std::string& raw) {
    const double d = to_double(key, raw);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + raw + "'");
    }
    return static_cast<int>(d);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

InitialStateConfig parse_initial(const std::string& raw) {
    const std::string v = trim(raw);
    InitialStateConfig out;
    if (v == "ground_fockN" || v == "ground_fock_n") {
        out.kind = InitialStateKind::ground_fock_n;
    } else if (v == "uniform_superposition" || v == "phi1") {
        out.kind = InitialStateKind::uniform_superposition;
    } else if (v == "charged") {
        out.kind = InitialStateKind::charged;
    } else if (v.rfind("dicke:", 0) == 0) {
        out.kind = InitialStateKind::dicke;
        out.dicke_m = to_int("system.initial_state", v.substr(6));
    } else if (v.rfind("amplitudes:", 0) == 0) {
        out.kind = InitialStateKind::amplitudes;
        std::stringstream ss(v.substr(11));
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.amplitudes.push_back(to_double("system.initial_state", item));
        }
        if (out.amplitudes.empty()) throw ConfigError("system.initial_state: empty amplitude list");
    } else {
        throw ConfigError("system.initial_state: unknown initial state '" + raw +
                          "' (ground_fockN, uniform_superposition, dicke:<m>, "
                          "amplitudes:<a0,a1,...>, charged)");
    }
    return out;
}

std::string initial_to_string(const InitialStateConfig& s) {
    switch (s.kind) {
        case InitialStateKind::ground_fock_n: return "ground_fockN";
        case InitialStateKind::uniform_superposition: return "uniform_superposition";
        case InitialStateKind::charged: return "charged";
        case InitialStateKind::dicke: return "dicke:" + std::to_string(s.dicke_m);
        case InitialStateKind::amplitudes: {
            std::string out = "amplitudes:";
            for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
                if (i) out += ",";
                out += fmt(s.amplitudes[i]);
            }
            return out;
        }
    }
    return "unknown";
}

SweepObservable parse_observable(const std::string& s) {
    if (s == "peak_efficiency") return SweepObservable::peak_efficiency;
    if (s == "ergotropy_at_time") return SweepObservable::ergotropy_at_time;
    throw ConfigError("sweep.observable: expected peak_efficiency or ergotropy_at_time, got '" +
                      s + "'");
}

}  // namespace

double AxisRange::value(int i) const noexcept {
    if (count <= 1) return start;
    if (i == count - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::vector<double> AxisRange::values() const {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(value(i));
    return out;
}

void SweepGrid::validate() const {
    for (const AxisRange* a : {&axis1, &axis2}) {
        if (a->count < 2) throw ConfigError("sweep: axis counts must be >= 2");
        if (!(a->stop > a->start)) throw ConfigError("sweep: axis ranges must be increasing");
    }
    if (axis1.axis == axis2.axis) throw ConfigError("sweep: the two axes must differ");
    const bool has_tau = axis1.axis == SweepAxis::tau_s || axis2.axis == SweepAxis::tau_s;
    const bool has_g = axis1.axis == SweepAxis::g || axis2.axis == SweepAxis::g;
    if (observable == SweepObservable::peak_efficiency && has_tau) {
        throw ConfigError("sweep: peak_efficiency sweeps take axes among {xi, g}");
    }
    if (observable == SweepObservable::ergotropy_at_time && (!has_tau || has_g)) {
        throw ConfigError("sweep: ergotropy_at_time sweeps take axes {xi, tau_s}");
    }
    if (has_tau) {
        const AxisRange& t = axis1.axis == SweepAxis::tau_s ? axis1 : axis2;
        if (!(t.start > 0.0)) throw ConfigError("sweep: tau_s values must be > 0");
    }
}

std::string to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::none: return "none";
        case ChannelKind::dephasing: return "dephasing";
        case ChannelKind::dissipation: return "dissipation";
    }
    return "unknown";
}

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::xi: return "xi";
        case SweepAxis::g: return "g";
        case SweepAxis::tau_s: return "tau_s";
    }
    return "unknown";
}

std::string to_string(SweepObservable o) {
    return o == SweepObservable::peak_efficiency ? "peak_efficiency" : "ergotropy_at_time";
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "xi") return SweepAxis::xi;
    if (s == "g") return SweepAxis::g;
    if (s == "tau_s") return SweepAxis::tau_s;
    throw ConfigError("sweep axis must be xi, g or tau_s, got '" + s + "'");
}

int default_n_max(int n_cells) { return std::max(5 * n_cells, 30); }

ConfigEntries parse_config_text(const std::string& text) {
    ConfigEntries out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(s.substr(1, s.size() - 2));
            static const std::set<std::string> sections = {"system", "modulation", "window",
                                                           "channel", "grid", "output", "sweep"};
            if (sections.count(section) == 0) {
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(s.substr(0, eq));
        if (key.find('.') == std::string::npos) {
            if (section.empty()) {
                throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                                  "' outside any section");
            }
            key = section + "." + key;
        }
        check_key(key);
        out[key] = unquote(trim(s.substr(eq + 1)));
    }
    return out;
}

ConfigEntries read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(ConfigEntries& entries, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' must have the form section.key=value");
    }
    const std::string key = trim(assignment.substr(0, eq));
    check_key(key);
    entries[key] = unquote(trim(assignment.substr(eq + 1)));
}

ExperimentConfig build_config(const ConfigEntries& entries) {
    ExperimentConfig cfg;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        check_key(key);
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    };
    for (const auto& [key, value] : entries) check_key(key);

    try {
        if (auto v = get("system.N")) cfg.system.n_cells = SpinSector::from_real(to_double("system.N", *v)).n_cells;
        if (auto v = get("system.omega0")) cfg.system.omega0 = to_double("system.omega0", *v);
        cfg.system.omega_c = cfg.system.omega0;
        if (auto v = get("system.omega_c")) cfg.system.omega_c = to_double("system.omega_c", *v);
        if (auto v = get("system.g")) cfg.system.g = to_double("system.g", *v);
        if (auto v = get("system.n_max")) {
            cfg.system.n_max = to_int("system.n_max", *v);
            cfg.n_max_explicit = true;
        } else {
            cfg.system.n_max = default_n_max(cfg.system.n_cells);
        }
        if (auto v = get("system.variant")) cfg.variant = parse_variant(*v);
        if (auto v = get("system.initial_state")) cfg.initial = parse_initial(*v);
        cfg.system.validate();

        if (auto v = get("modulation.xi")) cfg.modulation.xi = to_double("modulation.xi", *v);
        if (auto v = get("modulation.nu")) cfg.modulation.nu = to_double("modulation.nu", *v);
        cfg.modulation.validate();

        if (auto v = get("window.tau_c"); v && *v != "auto") {
            cfg.window.tau_c = to_double("window.tau_c", *v);
            cfg.window.validate();
        }

        if (auto v = get("channel.kind")) {
            if (*v == "none") cfg.channel.kind = ChannelKind::none;
            else if (*v == "dephasing") cfg.channel.kind = ChannelKind::dephasing;
            else if (*v == "dissipation") cfg.channel.kind = ChannelKind::dissipation;
            else throw ConfigError("channel.kind: expected none, dephasing or dissipation, got '" + *v + "'");
        }
        if (auto v = get("channel.gamma")) cfg.channel.gamma = to_double("channel.gamma", *v);
        if (auto v = get("channel.omega")) cfg.channel.omega = to_double("channel.omega", *v);
        if (auto v = get("channel.gamma0")) cfg.channel.gamma0 = to_double("channel.gamma0", *v);
        const bool spectrum_keys = get("channel.Omega") || get("channel.lambda") || get("channel.omega_a");
        if (auto v = get("channel.spectrum"); v && *v != "none") {
            if (*v != "lorentz") throw ConfigError("channel.spectrum: only 'lorentz' is supported");
            LorentzianSpectrum s;
            if (auto o = get("channel.Omega")) s.Omega = to_double("channel.Omega", *o);
            if (auto o = get("channel.lambda")) s.lambda_w = to_double("channel.lambda", *o);
            if (auto o = get("channel.omega_a")) s.omega_a = to_double("channel.omega_a", *o);
            s.validate();
            cfg.channel.spectrum = s;
        } else if (spectrum_keys) {
            throw ConfigError("channel.Omega/lambda/omega_a require channel.spectrum = lorentz");
        }
        if (cfg.channel.gamma0 && cfg.channel.spectrum) {
            throw ConfigError("channel: give either gamma0 or a spectrum, not both");
        }
        if (cfg.channel.kind == ChannelKind::dissipation && !cfg.channel.gamma0 && !cfg.channel.spectrum) {
            throw ConfigError("channel: dissipation needs gamma0 or spectrum = lorentz");
        }
        if (cfg.channel.gamma < 0.0 || (cfg.channel.gamma0 && *cfg.channel.gamma0 < 0.0)) {
            throw ConfigError("channel: rates must be >= 0");
        }

        const bool any_grid = get("grid.t0") || get("grid.t1") || get("grid.samples") || get("grid.dt_max");
        if (any_grid) {
            TimeGrid g;
            g.t1 = std::numeric_limits<double>::quiet_NaN();  // filled by the scenario default
            if (auto v = get("grid.t0")) g.t0 = to_double("grid.t0", *v);
            if (auto v = get("grid.t1")) g.t1 = to_double("grid.t1", *v);
            if (auto v = get("grid.samples")) g.n_samples = to_int("grid.samples", *v);
            if (auto v = get("grid.dt_max")) g.dt_max = to_double("grid.dt_max", *v);
            cfg.grid = g;
        }

        if (auto v = get("output.csv")) cfg.output.csv = *v;
        if (auto v = get("output.json")) cfg.output.json = *v;
        if (auto v = get("output.plot")) cfg.output.plot = *v;
        if (auto v = get("output.log_base")) {
            if (*v == "e" || *v == "natural") cfg.output.log_base = LogBase::natural;
            else if (*v == "2") cfg.output.log_base = LogBase::two;
            else throw ConfigError("output.log_base: expected natural or 2, got '" + *v + "'");
        }

        if (auto v = get("sweep.axis1")) cfg.sweep.axis1.axis = parse_axis(*v);
        if (auto v = get("sweep.axis1_start")) cfg.sweep.axis1.start = to_double("sweep.axis1_start", *v);
        if (auto v = get("sweep.axis1_stop")) cfg.sweep.axis1.stop = to_double("sweep.axis1_stop", *v);
        if (auto v = get("sweep.axis1_count")) cfg.sweep.axis1.count = to_int("sweep.axis1_count", *v);
        if (auto v = get("sweep.axis2")) cfg.sweep.axis2.axis = parse_axis(*v);
        if (auto v = get("sweep.axis2_start")) cfg.sweep.axis2.start = to_double("sweep.axis2_start", *v);
        if (auto v = get("sweep.axis2_stop")) cfg.sweep.axis2.stop = to_double("sweep.axis2_stop", *v);
        if (auto v = get("sweep.axis2_count")) cfg.sweep.axis2.count = to_int("sweep.axis2_count", *v);
        if (auto v = get("sweep.observable")) cfg.sweep.observable = parse_observable(*v);
        if (auto v = get("sweep.threads")) cfg.threads = to_int("sweep.threads", *v);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
    std::map<std::string, std::string> out;
    out["system.N"] = std::to_string(system.n_cells);
    out["system.omega0"] = fmt(system.omega0);
    out["system.omega_c"] = fmt(system.omega_c);
    out["system.g"] = fmt(system.g);
    out["system.n_max"] = std::to_string(system.n_max);
    out["system.variant"] = to_string(variant);
    out["system.initial_state"] = initial_to_string(initial);
    out["modulation.xi"] = fmt(modulation.xi);
    out["modulation.nu"] = fmt(modulation.nu);
    out["window.tau_c"] = window.is_always_on() ? "auto" : fmt(window.tau_c);
    out["channel.kind"] = to_string(channel.kind);
    if (channel.kind == ChannelKind::dephasing) {
        out["channel.gamma"] = fmt(channel.gamma);
        out["channel.omega"] = fmt(channel.omega.value_or(system.omega0));
    }
    if (channel.gamma0) out["channel.gamma0"] = fmt(*channel.gamma0);
    if (channel.spectrum) {
        out["channel.spectrum"] = "lorentz";
        out["channel.Omega"] = fmt(channel.spectrum->Omega);
        out["channel.lambda"] = fmt(channel.spectrum->lambda_w);
        out["channel.omega_a"] = fmt(channel.spectrum->omega_a);
    }
    if (grid) {
        out["grid.t0"] = fmt(grid->t0);
        out["grid.t1"] = std::isnan(grid->t1) ? "auto" : fmt(grid->t1);
        out["grid.samples"] = std::to_string(grid->n_samples);
        out["grid.dt_max"] = fmt(grid->dt_max);
    }
    out["output.log_base"] = output.log_base == LogBase::two ? "2" : "natural";
    return out;
}

}  // namespace qb
