#include "leray/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace leray {

std::string analysis_kind_name(AnalysisKind k) {
    switch (k) {
        case AnalysisKind::EnergyAudit: return "energy_audit";
        case AnalysisKind::Duhamel: return "duhamel";
        case AnalysisKind::Heatflow: return "heatflow";
        case AnalysisKind::Fits: return "fits";
        case AnalysisKind::Onset: return "onset";
        case AnalysisKind::Sng: return "sng";
        case AnalysisKind::Semigroup: return "semigroup";
        case AnalysisKind::PairBounds: return "pair_bounds";
        case AnalysisKind::ScalarBounds: return "scalar_bounds";
        case AnalysisKind::Interpolation: return "interpolation";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct Entry {
    std::string key;  // "section.key"
    std::string value;
    int line;
    bool used = false;
};

struct Section {
    std::string name;  // "analysis <kind>" kept verbatim
    int line;
    std::vector<Entry> entries;
};

class Reader {
  public:
    Reader(Section& s, std::vector<ConfigError>& errors) : s_(s), errors_(&errors) {}

    bool has(const std::string& key) const {
        return std::any_of(s_.entries.begin(), s_.entries.end(),
                           [&](const Entry& e) { return e.key == key; });
    }

    std::string raw(const std::string& key, const std::string& fallback) {
        for (Entry& e : s_.entries)
            if (e.key == key) {
                e.used = true;
                return e.value;
            }
        return fallback;
    }

    double number(const std::string& key, double fallback) {
        for (Entry& e : s_.entries)
            if (e.key == key) {
                e.used = true;
                try {
                    std::size_t pos = 0;
                    const double v = std::stod(e.value, &pos);
                    if (pos != e.value.size()) throw std::invalid_argument("trailing text");
                    return v;
                } catch (const std::exception&) {
                    errors_->push_back({e.line, key, "not a number: '" + e.value + "'"});
                    return fallback;
                }
            }
        return fallback;
    }

    long integer(const std::string& key, long fallback) {
        const double v = number(key, static_cast<double>(fallback));
        if (v != std::floor(v)) {
            errors_->push_back({line_of(key), key, "must be an integer"});
            return fallback;
        }
        return static_cast<long>(v);
    }

    bool boolean(const std::string& key, bool fallback) {
        for (Entry& e : s_.entries)
            if (e.key == key) {
                e.used = true;
                if (e.value == "true" || e.value == "on" || e.value == "1") return true;
                if (e.value == "false" || e.value == "off" || e.value == "0") return false;
                errors_->push_back({e.line, key, "not a boolean: '" + e.value + "'"});
                return fallback;
            }
        return fallback;
    }

    std::vector<double> number_list(const std::string& key) {
        std::vector<double> vals;
        for (Entry& e : s_.entries)
            if (e.key == key) {
                e.used = true;
                std::stringstream ss(e.value);
                std::string cell;
                while (std::getline(ss, cell, ',')) {
                    cell = trim(cell);
                    if (cell.empty()) continue;
                    try {
                        vals.push_back(std::stod(cell));
                    } catch (const std::exception&) {
                        errors_->push_back({e.line, key, "not a number list: '" + e.value + "'"});
                        return {};
                    }
                }
            }
        return vals;
    }

    std::vector<std::string> string_list(const std::string& key) {
        std::vector<std::string> vals;
        for (Entry& e : s_.entries)
            if (e.key == key) {
                e.used = true;
                std::stringstream ss(e.value);
                std::string cell;
                while (std::getline(ss, cell, ',')) {
                    cell = trim(cell);
                    if (!cell.empty()) vals.push_back(cell);
                }
            }
        return vals;
    }

    int line_of(const std::string& key) const {
        for (const Entry& e : s_.entries)
            if (e.key == key) return e.line;
        return s_.line;
    }

    void require(const std::string& key) {
        if (!has(key)) errors_->push_back({s_.line, key, "missing required key"});
    }

    void finish() {
        for (const Entry& e : s_.entries)
            if (!e.used) errors_->push_back({e.line, e.key, "unknown key"});
    }

  private:
    Section& s_;
    std::vector<ConfigError>* errors_;
};

}  // namespace

namespace {
ParseResult parse_config_impl(const std::string& text, bool analyses_only) {
    ParseResult result;
    std::vector<ConfigError>& errors = result.errors;

    std::vector<Section> sections;
    {
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        Section* cur = nullptr;
        while (std::getline(ss, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    errors.push_back({lineno, line, "unterminated section header"});
                    continue;
                }
                sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}});
                cur = &sections.back();
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) {
                errors.push_back({lineno, line, "expected key = value"});
                continue;
            }
            if (!cur) {
                errors.push_back({lineno, line, "key outside any [section]"});
                continue;
            }
            cur->entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
        }
    }

    ExperimentConfig cfg;
    bool have_grid = false, have_time = false, have_initial = false;

    for (Section& sec : sections) {
        Reader r(sec, errors);
        if (analyses_only && sec.name.rfind("analysis", 0) != 0) {
            errors.push_back({sec.line, sec.name, "only [analysis ...] sections are allowed here"});
            continue;
        }
        if (sec.name == "grid") {
            have_grid = true;
            r.require("modes");
            r.require("length");
            const int dim = static_cast<int>(r.integer("dim", 3));
            const int modes = static_cast<int>(r.integer("modes", 0));
            const double length = r.number("length", 0.0);
            r.finish();
            try {
                cfg.solver.grid = Grid(dim, modes, length);
            } catch (const std::exception& e) {
                errors.push_back({sec.line, "grid", e.what()});
            }
        } else if (sec.name == "mollifier") {
            const std::string d = r.raw("delta", "auto");
            if (d == "auto") {
                cfg.solver.delta = -1.0;
            } else {
                cfg.solver.delta = r.number("delta", -1.0);
                if (cfg.solver.delta < 0.0)
                    errors.push_back({r.line_of("delta"), "delta", "must be >= 0 or 'auto'"});
            }
            r.finish();
        } else if (sec.name == "time") {
            have_time = true;
            r.require("t_end");
            cfg.solver.t_end = r.number("t_end", 0.0);
            const bool has_dt = r.has("dt");
            const bool has_cfl = r.has("cfl");
            if (has_dt == has_cfl)
                errors.push_back({sec.line, "time", "exactly one of dt or cfl is required"});
            if (has_dt) {
                cfg.solver.time.fixed = true;
                cfg.solver.time.dt = r.number("dt", 0.0);
                if (!(cfg.solver.time.dt > 0.0))
                    errors.push_back({r.line_of("dt"), "dt", "must be positive"});
            }
            if (has_cfl) {
                cfg.solver.time.fixed = false;
                cfg.solver.time.cfl = r.number("cfl", 0.5);
                if (!(cfg.solver.time.cfl > 0.0 && cfg.solver.time.cfl <= 1.0))
                    errors.push_back({r.line_of("cfl"), "cfl", "must be in (0, 1]"});
                cfg.solver.time.dt = r.number("dt_fallback", 0.01);
            }
            cfg.solver.record_every = static_cast<int>(r.integer("record_every", 1));
            if (cfg.solver.record_every < 1)
                errors.push_back({r.line_of("record_every"), "record_every", "must be >= 1"});
            cfg.solver.snapshot_every = static_cast<int>(r.integer("snapshot_every", 0));
            if (cfg.solver.snapshot_every < 0)
                errors.push_back({r.line_of("snapshot_every"), "snapshot_every", "must be >= 0"});
            cfg.solver.snapshot_first = r.number("snapshot_first", 0.25);
            if (!(cfg.solver.snapshot_first > 0.0))
                errors.push_back({r.line_of("snapshot_first"), "snapshot_first", "must be > 0"});
            r.finish();
        } else if (sec.name == "flow") {
            cfg.solver.dealias = r.boolean("dealias", true);
            cfg.solver.nonlinear = r.boolean("nonlinear", true);
            r.finish();
        } else if (sec.name == "initial") {
            have_initial = true;
            r.require("kind");
            const std::string kind = r.raw("kind", "");
            InitialDataSpec& in = cfg.solver.initial;
            if (kind == "taylor_green_2d") {
                in.kind = InitialKind::TaylorGreen2D;
            } else if (kind == "taylor_green_3d") {
                in.kind = InitialKind::TaylorGreen3D;
            } else if (kind == "localized_random") {
                in.kind = InitialKind::LocalizedRandom;
                r.require("seed");
            } else if (kind == "checkpoint") {
                in.kind = InitialKind::FromCheckpoint;
                r.require("path");
            } else if (!kind.empty()) {
                errors.push_back({r.line_of("kind"), "kind", "unknown initial kind '" + kind + "'"});
            }
            in.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
            in.peak_wavenumber = r.number("peak_wavenumber", 1.0);
            in.energy = r.number("energy", 1.0);
            in.envelope_width = r.number("envelope_width", 0.0);
            in.path = r.raw("path", "");
            r.finish();
        } else if (sec.name == "record") {
            cfg.solver.hs_list = r.number_list("hs");
            cfg.solver.lq_list = r.number_list("lq");
            for (double s : cfg.solver.hs_list)
                if (!(s >= 0.0)) errors.push_back({r.line_of("hs"), "hs", "exponents must be >= 0"});
            for (double q : cfg.solver.lq_list)
                if (!(q >= 1.0)) errors.push_back({r.line_of("lq"), "lq", "orders must be >= 1"});
            r.finish();
        } else if (sec.name == "output") {
            cfg.output_dir = r.raw("dir", cfg.output_dir);
            r.finish();
        } else if (sec.name.rfind("analysis", 0) == 0) {
            const std::string kind = trim(sec.name.substr(8));
            AnalysisSpec a;
            bool known = true;
            if (kind == "energy_audit") a.kind = AnalysisKind::EnergyAudit;
            else if (kind == "duhamel") a.kind = AnalysisKind::Duhamel;
            else if (kind == "heatflow") a.kind = AnalysisKind::Heatflow;
            else if (kind == "fits") a.kind = AnalysisKind::Fits;
            else if (kind == "onset") a.kind = AnalysisKind::Onset;
            else if (kind == "sng") a.kind = AnalysisKind::Sng;
            else if (kind == "semigroup") a.kind = AnalysisKind::Semigroup;
            else if (kind == "pair_bounds") a.kind = AnalysisKind::PairBounds;
            else if (kind == "scalar_bounds") a.kind = AnalysisKind::ScalarBounds;
            else if (kind == "interpolation") a.kind = AnalysisKind::Interpolation;
            else {
                known = false;
                errors.push_back({sec.line, sec.name, "unknown analysis '" + kind + "'"});
            }
            if (known) {
                a.t0 = r.number("t0", 0.0);
                a.t0_tilde = r.number("t0_tilde", 0.0);
                a.t = r.number("t", 0.0);
                a.n_quad = static_cast<int>(r.integer("n_quad", 4));
                a.taus = r.number_list("taus");
                a.ts = r.number_list("ts");
                a.q_list = r.number_list("q");
                a.norms = r.string_list("norms");
                a.norm = r.raw("norm", "l2");
                a.t_a = r.number("t_a", 0.0);
                a.t_b = r.number("t_b", 0.0);
                r.finish();
                cfg.analyses.push_back(std::move(a));
            }
        } else {
            errors.push_back({sec.line, sec.name, "unknown section"});
        }
    }

    if (!analyses_only) {
        if (!have_grid) errors.push_back({0, "grid", "missing [grid] section"});
        if (!have_time) errors.push_back({0, "time", "missing [time] section"});
        if (!have_initial) errors.push_back({0, "initial", "missing [initial] section"});
    }

    // cross-field checks
    if (have_time) {
        for (const AnalysisSpec& a : cfg.analyses) {
            auto in_range = [&](double v, const char* key) {
                if (v < 0.0 || v > cfg.solver.t_end)
                    errors.push_back({0, std::string(analysis_kind_name(a.kind)) + "." + key,
                                      "must lie within [0, t_end]"});
            };
            switch (a.kind) {
                case AnalysisKind::Duhamel:
                    in_range(a.t0, "t0");
                    in_range(a.t, "t");
                    if (a.t <= a.t0)
                        errors.push_back({0, "duhamel.t", "must exceed t0"});
                    break;
                case AnalysisKind::Heatflow:
                    in_range(a.t0, "t0");
                    break;
                case AnalysisKind::PairBounds:
                    in_range(a.t0, "t0");
                    in_range(a.t0_tilde, "t0_tilde");
                    if (a.t0_tilde <= a.t0)
                        errors.push_back({0, "pair_bounds.t0_tilde", "must exceed t0"});
                    break;
                default: break;
            }
        }
    }

    if (!errors.empty()) return result;
    result.config = std::move(cfg);
    return result;
}
}  // namespace

ParseResult parse_config(const std::string& text) { return parse_config_impl(text, false); }

ParseResult parse_analysis_config(const std::string& text) {
    return parse_config_impl(text, true);
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}
}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
    const SolverConfig& s = cfg.solver;
    std::string out;
    out += "[grid]\n";
    out += "dim = " + std::to_string(s.grid.dim) + "\n";
    out += "modes = " + std::to_string(s.grid.n) + "\n";
    out += "length = " + fmt(s.grid.length) + "\n";
    out += "[mollifier]\n";
    out += s.delta < 0.0 ? std::string("delta = auto\n") : "delta = " + fmt(s.delta) + "\n";
    out += "[time]\n";
    out += "t_end = " + fmt(s.t_end) + "\n";
    if (s.time.fixed)
        out += "dt = " + fmt(s.time.dt) + "\n";
    else
        out += "cfl = " + fmt(s.time.cfl) + "\ndt_fallback = " + fmt(s.time.dt) + "\n";
    out += "record_every = " + std::to_string(s.record_every) + "\n";
    out += "snapshot_every = " + std::to_string(s.snapshot_every) + "\n";
    out += "snapshot_first = " + fmt(s.snapshot_first) + "\n";
    out += "[flow]\n";
    out += std::string("dealias = ") + (s.dealias ? "true" : "false") + "\n";
    out += std::string("nonlinear = ") + (s.nonlinear ? "true" : "false") + "\n";
    out += "[initial]\n";
    switch (s.initial.kind) {
        case InitialKind::TaylorGreen2D: out += "kind = taylor_green_2d\n"; break;
        case InitialKind::TaylorGreen3D: out += "kind = taylor_green_3d\n"; break;
        case InitialKind::LocalizedRandom:
            out += "kind = localized_random\n";
            out += "seed = " + std::to_string(s.initial.seed) + "\n";
            out += "peak_wavenumber = " + fmt(s.initial.peak_wavenumber) + "\n";
            out += "energy = " + fmt(s.initial.energy) + "\n";
            out += "envelope_width = " + fmt(s.initial.envelope_width) + "\n";
            break;
        case InitialKind::FromCheckpoint:
            out += "kind = checkpoint\n";
            out += "path = " + s.initial.path + "\n";
            break;
    }
    if (!s.hs_list.empty() || !s.lq_list.empty()) {
        out += "[record]\n";
        if (!s.hs_list.empty()) out += "hs = " + fmt_list(s.hs_list) + "\n";
        if (!s.lq_list.empty()) out += "lq = " + fmt_list(s.lq_list) + "\n";
    }
    out += "[output]\n";
    out += "dir = " + cfg.output_dir + "\n";
    for (const AnalysisSpec& a : cfg.analyses) {
        out += "[analysis " + analysis_kind_name(a.kind) + "]\n";
        switch (a.kind) {
            case AnalysisKind::Duhamel:
                out += "t0 = " + fmt(a.t0) + "\n";
                out += "t = " + fmt(a.t) + "\n";
                out += "n_quad = " + std::to_string(a.n_quad) + "\n";
                break;
            case AnalysisKind::Heatflow: {
                out += "t0 = " + fmt(a.t0) + "\n";
                std::string ns;
                for (std::size_t i = 0; i < a.norms.size(); ++i) ns += (i ? "," : "") + a.norms[i];
                if (!ns.empty()) out += "norms = " + ns + "\n";
                break;
            }
            case AnalysisKind::Fits:
                out += "norm = " + a.norm + "\n";
                if (a.t_b > 0.0) {
                    out += "t_a = " + fmt(a.t_a) + "\n";
                    out += "t_b = " + fmt(a.t_b) + "\n";
                }
                break;
            case AnalysisKind::Semigroup:
                if (!a.taus.empty()) out += "taus = " + fmt_list(a.taus) + "\n";
                break;
            case AnalysisKind::PairBounds:
                out += "t0 = " + fmt(a.t0) + "\n";
                out += "t0_tilde = " + fmt(a.t0_tilde) + "\n";
                if (!a.ts.empty()) out += "ts = " + fmt_list(a.ts) + "\n";
                break;
            case AnalysisKind::Interpolation:
                if (!a.q_list.empty()) out += "q = " + fmt_list(a.q_list) + "\n";
                break;
            default: break;
        }
    }
    return out;
}

}  // namespace leray
