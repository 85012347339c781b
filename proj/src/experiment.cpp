#include "leray/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "leray/bounds.hpp"
#include "leray/decay.hpp"
#include "leray/digest.hpp"
#include "leray/norms.hpp"

namespace leray {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

json report_json(const BoundReport& r) {
    return json{{"name", r.name},     {"params", r.params}, {"lhs", r.lhs},
                {"rhs", r.rhs},       {"margin", r.margin}, {"pass", r.pass},
                {"status", r.status}};
}

json fit_json(const DecayFit& f) {
    return json{{"t_a", f.t_a},         {"t_b", f.t_b},
                {"exponent", f.exponent}, {"stderr", f.stderr_},
                {"r_squared", f.r_squared}, {"samples", f.samples}};
}

bool reports_pass(const std::vector<BoundReport>& rs) {
    for (const BoundReport& r : rs)
        if (!r.pass && r.status == "ok") return false;
    return true;  // box-limited and inconclusive do not fail a run
}

json meta_json(const Trajectory& traj, const std::string& dir) {
    const SolverConfig& s = traj.config;
    json snaps = json::array();
    for (const Snapshot& sn : traj.snaps) {
        std::string rel = sn.path;
        const std::string prefix = dir + "/";
        if (rel.rfind(prefix, 0) == 0) rel = rel.substr(prefix.size());
        snaps.push_back({{"t", sn.t}, {"path", rel}});
    }
    return json{{"schema_version", 1},
                {"grid", {{"dim", s.grid.dim}, {"modes", s.grid.n}, {"length", s.grid.length}}},
                {"delta", s.resolved_delta()},
                {"dealias", s.dealias},
                {"nonlinear", s.nonlinear},
                {"t_end", s.t_end},
                {"fixed_dt", s.time.fixed},
                {"dt", s.time.dt},
                {"cfl", s.time.cfl},
                {"initial_l2", traj.initial_l2},
                {"first_dt", traj.first_dt},
                {"aborted", traj.aborted},
                {"abort_reason", traj.abort_reason},
                {"snapshots", snaps}};
}

}  // namespace

Trajectory load_trajectory(const std::string& dir) {
    std::ifstream meta_is(fs::path(dir) / "run_meta.json");
    if (!meta_is) throw std::runtime_error("load_trajectory: no run_meta.json in " + dir);
    json meta = json::parse(meta_is);

    Trajectory traj;
    SolverConfig& s = traj.config;
    s.grid = Grid(meta["grid"]["dim"].get<int>(), meta["grid"]["modes"].get<int>(),
                  meta["grid"]["length"].get<double>());
    s.delta = meta["delta"].get<double>();
    s.dealias = meta["dealias"].get<bool>();
    s.nonlinear = meta["nonlinear"].get<bool>();
    s.t_end = meta["t_end"].get<double>();
    s.time.fixed = meta["fixed_dt"].get<bool>();
    s.time.dt = meta["dt"].get<double>();
    s.time.cfl = meta["cfl"].get<double>();
    s.output_dir = dir;
    traj.initial_l2 = meta["initial_l2"].get<double>();
    traj.first_dt = meta["first_dt"].get<double>();
    traj.aborted = meta["aborted"].get<bool>();
    traj.abort_reason = meta["abort_reason"].get<std::string>();
    for (const json& sn : meta["snapshots"]) {
        Snapshot snap;
        snap.t = sn["t"].get<double>();
        snap.path = (fs::path(dir) / sn["path"].get<std::string>()).string();
        traj.snaps.push_back(std::move(snap));
    }
    std::ifstream csv(fs::path(dir) / "norms.csv");
    if (!csv) throw std::runtime_error("load_trajectory: no norms.csv in " + dir);
    traj.norms = NormSeries::from_csv(csv);
    return traj;
}

int run_analyses_on(const Trajectory& traj, const std::vector<AnalysisSpec>& analyses,
                    const std::string& dir, std::vector<RunManifest::FileEntry>* files) {
    bool all_pass = true;
    int idx = 0;
    auto emit = [&](const std::string& name, const std::string& content) {
        const fs::path p = fs::path(dir) / name;
        write_file(p, content);
        if (files) files->push_back({name, sha256_hex(content),
                                     static_cast<std::uint64_t>(content.size())});
    };

    for (const AnalysisSpec& a : analyses) {
        char prefix[32];
        std::snprintf(prefix, sizeof prefix, "analysis_%02d_", idx++);
        const std::string stem = prefix + analysis_kind_name(a.kind);
        switch (a.kind) {
            case AnalysisKind::EnergyAudit: {
                const EnergyReport rep = energy_audit(traj);
                json rows = json::array();
                for (const EnergyReport::Row& r : rep.rows)
                    rows.push_back({{"t", r.t},
                                    {"defect", r.defect},
                                    {"defect_integrated", r.defect_integrated},
                                    {"pass", r.pass}});
                json j{{"schema_version", 1},
                       {"tolerance", rep.tolerance},
                       {"max_abs_defect", rep.max_abs_defect},
                       {"max_defect", rep.max_defect},
                       {"pass", rep.pass},
                       {"rows", rows}};
                emit(stem + ".json", j.dump(2) + "\n");
                all_pass = all_pass && rep.pass;
                break;
            }
            case AnalysisKind::Duhamel: {
                const double r = duhamel_residual(traj, a.t0, a.t, a.n_quad);
                json j{{"schema_version", 1}, {"t0", a.t0},       {"t", a.t},
                       {"n_quad", a.n_quad},  {"residual", r}};
                emit(stem + ".json", j.dump(2) + "\n");
                break;
            }
            case AnalysisKind::Heatflow: {
                std::vector<NormSpec> specs;
                if (a.norms.empty()) {
                    specs = {NormSpec::l2(), NormSpec::sup()};
                } else {
                    for (const std::string& n : a.norms) {
                        if (n == "l2") specs.push_back(NormSpec::l2());
                        else if (n == "sup") specs.push_back(NormSpec::sup());
                        else if (n.rfind("lq_", 0) == 0)
                            specs.push_back(NormSpec::lq(std::stod(n.substr(3))));
                        else throw std::invalid_argument("heatflow: unknown norm " + n);
                    }
                }
                const NormSeries s = heat_flow_difference_series(traj, a.t0, specs);
                emit(stem + ".csv", s.to_csv());
                break;
            }
            case AnalysisKind::Fits: {
                double ta = a.t_a, tb = a.t_b;
                if (!(tb > 0.0)) {
                    const ValidityWindow w = validity_window(traj);
                    if (w.empty) {
                        json j{{"schema_version", 1},
                               {"norm", a.norm},
                               {"status", "empty validity window"}};
                        emit(stem + ".json", j.dump(2) + "\n");
                        break;
                    }
                    ta = w.t_a;
                    tb = w.t_b;
                }
                const DecayFit f = fit_decay_exponent(traj.norms, a.norm, ta, tb);
                json j = fit_json(f);
                j["schema_version"] = 1;
                j["norm"] = a.norm;
                emit(stem + ".json", j.dump(2) + "\n");
                break;
            }
            case AnalysisKind::Onset: {
                const RegularityReport r = detect_monotone_onset(traj.norms, traj.initial_l2);
                json j{{"schema_version", 1},
                       {"onset_found", r.onset_found},
                       {"t_mono", r.t_mono},
                       {"gate_found", r.gate_found},
                       {"gate_time", r.gate_time},
                       {"bound", r.bound},
                       {"satisfied", r.satisfied}};
                emit(stem + ".json", j.dump(2) + "\n");
                break;
            }
            case AnalysisKind::Sng: {
                const std::vector<BoundReport> rs = verify_sng(traj.snapshot(0));
                json arr = json::array();
                for (const BoundReport& r : rs) arr.push_back(report_json(r));
                emit(stem + ".json", arr.dump(2) + "\n");
                all_pass = all_pass && reports_pass(rs);
                break;
            }
            case AnalysisKind::Semigroup: {
                std::vector<double> taus = a.taus.empty() ? std::vector<double>{0.1, 1.0, 10.0}
                                                          : a.taus;
                std::vector<BoundReport> rs =
                    verify_semigroup_estimate(traj.snapshot(0), taus, SemigroupNorm::L2);
                const std::vector<BoundReport> sup =
                    verify_semigroup_estimate(traj.snapshot(0), taus, SemigroupNorm::Sup);
                rs.insert(rs.end(), sup.begin(), sup.end());
                json arr = json::array();
                for (const BoundReport& r : rs) arr.push_back(report_json(r));
                emit(stem + ".json", arr.dump(2) + "\n");
                all_pass = all_pass && reports_pass(rs);
                break;
            }
            case AnalysisKind::PairBounds: {
                std::vector<double> ts = a.ts;
                if (ts.empty())
                    for (const Snapshot& sn : traj.snaps)
                        if (sn.t > a.t0_tilde) ts.push_back(sn.t);
                const std::vector<BoundReport> rs =
                    verify_heatflow_pair(traj, a.t0, a.t0_tilde, ts);
                json arr = json::array();
                for (const BoundReport& r : rs) arr.push_back(report_json(r));
                emit(stem + ".json", arr.dump(2) + "\n");
                all_pass = all_pass && reports_pass(rs);
                break;
            }
            case AnalysisKind::ScalarBounds: {
                const std::vector<BoundReport> rs = verify_scalar_integral_bounds();
                json arr = json::array();
                for (const BoundReport& r : rs) arr.push_back(report_json(r));
                emit(stem + ".json", arr.dump(2) + "\n");
                all_pass = all_pass && reports_pass(rs);
                break;
            }
            case AnalysisKind::Interpolation: {
                const std::vector<BoundReport> rs = interpolation_consistency(traj, a.q_list);
                json arr = json::array();
                for (const BoundReport& r : rs) arr.push_back(report_json(r));
                emit(stem + ".json", arr.dump(2) + "\n");
                all_pass = all_pass && reports_pass(rs);
                break;
            }
        }
    }
    return all_pass ? 0 : 2;
}

RunManifest run_experiment(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    if (const char* env = std::getenv("LERAY_OUTPUT_DIR"); env && *env) cfg.output_dir = env;

    RunManifest man;
    man.code_version = kCodeVersion;
    man.started_utc = utc_now();
    man.config_sha256 = sha256_hex(serialize_config(cfg));
    man.status = "ok";

    fs::create_directories(cfg.output_dir);

    bool needs_run = cfg.analyses.empty();
    for (const AnalysisSpec& a : cfg.analyses) needs_run = needs_run || a.needs_trajectory();

    // make sure the solver records every column an analysis will read
    for (const AnalysisSpec& a : cfg.analyses) {
        if (a.kind == AnalysisKind::Interpolation)
            for (double q : a.q_list) {
                auto& l = cfg.solver.lq_list;
                if (std::find(l.begin(), l.end(), q) == l.end()) l.push_back(q);
            }
        if (a.kind == AnalysisKind::Fits && a.norm.rfind("lq_", 0) == 0) {
            const double q = std::stod(a.norm.substr(3));
            auto& l = cfg.solver.lq_list;
            if (std::find(l.begin(), l.end(), q) == l.end()) l.push_back(q);
        }
        if (a.kind == AnalysisKind::Fits && a.norm.rfind("hs_", 0) == 0) {
            const double s = std::stod(a.norm.substr(3));
            auto& l = cfg.solver.hs_list;
            if (std::find(l.begin(), l.end(), s) == l.end()) l.push_back(s);
        }
    }

    Trajectory traj;
    if (needs_run) {
        cfg.solver.output_dir = cfg.output_dir;
        traj = run(cfg.solver);
        traj.norms.provenance = man.config_sha256;
        const std::string csv = traj.norms.to_csv();
        write_file(fs::path(cfg.output_dir) / "norms.csv", csv);
        man.files.push_back(
            {"norms.csv", sha256_hex(csv), static_cast<std::uint64_t>(csv.size())});
        const std::string meta = meta_json(traj, cfg.output_dir).dump(2) + "\n";
        write_file(fs::path(cfg.output_dir) / "run_meta.json", meta);
        man.files.push_back(
            {"run_meta.json", sha256_hex(meta), static_cast<std::uint64_t>(meta.size())});
        for (const Snapshot& sn : traj.snaps) {
            if (sn.path.empty()) continue;
            std::string rel = sn.path;
            const std::string prefix = cfg.output_dir + "/";
            if (rel.rfind(prefix, 0) == 0) rel = rel.substr(prefix.size());
            man.files.push_back({rel, sha256_file_hex(sn.path),
                                 static_cast<std::uint64_t>(fs::file_size(sn.path))});
        }
        if (traj.aborted) {
            man.status = "aborted";
            man.exit_code = 3;
        }
    } else if (!cfg.analyses.empty()) {
        // field-level verifiers still need the initial data
        traj.config = cfg.solver;
        Snapshot snap;
        snap.t = 0.0;
        snap.cached = std::make_shared<VelocityField>(
            generate_initial_data(cfg.solver.initial, cfg.solver.grid));
        traj.snaps.push_back(std::move(snap));
        traj.initial_l2 = compute_norm(*traj.snaps[0].cached, NormSpec::l2());
    }

    if (man.exit_code == 0) {
        const int rc = run_analyses_on(traj, cfg.analyses, cfg.output_dir, &man.files);
        if (rc != 0) {
            man.status = "analysis-failed";
            man.exit_code = rc;
        }
    } else {
        // solver aborted: still run the analyses that need no trajectory
        std::vector<AnalysisSpec> safe;
        for (const AnalysisSpec& a : cfg.analyses)
            if (!a.needs_trajectory()) safe.push_back(a);
        run_analyses_on(traj, safe, cfg.output_dir, &man.files);
    }

    man.finished_utc = utc_now();
    json files = json::array();
    for (const RunManifest::FileEntry& f : man.files)
        files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    json j{{"schema_version", 1},
           {"config_sha256", man.config_sha256},
           {"code_version", man.code_version},
           {"started_utc", man.started_utc},
           {"finished_utc", man.finished_utc},
           {"status", man.status},
           {"exit_code", man.exit_code},
           {"files", files}};
    write_file(fs::path(cfg.output_dir) / "manifest.json", j.dump(2) + "\n");
    return man;
}

}  // namespace leray
