// Batch front end: run experiments, certify scalar bounds, audit stored
// fields, re-run analyses, and emit heat-flow comparison series.
//
// Exit codes: 0 all pass, 1 usage/config error, 2 analysis failure,
// 3 solver abort.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "leray/bounds.hpp"
#include "leray/checkpoint.hpp"
#include "leray/decay.hpp"
#include "leray/digest.hpp"
#include "leray/experiment.hpp"
#include "leray/norms.hpp"
#include "leray/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace leray;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

json report_json(const BoundReport& r) {
    return json{{"name", r.name},     {"params", r.params}, {"lhs", r.lhs},
                {"rhs", r.rhs},       {"margin", r.margin}, {"pass", r.pass},
                {"status", r.status}};
}

void print_reports(const std::vector<BoundReport>& rs) {
    std::printf("%-32s %-28s %14s %14s %10s  %s\n", "bound", "params", "lhs", "rhs", "margin",
                "status");
    for (const BoundReport& r : rs)
        std::printf("%-32s %-28s %14.6e %14.6e %10.2e  %s%s\n", r.name.c_str(), r.params.c_str(),
                    r.lhs, r.rhs, r.margin, r.pass ? "pass" : "FAIL",
                    r.status == "ok" ? "" : (" (" + r.status + ")").c_str());
}

int config_errors_to_stderr(const ParseResult& pr) {
    for (const ConfigError& e : pr.errors)
        std::fprintf(stderr, "config error (line %d, %s): %s\n", e.line, e.key.c_str(),
                     e.message.c_str());
    return 1;
}

int cmd_run(const std::string& path, bool as_json) {
    const ParseResult pr = parse_config(slurp(path));
    if (!pr.ok()) return config_errors_to_stderr(pr);
    const RunManifest man = run_experiment(*pr.config);
    if (as_json) {
        json j{{"status", man.status},
               {"exit_code", man.exit_code},
               {"config_sha256", man.config_sha256},
               {"files", man.files.size()}};
        std::printf("%s\n", j.dump(2).c_str());
    } else {
        std::printf("status: %s (exit %d), %zu files, config %s\n", man.status.c_str(),
                    man.exit_code, man.files.size(), man.config_sha256.substr(0, 12).c_str());
    }
    return man.exit_code;
}

int cmd_bounds(bool as_json) {
    const BoundConstants& c = BoundConstants::values();
    std::vector<BoundReport> rs;
    {
        BoundReport k;
        k.name = "constant_K";
        k.params = "(8*pi)^(-3/4)";
        k.lhs = k.rhs = c.K;
        k.pass = true;
        rs.push_back(k);
        BoundReport g;
        g.name = "constant_Gamma";
        g.params = "(4*pi)^(-3/2)";
        g.lhs = g.rhs = c.Gamma;
        g.pass = true;
        rs.push_back(g);
        BoundReport k2;
        k2.name = "constant_K2_below_one";
        k2.params = "K0*sqrt(K1)";
        k2.lhs = c.K2;
        k2.rhs = 1.0;
        k2.margin = k2.rhs - k2.lhs;
        k2.pass = k2.margin > 0.0;
        rs.push_back(k2);
        BoundReport k3;
        k3.name = "constant_half_K3_pow12";
        k3.params = "0.5*K3^12 vs coeff";
        k3.lhs = 0.5 * std::pow(c.K3, 12.0);
        k3.rhs = c.t_reg_coeff + 1e-6;
        k3.margin = k3.rhs - k3.lhs;
        k3.pass = k3.margin >= 0.0;
        rs.push_back(k3);
    }
    const std::vector<BoundReport> quad = verify_scalar_integral_bounds();
    rs.insert(rs.end(), quad.begin(), quad.end());

    bool all = true;
    for (const BoundReport& r : rs) all = all && (r.pass || r.status != "ok");
    if (as_json) {
        json arr = json::array();
        for (const BoundReport& r : rs) arr.push_back(report_json(r));
        std::printf("%s\n", arr.dump(2).c_str());
    } else {
        print_reports(rs);
    }
    return all ? 0 : 2;
}

int cmd_check(const std::string& path, bool as_json) {
    std::vector<std::string> problems = audit_checkpoint(path);

    // verify against a manifest digest when the file lives in a run directory
    const fs::path p(path);
    fs::path dir = p.parent_path();
    for (int up = 0; up < 2 && !dir.empty(); ++up, dir = dir.parent_path()) {
        const fs::path man_path = dir / "manifest.json";
        if (!fs::exists(man_path)) continue;
        try {
            const json man = json::parse(slurp(man_path.string()));
            for (const json& f : man["files"]) {
                const fs::path rel = f["path"].get<std::string>();
                if ((dir / rel) == fs::weakly_canonical(p) || (dir / rel) == p) {
                    const std::string want = f["sha256"].get<std::string>();
                    const std::string got = sha256_file_hex(path);
                    if (want != got)
                        problems.push_back("digest mismatch vs manifest: expected " + want +
                                           ", file hashes to " + got);
                }
            }
        } catch (const std::exception& e) {
            problems.push_back(std::string("manifest unreadable: ") + e.what());
        }
        break;
    }

    if (as_json) {
        json j{{"path", path}, {"ok", problems.empty()}, {"problems", problems}};
        std::printf("%s\n", j.dump(2).c_str());
    } else if (problems.empty()) {
        std::printf("%s: ok\n", path.c_str());
    } else {
        for (const std::string& s : problems) std::fprintf(stderr, "%s: %s\n", path.c_str(), s.c_str());
    }
    return problems.empty() ? 0 : 2;
}

int cmd_analyze(const std::string& dir, const std::string& cfg_path, bool as_json) {
    const ParseResult pr = parse_analysis_config(slurp(cfg_path));
    if (!pr.ok()) return config_errors_to_stderr(pr);
    const Trajectory traj = load_trajectory(dir);
    std::vector<RunManifest::FileEntry> files;
    const int rc = run_analyses_on(traj, pr.config->analyses, dir, &files);
    if (as_json) {
        json arr = json::array();
        for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
        std::printf("%s\n", arr.dump(2).c_str());
    } else {
        for (const auto& f : files) std::printf("wrote %s\n", f.path.c_str());
    }
    return rc;
}

int cmd_compare(const std::string& dir, double t0, const std::string& norms, bool as_json) {
    const Trajectory traj = load_trajectory(dir);
    if (traj.snapshot_index(t0) < 0) {
        std::fprintf(stderr,
                     "compare: t0 = %.17g is not a snapshot time; nearest snapshot is t = %.17g\n",
                     t0, traj.nearest_snapshot_time(t0));
        return 1;
    }
    std::vector<NormSpec> specs;
    std::stringstream ss(norms);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell == "l2") specs.push_back(NormSpec::l2());
        else if (cell == "sup") specs.push_back(NormSpec::sup());
        else if (cell.rfind("lq_", 0) == 0) specs.push_back(NormSpec::lq(std::stod(cell.substr(3))));
        else {
            std::fprintf(stderr, "compare: unknown norm '%s'\n", cell.c_str());
            return 1;
        }
    }
    const NormSeries s = heat_flow_difference_series(traj, t0, specs);
    if (as_json) {
        json rows = json::array();
        for (std::size_t i = 0; i < s.size(); ++i) {
            json row{{"t", s.t[i]}};
            for (std::size_t c = 0; c < s.names.size(); ++c) row[s.names[c]] = s.rows[i][c];
            rows.push_back(row);
        }
        std::printf("%s\n", rows.dump(2).c_str());
    } else {
        std::fputs(s.to_csv().c_str(), stdout);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral regularized Navier-Stokes toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    int threads = 0;
    app.add_flag("--json", as_json, "machine-readable output on stdout");
    app.add_option("--threads", threads, "worker threads (default: all cores)");

    std::string run_config;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", run_config, "experiment config file")->required();

    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "certify scalar constants and integral ceilings");

    std::string check_path;
    CLI::App* check_cmd = app.add_subcommand("check", "audit a stored field checkpoint");
    check_cmd->add_option("checkpoint", check_path, "checkpoint file")->required();

    std::string analyze_dir, analyze_cfg;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "re-run analyses on a stored run");
    analyze_cmd->add_option("trajectory-dir", analyze_dir)->required();
    analyze_cmd->add_option("analysis-config", analyze_cfg)->required();

    std::string compare_dir, compare_norms = "l2,sup";
    double compare_t0 = 0.0;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "heat-flow difference series from a stored run");
    compare_cmd->add_option("trajectory-dir", compare_dir)->required();
    compare_cmd->add_option("--t0", compare_t0, "anchor snapshot time")->required();
    compare_cmd->add_option("--norms", compare_norms, "comma list: l2, sup, lq_<q>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (threads > 0) par::set_thread_count(threads);

    try {
        if (*run_cmd) return cmd_run(run_config, as_json);
        if (*bounds_cmd) return cmd_bounds(as_json);
        if (*check_cmd) return cmd_check(check_path, as_json);
        if (*analyze_cmd) return cmd_analyze(analyze_dir, analyze_cfg, as_json);
        if (*compare_cmd) return cmd_compare(compare_dir, compare_t0, compare_norms, as_json);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
