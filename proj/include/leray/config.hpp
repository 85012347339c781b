#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leray/solver.hpp"

namespace leray {

enum class AnalysisKind {
    EnergyAudit,
    Duhamel,
    Heatflow,
    Fits,
    Onset,
    Sng,
    Semigroup,
    PairBounds,
    ScalarBounds,
    Interpolation
};

std::string analysis_kind_name(AnalysisKind k);

struct AnalysisSpec {
    AnalysisKind kind = AnalysisKind::EnergyAudit;
    double t0 = 0.0;
    double t0_tilde = 0.0;
    double t = 0.0;
    int n_quad = 4;
    std::vector<double> taus;
    std::vector<double> ts;
    std::vector<double> q_list;
    std::vector<std::string> norms;  // heatflow difference norms
    std::string norm = "l2";         // fits column
    double t_a = 0.0, t_b = 0.0;     // fits window; 0/0 = validity window

    /// scalar_bounds, sng and semigroup need no time integration.
    bool needs_trajectory() const {
        return kind != AnalysisKind::ScalarBounds && kind != AnalysisKind::Sng &&
               kind != AnalysisKind::Semigroup;
    }
};

struct ExperimentConfig {
    SolverConfig solver;
    std::vector<AnalysisSpec> analyses;
    std::string output_dir = "out";
};

struct ConfigError {
    int line = 0;
    std::string key;
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigError> errors;
    bool ok() const { return config.has_value(); }
};

/// Parse the flat `[section]` / `key = value` experiment grammar. All
/// violations are reported, each named with its line number; the config is
/// produced only when there are none.
ParseResult parse_config(const std::string& text);

/// Same grammar restricted to [analysis ...] sections, for re-running
/// analyses against a stored trajectory.
ParseResult parse_analysis_config(const std::string& text);

/// Canonical text form; parse(serialize(c)) yields an equal config.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace leray
