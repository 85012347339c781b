#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leray/field.hpp"
#include "leray/initial_data.hpp"
#include "leray/norm_series.hpp"
#include "leray/operators.hpp"

namespace leray {

/// Step-size policy: fixed dt, or an advective CFL bound c*h/|u|_sup
/// (diffusion is handled exactly by the integrating factor).
struct TimePolicy {
    bool fixed = true;
    double dt = 0.01;
    double cfl = 0.5;
};

struct SolverConfig {
    Grid grid;
    double delta = -1.0;  ///< mollifier width; < 0 means the default 2h
    TimePolicy time;
    double t_end = 1.0;
    bool dealias = true;
    bool nonlinear = true;  ///< false drops the convective source (pure heat flow)
    InitialDataSpec initial;
    int record_every = 1;
    int snapshot_every = 0;        ///< steps between snapshots; 0 = geometric 2^(1/4)
    double snapshot_first = 0.25;  ///< first geometric snapshot target time
    std::vector<double> hs_list;   ///< extra |.|_Hs columns
    std::vector<double> lq_list;   ///< extra L^q columns
    std::string output_dir;        ///< when set, snapshots go to disk as checkpoints

    double resolved_delta() const { return delta < 0.0 ? 2.0 * grid.spacing() : delta; }
    void validate() const;
};

struct SolverState {
    VelocityField u;
    double t = 0.0;
    long step_count = 0;
    double delta = 0.0;
    double dissipation = 0.0;  ///< RK4-accumulated integral of |Du|_2^2
};

struct SolverBlowup : std::runtime_error {
    explicit SolverBlowup(const std::string& what) : std::runtime_error(what) {}
};

/// One integrating-factor RK4 step of du/dt = -|k|^2 u + Q_delta(u).
/// The stiff diffusive part is treated exactly; preserves the
/// divergence-free certificate. Throws SolverBlowup (state untouched) if the
/// result is not finite.
class Stepper {
  public:
    Stepper(const Grid& g, double delta, bool dealias, bool nonlinear);
    void advance(SolverState& s, double dt) const;

  private:
    Grid grid_;
    double delta_;
    bool dealias_, nonlinear_;
    mutable double cached_dt_ = -1.0;
    mutable std::vector<double> e_half_, e_full_;
    void refresh_multipliers(double dt) const;
};

SolverState make_initial_state(const SolverConfig& cfg);
SolverState step(const SolverState& s, double dt, const SolverConfig& cfg);

struct Snapshot {
    double t = 0.0;
    std::string path;  ///< empty when held in memory
    mutable std::shared_ptr<const VelocityField> cached;
};

struct Trajectory {
    SolverConfig config;
    NormSeries norms;
    std::vector<Snapshot> snaps;
    bool aborted = false;
    std::string abort_reason;
    double initial_l2 = 0.0;
    double first_dt = 0.0;

    const VelocityField& snapshot(std::size_t i) const;
    /// Index of the snapshot at time t0 (1e-9 relative tolerance), or -1.
    std::ptrdiff_t snapshot_index(double t0) const;
    double nearest_snapshot_time(double t0) const;
};

Trajectory run(const SolverConfig& cfg);

struct EnergyReport {
    struct Row {
        double t;
        double defect;             ///< trapezoid audit of the recorded series
        double defect_integrated;  ///< using the RK4-accumulated dissipation
        bool pass;
    };
    std::vector<Row> rows;
    double tolerance = 0.0;  ///< absolute, already scaled by |u0|^2
    double max_abs_defect = 0.0;
    double max_defect = 0.0;  ///< signed worst positive excess
    bool pass = true;
};

/// Defect |u(t)|^2 + 2 int_0^t |Du|^2 ds - |u0|^2 at every recorded time,
/// with the integral taken by trapezoid over the recorded series. Positive
/// defects beyond tol_rel * |u0|^2 are flagged.
EnergyReport energy_audit(const Trajectory& traj, double tol_rel = 1e-6);

}  // namespace leray
