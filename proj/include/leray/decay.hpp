#pragma once

#include <span>
#include <vector>

#include "leray/bounds.hpp"
#include "leray/norm_series.hpp"
#include "leray/norms.hpp"
#include "leray/solver.hpp"

namespace leray {

/// Relative L2 error of the heat-flow-plus-source reconstruction of u(t)
/// from the stored snapshots in [t0, t]. The source integral is taken by
/// composite 2-point Gauss-Legendre with n_quad panels per snapshot
/// subinterval (composite order 4), with u at the quadrature nodes obtained
/// by cubic interpolation across the four nearest snapshots.
double duhamel_residual(const Trajectory& traj, double t0, double t, int n_quad);

/// Observed order of the reconstruction's quadrature self-convergence:
/// log2 of the ratio of successive reconstruction differences at n_quad =
/// base, 2*base, 4*base. The shared interpolation bias cancels, so this
/// isolates the composite rule (order 4).
double duhamel_convergence_order(const Trajectory& traj, double t0, double t, int base_n = 1);

/// |u(t) - e^{(t-t0) Laplacian} u(t0)| at every snapshot time >= t0, in the
/// requested norms; columns are named diff_<norm>.
NormSeries heat_flow_difference_series(const Trajectory& traj, double t0,
                                       std::span<const NormSpec> norms);

struct DecayFit {
    double t_a = 0.0, t_b = 0.0;
    double exponent = 0.0;
    double stderr_ = 0.0;
    double r_squared = 0.0;
    int samples = 0;
};

/// Least-squares slope of log(value) against log(t) over [t_a, t_b]. Needs
/// at least 8 strictly positive samples spanning a factor of 4 in t.
DecayFit fit_decay_exponent(const NormSeries& series, const std::string& norm_name, double t_a,
                            double t_b);

struct ValidityWindow {
    double t_a = 0.0, t_b = 0.0;
    bool empty = true;
};

/// Honesty gate for asymptotic claims on a finite box: the window closes the
/// first time more than 1% of the energy reaches the outer shell, and opens
/// after the initial transient (first record with t >= 10 * first step).
ValidityWindow validity_window(const Trajectory& traj);

struct RegularityReport {
    bool onset_found = false;
    double t_mono = 0.0;  ///< earliest recorded time with a non-increasing |Du| tail
    bool gate_found = false;
    double gate_time = 0.0;  ///< earliest time the interpolation gate closes for good
    double bound = 0.0;      ///< regularity_time_bound(|u0|)
    bool satisfied = false;  ///< t_mono <= bound
};

/// Scans the recorded |Du|_2 series for the monotone-decrease onset
/// (hysteresis 1e-9 relative) and for the first time the gate
/// K3^3 |u|^(1/2) |Du|^(1/2) < 1 holds through the end of the record.
RegularityReport detect_monotone_onset(const NormSeries& series, double u0_l2);

struct ScaledSeries {
    NormSeries series;
    int dropped = 0;  ///< entries with t <= t0
};

/// Entrywise (t - t0)^p scaling of every column.
ScaledSeries scaled_norm_series(const NormSeries& series, double p, double t0);

/// Interpolation inequality |u|_q <= |u|_2^(2/q) |u|_sup^(1-2/q) at every
/// recorded time, plus consistency of the fitted L^q exponent with the
/// q-interpolated combination of the L2 and sup exponents.
std::vector<BoundReport> interpolation_consistency(const Trajectory& traj,
                                                   std::span<const double> q_list);

}  // namespace leray
