#include "leray/decay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leray/heat.hpp"
#include "leray/operators.hpp"
#include "leray/parallel.hpp"

namespace leray {

namespace {

void axpy(VelocityField& y, double a, const VelocityField& x) {
    const std::int64_t nc = y.grid().coeff_count();
    for (std::size_t d = 0; d < y.comp.size(); ++d)
        par::parallel_for(nc, [&](std::int64_t i) { y.comp[d].at(i) += a * x.comp[d].at(i); });
}

void scale(VelocityField& y, double a) {
    const std::int64_t nc = y.grid().coeff_count();
    for (std::size_t d = 0; d < y.comp.size(); ++d)
        par::parallel_for(nc, [&](std::int64_t i) { y.comp[d].at(i) *= a; });
}

/// Cubic Lagrange interpolation of the stored field at time s, using the
/// four snapshots nearest to s (one-sided near the ends of the record).
VelocityField interpolate_state(const Trajectory& traj, double s) {
    const std::size_t n = traj.snaps.size();
    if (n < 4) throw std::invalid_argument("duhamel_residual: need at least 4 snapshots");
    std::size_t j = 0;
    while (j + 1 < n && traj.snaps[j + 1].t <= s) ++j;
    std::size_t lo = j >= 1 ? j - 1 : 0;
    lo = std::min(lo, n - 4);
    double w[4];
    double tt[4];
    for (int k = 0; k < 4; ++k) tt[k] = traj.snaps[lo + static_cast<std::size_t>(k)].t;
    for (int k = 0; k < 4; ++k) {
        double p = 1.0;
        for (int m = 0; m < 4; ++m)
            if (m != k) p *= (s - tt[m]) / (tt[k] - tt[m]);
        w[k] = p;
    }
    VelocityField out = traj.snapshot(lo);
    scale(out, w[0]);
    for (int k = 1; k < 4; ++k) axpy(out, w[k], traj.snapshot(lo + static_cast<std::size_t>(k)));
    out.divergence_free = true;
    return out;
}

}  // namespace

namespace {

struct DuhamelSpan {
    std::ptrdiff_t i0, i1;
};

DuhamelSpan duhamel_span(const Trajectory& traj, double t0, double t, int n_quad) {
    if (n_quad < 1) throw std::invalid_argument("duhamel_residual: n_quad must be >= 1");
    if (!traj.config.dealias)
        throw std::invalid_argument("duhamel_residual: undealiased trajectories are not supported");
    const std::ptrdiff_t i0 = traj.snapshot_index(t0);
    const std::ptrdiff_t i1 = traj.snapshot_index(t);
    if (i0 < 0 || i1 < 0)
        throw std::invalid_argument("duhamel_residual: t0 and t must be snapshot times");
    if (i1 < i0) throw std::invalid_argument("duhamel_residual: need t >= t0");
    if (i1 > i0 && (i1 - i0 < 1 || traj.snaps.size() < 4))
        throw std::invalid_argument("duhamel_residual: insufficient snapshots in [t0, t]");
    return {i0, i1};
}

/// Heat flow of the anchor plus the composite-quadrature source integral,
/// n_quad 2-point Gauss-Legendre panels per snapshot subinterval.
VelocityField duhamel_reconstruction(const Trajectory& traj, const DuhamelSpan& span, double t0,
                                     double t, int n_quad) {
    VelocityField recon =
        heat_propagate(traj.snapshot(static_cast<std::size_t>(span.i0)), t - t0);
    const double delta = traj.config.resolved_delta();
    const double gl_off = 0.5 / std::sqrt(3.0);
    const double nodes[2] = {0.5 - gl_off, 0.5 + gl_off};

    for (std::ptrdiff_t i = span.i0; i < span.i1; ++i) {
        const double a = traj.snaps[static_cast<std::size_t>(i)].t;
        const double b = traj.snaps[static_cast<std::size_t>(i + 1)].t;
        const double hpanel = (b - a) / n_quad;
        for (int p = 0; p < n_quad; ++p) {
            const double pa = a + p * hpanel;
            for (double x : nodes) {
                const double s = pa + x * hpanel;
                const VelocityField us = interpolate_state(traj, s);
                VelocityField q = traj.config.nonlinear
                                      ? mollified_nonlinear_source(us, MollifierSpec(delta)).field
                                      : VelocityField(traj.config.grid);
                axpy(recon, 0.5 * hpanel, heat_propagate(q, t - s));
            }
        }
    }
    return recon;
}

}  // namespace

double duhamel_residual(const Trajectory& traj, double t0, double t, int n_quad) {
    const DuhamelSpan span = duhamel_span(traj, t0, t, n_quad);
    if (span.i1 == span.i0) return 0.0;

    const VelocityField& target = traj.snapshot(static_cast<std::size_t>(span.i1));
    const double target_l2 = compute_norm(target, NormSpec::l2());
    if (target_l2 == 0.0) return 0.0;

    VelocityField diff = target;
    axpy(diff, -1.0, duhamel_reconstruction(traj, span, t0, t, n_quad));
    return compute_norm(diff, NormSpec::l2()) / target_l2;
}

double duhamel_convergence_order(const Trajectory& traj, double t0, double t, int base_n) {
    const DuhamelSpan span = duhamel_span(traj, t0, t, base_n);
    if (span.i1 == span.i0)
        throw std::invalid_argument("duhamel_convergence_order: empty interval");
    const VelocityField r1 = duhamel_reconstruction(traj, span, t0, t, base_n);
    const VelocityField r2 = duhamel_reconstruction(traj, span, t0, t, 2 * base_n);
    const VelocityField r4 = duhamel_reconstruction(traj, span, t0, t, 4 * base_n);
    VelocityField d12 = r1, d24 = r2;
    axpy(d12, -1.0, r2);
    axpy(d24, -1.0, r4);
    const double e12 = compute_norm(d12, NormSpec::l2());
    const double e24 = compute_norm(d24, NormSpec::l2());
    if (e24 == 0.0 || e12 == 0.0)
        throw std::invalid_argument("duhamel_convergence_order: quadrature error below roundoff");
    return std::log2(e12 / e24);
}

NormSeries heat_flow_difference_series(const Trajectory& traj, double t0,
                                       std::span<const NormSpec> norms) {
    const std::ptrdiff_t i0 = traj.snapshot_index(t0);
    if (i0 < 0)
        throw std::invalid_argument("heat_flow_difference_series: t0 must be a snapshot time");
    NormSeries out;
    for (const NormSpec& ns : norms) out.names.push_back("diff_" + ns.name());
    HeatFlow flow{traj.snaps[static_cast<std::size_t>(i0)].t,
                  traj.snapshot(static_cast<std::size_t>(i0))};
    for (std::size_t i = static_cast<std::size_t>(i0); i < traj.snaps.size(); ++i) {
        const double t = traj.snaps[i].t;
        VelocityField diff = traj.snapshot(i);
        axpy(diff, -1.0, evaluate_heat_flow(flow, t));
        std::vector<double> row;
        row.reserve(norms.size());
        for (const NormSpec& ns : norms) row.push_back(compute_norm(diff, ns));
        out.append(t, row);
    }
    return out;
}

DecayFit fit_decay_exponent(const NormSeries& series, const std::string& norm_name, double t_a,
                            double t_b) {
    if (!(t_b > t_a && t_a > 0.0))
        throw std::invalid_argument("fit_decay_exponent: need t_b > t_a > 0");
    const int col = series.column(norm_name);
    if (col < 0) throw std::invalid_argument("fit_decay_exponent: no column " + norm_name);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.t[i] < t_a || series.t[i] > t_b) continue;
        const double v = series.rows[i][static_cast<std::size_t>(col)];
        if (!(v > 0.0))
            throw std::invalid_argument("fit_decay_exponent: nonpositive value in window");
        lx.push_back(std::log(series.t[i]));
        ly.push_back(std::log(v));
    }
    const int n = static_cast<int>(lx.size());
    if (n < 8) throw std::invalid_argument("fit_decay_exponent: need at least 8 samples in window");
    if (std::exp(lx.back() - lx.front()) < 4.0)
        throw std::invalid_argument("fit_decay_exponent: window must span a factor of 4 in t");

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[static_cast<std::size_t>(i)];
        my += ly[static_cast<std::size_t>(i)];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = lx[static_cast<std::size_t>(i)] - mx;
        const double dy = ly[static_cast<std::size_t>(i)] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit fit;
    fit.t_a = t_a;
    fit.t_b = t_b;
    fit.samples = n;
    fit.exponent = sxy / sxx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pred = my + fit.exponent * (lx[static_cast<std::size_t>(i)] - mx);
        const double r = ly[static_cast<std::size_t>(i)] - pred;
        ss_res += r * r;
    }
    fit.stderr_ = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    // a constant column has only rounding-level variance; that is a perfect fit
    const double var_floor = n * std::pow(1e-14 * (std::abs(my) + 1.0), 2.0);
    fit.r_squared = syy > var_floor ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

ValidityWindow validity_window(const Trajectory& traj) {
    const NormSeries& s = traj.norms;
    ValidityWindow w;
    if (s.size() == 0 || !s.has("shell_frac")) return w;
    const double dt0 = traj.first_dt;
    double t_a = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.t[i] >= 10.0 * dt0) {
            t_a = s.t[i];
            break;
        }
    double t_b = s.t.back();
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.value(i, "shell_frac") > 0.01) {
            t_b = s.t[i];
            break;
        }
    if (t_a < 0.0 || !(t_b > t_a)) return w;
    w.t_a = t_a;
    w.t_b = t_b;
    w.empty = false;
    return w;
}

RegularityReport detect_monotone_onset(const NormSeries& series, double u0_l2) {
    RegularityReport rep;
    rep.bound = regularity_time_bound(u0_l2);
    const std::size_t n = series.size();
    if (n == 0 || !series.has("dl2") || !series.has("l2"))
        throw std::invalid_argument("detect_monotone_onset: series must record l2 and dl2");

    // earliest index whose tail is non-increasing (1e-9 relative hysteresis),
    // requiring a real tail of at least two samples
    std::ptrdiff_t onset = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 2; i >= 0; --i) {
        const double a = series.value(static_cast<std::size_t>(i), "dl2");
        const double b = series.value(static_cast<std::size_t>(i) + 1, "dl2");
        if (b <= a * (1.0 + 1e-9))
            onset = i;
        else
            break;
    }
    if (onset >= 0) {
        rep.onset_found = true;
        rep.t_mono = series.t[static_cast<std::size_t>(onset)];
        rep.satisfied = rep.t_mono <= rep.bound;
    }

    const double k33 = std::pow(BoundConstants::values().K3, 3.0);
    std::ptrdiff_t gate = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1; i >= 0; --i) {
        const double l2 = series.value(static_cast<std::size_t>(i), "l2");
        const double dl2 = series.value(static_cast<std::size_t>(i), "dl2");
        if (k33 * std::sqrt(l2) * std::sqrt(dl2) < 1.0)
            gate = i;
        else
            break;
    }
    if (gate >= 0) {
        rep.gate_found = true;
        rep.gate_time = series.t[static_cast<std::size_t>(gate)];
    }
    return rep;
}

ScaledSeries scaled_norm_series(const NormSeries& series, double p, double t0) {
    if (t0 < 0.0) throw std::invalid_argument("scaled_norm_series: t0 must be >= 0");
    ScaledSeries out;
    out.series.names = series.names;
    out.series.provenance = series.provenance;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.t[i] <= t0 && p != 0.0) {
            ++out.dropped;
            continue;
        }
        const double w = p == 0.0 ? 1.0 : std::pow(series.t[i] - t0, p);
        std::vector<double> row = series.rows[i];
        for (double& v : row) v *= w;
        out.series.append(series.t[i], row);
    }
    return out;
}

std::vector<BoundReport> interpolation_consistency(const Trajectory& traj,
                                                   std::span<const double> q_list) {
    const NormSeries& s = traj.norms;
    std::vector<BoundReport> reports;
    for (double q : q_list) {
        const std::string col = NormSpec::lq(q).name();
        if (!s.has(col))
            throw std::invalid_argument("interpolation_consistency: column " + col +
                                        " was not recorded");
        BoundReport worst;
        worst.name = "lq_interpolation";
        worst.params = "q=" + std::to_string(q);
        worst.margin = 1e300;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double lq = s.value(i, col);
            const double l2 = s.value(i, "l2");
            const double sup = s.value(i, "sup");
            const double rhs =
                std::pow(l2, 2.0 / q) * std::pow(sup, 1.0 - 2.0 / q) * (1.0 + 1e-10);
            if (rhs - lq < worst.margin) {
                worst.margin = rhs - lq;
                worst.lhs = lq;
                worst.rhs = rhs;
            }
        }
        worst.pass = worst.margin >= 0.0;
        reports.push_back(worst);

        // exponent consistency over the validity window
        BoundReport expo;
        expo.name = "lq_exponent_consistency";
        expo.params = "q=" + std::to_string(q);
        const ValidityWindow w = validity_window(traj);
        try {
            if (w.empty) throw std::runtime_error("empty validity window");
            const DecayFit f2 = fit_decay_exponent(s, "l2", w.t_a, w.t_b);
            const DecayFit fs = fit_decay_exponent(s, "sup", w.t_a, w.t_b);
            const DecayFit fq = fit_decay_exponent(s, col, w.t_a, w.t_b);
            const double c2 = 2.0 / q;
            const double expected = c2 * f2.exponent + (1.0 - c2) * fs.exponent;
            const double slack =
                fq.stderr_ + c2 * f2.stderr_ + (1.0 - c2) * fs.stderr_ + 1e-9;
            expo.lhs = std::abs(fq.exponent - expected);
            expo.rhs = slack;
            expo.margin = expo.rhs - expo.lhs;
            expo.pass = expo.margin >= 0.0;
        } catch (const std::exception&) {
            expo.status = "inconclusive";
            expo.pass = false;
        }
        reports.push_back(expo);
    }
    return reports;
}

}  // namespace leray
