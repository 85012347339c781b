#include <cmath>
#include <numbers>

#include "leray/bounds.hpp"
#include "leray/quadrature.hpp"

namespace leray {

namespace {

struct Worst {
    double margin = 1e300;
    double lhs = 0.0, rhs = 0.0;
    char params[96] = "";
    bool inconclusive = false;

    void offer(double lhs_, double rhs_, double a, double b, bool converged) {
        if (!converged) {
            inconclusive = true;
            return;
        }
        const double m = rhs_ - lhs_;
        if (m < margin) {
            margin = m;
            lhs = lhs_;
            rhs = rhs_;
            std::snprintf(params, sizeof params, "t0=%.6g,t=%.6g", a, b);
        }
    }

    BoundReport report(const char* name) const {
        BoundReport r;
        r.name = name;
        r.params = params;
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = margin;
        r.status = inconclusive ? "inconclusive" : "ok";
        r.pass = !inconclusive && margin >= 0.0;
        return r;
    }
};

const double kAnchors[] = {0.01, 0.1, 1.0, 10.0};

/// int_{a}^{b} (b-s)^(-3/4) s^(-1/2) ds
QuadResult tail_integral(double a, double b) {
    return integrate_weighted([](double s) { return 1.0 / std::sqrt(s); }, a, b, 0.0, -0.75);
}

}  // namespace

std::vector<BoundReport> verify_scalar_integral_bounds() {
    const BoundConstants& c = BoundConstants::values();
    const double sqrt2 = std::sqrt(2.0);
    std::vector<BoundReport> out;

    // (1) source-tail integral stays under 6 * 2^(1/4) once t >= t0 + 1
    {
        Worst w;
        const double ceiling = 6.0 * std::pow(2.0, 0.25);
        for (double t0 : kAnchors)
            for (int j = 0; j <= 16; ++j) {
                const double t = t0 + std::pow(10.0, j / 4.0);  // j = 0 is the closed endpoint
                const QuadResult q = tail_integral(t0, t);
                w.offer(q.value, ceiling, t0, t, q.converged);
            }
        out.push_back(w.report("source_tail_integral_ceiling"));
    }

    // (2) weighted drift: K (t - te)^(1/4) * tail(te, t) <= 0.636
    {
        Worst w;
        for (double te : kAnchors)
            for (int j = 0; j <= 28; ++j) {
                const double t = te + te * std::pow(10.0, j / 4.0 - 2.0);
                const QuadResult q = tail_integral(te, t);
                w.offer(c.K * std::pow(t - te, 0.25) * q.value, 0.636, te, t, q.converged);
            }
        out.push_back(w.report("weighted_l2_drift_ceiling"));
    }

    // (3) two-sided singular kernel: quadrature reproduces B(1/4,1/4) and the
    //     value sits under 8 sqrt(2)
    {
        const double beta_ref =
            std::tgamma(0.25) * std::tgamma(0.25) / std::tgamma(0.5);
        Worst w;
        for (double t1 : kAnchors)
            for (int j = 0; j <= 8; ++j) {
                const double t = t1 + std::pow(10.0, j / 2.0 - 2.0);
                const QuadResult q = integrate_weighted([](double) { return 1.0; }, t1, t, -0.75,
                                                        -0.75, 1e-12, 1e-12);
                const double est = q.value * std::sqrt(t - t1);
                w.offer(std::abs(est - beta_ref) / beta_ref, 1e-8, t1, t, q.converged);
            }
        out.push_back(w.report("beta_kernel_identity_relerr"));

        BoundReport ceil;
        ceil.name = "beta_kernel_ceiling";
        ceil.params = "";
        ceil.lhs = beta_ref;
        ceil.rhs = 8.0 * sqrt2;
        ceil.margin = ceil.rhs - ceil.lhs;
        ceil.pass = ceil.margin >= 0.0;
        out.push_back(ceil);
    }

    // (4) sup recursion: contraction coefficient at the eps = 1/2 cap, and
    //     the fixed point it implies
    {
        BoundReport r1;
        r1.name = "sup_recursion_coefficient";
        r1.params = "eps=0.5";
        r1.lhs = 8.0 * sqrt2 * c.K * 0.5;
        r1.rhs = 0.504;
        r1.margin = r1.rhs - r1.lhs;
        r1.pass = r1.margin >= 0.0;
        out.push_back(r1);

        BoundReport r2;
        r2.name = "sup_recursion_fixed_point";
        r2.params = "eps=1";
        r2.lhs = c.K / (1.0 - 0.504);
        r2.rhs = 0.180;
        r2.margin = r2.rhs - r2.lhs;
        r2.pass = r2.margin >= 0.0;
        out.push_back(r2);
    }

    // (5) early-window sup contribution, eps at its cap 1:
    //     (2 pi)^(-3/2) (t-te)^(-1/2) int_te^mu s^(-1/2) ds <= 0.090
    {
        Worst w;
        const double f = std::pow(2.0 * std::numbers::pi, -1.5);
        for (double te : kAnchors)
            for (int j = 0; j <= 24; ++j) {
                const double t = te + te * std::pow(10.0, j / 4.0 - 1.0);
                const double mu = 0.5 * (t + te);
                const QuadResult q =
                    integrate_weighted([](double s) { return 1.0 / std::sqrt(s); }, te, mu, 0.0, 0.0);
                w.offer(f * q.value / std::sqrt(t - te), 0.090, te, t, q.converged);
            }
        out.push_back(w.report("early_window_sup_ceiling"));
    }

    // (6) late-window sup contribution, eps at its cap 1:
    //     K (t-te) int_mu^t (t-s)^(-3/4) s^(-5/4) ds <= 0.713
    {
        Worst w;
        for (double te : kAnchors)
            for (int j = 0; j <= 24; ++j) {
                const double t = te + te * std::pow(10.0, j / 4.0 - 1.0);
                const double mu = 0.5 * (t + te);
                const QuadResult q = integrate_weighted(
                    [](double s) { return std::pow(s, -1.25); }, mu, t, 0.0, -0.75);
                w.offer(c.K * (t - te) * q.value, 0.713, te, t, q.converged);
            }
        out.push_back(w.report("late_window_sup_ceiling"));
    }

    return out;
}

}  // namespace leray
