#include <doctest.h>

#include <cmath>
#include <numbers>

#include "leray/bounds.hpp"
#include "leray/norms.hpp"
#include "leray/solver.hpp"
#include "leray/transform.hpp"
#include "test_util.hpp"

using namespace leray;
using leray::test::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("explicit constants match their closed forms via an independent route") {
    const BoundConstants& c = BoundConstants::values();
    // evaluate through exp/log rather than pow
    CHECK(rel_diff(c.K, std::exp(-0.75 * std::log(8.0 * pi))) < 1e-14);
    CHECK(rel_diff(c.Gamma, std::exp(-1.5 * std::log(4.0 * pi))) < 1e-14);
    CHECK(c.K0 == 0.678);
    CHECK(c.K1 == 1.0);
    CHECK(c.K2 == c.K0 * std::sqrt(c.K1));
    CHECK(c.K2 < 1.0);
    CHECK(c.K3 == 0.581862001307);
    // 0.5 * K3^12 sits just under the stored coefficient
    CHECK(0.5 * std::pow(c.K3, 12.0) < c.t_reg_coeff + 1e-6);
    CHECK(c.t_reg_coeff == 0.000753026);
}

TEST_CASE("semigroup bound evaluators") {
    const double K = BoundConstants::values().K;
    CHECK(rel_diff(bound_semigroup_l2(1.0, 1.0, 1.0), K) < 1e-15);
    CHECK(bound_semigroup_l2(1.0, 1.0, 0.0) == 0.0);
    CHECK(rel_diff(bound_semigroup_l2(16.0, 1.0, 1.0), K / 8.0) < 1e-15);
    CHECK(rel_diff(bound_semigroup_sup(1.0, 1.0, 1.0), K) < 1e-15);
    CHECK(bound_semigroup_sup(2.0, 0.0, 1.0) == 0.0);
    CHECK(rel_diff(bound_semigroup_sup(2.0, 1.0, 2.0),
                   2.0 * bound_semigroup_sup(2.0, 1.0, 1.0)) < 1e-15);
    CHECK_THROWS_AS(bound_semigroup_l2(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bound_semigroup_sup(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("bound evaluators are monotone in norms and anti-monotone in the gap") {
    double prev = 0.0;
    for (double l2 : {0.5, 1.0, 2.0, 4.0}) {
        const double b = bound_semigroup_l2(1.0, l2, 1.0);
        CHECK(b > prev);
        prev = b;
    }
    prev = 1e300;
    for (double dt : {0.5, 1.0, 2.0, 4.0}) {
        const double b = bound_semigroup_l2(dt, 1.0, 1.0);
        CHECK(b < prev);
        prev = b;
    }
    prev = 1e300;
    for (double t : {1.5, 2.0, 3.0, 5.0}) {
        const double b = bound_heatflow_pair(t, 0.0, 1.0, 1.0, SemigroupNorm::L2);
        CHECK(b < prev);
        prev = b;
    }
    prev = 0.0;
    for (double t0t : {0.25, 0.5, 0.75, 1.0}) {
        const double b = bound_heatflow_pair(2.0, 0.0, t0t, 1.0, SemigroupNorm::Sup);
        CHECK(b > prev);
        prev = b;
    }
}

TEST_CASE("heat-flow pair bound closed forms") {
    const BoundConstants& c = BoundConstants::values();
    CHECK(bound_heatflow_pair(2.0, 0.0, 1.0, 0.0, SemigroupNorm::L2) == 0.0);
    CHECK(rel_diff(bound_heatflow_pair(2.0, 0.0, 1.0, 1.0, SemigroupNorm::L2),
                   c.K / std::sqrt(2.0)) < 1e-15);
    CHECK(rel_diff(bound_heatflow_pair(2.0, 0.0, 1.0, 1.0, SemigroupNorm::Sup),
                   c.Gamma / std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS_AS(bound_heatflow_pair(0.5, 0.0, 1.0, 1.0, SemigroupNorm::L2),
                    std::invalid_argument);
    CHECK_THROWS_AS(bound_heatflow_pair(2.0, 1.0, 0.5, 1.0, SemigroupNorm::L2),
                    std::invalid_argument);
}

TEST_CASE("regularity time bound") {
    CHECK(regularity_time_bound(0.0) == 0.0);
    CHECK(rel_diff(regularity_time_bound(10.0), 7.53026) < 1e-12);
    CHECK(rel_diff(regularity_time_bound(1.0), 7.53026e-4) < 1e-12);
    CHECK_THROWS_AS(regularity_time_bound(-1.0), std::invalid_argument);
}

TEST_CASE("interpolation inequalities on the zero field and a single mode") {
    Grid g(3, 32, 2.0 * pi);
    VelocityField zero(g);
    for (const BoundReport& r : verify_sng(zero)) {
        CHECK(r.pass);
        CHECK(r.lhs == 0.0);
    }

    // a single divergence-free mode saturates the gradient interpolation
    VelocityField mode(g);
    // u = (sin(x2), 0, 0): wavevector (0,1,0), |k| = 1
    PhysicalField f(g);
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        const double y = static_cast<double>((p / g.n) % g.n) * g.spacing();
        f.at(p) = std::sin(y);
    }
    mode.comp[0] = to_spectral(f);
    const std::vector<BoundReport> rs = verify_sng(mode);
    for (const BoundReport& r : rs)
        if (r.name == "grad_interpolation") {
            CHECK(r.rhs > 0.0);
            CHECK(std::abs(r.margin) / r.rhs < 1e-10);  // equality-tight
        }
}

TEST_CASE("interpolation inequalities hold on seeded localized fields") {
    Grid g(3, 32, 16.0 * pi);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        InitialDataSpec spec;
        spec.kind = InitialKind::LocalizedRandom;
        spec.seed = seed;
        spec.energy = 1.0;
        spec.peak_wavenumber = 0.7;
        const VelocityField u = generate_initial_data(spec, g);
        for (const BoundReport& r : verify_sng(u)) {
            CHECK(r.status == "ok");
            CHECK(r.pass);
            CHECK(r.margin > 0.0);
        }
    }
}

TEST_CASE("semigroup source estimate on seeded localized fields") {
    Grid g(3, 32, 16.0 * pi);
    const double taus[] = {0.1, 1.0, 10.0};
    for (std::uint64_t seed = 11; seed <= 13; ++seed) {
        InitialDataSpec spec;
        spec.kind = InitialKind::LocalizedRandom;
        spec.seed = seed;
        spec.energy = 1.0;
        spec.peak_wavenumber = 0.7;
        const VelocityField u = generate_initial_data(spec, g);
        for (auto which : {SemigroupNorm::L2, SemigroupNorm::Sup})
            for (const BoundReport& r : verify_semigroup_estimate(u, taus, which)) {
                CHECK(r.status == "ok");
                CHECK(r.pass);
            }
    }
}

TEST_CASE("semigroup verifier flags rim-dominated fields as box-limited") {
    Grid g(3, 32, 16.0);
    PhysicalField f(g);
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        std::int64_t r = p;
        double r2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            double x = static_cast<double>(r % g.n) * g.spacing();
            x = std::min(x, g.length - x);
            r2 += x * x;
            r /= g.n;
        }
        f.at(p) = std::exp(-r2);
    }
    VelocityField w(g);
    w.comp[0] = to_spectral(f);
    const VelocityField u = helmholtz_project(w);
    const double taus[] = {1.0};
    const std::vector<BoundReport> rs = verify_semigroup_estimate(u, taus, SemigroupNorm::L2);
    CHECK(rs.at(0).status == "box-limited");
}

TEST_CASE("scalar integral ceilings certify with positive margin") {
    const std::vector<BoundReport> rs = verify_scalar_integral_bounds();
    REQUIRE(rs.size() >= 7);
    for (const BoundReport& r : rs) {
        INFO(r.name);
        CHECK(r.status == "ok");
        CHECK(r.pass);
        if (r.name != "beta_kernel_identity_relerr") CHECK(r.margin > 0.0);
    }
    for (const BoundReport& r : rs) {
        if (r.name == "beta_kernel_ceiling") {
            CHECK(rel_diff(r.lhs, 7.416298709205) < 1e-10);
            CHECK(rel_diff(r.rhs, 8.0 * std::sqrt(2.0)) < 1e-15);
        }
        if (r.name == "source_tail_integral_ceiling")
            CHECK(rel_diff(r.rhs, 6.0 * std::pow(2.0, 0.25)) < 1e-15);
    }
}

TEST_CASE("heat-flow pair verification on a short localized run") {
    SolverConfig cfg;
    cfg.grid = Grid(3, 32, 16.0 * pi);
    cfg.time = {true, 0.02, 0.5};
    cfg.t_end = 2.0;
    cfg.snapshot_first = 0.25;
    cfg.initial.kind = InitialKind::LocalizedRandom;
    cfg.initial.seed = 3;
    cfg.initial.energy = 1.0;
    cfg.initial.peak_wavenumber = 0.7;
    const Trajectory traj = run(cfg);
    REQUIRE(!traj.aborted);
    REQUIRE(traj.snaps.size() >= 3);

    const double t0 = traj.snaps[0].t;
    const double t0t = traj.snaps[1].t;
    std::vector<double> ts;
    for (std::size_t i = 2; i < traj.snaps.size(); ++i) ts.push_back(traj.snaps[i].t);
    const std::vector<BoundReport> rs = verify_heatflow_pair(traj, t0, t0t, ts);
    CHECK(rs.size() == 2 * ts.size());
    for (const BoundReport& r : rs) {
        INFO(r.name, " ", r.params);
        CHECK(r.pass);
    }

    // degenerate anchors: zero difference against a zero bound
    const std::vector<BoundReport> triv = verify_heatflow_pair(traj, t0, t0, ts);
    CHECK(triv.at(0).pass);
    CHECK(triv.at(0).lhs == 0.0);

    CHECK_THROWS_AS(verify_heatflow_pair(traj, t0 + 0.123456, t0t, ts), std::invalid_argument);
}
