#include <doctest.h>

#include <numbers>

#include "leray/norms.hpp"
#include "leray/operators.hpp"
#include "leray/transform.hpp"
#include "test_util.hpp"

using namespace leray;
using leray::test::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;

VelocityField taylor_green_2d(const Grid& g) {
    PhysicalField u0(g), u1(g);
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        const double a = 2.0 * pi / g.length;
        const double x = a * static_cast<double>(p % g.n) * g.spacing();
        const double y = a * static_cast<double>(p / g.n) * g.spacing();
        u0.at(p) = std::sin(x) * std::cos(y);
        u1.at(p) = -std::cos(x) * std::sin(y);
    }
    VelocityField u(g);
    u.comp[0] = to_spectral(u0);
    u.comp[1] = to_spectral(u1);
    u.divergence_free = true;
    return u;
}
}  // namespace

TEST_CASE("derivative of a constant vanishes; single mode is exact") {
    Grid g(3, 32, 4.0);
    PhysicalField f(g);
    for (double& v : f.v) v = 3.25;
    const SpectralField d = apply_derivative(to_spectral(f), 0);
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) CHECK(std::abs(d.at(i)) < 1e-14);

    PhysicalField s(g);
    const double a = 2.0 * pi / g.length;
    for (std::int64_t p = 0; p < g.point_count(); ++p)
        s.at(p) = std::sin(a * static_cast<double>(p % g.n) * g.spacing());
    const PhysicalField ds = to_physical(apply_derivative(to_spectral(s), 0));
    double err = 0.0;
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        const double x = static_cast<double>(p % g.n) * g.spacing();
        err = std::max(err, std::abs(ds.at(p) - a * std::cos(a * x)));
    }
    CHECK(err < 1e-12 * a);
}

TEST_CASE("divergence of a curl vanishes") {
    Grid g(3, 32, 2.0 * pi);
    std::vector<SpectralField> A;
    for (int d = 0; d < 3; ++d)
        A.push_back(test::smooth_random_scalar(g, 100 + static_cast<std::uint64_t>(d)));
    VelocityField u(g);
    u.comp[0] = apply_derivative(A[2], 1);
    SpectralField t = apply_derivative(A[1], 2);
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) u.comp[0].at(i) -= t.at(i);
    u.comp[1] = apply_derivative(A[0], 2);
    t = apply_derivative(A[2], 0);
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) u.comp[1].at(i) -= t.at(i);
    u.comp[2] = apply_derivative(A[1], 0);
    t = apply_derivative(A[0], 1);
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) u.comp[2].at(i) -= t.at(i);

    CHECK(divergence_certificate(u) < 1e-12);
}

TEST_CASE("projection annihilates gradients and fixes divergence-free fields") {
    Grid g(3, 32, 6.0);
    SpectralField phi = test::smooth_random_scalar(g, 7);
    phi.at(0) = cplx{0.0, 0.0};
    VelocityField w(g);
    for (int d = 0; d < 3; ++d) w.comp[static_cast<std::size_t>(d)] = apply_derivative(phi, d);
    const VelocityField pw = helmholtz_project(w);
    const double wn = compute_norm(w, NormSpec::l2());
    CHECK(compute_norm(pw, NormSpec::l2()) < 1e-12 * wn);

    const VelocityField u = test::smooth_random_velocity(g, 8);
    VelocityField pu = helmholtz_project(u);
    double diff = 0.0, scale = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i) {
            diff = std::max(diff, std::abs(pu.comp[static_cast<std::size_t>(d)].at(i) -
                                           u.comp[static_cast<std::size_t>(d)].at(i)));
            scale = std::max(scale, std::abs(u.comp[static_cast<std::size_t>(d)].at(i)));
        }
    CHECK(diff < 1e-12 * scale);
}

TEST_CASE("projection is idempotent, contractive, and Pythagorean") {
    Grid g(3, 32, 6.0);
    VelocityField w(g);
    for (int d = 0; d < 3; ++d)
        w.comp[static_cast<std::size_t>(d)] =
            test::smooth_random_scalar(g, 200 + static_cast<std::uint64_t>(d));
    const VelocityField pw = helmholtz_project(w);
    const VelocityField ppw = helmholtz_project(pw);

    double diff = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i)
            diff = std::max(diff, std::abs(ppw.comp[static_cast<std::size_t>(d)].at(i) -
                                           pw.comp[static_cast<std::size_t>(d)].at(i)));
    const double wn = compute_norm(w, NormSpec::l2());
    CHECK(diff < 1e-12 * wn);

    const double pn = compute_norm(pw, NormSpec::l2());
    CHECK(pn <= wn * (1.0 + 1e-12));

    VelocityField rem = w;
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i)
            rem.comp[static_cast<std::size_t>(d)].at(i) -=
                pw.comp[static_cast<std::size_t>(d)].at(i);
    const double rn = compute_norm(rem, NormSpec::l2());
    CHECK(rel_diff(pn * pn + rn * rn, wn * wn) < 1e-10);
}

TEST_CASE("dealiased products are alias-free against a padded-grid oracle") {
    Grid g(2, 32, 2.0 * pi);
    Grid g2(2, 64, 2.0 * pi);
    SpectralField a = test::smooth_random_scalar(g, 11, 3.0);
    SpectralField b = test::smooth_random_scalar(g, 12, 3.0);
    dealias_inplace(a);
    dealias_inplace(b);

    auto embed = [&](const SpectralField& src) {
        SpectralField dst(g2);
        for (std::int64_t i = 0; i < g.coeff_count(); ++i) {
            const ModeIndex m = decode_mode(g, i);
            const int sy = g.signed_index(m.ky);
            if (m.kx == g.n / 2 || sy == -g.n / 2) continue;  // dealiased anyway
            const int ky2 = sy >= 0 ? sy : sy + g2.n;
            dst.at(dst.index(m.kx, ky2)) = src.at(i);
        }
        return dst;
    };

    auto product_spectrum = [](const Grid& gr, const SpectralField& fa, const SpectralField& fb) {
        const PhysicalField pa = to_physical(fa);
        const PhysicalField pb = to_physical(fb);
        PhysicalField prod(gr);
        for (std::int64_t p = 0; p < gr.point_count(); ++p) prod.at(p) = pa.at(p) * pb.at(p);
        return to_spectral(prod);
    };

    SpectralField coarse = product_spectrum(g, a, b);
    dealias_inplace(coarse);
    const SpectralField fine = product_spectrum(g2, embed(a), embed(b));

    double err = 0.0, scale = 0.0;
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) {
        const ModeIndex m = decode_mode(g, i);
        const int cut = g.dealias_cutoff();
        const int sy = g.signed_index(m.ky);
        if (m.kx > cut || std::abs(sy) > cut) continue;
        const int ky2 = sy >= 0 ? sy : sy + g2.n;
        err = std::max(err, std::abs(coarse.at(i) - fine.at(fine.index(m.kx, ky2))));
        scale = std::max(scale, std::abs(fine.at(fine.index(m.kx, ky2))));
    }
    CHECK(err < 1e-13 * scale);
}

TEST_CASE("mollifier: identity at delta 0, mean preserved, Gaussian widening") {
    Grid g(3, 64, 24.0);  // wide enough that periodic images stay below 1e-8
    const VelocityField u = test::smooth_random_velocity(g, 21);
    const VelocityField same = mollify(u, MollifierSpec(0.0));
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i)
            CHECK(same.comp[static_cast<std::size_t>(d)].at(i) ==
                  u.comp[static_cast<std::size_t>(d)].at(i));

    VelocityField um = u;
    um.comp[0].at(0) = cplx{0.37, 0.0};
    const VelocityField m = mollify(um, MollifierSpec(0.5));
    CHECK(m.comp[0].at(0) == um.comp[0].at(0));
    CHECK(compute_norm(m, NormSpec::l2()) <= compute_norm(um, NormSpec::l2()) * (1.0 + 1e-12));

    const double sigma = 1.2, delta = 0.9;
    const PhysicalField f = test::gaussian_scalar(g, sigma);
    VelocityField v(g);
    v.comp[0] = to_spectral(f);
    const PhysicalField got = to_physical(mollify(v, MollifierSpec(delta)).comp[0]);
    const double s2 = sigma * sigma + delta * delta;
    const PhysicalField want =
        test::gaussian_scalar(g, std::sqrt(s2), std::pow(sigma * sigma / s2, 1.5));
    double err = 0.0;
    for (std::int64_t p = 0; p < g.point_count(); ++p)
        err = std::max(err, std::abs(got.at(p) - want.at(p)));
    CHECK(err < 1e-8);
}

TEST_CASE("convective source vanishes for 2D Taylor-Green") {
    Grid g(2, 64, 2.0 * pi);
    const VelocityField u = taylor_green_2d(g);
    const NonlinearSource q = nonlinear_source(u);
    CHECK(compute_norm(q.field, NormSpec::l2()) < 1e-10 * compute_norm(u, NormSpec::l2()));

    const NonlinearSource qd = mollified_nonlinear_source(u, MollifierSpec(0.3));
    CHECK(compute_norm(qd.field, NormSpec::l2()) < 1e-10 * compute_norm(u, NormSpec::l2()));
}

TEST_CASE("convective source is divergence-free with a spectral certificate") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 33);
    const NonlinearSource q = nonlinear_source(u);
    CHECK(q.field.divergence_free);
    CHECK(divergence_certificate(q.field) < 1e-10);
    CHECK(compute_norm(q.field, NormSpec::l2()) > 0.0);

    VelocityField z(g);
    CHECK(compute_norm(nonlinear_source(z).field, NormSpec::l2()) == 0.0);
}

TEST_CASE("mollified source at delta 0 equals the plain source bitwise") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 44);
    const NonlinearSource a = nonlinear_source(u);
    const NonlinearSource b = mollified_nonlinear_source(u, MollifierSpec(0.0));
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i)
            CHECK(a.field.comp[static_cast<std::size_t>(d)].at(i) ==
                  b.field.comp[static_cast<std::size_t>(d)].at(i));
}

TEST_CASE("projection contracts the convective term") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 55);
    const double delta = 2.0 * g.spacing();
    const NonlinearSource q = mollified_nonlinear_source(u, MollifierSpec(delta));

    VelocityField ud = u;
    dealias_inplace(ud);
    const VelocityField adv = mollify(ud, MollifierSpec(delta));
    std::vector<PhysicalField> advp, w;
    for (int j = 0; j < 3; ++j) advp.push_back(to_physical(adv.comp[static_cast<std::size_t>(j)]));
    for (int i = 0; i < 3; ++i) w.emplace_back(g);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            const PhysicalField gij =
                to_physical(apply_derivative(ud.comp[static_cast<std::size_t>(i)], j));
            for (std::int64_t p = 0; p < g.point_count(); ++p)
                w[static_cast<std::size_t>(i)].at(p) +=
                    advp[static_cast<std::size_t>(j)].at(p) * gij.at(p);
        }
    double transport2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double n = physical_l2(w[static_cast<std::size_t>(i)]);
        transport2 += n * n;
    }
    CHECK(compute_norm(q.field, NormSpec::l2()) <= std::sqrt(transport2) * (1.0 + 1e-12));
}

TEST_CASE("transport term is energy-neutral for divergence-free advection") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 66);
    const VelocityField adv = mollify(u, MollifierSpec(2.0 * g.spacing()));
    const double ip = transport_inner_product(adv, u);
    const double scale = compute_norm(u, NormSpec::l2()) * compute_norm(u, NormSpec::dl2());
    CHECK(std::abs(ip) < 1e-9 * scale);
}

TEST_CASE("outer shell fraction: centered blob vs rim blob") {
    Grid g(3, 32, 16.0);
    VelocityField u(g);
    u.comp[0] = to_spectral(test::gaussian_scalar(g, 1.0));
    CHECK(outer_shell_energy_fraction(u) < 1e-6);

    PhysicalField f(g);
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        std::int64_t r = p;
        double r2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            double x = static_cast<double>(r % g.n) * g.spacing();  // near corner 0
            x = std::min(x, g.length - x);
            r2 += x * x;
            r /= g.n;
        }
        f.at(p) = std::exp(-r2 / 2.0);
    }
    VelocityField v(g);
    v.comp[0] = to_spectral(f);
    CHECK(outer_shell_energy_fraction(v) > 0.5);
}
