#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "leray/checkpoint.hpp"
#include "leray/norms.hpp"
#include "leray/transform.hpp"
#include "test_util.hpp"

using namespace leray;
using leray::test::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("grid invariants and wavenumbers") {
    Grid g(3, 16, 4.0);
    CHECK(g.spacing() == doctest::Approx(0.25));
    CHECK(g.wavenumber(0) == 0.0);
    CHECK(g.wavenumber(1) == doctest::Approx(2.0 * pi / 4.0).epsilon(1e-15));
    CHECK(g.signed_index(8) == -8);   // Nyquist counts as -n/2
    CHECK(g.signed_index(15) == -1);
    CHECK_THROWS(Grid(4, 16, 1.0));
    CHECK_THROWS(Grid(3, 6, 1.0));    // not a power of two
    CHECK_THROWS(Grid(3, 24, 1.0));
    CHECK_THROWS(Grid(3, 16, -1.0));
}

TEST_CASE("constant field transforms to the zero mode only") {
    Grid g(3, 16, 3.0);
    const double c = 1.7;
    PhysicalField f(g);
    for (double& v : f.v) v = c;
    const SpectralField s = to_spectral(f);
    for (std::int64_t i = 1; i < g.coeff_count(); ++i) CHECK(std::abs(s.at(i)) < 1e-12);
    // the zero mode alone carries the whole norm c * L^(dim/2)
    const double want = c * std::pow(g.length, 1.5);
    CHECK(rel_diff(std::sqrt(g.mode_weight()) * std::abs(s.at(0)), want) < 1e-13);
    CHECK(rel_diff(compute_norm(s, NormSpec::l2()), want) < 1e-13);
}

TEST_CASE("single cosine occupies exactly one stored mode pair") {
    Grid g(3, 32, 5.0);
    PhysicalField f(g);
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        const double x = static_cast<double>(p % g.n) * g.spacing();
        f.at(p) = std::cos(2.0 * pi * x / g.length);
    }
    const SpectralField s = to_spectral(f);
    double off = 0.0;
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) {
        const ModeIndex m = decode_mode(g, i);
        if (m.kx == 1 && m.ky == 0 && m.kz == 0) continue;
        off = std::max(off, std::abs(s.at(i)));
    }
    const double peak = std::abs(s.at(s.index(1, 0, 0)));
    CHECK(off < 1e-12 * peak);
    CHECK(peak > 0.0);
}

TEST_CASE("roundtrip on a seeded random smooth field") {
    for (int dim : {2, 3}) {
        Grid g(dim, 32, 2.0 * pi);
        const SpectralField s = test::smooth_random_scalar(g, 42);
        const PhysicalField f = to_physical(s);
        const SpectralField s2 = to_spectral(f);
        double num = 0.0, den = 0.0;
        for (std::int64_t i = 0; i < g.coeff_count(); ++i) {
            num += std::norm(s2.at(i) - s.at(i));
            den += std::norm(s.at(i));
        }
        CHECK(std::sqrt(num / den) < 1e-12);

        const PhysicalField f2 = to_physical(s2);
        double mx = 0.0, scale = 0.0;
        for (std::int64_t p = 0; p < g.point_count(); ++p) {
            mx = std::max(mx, std::abs(f2.at(p) - f.at(p)));
            scale = std::max(scale, std::abs(f.at(p)));
        }
        CHECK(mx < 1e-12 * scale);
    }
}

TEST_CASE("transform rejects bad input") {
    Grid g(3, 16, 1.0);
    PhysicalField f(g);
    f.at(3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(to_spectral(f), doctest::Contains("non-finite"), std::invalid_argument);

    SpectralField s(g);
    s.at(s.index(0, 1, 0)) = cplx{1.0, 0.5};  // no conjugate partner on the kx = 0 plane
    CHECK_THROWS_WITH_AS(to_physical(s), doctest::Contains("Hermitian"), std::invalid_argument);
}

TEST_CASE("Parseval holds to 1e-12 on random fields") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        Grid g(3, 32, 4.0);
        const SpectralField s = test::smooth_random_scalar(g, seed);
        const PhysicalField f = to_physical(s);
        CHECK(rel_diff(physical_l2(f), compute_norm(s, NormSpec::l2())) < 1e-12);
    }
}

TEST_CASE("3D Gaussian L2 norm matches the analytic integral") {
    Grid g(3, 64, 16.0);
    const PhysicalField f = test::gaussian_scalar(g, 1.0);
    // integral of exp(-|x|^2) over R^3 is pi^(3/2)
    CHECK(rel_diff(physical_l2(f), std::pow(pi, 0.75)) < 1e-6);
    const SpectralField s = to_spectral(f);
    CHECK(rel_diff(compute_norm(s, NormSpec::l2()), std::pow(pi, 0.75)) < 1e-6);
}

TEST_CASE("2D Taylor-Green L2 norm has its closed form") {
    Grid g(2, 64, 2.0 * pi);
    PhysicalField u0(g), u1(g);
    for (std::int64_t p = 0; p < g.point_count(); ++p) {
        const double x = static_cast<double>(p % g.n) * g.spacing();
        const double y = static_cast<double>(p / g.n) * g.spacing();
        u0.at(p) = std::sin(x) * std::cos(y);
        u1.at(p) = -std::cos(x) * std::sin(y);
    }
    VelocityField u(g);
    u.comp[0] = to_spectral(u0);
    u.comp[1] = to_spectral(u1);
    const double n2 = std::pow(compute_norm(u, NormSpec::l2()), 2.0);
    CHECK(rel_diff(n2, 2.0 * pi * pi) < 1e-12);
}

TEST_CASE("Hs norm at s = 0 reduces to L2") {
    Grid g(3, 32, 6.0);
    const SpectralField s = test::smooth_random_scalar(g, 9);
    CHECK(rel_diff(compute_norm(s, NormSpec::hs(0.0)), compute_norm(s, NormSpec::l2())) < 1e-12);
}

TEST_CASE("Hs norms are monotone in s on a high-pass field") {
    Grid g(3, 32, 2.0 * pi);  // smallest nonzero |k| is 1
    SpectralField s = test::smooth_random_scalar(g, 12);
    s.at(0) = cplx{0.0, 0.0};  // keep only |k| >= 1
    double prev = compute_norm(s, NormSpec::hs(0.0));
    for (double ss : {0.5, 1.0, 1.5, 2.0}) {
        const double cur = compute_norm(s, NormSpec::hs(ss));
        CHECK(cur >= prev * (1.0 - 1e-12));
        prev = cur;
    }
}

TEST_CASE("Lq interpolation between L2 and sup") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 77);
    const double l2 = compute_norm(u, NormSpec::l2());
    const double sup = compute_norm(u, NormSpec::sup());
    for (double q : {3.0, 4.0, 6.0, 8.0}) {
        const double lq = compute_norm(u, NormSpec::lq(q));
        const double rhs = std::pow(l2, 2.0 / q) * std::pow(sup, 1.0 - 2.0 / q);
        CHECK(lq <= rhs * (1.0 + 1e-10));
    }
}

TEST_CASE("componentwise sup is dominated by the Euclidean sup") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 5);
    CHECK(sup_norm_componentwise(u) <= compute_norm(u, NormSpec::sup()) * (1.0 + 1e-12));
}

TEST_CASE("spectral DL2 matches a finite-difference gradient at O(h^2)") {
    auto fd_grad_norm = [](const Grid& g, const PhysicalField& f) {
        double acc = 0.0;
        const double inv2h = 1.0 / (2.0 * g.spacing());
        const int n = g.n;
        for (std::int64_t p = 0; p < g.point_count(); ++p) {
            const int x = static_cast<int>(p % n);
            const int y = static_cast<int>((p / n) % n);
            const int z = static_cast<int>(p / (static_cast<std::int64_t>(n) * n));
            auto idx = [&](int xx, int yy, int zz) {
                return (static_cast<std::int64_t>((zz + n) % n) * n + (yy + n) % n) * n +
                       (xx + n) % n;
            };
            const double gx = (f.at(idx(x + 1, y, z)) - f.at(idx(x - 1, y, z))) * inv2h;
            const double gy = (f.at(idx(x, y + 1, z)) - f.at(idx(x, y - 1, z))) * inv2h;
            const double gz = (f.at(idx(x, y, z + 1)) - f.at(idx(x, y, z - 1))) * inv2h;
            acc += gx * gx + gy * gy + gz * gz;
        }
        return std::sqrt(acc * g.point_weight());
    };
    double err[2];
    int k = 0;
    for (int n : {32, 64}) {
        Grid g(3, n, 16.0);
        const PhysicalField f = test::gaussian_scalar(g, 1.5);
        const SpectralField s = to_spectral(f);
        err[k++] = std::abs(fd_grad_norm(g, f) - compute_norm(s, NormSpec::dl2()));
    }
    CHECK(err[1] < err[0] / 3.0);  // second-order drop, ~4x
}

TEST_CASE("NormSpec validation") {
    CHECK_THROWS_AS(NormSpec::lq(0.5), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::hs(-0.1), std::invalid_argument);
    CHECK(NormSpec::lq(std::numeric_limits<double>::infinity()).kind == NormKind::Sup);
}

TEST_CASE("zero field has zero norms") {
    Grid g(3, 16, 2.0);
    VelocityField u(g);
    for (auto spec : {NormSpec::l2(), NormSpec::dl2(), NormSpec::d2l2(), NormSpec::sup(),
                      NormSpec::lq(4.0), NormSpec::hs(1.5)})
        CHECK(compute_norm(u, spec) == 0.0);
}

TEST_CASE("checkpoint round-trips bit-exactly and detects corruption") {
    Grid g(3, 16, 3.5);
    const VelocityField u = test::smooth_random_velocity(g, 31);
    const std::string path = (std::filesystem::temp_directory_path() / "leray_ck_test.lray").string();
    write_checkpoint(path, u, 1.25);
    const Checkpoint ck = read_checkpoint(path);
    CHECK(ck.time == 1.25);
    CHECK(ck.field.grid() == g);
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i)
            CHECK(ck.field.comp[static_cast<std::size_t>(d)].at(i) ==
                  u.comp[static_cast<std::size_t>(d)].at(i));
    CHECK(audit_checkpoint(path).empty());

    // structural corruption: damage the magic
    {
        std::fstream fs(path, std::ios::in | std::ios::out | std::ios::binary);
        fs.seekp(1);
        fs.write("x", 1);
    }
    CHECK(!audit_checkpoint(path).empty());
    std::filesystem::remove(path);
}
