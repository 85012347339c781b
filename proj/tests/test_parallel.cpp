#include <doctest.h>

#include "leray/norms.hpp"
#include "leray/operators.hpp"
#include "leray/parallel.hpp"
#include "leray/transform.hpp"
#include "test_util.hpp"

using namespace leray;

// The working transforms and reductions must produce bit-identical results
// for every thread count, and the decomposed FFT path must agree with the
// monolithic serial reference to rounding.

namespace {

struct ThreadGuard {
    int saved;
    explicit ThreadGuard(int n) : saved(par::thread_count()) { par::set_thread_count(n); }
    ~ThreadGuard() { par::set_thread_count(saved); }
};

}  // namespace

TEST_CASE("deterministic_sum is independent of thread count") {
    std::vector<double> data(100001);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (double& v : data) v = gauss(rng);
    double ref;
    {
        ThreadGuard tg(1);
        ref = par::deterministic_sum(static_cast<std::int64_t>(data.size()),
                                     [&](std::int64_t i) { return data[static_cast<std::size_t>(i)]; });
    }
    for (int nt : {2, 3, 8}) {
        ThreadGuard tg(nt);
        const double got =
            par::deterministic_sum(static_cast<std::int64_t>(data.size()),
                                   [&](std::int64_t i) { return data[static_cast<std::size_t>(i)]; });
        CHECK(got == ref);
    }
}

TEST_CASE("transforms are bit-identical across thread counts") {
    Grid g(3, 32, 5.0);
    SpectralField f = test::smooth_random_scalar(g, 9);
    PhysicalField p1, p2;
    {
        ThreadGuard tg(1);
        p1 = to_physical(f);
    }
    {
        ThreadGuard tg(4);
        p2 = to_physical(f);
    }
    for (std::int64_t i = 0; i < g.point_count(); ++i) CHECK(p1.at(i) == p2.at(i));

    SpectralField s1, s2;
    {
        ThreadGuard tg(1);
        s1 = to_spectral(p1);
    }
    {
        ThreadGuard tg(4);
        s2 = to_spectral(p1);
    }
    for (std::int64_t i = 0; i < g.coeff_count(); ++i) CHECK(s1.at(i) == s2.at(i));
}

TEST_CASE("convective source is bit-identical across thread counts") {
    Grid g(3, 32, 8.0);
    const VelocityField u = test::smooth_random_velocity(g, 10);
    VelocityField q1, q2;
    {
        ThreadGuard tg(1);
        q1 = nonlinear_source(u).field;
    }
    {
        ThreadGuard tg(4);
        q2 = nonlinear_source(u).field;
    }
    for (int d = 0; d < 3; ++d)
        for (std::int64_t i = 0; i < g.coeff_count(); ++i)
            CHECK(q1.comp[static_cast<std::size_t>(d)].at(i) ==
                  q2.comp[static_cast<std::size_t>(d)].at(i));
}

TEST_CASE("decomposed FFT agrees with the monolithic serial reference") {
    for (int dim : {2, 3}) {
        Grid g(dim, 32, 7.0);
        auto t = Transform::get(g);
        const SpectralField f = test::smooth_random_scalar(g, 21);
        const PhysicalField p = to_physical(f);

        std::vector<cplx> work(static_cast<std::size_t>(g.coeff_count()));
        std::vector<cplx> ref(static_cast<std::size_t>(g.coeff_count()));
        t->forward(p.v.data(), work.data());
        t->forward_reference(p.v.data(), ref.data());
        double scale = 0.0;
        for (const cplx& z : ref) scale = std::max(scale, std::abs(z));
        for (std::size_t i = 0; i < work.size(); ++i)
            CHECK(std::abs(work[i] - ref[i]) < 1e-13 * scale);

        std::vector<double> wr(static_cast<std::size_t>(g.point_count()));
        std::vector<double> rr(static_cast<std::size_t>(g.point_count()));
        t->backward(work.data(), wr.data(), 1.0);
        t->backward_reference(work.data(), rr.data(), 1.0);
        double pscale = 0.0;
        for (double v : rr) pscale = std::max(pscale, std::abs(v));
        for (std::size_t i = 0; i < wr.size(); ++i) CHECK(std::abs(wr[i] - rr[i]) < 1e-13 * pscale);
    }
}
