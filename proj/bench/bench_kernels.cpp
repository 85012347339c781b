// Kernel benchmark: the OpenMP slab/pencil transforms and grid kernels
// against the monolithic serial FFTW reference. Run with --benchmark_filter
// to select; LERAY_BENCH_THREADS picks the worker count (default: all).

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <numbers>
#include <random>

#include "leray/norms.hpp"
#include "leray/operators.hpp"
#include "leray/parallel.hpp"
#include "leray/transform.hpp"

using namespace leray;

namespace {

Grid bench_grid(int n) { return Grid(3, n, 16.0 * std::numbers::pi); }

PhysicalField random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    PhysicalField f(g);
    for (double& v : f.v) v = gauss(rng);
    return f;
}

VelocityField random_velocity(const Grid& g, std::uint64_t seed) {
    VelocityField u(g);
    for (int d = 0; d < 3; ++d)
        u.comp[static_cast<std::size_t>(d)] =
            to_spectral(random_field(g, seed + static_cast<std::uint64_t>(d)));
    dealias_inplace(u);
    return helmholtz_project(u);
}

void bm_forward_parallel(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    auto t = Transform::get(g);
    const PhysicalField f = random_field(g, 1);
    std::vector<cplx> out(static_cast<std::size_t>(g.coeff_count()));
    for (auto _ : state) {
        t->forward(f.v.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_forward_reference(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    auto t = Transform::get(g);
    const PhysicalField f = random_field(g, 1);
    std::vector<cplx> out(static_cast<std::size_t>(g.coeff_count()));
    for (auto _ : state) {
        t->forward_reference(f.v.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_backward_parallel(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    auto t = Transform::get(g);
    const SpectralField s = to_spectral(random_field(g, 2));
    std::vector<double> out(static_cast<std::size_t>(g.point_count()));
    for (auto _ : state) {
        t->backward(s.c.data(), out.data(), 1.0);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_backward_reference(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    auto t = Transform::get(g);
    const SpectralField s = to_spectral(random_field(g, 2));
    std::vector<double> out(static_cast<std::size_t>(g.point_count()));
    for (auto _ : state) {
        t->backward_reference(s.c.data(), out.data(), 1.0);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_convective_source(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    const VelocityField u = random_velocity(g, 3);
    for (auto _ : state) {
        const NonlinearSource q = nonlinear_source(u);
        benchmark::DoNotOptimize(q.field.comp[0].c.data());
    }
}

void bm_norm_reduction_parallel(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    const VelocityField u = random_velocity(g, 4);
    for (auto _ : state) {
        const double n = compute_norm(u, NormSpec::dl2());
        benchmark::DoNotOptimize(n);
    }
}

void bm_norm_reduction_serial(benchmark::State& state) {
    const Grid g = bench_grid(static_cast<int>(state.range(0)));
    const VelocityField u = random_velocity(g, 4);
    const int saved = par::thread_count();
    par::set_thread_count(1);
    for (auto _ : state) {
        const double n = compute_norm(u, NormSpec::dl2());
        benchmark::DoNotOptimize(n);
    }
    par::set_thread_count(saved);
}

}  // namespace

BENCHMARK(bm_forward_parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_forward_reference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_backward_parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_backward_reference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_convective_source)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_norm_reduction_parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_norm_reduction_serial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    if (const char* env = std::getenv("LERAY_BENCH_THREADS"); env && *env)
        leray::par::set_thread_count(std::atoi(env));
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
