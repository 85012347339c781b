#include "leray/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "leray/checkpoint.hpp"
#include "leray/norms.hpp"
#include "leray/operators.hpp"
#include "leray/parallel.hpp"
#include "leray/transform.hpp"

namespace leray {

namespace {

void point_coords(const Grid& g, std::int64_t p, double* x) {
    std::int64_t r = p;
    for (int d = 0; d < g.dim; ++d) {
        x[d] = static_cast<double>(r % g.n) * g.spacing();
        r /= g.n;
    }
}

VelocityField taylor_green(const Grid& g, bool three_d) {
    if (three_d && g.dim != 3)
        throw std::invalid_argument("initial data: taylor_green_3d needs a 3D grid");
    if (!three_d && g.dim != 2)
        throw std::invalid_argument("initial data: taylor_green_2d needs a 2D grid");
    const double a = 2.0 * std::numbers::pi / g.length;
    std::vector<PhysicalField> ph;
    for (int d = 0; d < g.dim; ++d) ph.emplace_back(g);
    par::parallel_for(g.point_count(), [&](std::int64_t p) {
        double x[3] = {0, 0, 0};
        point_coords(g, p, x);
        if (three_d) {
            ph[0].at(p) = std::sin(a * x[0]) * std::cos(a * x[1]) * std::cos(a * x[2]);
            ph[1].at(p) = -std::cos(a * x[0]) * std::sin(a * x[1]) * std::cos(a * x[2]);
            ph[2].at(p) = 0.0;
        } else {
            ph[0].at(p) = std::sin(a * x[0]) * std::cos(a * x[1]);
            ph[1].at(p) = -std::cos(a * x[0]) * std::sin(a * x[1]);
        }
    });
    VelocityField u(g);
    for (int d = 0; d < g.dim; ++d) u.comp[static_cast<std::size_t>(d)] = to_spectral(ph[static_cast<std::size_t>(d)]);
    u.divergence_free = true;
    return u;
}

VelocityField localized_random(const InitialDataSpec& spec, const Grid& g) {
    const double k0 = spec.peak_wavenumber;
    const double k_cut = 2.0 * std::numbers::pi * g.dealias_cutoff() / g.length;
    if (!(k0 > 0.0) || k0 > k_cut)
        throw std::invalid_argument("initial data: peak_wavenumber outside the resolvable band");
    if (!(spec.energy > 0.0)) throw std::invalid_argument("initial data: energy must be positive");

    // White noise per component, drawn in a fixed order.
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    VelocityField noise(g);
    for (int d = 0; d < g.dim; ++d) {
        PhysicalField ph(g);
        for (double& v : ph.v) v = gauss(rng);
        noise.comp[static_cast<std::size_t>(d)] = to_spectral(ph);
    }
    // Amplitude flat below k0 with a Gaussian roll-off above, so the energy
    // spectrum k^2 |u^|^2 peaks near k0 while the small-k plateau mimics
    // integrable whole-space data (mean removed separately).
    for (SpectralField& f : noise.comp) {
        par::parallel_for(g.coeff_count(), [&](std::int64_t i) {
            const ModeIndex m = decode_mode(g, i);
            const double kx = g.wavenumber(m.kx);
            const double ky = g.wavenumber(m.ky);
            const double kz = g.dim == 3 ? g.wavenumber(m.kz) : 0.0;
            const double q2 = (kx * kx + ky * ky + kz * kz) / (k0 * k0);
            f.at(i) *= std::exp(-q2);
        });
    }

    double width = spec.envelope_width > 0.0 ? spec.envelope_width : g.length / 8.0;
    VelocityField u;
    for (int attempt = 0; attempt < 12; ++attempt) {
        u = VelocityField(g);
        const double half = 0.5 * g.length;
        const double inv2w2 = 1.0 / (2.0 * width * width);
        for (int d = 0; d < g.dim; ++d) {
            PhysicalField ph = to_physical(noise.comp[static_cast<std::size_t>(d)]);
            par::parallel_for(g.point_count(), [&](std::int64_t p) {
                double x[3] = {0, 0, 0};
                point_coords(g, p, x);
                double r2 = 0.0;
                for (int dd = 0; dd < g.dim; ++dd) r2 += (x[dd] - half) * (x[dd] - half);
                ph.at(p) *= std::exp(-r2 * inv2w2);
            });
            u.comp[static_cast<std::size_t>(d)] = to_spectral(ph);
        }
        for (SpectralField& f : u.comp) f.at(0) = cplx{0.0, 0.0};  // integrable-data analogue
        dealias_inplace(u);
        u = helmholtz_project(u);
        if (outer_shell_energy_fraction(u) <= 0.01) break;
        width *= 0.8;
    }
    if (outer_shell_energy_fraction(u) > 0.01)
        throw std::runtime_error("initial data: localization invariant unreachable on this box");

    const double l2 = compute_norm(u, NormSpec::l2());
    if (l2 == 0.0) throw std::runtime_error("initial data: degenerate random field");
    const double scale = std::sqrt(2.0 * spec.energy) / l2;
    for (SpectralField& f : u.comp)
        par::parallel_for(g.coeff_count(), [&](std::int64_t i) { f.at(i) *= scale; });
    return u;
}

}  // namespace

VelocityField generate_initial_data(const InitialDataSpec& spec, const Grid& grid) {
    switch (spec.kind) {
        case InitialKind::TaylorGreen2D: return taylor_green(grid, false);
        case InitialKind::TaylorGreen3D: return taylor_green(grid, true);
        case InitialKind::LocalizedRandom: return localized_random(spec, grid);
        case InitialKind::FromCheckpoint: {
            Checkpoint ck = read_checkpoint(spec.path);
            if (!(ck.field.grid() == grid))
                throw std::invalid_argument("initial data: checkpoint grid does not match config");
            return ck.field;
        }
    }
    throw std::logic_error("generate_initial_data: unknown kind");
}

}  // namespace leray
