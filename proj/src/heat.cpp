#include "leray/heat.hpp"

#include <cmath>
#include <stdexcept>

#include "leray/parallel.hpp"

namespace leray {

SpectralField heat_propagate(const SpectralField& f, double tau) {
    if (tau < 0.0) throw std::invalid_argument("heat_propagate: tau must be >= 0");
    if (tau == 0.0) return f;
    const Grid& g = f.grid;
    SpectralField out(g);
    par::parallel_for(g.coeff_count(), [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        const double kx = g.wavenumber(m.kx);
        const double ky = g.wavenumber(m.ky);
        const double kz = g.dim == 3 ? g.wavenumber(m.kz) : 0.0;
        out.at(i) = f.at(i) * std::exp(-(kx * kx + ky * ky + kz * kz) * tau);
    });
    return out;
}

VelocityField heat_propagate(const VelocityField& u, double tau) {
    if (tau < 0.0) throw std::invalid_argument("heat_propagate: tau must be >= 0");
    VelocityField out = u;
    for (SpectralField& f : out.comp) f = heat_propagate(f, tau);
    return out;  // diagonal multiplier commutes with the projection
}

VelocityField evaluate_heat_flow(const HeatFlow& h, double t) {
    if (t < h.anchor_time)
        throw std::invalid_argument("evaluate_heat_flow: no backward heat flow (t < anchor time)");
    return heat_propagate(h.anchor_state, t - h.anchor_time);
}

}  // namespace leray
