#pragma once

#include "leray/field.hpp"

namespace leray {

/// Heat semigroup: diagonal multiplier exp(-|k|^2 tau), tau >= 0.
SpectralField heat_propagate(const SpectralField& f, double tau);
VelocityField heat_propagate(const VelocityField& u, double tau);

/// Comparison heat flow anchored at (t0, u(t0)).
struct HeatFlow {
    double anchor_time = 0.0;
    VelocityField anchor_state;
};

/// e^{(t - t0) Laplacian} applied to the anchor; rejects t < t0.
VelocityField evaluate_heat_flow(const HeatFlow& h, double t);

}  // namespace leray
