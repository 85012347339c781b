#pragma once

#include <functional>

namespace leray {

struct QuadResult {
    double value = 0.0;
    double abserr = 0.0;
    bool converged = false;
};

/// Adaptive integral of smooth(s) * (s-a)^alpha * (b-s)^beta over [a, b],
/// alpha, beta > -1. Endpoint singularities are handled by the weighted
/// Gauss-Kronrod rule; alpha = beta = 0 falls back to plain adaptive
/// integration. Never throws: convergence failures are reported in-band.
QuadResult integrate_weighted(const std::function<double(double)>& smooth, double a, double b,
                              double alpha, double beta, double epsabs = 1e-10,
                              double epsrel = 1e-10);

}  // namespace leray
