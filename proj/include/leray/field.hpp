#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "leray/grid.hpp"

namespace leray {

using cplx = std::complex<double>;

/// Scalar field sampled on the collocation grid.
struct PhysicalField {
    Grid grid;
    std::vector<double> v;

    PhysicalField() = default;
    explicit PhysicalField(const Grid& g)
        : grid(g), v(static_cast<std::size_t>(g.point_count()), 0.0) {}

    double& at(std::int64_t i) { return v[static_cast<std::size_t>(i)]; }
    double at(std::int64_t i) const { return v[static_cast<std::size_t>(i)]; }
};

/// Scalar field in half-spectrum Fourier form. Coefficients carry the
/// continuum normalization (2*pi)^(-dim/2) * integral(e^{-ikx} f), so spectral
/// sums weighted by mode_weight() match physical sums weighted by h^dim.
struct SpectralField {
    Grid grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g)
        : grid(g), c(static_cast<std::size_t>(g.coeff_count()), cplx{0.0, 0.0}) {}

    cplx& at(std::int64_t i) { return c[static_cast<std::size_t>(i)]; }
    cplx at(std::int64_t i) const { return c[static_cast<std::size_t>(i)]; }

    std::int64_t index(int kx, int ky, int kz = 0) const {
        const std::int64_t half = grid.half();
        if (grid.dim == 3) return (static_cast<std::int64_t>(kz) * grid.n + ky) * half + kx;
        return static_cast<std::int64_t>(ky) * half + kx;
    }
};

/// dim spectral components on one shared grid, with a divergence-free
/// certificate maintained by the operations that can assert it.
struct VelocityField {
    std::vector<SpectralField> comp;
    bool divergence_free = false;

    VelocityField() = default;
    explicit VelocityField(const Grid& g) {
        comp.reserve(static_cast<std::size_t>(g.dim));
        for (int d = 0; d < g.dim; ++d) comp.emplace_back(g);
    }

    const Grid& grid() const {
        if (comp.empty()) throw std::logic_error("VelocityField: empty");
        return comp[0].grid;
    }
    int dim() const { return grid().dim; }
};

}  // namespace leray
