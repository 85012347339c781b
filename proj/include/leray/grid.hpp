#pragma once

#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace leray {

/// Periodic box descriptor: dim axes, n collocation points per axis,
/// physical side length. Fixes the transforms, the quadrature weight
/// h^dim and the wavenumber lattice 2*pi*k/length, k in [-n/2, n/2).
struct Grid {
    int dim = 3;
    int n = 0;
    double length = 0.0;

    Grid() = default;
    Grid(int dim_, int n_, double length_) : dim(dim_), n(n_), length(length_) {
        validate();
    }

    void validate() const {
        if (dim != 2 && dim != 3) throw std::invalid_argument("Grid: dim must be 2 or 3");
        if (n < 8 || n % 2 != 0) throw std::invalid_argument("Grid: n must be even and >= 8");
        if ((n & (n - 1)) != 0) throw std::invalid_argument("Grid: n must be a power of two");
        if (!(length > 0.0)) throw std::invalid_argument("Grid: length must be positive");
    }

    double spacing() const { return length / n; }

    /// Collocation points per field: n^dim.
    std::int64_t point_count() const {
        std::int64_t p = 1;
        for (int d = 0; d < dim; ++d) p *= n;
        return p;
    }

    /// Half-spectrum length along the fastest axis.
    int half() const { return n / 2 + 1; }

    /// Stored complex coefficients per scalar field: n^(dim-1) * (n/2+1).
    std::int64_t coeff_count() const {
        std::int64_t p = half();
        for (int d = 1; d < dim; ++d) p *= n;
        return p;
    }

    /// Signed mode index in [-n/2, n/2) for a storage index in [0, n).
    int signed_index(int k) const { return k < n / 2 ? k : k - n; }

    /// Physical wavenumber 2*pi*k/length of a storage index.
    double wavenumber(int k) const {
        return 2.0 * std::numbers::pi * signed_index(k) / length;
    }

    /// Largest retained |mode index| under the 2/3 rule. n is a power of
    /// two, so 3*cutoff < n and retained products are alias-free.
    int dealias_cutoff() const { return n / 3; }

    /// Measure weight of one collocation point, h^dim.
    double point_weight() const {
        double w = 1.0;
        for (int d = 0; d < dim; ++d) w *= spacing();
        return w;
    }

    /// Measure weight of one wavevector cell, (2*pi/length)^dim.
    double mode_weight() const {
        double w = 1.0;
        for (int d = 0; d < dim; ++d) w *= 2.0 * std::numbers::pi / length;
        return w;
    }

    bool operator==(const Grid&) const = default;
};

/// Decomposed storage index of a spectral coefficient: i = (kz*n + ky)*half + kx
/// in 3D, i = ky*half + kx in 2D. kx is the half-spectrum axis.
struct ModeIndex {
    int kx = 0, ky = 0, kz = 0;
};

inline ModeIndex decode_mode(const Grid& g, std::int64_t i) {
    ModeIndex m;
    const int half = g.half();
    m.kx = static_cast<int>(i % half);
    std::int64_t r = i / half;
    m.ky = static_cast<int>(r % g.n);
    m.kz = g.dim == 3 ? static_cast<int>(r / g.n) : 0;
    return m;
}

/// Hermitian multiplicity of a stored coefficient: interior kx entries stand
/// for a conjugate pair, the kx = 0 and kx = n/2 planes for themselves.
inline double mode_multiplicity(const Grid& g, int kx) {
    return (kx == 0 || kx == g.n / 2) ? 1.0 : 2.0;
}

}  // namespace leray
