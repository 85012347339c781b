#pragma once

#include "leray/field.hpp"

namespace leray {

/// Width of the smoothing kernel used to regularize the advecting velocity.
/// The kernel is a unit-mass Gaussian with spectral multiplier
/// exp(-delta^2 |k|^2 / 2); delta = 0 is the identity.
struct MollifierSpec {
    double delta = 0.0;
    explicit MollifierSpec(double d) : delta(d) {
        if (d < 0.0) throw std::invalid_argument("MollifierSpec: delta must be >= 0");
    }
    MollifierSpec() = default;
};

/// Spectral derivative along one axis: coefficient at k multiplied by
/// i*k_axis. The Nyquist column is zeroed so derivatives of real fields
/// stay real.
SpectralField apply_derivative(const SpectralField& f, int axis);

/// Normalized divergence residual: max_k |sum_j k_j u_j(k)| / (1 + |k| max|u^|).
double divergence_certificate(const VelocityField& u);

/// Orthogonal projection onto divergence-free fields, multiplier
/// I - k k^T/|k|^2 with the k = 0 mode passed through unchanged. Unpaired
/// Nyquist planes are zeroed (sign-ambiguous wavevectors), matching the
/// derivative convention; dealiased fields are unaffected.
VelocityField helmholtz_project(const VelocityField& w);

/// Zero every mode with any |k_axis| above the 2/3-rule cutoff.
void dealias_inplace(SpectralField& f);
void dealias_inplace(VelocityField& u);

/// Gaussian smoothing of width delta; preserves the divergence-free
/// certificate and the mean.
VelocityField mollify(const VelocityField& u, const MollifierSpec& m);

/// Projected convective source: the divergence-free part of -(adv . grad) u.
struct NonlinearSource {
    VelocityField field;
    double delta = 0.0;    ///< mollifier width of the advecting velocity
    bool mollified = false;
};

NonlinearSource nonlinear_source(const VelocityField& u);
NonlinearSource mollified_nonlinear_source(const VelocityField& u, const MollifierSpec& m);

/// <adv . grad u, u> with the h^dim measure; vanishes for divergence-free
/// advecting fields, which is what makes the energy identity hold.
double transport_inner_product(const VelocityField& adv, const VelocityField& u);

/// Fraction of |u|^2 (h^dim measure) carried by points within 5% of the box
/// side of the boundary on any axis, i.e. the outer 10% of each axis extent.
double outer_shell_energy_fraction(const VelocityField& u);

}  // namespace leray
