#pragma once

#include <string>

#include "leray/field.hpp"

namespace leray {

enum class NormKind { L2, Lq, Sup, HsDot, DL2, D2L2 };

/// Which norm to evaluate. Lq carries q in [1, inf) (q = inf maps to Sup),
/// HsDot carries s >= 0. The Sup norm of a vector field is the max over the
/// grid of the pointwise Euclidean magnitude; the max-component variant is
/// exposed separately as sup_norm_componentwise.
struct NormSpec {
    NormKind kind = NormKind::L2;
    double param = 0.0;

    static NormSpec l2() { return {NormKind::L2, 0.0}; }
    static NormSpec lq(double q);
    static NormSpec sup() { return {NormKind::Sup, 0.0}; }
    static NormSpec hs(double s);
    static NormSpec dl2() { return {NormKind::DL2, 0.0}; }
    static NormSpec d2l2() { return {NormKind::D2L2, 0.0}; }

    std::string name() const;
};

double compute_norm(const SpectralField& f, const NormSpec& spec);
double compute_norm(const VelocityField& u, const NormSpec& spec);

/// max_i sup_x |u_i(x)|: the componentwise sup convention. Bounded above by
/// the Euclidean-magnitude sup returned by NormSpec::sup().
double sup_norm_componentwise(const VelocityField& u);

/// Discrete L2 norm of a physical field (h^dim measure).
double physical_l2(const PhysicalField& f);

}  // namespace leray
