#include "leray/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "leray/parallel.hpp"
#include "leray/transform.hpp"

namespace leray {

NormSpec NormSpec::lq(double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("NormSpec: q must be >= 1");
    if (std::isinf(q)) return sup();
    return {NormKind::Lq, q};
}

NormSpec NormSpec::hs(double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("NormSpec: s must be >= 0");
    return {NormKind::HsDot, s};
}

std::string NormSpec::name() const {
    char buf[32];
    switch (kind) {
        case NormKind::L2: return "l2";
        case NormKind::Sup: return "sup";
        case NormKind::DL2: return "dl2";
        case NormKind::D2L2: return "d2l2";
        case NormKind::Lq:
            std::snprintf(buf, sizeof buf, "lq_%g", param);
            return buf;
        case NormKind::HsDot:
            std::snprintf(buf, sizeof buf, "hs_%g", param);
            return buf;
    }
    return "?";
}

namespace {

/// Spectral weight |k|^(2p) applied mode by mode, summed with Hermitian
/// multiplicity. p = 0 is Parseval, p = 1 the full first-derivative tensor,
/// p = 2 the full second-derivative tensor (cross terms included, which is
/// exactly the |k|^4 diagonal sum).
double weighted_spectral_sum(const SpectralField& f, double p) {
    const Grid& g = f.grid;
    const double w = g.mode_weight();
    return w * par::deterministic_sum(g.coeff_count(), [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        const double kx = g.wavenumber(m.kx);
        const double ky = g.wavenumber(m.ky);
        const double kz = g.dim == 3 ? g.wavenumber(m.kz) : 0.0;
        const double k2 = kx * kx + ky * ky + kz * kz;
        const double weight = p == 0.0   ? 1.0
                              : p == 1.0 ? k2
                              : p == 2.0 ? k2 * k2
                                         : std::pow(k2, p);
        return mode_multiplicity(g, m.kx) * weight * std::norm(f.at(i));
    });
}

double lq_sum(const PhysicalField& f, double q) {
    const double h = f.grid.point_weight();
    return h * par::deterministic_sum(f.grid.point_count(), [&](std::int64_t i) {
        return std::pow(std::abs(f.at(i)), q);
    });
}

}  // namespace

double physical_l2(const PhysicalField& f) {
    const double h = f.grid.point_weight();
    return std::sqrt(h * par::deterministic_sum(f.grid.point_count(), [&](std::int64_t i) {
        const double v = f.at(i);
        return v * v;
    }));
}

double compute_norm(const SpectralField& f, const NormSpec& spec) {
    switch (spec.kind) {
        case NormKind::L2:
            return std::sqrt(weighted_spectral_sum(f, 0.0));
        case NormKind::HsDot:
            return std::sqrt(weighted_spectral_sum(f, spec.param));
        case NormKind::DL2:
            return std::sqrt(weighted_spectral_sum(f, 1.0));
        case NormKind::D2L2:
            return std::sqrt(weighted_spectral_sum(f, 2.0));
        case NormKind::Sup: {
            PhysicalField ph = to_physical(f);
            return par::deterministic_max(ph.grid.point_count(),
                                          [&](std::int64_t i) { return std::abs(ph.at(i)); });
        }
        case NormKind::Lq: {
            PhysicalField ph = to_physical(f);
            return std::pow(lq_sum(ph, spec.param), 1.0 / spec.param);
        }
    }
    throw std::logic_error("compute_norm: unknown kind");
}

double compute_norm(const VelocityField& u, const NormSpec& spec) {
    switch (spec.kind) {
        case NormKind::L2:
        case NormKind::HsDot:
        case NormKind::DL2:
        case NormKind::D2L2: {
            double s = 0.0;
            const double p = spec.kind == NormKind::L2     ? 0.0
                             : spec.kind == NormKind::DL2  ? 1.0
                             : spec.kind == NormKind::D2L2 ? 2.0
                                                           : spec.param;
            for (const SpectralField& f : u.comp) s += weighted_spectral_sum(f, p);
            return std::sqrt(s);
        }
        case NormKind::Sup: {
            std::vector<PhysicalField> ph;
            ph.reserve(u.comp.size());
            for (const SpectralField& f : u.comp) ph.push_back(to_physical(f));
            return par::deterministic_max(u.grid().point_count(), [&](std::int64_t i) {
                double s = 0.0;
                for (const PhysicalField& f : ph) s += f.at(i) * f.at(i);
                return std::sqrt(s);
            });
        }
        case NormKind::Lq: {
            double s = 0.0;
            for (const SpectralField& f : u.comp) s += lq_sum(to_physical(f), spec.param);
            return std::pow(s, 1.0 / spec.param);
        }
    }
    throw std::logic_error("compute_norm: unknown kind");
}

double sup_norm_componentwise(const VelocityField& u) {
    double m = 0.0;
    for (const SpectralField& f : u.comp) m = std::max(m, compute_norm(f, NormSpec::sup()));
    return m;
}

}  // namespace leray
