#include "leray/operators.hpp"

#include <cmath>

#include "leray/parallel.hpp"
#include "leray/transform.hpp"

namespace leray {

SpectralField apply_derivative(const SpectralField& f, int axis) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("apply_derivative: axis out of range");
    SpectralField out(g);
    const int nyq = -g.n / 2;
    par::parallel_for(g.coeff_count(), [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        const int idx = axis == 0 ? m.kx : axis == 1 ? m.ky : m.kz;
        if (g.signed_index(idx) == nyq) {
            out.at(i) = cplx{0.0, 0.0};
            return;
        }
        const double k = g.wavenumber(idx);
        out.at(i) = cplx{0.0, k} * f.at(i);
    });
    return out;
}

double divergence_certificate(const VelocityField& u) {
    const Grid& g = u.grid();
    const std::int64_t nc = g.coeff_count();
    const double cmax = par::deterministic_max(nc, [&](std::int64_t i) {
        double s = 0.0;
        for (const SpectralField& f : u.comp) s += std::norm(f.at(i));
        return std::sqrt(s);
    });
    return par::deterministic_max(nc, [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        const double k[3] = {g.wavenumber(m.kx), g.wavenumber(m.ky),
                             g.dim == 3 ? g.wavenumber(m.kz) : 0.0};
        cplx div{0.0, 0.0};
        for (int d = 0; d < g.dim; ++d) div += k[d] * u.comp[static_cast<std::size_t>(d)].at(i);
        const double kmag = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        return std::abs(div) / (1.0 + kmag * cmax);
    });
}

VelocityField helmholtz_project(const VelocityField& w) {
    const Grid& g = w.grid();
    const int nyq = -g.n / 2;
    VelocityField out(g);
    par::parallel_for(g.coeff_count(), [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        // Nyquist planes pair +-k in one stored entry; the mixing multiplier
        // k k^T is sign-ambiguous there, so those modes are zeroed (the same
        // convention the spectral derivative uses)
        if (g.signed_index(m.kx) == nyq || g.signed_index(m.ky) == nyq ||
            (g.dim == 3 && g.signed_index(m.kz) == nyq)) {
            for (int d = 0; d < g.dim; ++d)
                out.comp[static_cast<std::size_t>(d)].at(i) = cplx{0.0, 0.0};
            return;
        }
        const double k[3] = {g.wavenumber(m.kx), g.wavenumber(m.ky),
                             g.dim == 3 ? g.wavenumber(m.kz) : 0.0};
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) {
            for (int d = 0; d < g.dim; ++d)
                out.comp[static_cast<std::size_t>(d)].at(i) =
                    w.comp[static_cast<std::size_t>(d)].at(i);
            return;
        }
        cplx kdotw{0.0, 0.0};
        for (int d = 0; d < g.dim; ++d) kdotw += k[d] * w.comp[static_cast<std::size_t>(d)].at(i);
        const cplx scale = kdotw / k2;
        for (int d = 0; d < g.dim; ++d)
            out.comp[static_cast<std::size_t>(d)].at(i) =
                w.comp[static_cast<std::size_t>(d)].at(i) - k[d] * scale;
    });
    out.divergence_free = true;
    return out;
}

void dealias_inplace(SpectralField& f) {
    const Grid& g = f.grid;
    const int cut = g.dealias_cutoff();
    par::parallel_for(g.coeff_count(), [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        if (std::abs(g.signed_index(m.kx)) > cut || std::abs(g.signed_index(m.ky)) > cut ||
            (g.dim == 3 && std::abs(g.signed_index(m.kz)) > cut))
            f.at(i) = cplx{0.0, 0.0};
    });
}

void dealias_inplace(VelocityField& u) {
    for (SpectralField& f : u.comp) dealias_inplace(f);
}

namespace {

void apply_gaussian_multiplier(SpectralField& f, double delta) {
    const Grid& g = f.grid;
    const double half_d2 = 0.5 * delta * delta;
    par::parallel_for(g.coeff_count(), [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        const double kx = g.wavenumber(m.kx);
        const double ky = g.wavenumber(m.ky);
        const double kz = g.dim == 3 ? g.wavenumber(m.kz) : 0.0;
        f.at(i) *= std::exp(-half_d2 * (kx * kx + ky * ky + kz * kz));
    });
}

}  // namespace

VelocityField mollify(const VelocityField& u, const MollifierSpec& m) {
    if (m.delta == 0.0) return u;
    VelocityField out = u;
    for (SpectralField& f : out.comp) apply_gaussian_multiplier(f, m.delta);
    return out;
}

namespace {

NonlinearSource source_impl(const VelocityField& u, double delta, bool mollified) {
    const Grid& g = u.grid();
    VelocityField ud = u;
    dealias_inplace(ud);

    const std::int64_t np = g.point_count();
    std::vector<PhysicalField> w;
    w.reserve(static_cast<std::size_t>(g.dim));
    for (int d = 0; d < g.dim; ++d) w.emplace_back(g);

    for (int j = 0; j < g.dim; ++j) {
        SpectralField adv = ud.comp[static_cast<std::size_t>(j)];
        if (delta > 0.0) apply_gaussian_multiplier(adv, delta);
        const PhysicalField adv_ph = to_physical(adv);
        for (int i = 0; i < g.dim; ++i) {
            const PhysicalField grad_ph =
                to_physical(apply_derivative(ud.comp[static_cast<std::size_t>(i)], j));
            PhysicalField& wi = w[static_cast<std::size_t>(i)];
            par::parallel_for(np, [&](std::int64_t p) { wi.at(p) -= adv_ph.at(p) * grad_ph.at(p); });
        }
    }

    VelocityField q(g);
    for (int i = 0; i < g.dim; ++i)
        q.comp[static_cast<std::size_t>(i)] = to_spectral(w[static_cast<std::size_t>(i)]);
    dealias_inplace(q);
    NonlinearSource src;
    src.field = helmholtz_project(q);
    src.delta = delta;
    src.mollified = mollified;
    return src;
}

}  // namespace

NonlinearSource nonlinear_source(const VelocityField& u) { return source_impl(u, 0.0, false); }

NonlinearSource mollified_nonlinear_source(const VelocityField& u, const MollifierSpec& m) {
    return source_impl(u, m.delta, true);
}

double transport_inner_product(const VelocityField& adv, const VelocityField& u) {
    const Grid& g = u.grid();
    VelocityField a = adv;
    VelocityField ud = u;
    dealias_inplace(a);
    dealias_inplace(ud);
    const std::int64_t np = g.point_count();
    double total = 0.0;
    for (int i = 0; i < g.dim; ++i) {
        const PhysicalField ui = to_physical(ud.comp[static_cast<std::size_t>(i)]);
        for (int j = 0; j < g.dim; ++j) {
            const PhysicalField aj = to_physical(a.comp[static_cast<std::size_t>(j)]);
            const PhysicalField gij =
                to_physical(apply_derivative(ud.comp[static_cast<std::size_t>(i)], j));
            total += g.point_weight() * par::deterministic_sum(np, [&](std::int64_t p) {
                return aj.at(p) * gij.at(p) * ui.at(p);
            });
        }
    }
    return total;
}

double outer_shell_energy_fraction(const VelocityField& u) {
    const Grid& g = u.grid();
    const std::int64_t np = g.point_count();
    const double h = g.spacing();
    const double hal = 0.5 * g.length;
    const double rim = 0.45 * g.length;
    std::vector<PhysicalField> ph;
    ph.reserve(u.comp.size());
    for (const SpectralField& f : u.comp) ph.push_back(to_physical(f));
    auto mag2 = [&](std::int64_t p) {
        double s = 0.0;
        for (const PhysicalField& f : ph) s += f.at(p) * f.at(p);
        return s;
    };
    auto in_shell = [&](std::int64_t p) {
        std::int64_t r = p;
        for (int d = 0; d < g.dim; ++d) {
            const double x = static_cast<double>(r % g.n) * h;
            if (std::abs(x - hal) > rim) return true;
            r /= g.n;
        }
        return false;
    };
    const double total = par::deterministic_sum(np, mag2);
    if (total == 0.0) return 0.0;
    const double shell =
        par::deterministic_sum(np, [&](std::int64_t p) { return in_shell(p) ? mag2(p) : 0.0; });
    return shell / total;
}

}  // namespace leray
