#include "leray/solver.hpp"

#include <cmath>
#include <filesystem>
#include <mutex>
#include <stdexcept>

#include "leray/checkpoint.hpp"
#include "leray/norms.hpp"
#include "leray/parallel.hpp"
#include "leray/transform.hpp"

namespace leray {

void SolverConfig::validate() const {
    grid.validate();
    if (!(t_end >= 0.0)) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
    if (time.fixed && !(time.dt > 0.0))
        throw std::invalid_argument("SolverConfig: fixed dt must be positive");
    if (!time.fixed && !(time.cfl > 0.0 && time.cfl <= 1.0))
        throw std::invalid_argument("SolverConfig: cfl must be in (0, 1]");
    if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
    if (snapshot_every < 0) throw std::invalid_argument("SolverConfig: snapshot_every must be >= 0");
    for (double s : hs_list)
        if (!(s >= 0.0)) throw std::invalid_argument("SolverConfig: Hs exponent must be >= 0");
    for (double q : lq_list)
        if (!(q >= 1.0)) throw std::invalid_argument("SolverConfig: Lq order must be >= 1");
    const double d = resolved_delta();
    (void)d;
}

// ---------------------------------------------------------------------------
// Stepper
// ---------------------------------------------------------------------------

Stepper::Stepper(const Grid& g, double delta, bool dealias, bool nonlinear)
    : grid_(g), delta_(delta), dealias_(dealias), nonlinear_(nonlinear) {
    if (delta_ < 0.0) throw std::invalid_argument("Stepper: delta must be >= 0");
}

void Stepper::refresh_multipliers(double dt) const {
    if (dt == cached_dt_) return;
    const std::int64_t nc = grid_.coeff_count();
    e_half_.resize(static_cast<std::size_t>(nc));
    e_full_.resize(static_cast<std::size_t>(nc));
    const Grid& g = grid_;
    par::parallel_for(nc, [&](std::int64_t i) {
        const ModeIndex m = decode_mode(g, i);
        const double kx = g.wavenumber(m.kx);
        const double ky = g.wavenumber(m.ky);
        const double kz = g.dim == 3 ? g.wavenumber(m.kz) : 0.0;
        const double k2 = kx * kx + ky * ky + kz * kz;
        e_half_[static_cast<std::size_t>(i)] = std::exp(-k2 * 0.5 * dt);
        e_full_[static_cast<std::size_t>(i)] = std::exp(-k2 * dt);
    });
    cached_dt_ = dt;
}

namespace {

NonlinearSource convective_source(const VelocityField& u, double delta, bool dealias);

double grad_l2_squared(const VelocityField& u) {
    const double n = compute_norm(u, NormSpec::dl2());
    return n * n;
}

using Mult = std::vector<double>;

void scale_into(VelocityField& dst, const VelocityField& a, const Mult& e) {
    const std::int64_t nc = a.grid().coeff_count();
    for (std::size_t d = 0; d < a.comp.size(); ++d)
        par::parallel_for(nc, [&](std::int64_t i) {
            dst.comp[d].at(i) = a.comp[d].at(i) * e[static_cast<std::size_t>(i)];
        });
}

}  // namespace

void Stepper::advance(SolverState& s, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("Stepper: dt must be positive");
    refresh_multipliers(dt);
    const Grid& g = grid_;
    const std::int64_t nc = g.coeff_count();
    const Mult& e1 = e_half_;
    const Mult& e2 = e_full_;
    const VelocityField& u = s.u;

    auto source = [&](const VelocityField& v) -> VelocityField {
        try {
            NonlinearSource q = convective_source(v, delta_, dealias_);
            return std::move(q.field);
        } catch (const std::invalid_argument& e) {
            // non-finite stage values surface inside the product pipeline
            throw SolverBlowup("blow-up or instability: " + std::string(e.what()) +
                               " during step " + std::to_string(s.step_count + 1) + " near t = " +
                               std::to_string(s.t));
        }
    };

    // classic RK4 on the integrating-factor variable, accumulated stagewise
    // to keep at most four velocity-sized temporaries alive
    VelocityField acc(g), stage(g);
    const double g1 = grad_l2_squared(u);
    double g2, g3, g4;

    if (nonlinear_) {
        VelocityField q = source(u);  // first stage slope
        for (std::size_t d = 0; d < u.comp.size(); ++d)
            par::parallel_for(nc, [&](std::int64_t i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                acc.comp[d].at(i) = (u.comp[d].at(i) + dt / 6.0 * q.comp[d].at(i)) * e2[ii];
                stage.comp[d].at(i) = (u.comp[d].at(i) + 0.5 * dt * q.comp[d].at(i)) * e1[ii];
            });
        g2 = grad_l2_squared(stage);
        q = source(stage);  // second
        for (std::size_t d = 0; d < u.comp.size(); ++d)
            par::parallel_for(nc, [&](std::int64_t i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                acc.comp[d].at(i) += dt / 3.0 * q.comp[d].at(i) * e1[ii];
                stage.comp[d].at(i) = u.comp[d].at(i) * e1[ii] + 0.5 * dt * q.comp[d].at(i);
            });
        g3 = grad_l2_squared(stage);
        q = source(stage);  // third
        for (std::size_t d = 0; d < u.comp.size(); ++d)
            par::parallel_for(nc, [&](std::int64_t i) {
                const std::size_t ii = static_cast<std::size_t>(i);
                acc.comp[d].at(i) += dt / 3.0 * q.comp[d].at(i) * e1[ii];
                stage.comp[d].at(i) = u.comp[d].at(i) * e2[ii] + dt * q.comp[d].at(i) * e1[ii];
            });
        g4 = grad_l2_squared(stage);
        q = source(stage);  // fourth
        for (std::size_t d = 0; d < u.comp.size(); ++d)
            par::parallel_for(nc, [&](std::int64_t i) {
                acc.comp[d].at(i) += dt / 6.0 * q.comp[d].at(i);
            });
    } else {
        scale_into(stage, u, e1);
        g2 = g3 = grad_l2_squared(stage);
        scale_into(acc, u, e2);
        g4 = grad_l2_squared(acc);
    }

    const double dd = dt / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4);

    const double check = compute_norm(acc, NormSpec::l2());
    if (!std::isfinite(check))
        throw SolverBlowup("blow-up or instability: non-finite state after step " +
                           std::to_string(s.step_count + 1) + " near t = " + std::to_string(s.t));

    acc.divergence_free = u.divergence_free;
    s.u = std::move(acc);
    s.t += dt;
    s.step_count += 1;
    s.dissipation += dd;
}

namespace {

NonlinearSource convective_source(const VelocityField& u, double delta, bool dealias) {
    if (dealias) return delta > 0.0 ? mollified_nonlinear_source(u, MollifierSpec(delta))
                                    : nonlinear_source(u);
    // Undealiased variant, kept for experiments. Same pipeline minus the
    // truncations.
    const Grid& g = u.grid();
    const std::int64_t np = g.point_count();
    std::vector<PhysicalField> w;
    for (int d = 0; d < g.dim; ++d) w.emplace_back(g);
    for (int j = 0; j < g.dim; ++j) {
        VelocityField adv = delta > 0.0 ? mollify(u, MollifierSpec(delta)) : u;
        const PhysicalField adv_ph = to_physical(adv.comp[static_cast<std::size_t>(j)]);
        for (int i = 0; i < g.dim; ++i) {
            const PhysicalField grad_ph =
                to_physical(apply_derivative(u.comp[static_cast<std::size_t>(i)], j));
            PhysicalField& wi = w[static_cast<std::size_t>(i)];
            par::parallel_for(np, [&](std::int64_t p) { wi.at(p) -= adv_ph.at(p) * grad_ph.at(p); });
        }
    }
    VelocityField q(g);
    for (int i = 0; i < g.dim; ++i)
        q.comp[static_cast<std::size_t>(i)] = to_spectral(w[static_cast<std::size_t>(i)]);
    NonlinearSource src;
    src.field = helmholtz_project(q);
    src.delta = delta;
    src.mollified = delta > 0.0;
    return src;
}

}  // namespace

SolverState make_initial_state(const SolverConfig& cfg) {
    cfg.validate();
    VelocityField u0 = generate_initial_data(cfg.initial, cfg.grid);
    const double cert = divergence_certificate(u0);
    if (cert > 1e-10)
        throw std::runtime_error("initial data violates the divergence-free certificate");
    u0.divergence_free = true;
    SolverState s;
    s.u = std::move(u0);
    s.t = 0.0;
    s.step_count = 0;
    s.delta = cfg.resolved_delta();
    s.dissipation = 0.0;
    return s;
}

SolverState step(const SolverState& s, double dt, const SolverConfig& cfg) {
    Stepper st(cfg.grid, cfg.resolved_delta(), cfg.dealias, cfg.nonlinear);
    SolverState out = s;
    st.advance(out, dt);
    return out;
}

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

const VelocityField& Trajectory::snapshot(std::size_t i) const {
    static std::mutex load_mutex;  // analyses may read snapshots concurrently
    const Snapshot& s = snaps.at(i);
    std::lock_guard<std::mutex> lock(load_mutex);
    if (!s.cached) {
        if (s.path.empty()) throw std::logic_error("Trajectory: snapshot lost");
        s.cached = std::make_shared<VelocityField>(read_checkpoint(s.path).field);
    }
    return *s.cached;
}

std::ptrdiff_t Trajectory::snapshot_index(double t0) const {
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const double scale = std::max(1.0, std::abs(snaps[i].t));
        if (std::abs(snaps[i].t - t0) <= 1e-9 * scale) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

double Trajectory::nearest_snapshot_time(double t0) const {
    double best = snaps.empty() ? 0.0 : snaps[0].t;
    for (const Snapshot& s : snaps)
        if (std::abs(s.t - t0) < std::abs(best - t0)) best = s.t;
    return best;
}

namespace {

struct Recorder {
    const SolverConfig& cfg;
    NormSeries& series;

    std::vector<std::string> make_names() const {
        std::vector<std::string> n = {"l2", "dl2", "d2l2", "sup"};
        for (double s : cfg.hs_list) n.push_back(NormSpec::hs(s).name());
        for (double q : cfg.lq_list) n.push_back(NormSpec::lq(q).name());
        n.push_back("shell_frac");
        n.push_back("diss_int");
        return n;
    }

    void record(const SolverState& s) const {
        std::vector<double> row;
        row.push_back(compute_norm(s.u, NormSpec::l2()));
        row.push_back(compute_norm(s.u, NormSpec::dl2()));
        row.push_back(compute_norm(s.u, NormSpec::d2l2()));

        // one physical pass shared by sup / Lq / shell fraction
        const Grid& g = s.u.grid();
        std::vector<PhysicalField> ph;
        ph.reserve(s.u.comp.size());
        for (const SpectralField& f : s.u.comp) ph.push_back(to_physical(f));
        const std::int64_t np = g.point_count();
        row.push_back(par::deterministic_max(np, [&](std::int64_t p) {
            double m = 0.0;
            for (const PhysicalField& f : ph) m += f.at(p) * f.at(p);
            return std::sqrt(m);
        }));
        for (double hs : cfg.hs_list) row.push_back(compute_norm(s.u, NormSpec::hs(hs)));
        for (double q : cfg.lq_list) {
            double acc = 0.0;
            for (const PhysicalField& f : ph)
                acc += g.point_weight() * par::deterministic_sum(np, [&](std::int64_t p) {
                    return std::pow(std::abs(f.at(p)), q);
                });
            row.push_back(std::pow(acc, 1.0 / q));
        }
        // shell fraction
        {
            const double h = g.spacing();
            const double half = 0.5 * g.length;
            const double rim = 0.45 * g.length;
            auto mag2 = [&](std::int64_t p) {
                double m = 0.0;
                for (const PhysicalField& f : ph) m += f.at(p) * f.at(p);
                return m;
            };
            const double total = par::deterministic_sum(np, mag2);
            double frac = 0.0;
            if (total > 0.0) {
                const double shell = par::deterministic_sum(np, [&](std::int64_t p) {
                    std::int64_t r = p;
                    for (int d = 0; d < g.dim; ++d) {
                        const double x = static_cast<double>(r % g.n) * h;
                        if (std::abs(x - half) > rim) return mag2(p);
                        r /= g.n;
                    }
                    return 0.0;
                });
                frac = shell / total;
            }
            row.push_back(frac);
        }
        row.push_back(s.dissipation);
        series.append(s.t, row);
    }
};

}  // namespace

Trajectory run(const SolverConfig& cfg) {
    cfg.validate();
    Trajectory traj;
    traj.config = cfg;

    SolverState state = make_initial_state(cfg);
    traj.initial_l2 = compute_norm(state.u, NormSpec::l2());

    Recorder rec{cfg, traj.norms};
    traj.norms.names = rec.make_names();

    const bool disk = !cfg.output_dir.empty();
    std::filesystem::path snapdir;
    if (disk) {
        snapdir = std::filesystem::path(cfg.output_dir) / "snapshots";
        std::filesystem::create_directories(snapdir);
    }
    auto take_snapshot = [&](const SolverState& s) {
        Snapshot snap;
        snap.t = s.t;
        if (disk) {
            char name[64];
            std::snprintf(name, sizeof name, "snap_%06ld.lray", static_cast<long>(traj.snaps.size()));
            snap.path = (snapdir / name).string();
            write_checkpoint(snap.path, s.u, s.t);
        }
        snap.cached = std::make_shared<VelocityField>(s.u);
        if (disk && s.u.grid().n > 64) snap.cached.reset();  // large fields reload on demand
        traj.snaps.push_back(std::move(snap));
    };

    rec.record(state);
    take_snapshot(state);

    const double geo = std::pow(2.0, 0.25);
    double next_snap_target = cfg.snapshot_first;

    Stepper stepper(cfg.grid, cfg.resolved_delta(), cfg.dealias, cfg.nonlinear);
    const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
    bool first = true;
    while (state.t < cfg.t_end - t_eps) {
        double dt;
        if (cfg.time.fixed) {
            dt = cfg.time.dt;
        } else {
            const double sup = compute_norm(state.u, NormSpec::sup());
            dt = sup > 0.0 ? cfg.time.cfl * cfg.grid.spacing() / sup : cfg.time.dt;
        }
        dt = std::min(dt, cfg.t_end - state.t);
        if (first) {
            traj.first_dt = dt;
            first = false;
        }
        try {
            stepper.advance(state, dt);
        } catch (const SolverBlowup& e) {
            traj.aborted = true;
            traj.abort_reason = e.what();
            break;
        }
        const bool done = state.t >= cfg.t_end - t_eps;
        if (state.step_count % cfg.record_every == 0 || done) rec.record(state);
        bool want_snap = done;
        if (cfg.snapshot_every > 0) {
            want_snap = want_snap || state.step_count % cfg.snapshot_every == 0;
        } else if (state.t >= next_snap_target) {
            want_snap = true;
            while (next_snap_target <= state.t) next_snap_target *= geo;
        }
        if (want_snap) take_snapshot(state);
    }
    return traj;
}

namespace {

/// Cumulative integral of sampled data: each interval is integrated by the
/// Lagrange cubic through its four nearest samples (one-sided at the ends),
/// giving 4th-order accuracy. Two samples fall back to the trapezoid.
std::vector<double> cumulative_integral(const std::vector<double>& t,
                                        const std::vector<double>& f) {
    const std::size_t n = t.size();
    std::vector<double> acc(n, 0.0);
    if (n < 2) return acc;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double piece;
        if (n < 4) {
            piece = 0.5 * (t[i + 1] - t[i]) * (f[i] + f[i + 1]);
        } else {
            std::size_t lo = i >= 1 ? i - 1 : 0;
            lo = std::min(lo, n - 4);
            // integral over [t_i, t_{i+1}] of the cubic through lo..lo+3
            piece = 0.0;
            for (int k = 0; k < 4; ++k) {
                // integrate the k-th Lagrange basis with 4-pt Gauss-Legendre,
                // exact for cubics
                static const double xg[4] = {-0.861136311594052575, -0.339981043584856265,
                                             0.339981043584856265, 0.861136311594052575};
                static const double wg[4] = {0.347854845137453857, 0.652145154862546143,
                                             0.652145154862546143, 0.347854845137453857};
                const double a = t[i], b = t[i + 1];
                double integ = 0.0;
                for (int q = 0; q < 4; ++q) {
                    const double x = 0.5 * (a + b) + 0.5 * (b - a) * xg[q];
                    double l = 1.0;
                    for (int m = 0; m < 4; ++m)
                        if (m != k)
                            l *= (x - t[lo + static_cast<std::size_t>(m)]) /
                                 (t[lo + static_cast<std::size_t>(k)] -
                                  t[lo + static_cast<std::size_t>(m)]);
                    integ += wg[q] * l;
                }
                piece += 0.5 * (b - a) * integ * f[lo + static_cast<std::size_t>(k)];
            }
        }
        acc[i + 1] = acc[i] + piece;
    }
    return acc;
}

}  // namespace

EnergyReport energy_audit(const Trajectory& traj, double tol_rel) {
    const NormSeries& s = traj.norms;
    if (s.size() == 0) throw std::invalid_argument("energy_audit: empty norm series");
    EnergyReport rep;
    const double l2_0 = s.value(0, "l2");
    const double e0 = l2_0 * l2_0;
    rep.tolerance = tol_rel * e0;
    std::vector<double> g(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dl2 = s.value(i, "dl2");
        g[i] = dl2 * dl2;
    }
    const std::vector<double> integral = cumulative_integral(s.t, g);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double l2 = s.value(i, "l2");
        const double defect = l2 * l2 + 2.0 * integral[i] - e0;
        const double defect_int = l2 * l2 + 2.0 * s.value(i, "diss_int") - e0;
        const bool pass = defect <= rep.tolerance;
        rep.rows.push_back({s.t[i], defect, defect_int, pass});
        rep.max_abs_defect = std::max(rep.max_abs_defect, std::abs(defect));
        rep.max_defect = std::max(rep.max_defect, defect);
        rep.pass = rep.pass && pass;
    }
    return rep;
}

}  // namespace leray
