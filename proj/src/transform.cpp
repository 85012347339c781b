#include "leray/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "leray/parallel.hpp"

namespace leray {

namespace {
std::mutex g_cache_mutex;  // also serializes all FFTW plan creation
std::map<std::pair<int, int>, std::shared_ptr<const Transform>>& cache() {
    static std::map<std::pair<int, int>, std::shared_ptr<const Transform>> c;
    return c;
}
}  // namespace

struct Transform::Plans {
    // working path
    fftw_plan slab_fwd = nullptr;    // 3D: 2D r2c per z-slab; 2D: 1D r2c per row
    fftw_plan slab_bwd = nullptr;    // matching c2r
    fftw_plan pencil_fwd = nullptr;  // 1D c2c along the outermost axis, in place
    fftw_plan pencil_bwd = nullptr;
    // serial reference
    fftw_plan ref_fwd = nullptr;
    fftw_plan ref_bwd = nullptr;

    std::vector<double> rbuf;
    std::vector<cplx> cbuf;

    ~Plans() {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        for (fftw_plan p : {slab_fwd, slab_bwd, pencil_fwd, pencil_bwd, ref_fwd, ref_bwd})
            if (p) fftw_destroy_plan(p);
    }
};

Transform::Transform(const Grid& g) : grid_(g), p_(std::make_unique<Plans>()) {
    g.validate();
    const int n = g.n;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

    p_->rbuf.assign(static_cast<std::size_t>(g.point_count()), 0.0);
    p_->cbuf.assign(static_cast<std::size_t>(g.coeff_count()), cplx{});
    double* r = p_->rbuf.data();
    fftw_complex* c = reinterpret_cast<fftw_complex*>(p_->cbuf.data());

    if (g.dim == 3) {
        p_->slab_fwd = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
        p_->slab_bwd = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
        p_->ref_fwd = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags);
        p_->ref_bwd = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags);
    } else {
        p_->slab_fwd = fftw_plan_dft_r2c_1d(n, r, c, flags);
        p_->slab_bwd = fftw_plan_dft_c2r_1d(n, c, r, flags);
        p_->ref_fwd = fftw_plan_dft_r2c_2d(n, n, r, c, flags);
        p_->ref_bwd = fftw_plan_dft_c2r_2d(n, n, c, r, flags);
    }
    std::vector<cplx> line(static_cast<std::size_t>(n));
    fftw_complex* lp = reinterpret_cast<fftw_complex*>(line.data());
    p_->pencil_fwd = fftw_plan_dft_1d(n, lp, lp, FFTW_FORWARD, flags);
    p_->pencil_bwd = fftw_plan_dft_1d(n, lp, lp, FFTW_BACKWARD, flags);
}

Transform::~Transform() = default;

std::shared_ptr<const Transform> Transform::get(const Grid& g) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto key = std::make_pair(g.dim, g.n);
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
    auto t = std::shared_ptr<const Transform>(new Transform(Grid(g.dim, g.n, 1.0)));
    cache()[key] = t;
    return t;
}

namespace {

// 1D c2c kernels along the outermost axis, one pencil at a time through a
// thread-local contiguous buffer.
void run_pencils(fftw_plan plan, cplx* data, std::int64_t npencil, std::int64_t stride, int n) {
    par::parallel_for(npencil, [&](std::int64_t p) {
        static thread_local std::vector<cplx> buf;
        buf.resize(static_cast<std::size_t>(n));
        cplx* base = data + p;
        for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = base[i * stride];
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                         reinterpret_cast<fftw_complex*>(buf.data()));
        for (int i = 0; i < n; ++i) base[i * stride] = buf[static_cast<std::size_t>(i)];
    });
}

}  // namespace

void Transform::forward(const double* in, cplx* out) const {
    const int n = grid_.n;
    const std::int64_t half = grid_.half();
    if (grid_.dim == 3) {
        const std::int64_t slab_r = static_cast<std::int64_t>(n) * n;
        const std::int64_t slab_c = static_cast<std::int64_t>(n) * half;
        par::parallel_for(n, [&](std::int64_t z) {
            fftw_execute_dft_r2c(p_->slab_fwd, const_cast<double*>(in + z * slab_r),
                                 reinterpret_cast<fftw_complex*>(out + z * slab_c));
        });
        run_pencils(p_->pencil_fwd, out, slab_c, slab_c, n);
    } else {
        par::parallel_for(n, [&](std::int64_t y) {
            fftw_execute_dft_r2c(p_->slab_fwd, const_cast<double*>(in + y * n),
                                 reinterpret_cast<fftw_complex*>(out + y * half));
        });
        run_pencils(p_->pencil_fwd, out, half, half, n);
    }
}

void Transform::backward(const cplx* in, double* out, double scale) const {
    const int n = grid_.n;
    const std::int64_t half = grid_.half();
    const std::int64_t nc = grid_.coeff_count();
    std::vector<cplx> tmp(static_cast<std::size_t>(nc));
    par::parallel_for(nc, [&](std::int64_t i) { tmp[static_cast<std::size_t>(i)] = in[i] * scale; });
    if (grid_.dim == 3) {
        const std::int64_t slab_r = static_cast<std::int64_t>(n) * n;
        const std::int64_t slab_c = static_cast<std::int64_t>(n) * half;
        run_pencils(p_->pencil_bwd, tmp.data(), slab_c, slab_c, n);
        par::parallel_for(n, [&](std::int64_t z) {
            fftw_execute_dft_c2r(p_->slab_bwd,
                                 reinterpret_cast<fftw_complex*>(tmp.data() + z * slab_c),
                                 out + z * slab_r);
        });
    } else {
        run_pencils(p_->pencil_bwd, tmp.data(), half, half, n);
        par::parallel_for(n, [&](std::int64_t y) {
            fftw_execute_dft_c2r(p_->slab_bwd,
                                 reinterpret_cast<fftw_complex*>(tmp.data() + y * half),
                                 out + y * n);
        });
    }
}

void Transform::forward_reference(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(p_->ref_fwd, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
}

void Transform::backward_reference(const cplx* in, double* out, double scale) const {
    const std::int64_t nc = grid_.coeff_count();
    std::vector<cplx> tmp(static_cast<std::size_t>(nc));
    for (std::int64_t i = 0; i < nc; ++i) tmp[static_cast<std::size_t>(i)] = in[i] * scale;
    fftw_execute_dft_c2r(p_->ref_bwd, reinterpret_cast<fftw_complex*>(tmp.data()), out);
}

namespace {

double forward_scale(const Grid& g) {
    // (2*pi)^(-dim/2) * h^dim
    return std::pow(2.0 * std::numbers::pi, -0.5 * g.dim) * g.point_weight();
}

double backward_scale(const Grid& g) {
    // (2*pi)^(dim/2) / L^dim
    double ld = 1.0;
    for (int d = 0; d < g.dim; ++d) ld *= g.length;
    return std::pow(2.0 * std::numbers::pi, 0.5 * g.dim) / ld;
}

}  // namespace

SpectralField to_spectral(const PhysicalField& f) {
    const Grid& g = f.grid;
    const std::int64_t np = g.point_count();
    if (static_cast<std::int64_t>(f.v.size()) != np)
        throw std::invalid_argument("to_spectral: field size does not match grid");
    bool finite = true;
    for (std::int64_t i = 0; i < np; ++i)
        if (!std::isfinite(f.v[static_cast<std::size_t>(i)])) { finite = false; break; }
    if (!finite) throw std::invalid_argument("to_spectral: non-finite value in input field");

    auto t = Transform::get(g);
    SpectralField out(g);
    t->forward(f.v.data(), out.c.data());
    const double s = forward_scale(g);
    par::parallel_for(g.coeff_count(), [&](std::int64_t i) { out.at(i) *= s; });
    return out;
}

double hermitian_defect(const SpectralField& f) {
    const Grid& g = f.grid;
    const int n = g.n;
    double cmax = 0.0;
    for (const cplx& z : f.c) cmax = std::max(cmax, std::abs(z));
    if (cmax == 0.0) return 0.0;
    double defect = 0.0;
    const int nz = g.dim == 3 ? n : 1;
    for (int kx : {0, n / 2}) {
        for (int kz = 0; kz < nz; ++kz) {
            const int mz = (n - kz) % n;
            for (int ky = 0; ky < n; ++ky) {
                const int my = (n - ky) % n;
                const cplx a = f.at(f.index(kx, ky, kz));
                const cplx b = f.at(f.index(kx, my, mz));
                defect = std::max(defect, std::abs(a - std::conj(b)));
            }
        }
    }
    return defect / cmax;
}

PhysicalField to_physical(const SpectralField& f) {
    const Grid& g = f.grid;
    if (static_cast<std::int64_t>(f.c.size()) != g.coeff_count())
        throw std::invalid_argument("to_physical: coefficient size does not match grid");
    if (hermitian_defect(f) > 1e-10)
        throw std::invalid_argument("to_physical: broken Hermitian symmetry, field is not real");
    auto t = Transform::get(g);
    PhysicalField out(g);
    t->backward(f.c.data(), out.v.data(), backward_scale(g));
    return out;
}

}  // namespace leray
