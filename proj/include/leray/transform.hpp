#pragma once

#include <memory>

#include "leray/field.hpp"

namespace leray {

/// FFT engine for one grid geometry, cached per (dim, n).
///
/// The working path decomposes the transform into per-slab and per-pencil
/// serial FFTW kernels driven by OpenMP loops; every output element is
/// produced by exactly one serial kernel chain, so results are bit-identical
/// for any thread count. A monolithic single-call FFTW plan is kept as the
/// serial reference and is compared against the working path in the tests
/// and the benchmark.
///
/// forward/backward compute plain unnormalized DFT sums (FFTW convention);
/// normalization lives in to_spectral/to_physical.
class Transform {
  public:
    static std::shared_ptr<const Transform> get(const Grid& g);

    ~Transform();
    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    void forward(const double* in, cplx* out) const;
    /// Does not modify `in` (works on an internal scaled copy).
    void backward(const cplx* in, double* out, double scale) const;

    void forward_reference(const double* in, cplx* out) const;
    void backward_reference(const cplx* in, double* out, double scale) const;

    const Grid& grid() const { return grid_; }

  private:
    explicit Transform(const Grid& g);
    Grid grid_;
    struct Plans;
    std::unique_ptr<Plans> p_;
};

/// Forward transform with the Parseval-matching normalization. Rejects
/// non-finite input.
SpectralField to_spectral(const PhysicalField& f);

/// Inverse transform. Rejects coefficients that break the Hermitian
/// symmetry a real field must satisfy (checked on the self-conjugate
/// kx = 0 and kx = n/2 planes).
PhysicalField to_physical(const SpectralField& f);

/// Max relative Hermitian-symmetry violation on the self-conjugate planes.
double hermitian_defect(const SpectralField& f);

}  // namespace leray
