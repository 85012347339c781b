#pragma once

#include <cstdint>
#include <string>

#include "leray/field.hpp"

namespace leray {

enum class InitialKind { TaylorGreen2D, TaylorGreen3D, LocalizedRandom, FromCheckpoint };

/// Construction recipe for divergence-free initial data.
///  - taylor_green_2d/3d: classical cellular fields of unit amplitude with
///    wavenumber 2*pi/L per axis (the textbook form when L = 2*pi).
///  - localized_random: seeded random field, spectrum peaked at
///    peak_wavenumber, smooth spatial envelope of width envelope_width
///    (default L/8), re-projected until at most 1% of the energy sits in the
///    outer shell of the box; mean removed; normalized so |u|_2^2 = 2*energy.
///  - from_checkpoint: load a stored field.
struct InitialDataSpec {
    InitialKind kind = InitialKind::LocalizedRandom;
    std::uint64_t seed = 0;
    double peak_wavenumber = 1.0;
    double energy = 1.0;
    double envelope_width = 0.0;
    std::string path;
};

VelocityField generate_initial_data(const InitialDataSpec& spec, const Grid& grid);

}  // namespace leray
