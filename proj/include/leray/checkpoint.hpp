#pragma once

#include <string>

#include "leray/field.hpp"

namespace leray {

/// Binary field checkpoint. Layout, all little-endian:
///   "LRAY" | u32 version | u32 dim | u32 n | f64 length |
///   u32 component count | f64 time | raw complex-f64 coefficients,
/// one component after another, each in row-major wavevector order
/// (kz, ky, kx with kx the half-spectrum axis). Round-trips bit-exactly.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    VelocityField field;
    double time = 0.0;
};

void write_checkpoint(const std::string& path, const VelocityField& u, double time);
Checkpoint read_checkpoint(const std::string& path);

/// Structural + invariant audit of a stored checkpoint. Returns a list of
/// human-readable problems; empty means the file is sound.
std::vector<std::string> audit_checkpoint(const std::string& path);

}  // namespace leray
