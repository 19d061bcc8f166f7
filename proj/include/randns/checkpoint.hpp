#pragma once

#include <filesystem>
#include <iosfwd>

#include "randns/field.hpp"

namespace randns {

/// SNSF field checkpoint, version 1:
///   "SNSF" | u32 version | u32 d | u32 M | u32 components |
///   (f64 re, f64 im) per coefficient in storage order.
/// All integers and doubles little-endian.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& os, const SpectralField& f);
void write_checkpoint(const std::filesystem::path& path, const SpectralField& f);

/// Throws std::runtime_error on bad magic, unsupported version or truncation.
SpectralField read_checkpoint(std::istream& is);
SpectralField read_checkpoint(const std::filesystem::path& path);

}  // namespace randns
