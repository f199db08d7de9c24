#pragma once

// DC64 vector files:
//
//   offset  size  field
//   0       4     magic "DC64"
//   4       1     format version (1)
//   5       1     element type (0 = double, 1 = int32)
//   6       8     element count, u64 little-endian
//   14      n*w   elements, little-endian (binary64 / two's-complement int32)
//
// No padding. Int64 vectors are never written.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "dotcall64/vector.hpp"

namespace dc64 {

inline constexpr char kDc64Magic[4] = {'D', 'C', '6', '4'};
inline constexpr std::uint8_t kDc64Version = 1;
inline constexpr std::size_t kDc64HeaderSize = 14;

void write_dc64(std::ostream& out, const TypedVector& v);
void write_dc64(const std::filesystem::path& path, const TypedVector& v);

/// Throws SpecError on a malformed stream.
TypedVector read_dc64(std::istream& in,
                      std::uint64_t long_threshold = kDefaultLongThreshold);
TypedVector read_dc64(const std::filesystem::path& path,
                      std::uint64_t long_threshold = kDefaultLongThreshold);

}  // namespace dc64
