#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dqmotion/encoding.hpp"

namespace dqm {

// Encoded-clip container, all integers and floats little-endian:
//
//   off  size  field
//     0     4  magic "DQMC"
//     4     4  u32 version (1)
//     8     4  u32 kind tag (0 positions, 1 quaternions, 2 ortho6d,
//              3 quaternions_positions, 4 dualquat, 5 ortho6d_positions)
//    12     4  u32 J, encoded joint count
//    16     4  u32 D, block dimension
//    20     4  u32 flags, bit 0 = standardization stats present
//    24     8  u64 F, frame count
//    32     8  f64 frame time in seconds
//    40     8  u64 skeleton digest (FNV-1a of the hierarchy text)
//    48     8  u64 L, hierarchy text length
//    56     L  BVH HIERARCHY text of the skeleton
//     .  8F W  f64 features, row-major, W = 3 + D J
//     .  16 W  f64 mean then std, only when flag bit 0 is set
inline constexpr std::uint32_t kContainerVersion = 1;

std::string write_container(const EncodedClip& clip);
// Throws FormatError on any structural problem.
EncodedClip read_container(std::string_view bytes);

void write_container_file(const std::filesystem::path& path, const EncodedClip& clip);
EncodedClip read_container_file(const std::filesystem::path& path);

// Diagnostic JSON view of a clip. Numbers are printed with 17 significant
// digits but the dump is not meant for exchange.
std::string container_json(const EncodedClip& clip);

// Writes to a sibling temporary file and renames it over the target, so the
// target either holds the full payload or is untouched.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace dqm
