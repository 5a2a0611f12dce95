#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nonspam/frame.hpp"

namespace nonspam {

/// NSPM coefficient container, little-endian throughout:
///
///   offset  size        field
///   0       4           magic "NSPM" (4E 53 50 4D)
///   4       4           u32 format version (1)
///   8       4           u32 rows
///   12      4           u32 cols
///   16      4           u32 m (time bins)
///   20      8 m         f64 time stamps, seconds
///   20+8m   8 m rows cols  f64 coefficients, bin-major then row-major
inline constexpr std::uint32_t kNspmVersion = 1;

std::vector<unsigned char> encode_nspm(const ActivationTensor& acts);
ActivationTensor decode_nspm(const std::vector<unsigned char>& bytes);

void write_nspm(const std::filesystem::path& path, const ActivationTensor& acts);
ActivationTensor read_nspm(const std::filesystem::path& path);

}  // namespace nonspam
