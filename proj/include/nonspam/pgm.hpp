#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nonspam/frame.hpp"

namespace nonspam {

struct PgmImage {
  Image image;
  unsigned maxval = 255;
};

/// Parses binary (P5) or ASCII (P2) graymaps, 8- or 16-bit. Color and bitmap
/// variants raise UnsupportedFormatError; other defects raise FormatError
/// with the byte offset.
PgmImage parse_pgm(const std::vector<unsigned char>& bytes);
PgmImage read_pgm(const std::filesystem::path& path);

/// Binary P5 bytes. Values are clamped to [0, maxval] and rounded half up.
std::vector<unsigned char> encode_pgm(const Image& image, unsigned maxval = 255);
void write_pgm(const std::filesystem::path& path, const Image& image, unsigned maxval = 255);

std::vector<unsigned char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace nonspam
