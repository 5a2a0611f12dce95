#include "nonspam/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "nonspam/error.hpp"

namespace nonspam {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    last_start_ = start;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw FormatError(std::string("PGM ") + what + " is too large", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("expected PGM ") + what, start);
    return value;
  }

  /// Offset where the most recent number began.
  std::size_t last_start() const noexcept { return last_start_; }

  // Exactly one whitespace byte separates the header from binary data.
  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError("expected whitespace after PGM header", pos_);
    }
    ++pos_;
  }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
  std::size_t last_start_ = 2;
};

}  // namespace

PgmImage parse_pgm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError("not a PNM file (missing 'P' magic)", 0);
  const char kind = static_cast<char>(bytes[1]);
  if (kind == '3' || kind == '6' || kind == '1' || kind == '4' || kind == '7') {
    throw UnsupportedFormatError(std::string("unsupported PNM variant P") + kind + ": only grayscale P2/P5 is read");
  }
  if (kind != '2' && kind != '5') throw FormatError("unknown PNM magic", 1);

  HeaderReader header(bytes);
  const unsigned long width = header.number("width");
  const std::size_t width_offset = header.last_start();
  const unsigned long height = header.number("height");
  const std::size_t height_offset = header.last_start();
  const unsigned long maxval = header.number("maxval");
  const std::size_t maxval_offset = header.last_start();
  if (width == 0) throw FormatError("PGM width must be positive", width_offset);
  if (height == 0) throw FormatError("PGM height must be positive", height_offset);
  if (maxval == 0 || maxval > 65535) throw FormatError("PGM maxval must lie in [1, 65535]", maxval_offset);

  PgmImage result;
  result.maxval = static_cast<unsigned>(maxval);
  result.image = Image(PixelGrid(height, width));
  auto pixels = result.image.pixels.values();

  if (kind == '5') {
    header.single_whitespace();
    const std::size_t width_bytes = maxval > 255 ? 2 : 1;
    std::size_t pos = header.offset();
    const std::size_t needed = pixels.size() * width_bytes;
    if (bytes.size() - pos < needed) throw FormatError("PGM pixel data is truncated", bytes.size());
    for (auto& v : pixels) {
      unsigned value = bytes[pos++];
      if (width_bytes == 2) value = (value << 8) | bytes[pos++];
      if (value > maxval) throw FormatError("PGM sample exceeds maxval", pos - width_bytes);
      v = static_cast<double>(value);
    }
  } else {
    for (auto& v : pixels) {
      header.skip_space_and_comments();
      const std::size_t at = header.offset();
      if (header.at_end()) throw FormatError("PGM pixel data is truncated", at);
      const unsigned long value = header.number("sample");
      if (value > maxval) throw FormatError("PGM sample exceeds maxval", at);
      v = static_cast<double>(value);
    }
  }
  return result;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error while reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error while writing " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::vector<unsigned char>(text.begin(), text.end()));
}

PgmImage read_pgm(const std::filesystem::path& path) {
  try {
    return parse_pgm(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.message(), e.offset());
  }
}

std::vector<unsigned char> encode_pgm(const Image& image, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) throw DomainError("PGM maxval must lie in [1, 65535]");
  const std::string header = "P5\n" + std::to_string(image.grid.cols) + " " + std::to_string(image.grid.rows) +
                             "\n" + std::to_string(maxval) + "\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  const bool wide = maxval > 255;
  for (double v : image.pixels.values()) {
    const double clamped = std::clamp(std::isnan(v) ? 0.0 : v, 0.0, static_cast<double>(maxval));
    const auto q = static_cast<unsigned>(std::floor(clamped + 0.5));
    if (wide) bytes.push_back(static_cast<unsigned char>(q >> 8));
    bytes.push_back(static_cast<unsigned char>(q & 0xFF));
  }
  return bytes;
}

void write_pgm(const std::filesystem::path& path, const Image& image, unsigned maxval) {
  write_file(path, encode_pgm(image, maxval));
}

}  // namespace nonspam
