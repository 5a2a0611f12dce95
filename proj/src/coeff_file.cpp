#include "nonspam/coeff_file.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "nonspam/error.hpp"
#include "nonspam/pgm.hpp"

namespace nonspam {
namespace {

constexpr unsigned char kMagic[4] = {0x4E, 0x53, 0x50, 0x4D};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<unsigned char>(v >> shift));
}

void put_f64(std::vector<unsigned char>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int shift = 0; shift < 64; shift += 8) out.push_back(static_cast<unsigned char>(bits >> shift));
}

class Cursor {
 public:
  explicit Cursor(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }

  void need(std::size_t count, const char* what) const {
    if (bytes_.size() - pos_ < count) throw FormatError(std::string("NSPM file truncated in ") + what, bytes_.size());
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * b);
    return v;
  }

  double f64(const char* what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * b);
    return std::bit_cast<double>(bits);
  }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw DomainError(std::string(what) + " exceeds u32 range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<unsigned char> encode_nspm(const ActivationTensor& acts) {
  if (acts.time_bins.size() != acts.bins()) throw DimensionError("time stamp count differs from bin count");
  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(20 + 8 * acts.bins() * (1 + acts.grid.size()));
  put_u32(out, kNspmVersion);
  put_u32(out, checked_u32(acts.grid.rows, "rows"));
  put_u32(out, checked_u32(acts.grid.cols, "cols"));
  put_u32(out, checked_u32(acts.bins(), "bin count"));
  for (double t : acts.time_bins) put_f64(out, t);
  for (const auto& plane : acts.coeffs) {
    if (plane.rows() != acts.grid.rows || plane.cols() != acts.grid.cols) {
      throw DimensionError("coefficient plane shape differs from grid");
    }
    for (double v : plane.values()) put_f64(out, v);
  }
  return out;
}

ActivationTensor decode_nspm(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw FormatError("bad NSPM magic", 0);
  }
  Cursor cursor(bytes);
  cursor.need(4, "magic");
  cursor.u32("magic");
  const std::size_t version_offset = cursor.offset();
  const std::uint32_t version = cursor.u32("version");
  if (version != kNspmVersion) {
    throw FormatError("unsupported NSPM version " + std::to_string(version), version_offset);
  }
  const std::uint32_t rows = cursor.u32("rows");
  const std::uint32_t cols = cursor.u32("cols");
  const std::size_t bins_offset = cursor.offset();
  const std::uint32_t bins = cursor.u32("bin count");
  if (rows == 0 || cols == 0) throw FormatError("NSPM grid dimensions must be positive", 8);
  if (bins == 0) throw FormatError("NSPM file holds no time bins", bins_offset);

  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  const std::size_t payload = 8 * static_cast<std::size_t>(bins) * (1 + n);
  cursor.need(payload, "payload");
  if (bytes.size() - cursor.offset() != payload) {
    throw FormatError("trailing bytes after NSPM payload", cursor.offset() + payload);
  }

  ActivationTensor acts;
  acts.grid = PixelGrid(rows, cols);
  acts.time_bins.resize(bins);
  for (auto& t : acts.time_bins) t = cursor.f64("time stamps");
  acts.coeffs.assign(bins, RealArray(rows, cols));
  for (auto& plane : acts.coeffs) {
    for (auto& v : plane.values()) v = cursor.f64("coefficients");
  }
  return acts;
}

void write_nspm(const std::filesystem::path& path, const ActivationTensor& acts) {
  write_file(path, encode_nspm(acts));
}

ActivationTensor read_nspm(const std::filesystem::path& path) {
  try {
    return decode_nspm(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.message(), e.offset());
  }
}

}  // namespace nonspam
