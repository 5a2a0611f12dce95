#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "nonspam/coeff_file.hpp"
#include "nonspam/config.hpp"
#include "nonspam/error.hpp"
#include "nonspam/pgm.hpp"
#include "test_util.hpp"

namespace nonspam {
namespace {

std::vector<unsigned char> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nonspam_io_" + std::to_string(::getpid()) + "_" + name);
}

template <class Fn>
std::size_t format_offset(Fn&& fn) {
  try {
    fn();
  } catch (const FormatError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no FormatError raised";
  return 0;
}

TEST(Pgm, AsciiWithComments) {
  const auto pgm = parse_pgm(bytes_of("P2\n# comment\n3 2\n# another\n10\n0 1 2\n3 4 10\n"));
  EXPECT_EQ(pgm.maxval, 10u);
  ASSERT_EQ(pgm.image.grid, PixelGrid(2, 3));
  EXPECT_EQ(pgm.image.pixels(0, 2), 2.0);
  EXPECT_EQ(pgm.image.pixels(1, 0), 3.0);
  EXPECT_EQ(pgm.image.pixels(1, 2), 10.0);
}

TEST(Pgm, Binary8Bit) {
  std::vector<unsigned char> bytes = bytes_of("P5 2 2 255\n");
  for (unsigned char v : {0, 128, 255, 7}) bytes.push_back(v);
  const auto pgm = parse_pgm(bytes);
  EXPECT_EQ(pgm.image.pixels(0, 1), 128.0);
  EXPECT_EQ(pgm.image.pixels(1, 0), 255.0);
  EXPECT_EQ(pgm.image.pixels(1, 1), 7.0);
}

TEST(Pgm, Binary16BitBigEndian) {
  std::vector<unsigned char> bytes = bytes_of("P5\n2 1\n65535\n");
  for (unsigned char v : {0x01, 0x02, 0xFF, 0xFF}) bytes.push_back(v);
  const auto pgm = parse_pgm(bytes);
  EXPECT_EQ(pgm.maxval, 65535u);
  EXPECT_EQ(pgm.image.pixels[0], 258.0);
  EXPECT_EQ(pgm.image.pixels[1], 65535.0);
}

TEST(Pgm, UnsupportedVariants) {
  for (const char* magic : {"P1", "P3", "P4", "P6", "P7"}) {
    EXPECT_THROW(parse_pgm(bytes_of(std::string(magic) + "\n1 1\n255\n\x01")), UnsupportedFormatError) << magic;
  }
}

TEST(Pgm, ErrorOffsets) {
  EXPECT_EQ(format_offset([] { parse_pgm(bytes_of("GIF89a")); }), 0u);
  EXPECT_EQ(format_offset([] { parse_pgm(bytes_of("P9\n")); }), 1u);
  EXPECT_EQ(format_offset([] { parse_pgm(bytes_of("P5\nx")); }), 3u);
  EXPECT_EQ(format_offset([] { parse_pgm(bytes_of("P5\n2 2\n255\n\x01\x02")); }), 13u);
  EXPECT_EQ(format_offset([] { parse_pgm(bytes_of("P2\n2 1\n9\n3 12\n")); }), 11u);
  EXPECT_EQ(format_offset([] { parse_pgm(bytes_of("P2\n2 1\n0\n0 0\n")); }), 7u);
}

TEST(Pgm, EncodeClampsAndRounds) {
  const PixelGrid grid(1, 5);
  Image f(grid);
  f.pixels[0] = -3.0;
  f.pixels[1] = 2.5;
  f.pixels[2] = 2.49;
  f.pixels[3] = 300.0;
  f.pixels[4] = NAN;
  const auto bytes = encode_pgm(f);
  const std::string header = "P5\n5 1\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 5);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(header.size())), header);
  const unsigned char* px = bytes.data() + header.size();
  EXPECT_EQ(px[0], 0);
  EXPECT_EQ(px[1], 3);
  EXPECT_EQ(px[2], 2);
  EXPECT_EQ(px[3], 255);
  EXPECT_EQ(px[4], 0);
}

TEST(Pgm, RoundTrip16Bit) {
  const auto original = read_pgm(testing::data_path("disk64_16bit.pgm"));
  EXPECT_EQ(original.maxval, 65535u);
  const auto again = parse_pgm(encode_pgm(original.image, original.maxval));
  EXPECT_EQ(again.image.pixels, original.image.pixels);
}

TEST(Pgm, CorpusLoads) {
  for (const auto& name : testing::corpus()) {
    const auto pgm = read_pgm(testing::data_path(name));
    EXPECT_GT(pgm.image.grid.size(), 0u) << name;
  }
  EXPECT_EQ(read_pgm(testing::data_path("moon48x80.pgm")).image.grid, PixelGrid(48, 80));
}

TEST(Pgm, MissingFileIsIoError) {
  EXPECT_THROW(read_pgm("/nonexistent/dir/image.pgm"), IoError);
}

TEST(Pgm, PathInFormatMessage) {
  const auto path = temp_path("bad.pgm");
  write_text_file(path, "P5\n2 2\n255\n");
  try {
    read_pgm(path);
    ADD_FAILURE();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
    EXPECT_EQ(std::string(e.what()).find("at byte", std::string(e.what()).find("at byte") + 1), std::string::npos);
  }
  std::filesystem::remove(path);
}

ActivationTensor sample_tensor() {
  ActivationTensor acts;
  acts.grid = PixelGrid(2, 3);
  acts.time_bins = {0.25, 0.5};
  for (int j = 0; j < 2; ++j) {
    RealArray plane(2, 3);
    for (std::size_t i = 0; i < 6; ++i) plane[i] = (j + 1) * 1.5 - static_cast<double>(i);
    acts.coeffs.push_back(plane);
  }
  return acts;
}

std::uint32_t u32_at(const std::vector<unsigned char>& b, std::size_t at) {
  return std::uint32_t(b[at]) | std::uint32_t(b[at + 1]) << 8 | std::uint32_t(b[at + 2]) << 16 |
         std::uint32_t(b[at + 3]) << 24;
}

double f64_at(const std::vector<unsigned char>& b, std::size_t at) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = bits << 8 | b[at + static_cast<std::size_t>(i)];
  return std::bit_cast<double>(bits);
}

TEST(Nspm, ByteLayout) {
  const auto bytes = encode_nspm(sample_tensor());
  ASSERT_EQ(bytes.size(), 20u + 8u * 2u + 8u * 12u);
  EXPECT_EQ(bytes[0], 0x4E);
  EXPECT_EQ(bytes[1], 0x53);
  EXPECT_EQ(bytes[2], 0x50);
  EXPECT_EQ(bytes[3], 0x4D);
  EXPECT_EQ(u32_at(bytes, 4), 1u);
  EXPECT_EQ(u32_at(bytes, 8), 2u);
  EXPECT_EQ(u32_at(bytes, 12), 3u);
  EXPECT_EQ(u32_at(bytes, 16), 2u);
  EXPECT_EQ(f64_at(bytes, 20), 0.25);
  EXPECT_EQ(f64_at(bytes, 28), 0.5);
  EXPECT_EQ(f64_at(bytes, 36), 1.5);
  EXPECT_EQ(f64_at(bytes, 36 + 8 * 6 + 8), 2.0);
}

TEST(Nspm, RoundTrip) {
  const auto acts = sample_tensor();
  const auto back = decode_nspm(encode_nspm(acts));
  EXPECT_EQ(back.grid, acts.grid);
  EXPECT_EQ(back.time_bins, acts.time_bins);
  ASSERT_EQ(back.bins(), 2u);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(back.coeffs[j], acts.coeffs[j]);
}

TEST(Nspm, Rejections) {
  const auto good = encode_nspm(sample_tensor());
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(format_offset([&] { decode_nspm(bad_magic); }), 0u);
  auto bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(format_offset([&] { decode_nspm(bad_version); }), 4u);
  auto truncated = good;
  truncated.pop_back();
  EXPECT_THROW(decode_nspm(truncated), FormatError);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(decode_nspm(trailing), FormatError);
  EXPECT_THROW(decode_nspm({}), FormatError);
}

TEST(Nspm, FileRoundTrip) {
  const auto path = temp_path("acts.nspm");
  write_nspm(path, sample_tensor());
  EXPECT_EQ(read_nspm(path).coeffs[1], sample_tensor().coeffs[1]);
  std::filesystem::remove(path);
}

TEST(ConfigText, Defaults) {
  const Config c = parse_config("");
  EXPECT_EQ(c.params.tau_C, 0.020);
  EXPECT_EQ(c.params.tau_S, 0.004);
  EXPECT_EQ(c.params.tau_G, 0.005);
  EXPECT_EQ(c.params.gamma_order_n, 0u);
  EXPECT_EQ(c.params.w_C, 0.75);
  EXPECT_EQ(c.params.w_S, 1.0);
  EXPECT_EQ(c.params.sigma_c, 0.5);
  EXPECT_EQ(c.params.sigma_s, 1.5);
  EXPECT_EQ(c.dt, 5e-5);
  EXPECT_EQ(c.t_max, 0.5);
  EXPECT_EQ(c.m, 5u);
  EXPECT_FALSE(c.time_bins.has_value());
  EXPECT_EQ(c.solver.mode, SolverMode::GradientDescent);
  EXPECT_FALSE(c.solver.step_size.has_value());
}

TEST(ConfigText, ParsesKeysAndComments) {
  const Config c = parse_config(
      "# retina\n"
      "tau_C = 0.03   # slower feedback\n"
      "gamma_order_n = 2\n"
      "time_bins = 0.01, 0.02,0.05\n"
      "solver = fourier-dual\n"
      "mask_semantics = zero-fill\n"
      "step_size = 0.5\n"
      "init = dc-estimate\n"
      "seed = 99\n");
  EXPECT_EQ(c.params.tau_C, 0.03);
  EXPECT_EQ(c.params.gamma_order_n, 2u);
  ASSERT_TRUE(c.time_bins.has_value());
  EXPECT_EQ(*c.time_bins, (std::vector<double>{0.01, 0.02, 0.05}));
  EXPECT_EQ(c.solver.mode, SolverMode::FourierDual);
  EXPECT_EQ(c.solver.mask_semantics, MaskSemantics::ZeroFill);
  EXPECT_EQ(c.solver.step_size.value(), 0.5);
  EXPECT_EQ(c.solver.init, InitMode::DcEstimate);
  EXPECT_EQ(c.seed, 99u);
}

TEST(ConfigText, Rejections) {
  EXPECT_THROW(parse_config("tau_X = 1\n"), DomainError);
  EXPECT_THROW(parse_config("m = 3\nm = 4\n"), DomainError);
  EXPECT_THROW(parse_config("m = -1\n"), DomainError);
  EXPECT_THROW(parse_config("m = 0\n"), DomainError);
  EXPECT_THROW(parse_config("tau_C = fast\n"), DomainError);
  EXPECT_THROW(parse_config("solver = newton\n"), DomainError);
  EXPECT_THROW(parse_config("just words\n"), DomainError);
  EXPECT_THROW(parse_config("gamma_order_n = 171\n"), DomainError);
  try {
    parse_config("\n\nbogus = 1\n");
    ADD_FAILURE();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(NumberList, Parsing) {
  EXPECT_EQ(parse_number_list("1,2.5, -3e-2"), (std::vector<double>{1.0, 2.5, -0.03}));
  EXPECT_THROW(parse_number_list(""), DomainError);
  EXPECT_THROW(parse_number_list("1,,2"), DomainError);
  EXPECT_THROW(parse_number_list("1,x"), DomainError);
  EXPECT_THROW(parse_number_list("1,inf"), DomainError);
}

TEST(Bins, ExplicitListOverridesCount) {
  Config c;
  c.time_bins = std::vector<double>{0.01, 0.2};
  const auto filter = build_filter(c, PixelGrid(4, 4));
  EXPECT_EQ(filter.bins(), 2u);
  EXPECT_EQ(filter.time_bins(), (std::vector<double>{0.01, 0.2}));
}

}  // namespace
}  // namespace nonspam
