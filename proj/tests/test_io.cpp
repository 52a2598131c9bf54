#include <gtest/gtest.h>

#include <complex>
#include <filesystem>
#include <limits>
#include <vector>

#include "raf/io.hpp"

namespace fs = std::filesystem;
using cplx = std::complex<double>;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("raf_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Io, AtomicWriteRoundTrip) {
  const auto dir = scratch_dir("atomic");
  const std::string payload("a\0b\nc", 5);
  raf::io::atomic_write(dir / "f.bin", payload);
  EXPECT_EQ(raf::io::read_file(dir / "f.bin"), payload);
  EXPECT_FALSE(fs::exists(dir / "f.bin.tmp"));
  raf::io::atomic_write(dir / "f.bin", "x");
  EXPECT_EQ(raf::io::read_file(dir / "f.bin"), "x");
  EXPECT_THROW(raf::io::read_file(dir / "missing"), std::runtime_error);
  EXPECT_THROW(raf::io::atomic_write(dir / "no" / "such" / "f", "x"), std::runtime_error);
}

TEST(Io, PointEncodingIsLittleEndianFloat64) {
  const std::vector<cplx> pts{cplx(1.0, -2.0)};
  const auto bytes = raf::io::encode_points(pts);
  ASSERT_EQ(bytes.size(), 16u);
  // 1.0 = 0x3FF0000000000000, stored low byte first.
  EXPECT_EQ(static_cast<unsigned char>(bytes[6]), 0xF0u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[7]), 0x3Fu);
  // -2.0 = 0xC000000000000000.
  EXPECT_EQ(static_cast<unsigned char>(bytes[15]), 0xC0u);
}

TEST(Io, PointRoundTripPreservesBits) {
  const std::vector<cplx> pts{cplx(0.1, -0.0), cplx(std::numeric_limits<double>::denorm_min(), 1e308),
                              cplx(-3.5, std::numeric_limits<double>::infinity())};
  const auto back = raf::io::decode_points(raf::io::encode_points(pts));
  ASSERT_EQ(back.size(), pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[k].real()), std::bit_cast<std::uint64_t>(pts[k].real()));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[k].imag()), std::bit_cast<std::uint64_t>(pts[k].imag()));
  }
  EXPECT_THROW(raf::io::decode_points(std::string(15, '\0')), std::runtime_error);
  EXPECT_TRUE(raf::io::decode_points("").empty());
}

TEST(Io, WindowJson) {
  const auto j = raf::io::window_json(raf::Window{-1.5, 2.0, -0.5, 0.25});
  EXPECT_EQ(j.dump(), R"({"xmin":-1.5,"xmax":2.0,"ymin":-0.5,"ymax":0.25})");
}

TEST(Io, WriteRasterSidecar) {
  const auto dir = scratch_dir("raster");
  raf::RasterGrid<std::uint64_t> g(raf::Window{}, 3, 3);
  g.add(cplx(0.0, 0.0), 7);
  raf::io::write_raster(dir, "r", g, raf::PgmScaling::Log, {{"degree", 13}});
  EXPECT_EQ(raf::io::read_file(dir / "r.pgm"), g.to_pgm());
  const auto side = raf::io::json::parse(raf::io::read_file(dir / "r.json"));
  EXPECT_EQ(side["width"], 3);
  EXPECT_EQ(side["height"], 3);
  EXPECT_EQ(side["max_value"], 7.0);
  EXPECT_EQ(side["degree"], 13);
  EXPECT_EQ(side["window"]["xmax"], 1.0);
}
