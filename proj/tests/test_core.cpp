#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "sdrct/io.hpp"
#include "sdrct/types.hpp"

using namespace sdrct;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "sdrct_core_tests";
  fs::create_directories(dir);
  return dir;
}

Volume random_volume(const GridGeometry& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 2.0);
  Volume v(g);
  for (auto& slice : v.slices) {
    for (Eigen::Index i = 0; i < slice.values.size(); ++i) {
      slice.values(i) = uniform(rng);
    }
  }
  return v;
}

}  // namespace

TEST_CASE("geometry validation") {
  auto g = GridGeometry::uniform(16, 30, 4);
  CHECK(g.angles.size() == 30);
  CHECK(g.detector_count == 16);
  CHECK(g.angles[1] == doctest::Approx(M_PI / 30).epsilon(1e-14));

  GridGeometry bad = g;
  bad.angles[5] = bad.angles[4];  // not strictly increasing
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = g;
  bad.angles[5] += 1e-9;  // breaks uniform spacing
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CHECK_THROWS_AS(GridGeometry::uniform(0, 10), std::invalid_argument);
}

TEST_CASE("volume write: zero case") {
  auto g = GridGeometry::uniform(2, 1, 1);
  Volume v(g);
  const auto path = (temp_dir() / "zero.vol").string();
  write_volume(v, path);

  std::ifstream in(path, std::ios::binary);
  std::vector<char> payload((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  REQUIRE(payload.size() == 16);
  for (char c : payload) CHECK(c == 0);

  std::ifstream header(header_path(path));
  std::string text((std::istreambuf_iterator<char>(header)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("\"dims\"") != std::string::npos);
  CHECK(text.find("2") != std::string::npos);
}

TEST_CASE("volume round-trip is identity after f32 rounding") {
  auto g = GridGeometry::uniform(8, 1, 3, 1.0);
  Volume v = random_volume(g, 7);
  const auto path = (temp_dir() / "rt.vol").string();
  write_volume(v, path);
  Volume r = read_volume(path);

  CHECK(r.geometry.side_length == 8);
  CHECK(r.geometry.slice_count == 3);
  CHECK(r.geometry.pixel_size == 1.0);
  for (int l = 0; l < 3; ++l) {
    for (Eigen::Index i = 0; i < r.slices[l].values.size(); ++i) {
      CHECK(r.slices[l].values(i) == double(float(v.slices[l].values(i))));
    }
  }

  // A second round-trip is exact (values are already f32-representable).
  write_volume(r, path);
  Volume r2 = read_volume(path);
  for (int l = 0; l < 3; ++l) {
    CHECK((r2.slices[l].values == r.slices[l].values).all());
  }
}

TEST_CASE("volume header preserves pixel_size") {
  auto g = GridGeometry::uniform(4, 1, 2, 1.0);
  const auto path = (temp_dir() / "ps.vol").string();
  write_volume(Volume(g), path);
  CHECK(read_volume(path).geometry.pixel_size == 1.0);

  auto g2 = GridGeometry::uniform(4, 1, 2, 0.25);
  write_volume(Volume(g2), path);
  CHECK(read_volume(path).geometry.pixel_size == 0.25);
}

TEST_CASE("truncated payload is a payload size mismatch") {
  auto g = GridGeometry::uniform(4, 1, 2);
  const auto path = (temp_dir() / "trunc.vol").string();
  write_volume(random_volume(g, 3), path);
  fs::resize_file(path, fs::file_size(path) - 5);
  try {
    read_volume(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.code() == IoErrorCode::payload_size_mismatch);
  }
}

TEST_CASE("kind mismatch: volume file into read_sinogram") {
  auto g = GridGeometry::uniform(4, 1, 2);
  const auto path = (temp_dir() / "kind.vol").string();
  write_volume(Volume(g), path);
  try {
    read_sinogram(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.code() == IoErrorCode::kind_mismatch);
  }
}

TEST_CASE("malformed and mismatched headers are distinct errors") {
  auto g = GridGeometry::uniform(4, 1, 2);
  const auto path = (temp_dir() / "hdr.vol").string();
  write_volume(Volume(g), path);

  {
    std::ofstream h(header_path(path));
    h << "{ not json";
  }
  try {
    read_volume(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.code() == IoErrorCode::malformed_header);
  }

  {
    std::ofstream h(header_path(path));
    h << R"({"dims":[4,4,2],"dtype":"f64le","pixel_size":1.0,"kind":"volume"})";
  }
  try {
    read_volume(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.code() == IoErrorCode::dtype_mismatch);
  }

  {
    std::ofstream h(header_path(path));
    h << R"({"dims":[4,4,2],"dtype":"f32le","pixel_size":1.0,"kind":"volume","extra":1})";
  }
  try {
    read_volume(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.code() == IoErrorCode::malformed_header);
  }
}

TEST_CASE("sinogram round-trip with all-valid mask") {
  auto g = GridGeometry::uniform(6, 5, 3);
  SinogramStack s(g);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uniform(-2.0, 2.0);
  for (auto& plane : s.data) {
    for (Eigen::Index i = 0; i < plane.size(); ++i) plane(i) = uniform(rng);
  }
  const auto path = (temp_dir() / "rt.sino").string();
  write_sinogram(s, path);
  SinogramStack r = read_sinogram(path);

  CHECK(r.geometry.same_grid(g));
  CHECK(r.mask.all());
  for (int l = 0; l < 3; ++l) {
    for (Eigen::Index i = 0; i < r.data[l].size(); ++i) {
      CHECK(r.data[l](i) == double(float(s.data[l](i))));
    }
  }
}

TEST_CASE("sinogram round-trip preserves an edge mask exactly") {
  auto g = GridGeometry::uniform(8, 4, 2);
  SinogramStack s(g);
  for (int l = 0; l < 2; ++l) {
    for (int a = 0; a < 4; ++a) {
      s.mask.valid[l](0, a) = false;
      s.mask.valid[l](1, a) = false;
      s.mask.valid[l](7, a) = false;
      for (int d = 0; d < 8; ++d) s.data[l](d, a) = d + 10.0 * a;
    }
  }
  s.zero_invalid();
  const auto path = (temp_dir() / "mask.sino").string();
  write_sinogram(s, path);
  SinogramStack r = read_sinogram(path);
  for (int l = 0; l < 2; ++l) {
    CHECK((r.mask.valid[l] == s.mask.valid[l]).all());
    // invalid entries come back as zeros
    CHECK(r.data[l](0, 0) == 0.0);
    CHECK(r.data[l](2, 1) == doctest::Approx(12.0));
  }
}

TEST_CASE("mask edge-contiguity is enforced on construction and read") {
  auto g = GridGeometry::uniform(8, 2, 1);
  SinogramStack s(g);
  s.mask.valid[0](3, 0) = false;  // interior hole
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  // An interior hole written through the raw bit plane is rejected on read.
  s.mask.valid[0](3, 0) = true;
  const auto path = (temp_dir() / "hole.sino").string();
  write_sinogram(s, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    const std::size_t float_bytes = 8ull * 2 * 1 * sizeof(float);
    f.seekp(float_bytes);
    char byte;
    f.seekg(float_bytes);
    f.get(byte);
    byte &= ~(1 << 3);  // clear detector bin 3 of slice 0, angle 0
    f.seekp(float_bytes);
    f.put(byte);
  }
  try {
    read_sinogram(path);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(e.code() == IoErrorCode::invalid_mask);
  }
}
