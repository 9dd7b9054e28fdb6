#include "sdrct/io.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

namespace sdrct {

namespace {

using nlohmann::json;

constexpr std::int64_t kMaxElements =
    std::int64_t(1) << 40;  // 4 TiB of f32 payload, far past any real run

void check_keys(const json& j, std::initializer_list<const char*> keys,
                const std::string& path) {
  for (const char* k : keys) {
    if (!j.contains(k)) {
      throw IoError(IoErrorCode::malformed_header, path,
                    std::string("header missing key '") + k + "'");
    }
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) {
      if (it.key() == k) known = true;
    }
    if (!known) {
      throw IoError(IoErrorCode::malformed_header, path,
                    "header has unknown key '" + it.key() + "'");
    }
  }
}

json load_header(const std::string& path, const std::string& expected_kind) {
  std::ifstream in(header_path(path));
  if (!in) {
    throw IoError(IoErrorCode::open_failed, header_path(path),
                  "cannot open header");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(IoErrorCode::malformed_header, header_path(path),
                  std::string("header parse failure: ") + e.what());
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw IoError(IoErrorCode::malformed_header, header_path(path),
                  "header missing kind");
  }
  if (j["kind"] != expected_kind) {
    throw IoError(IoErrorCode::kind_mismatch, path,
                  "kind mismatch: expected '" + expected_kind + "', got '" +
                      j["kind"].get<std::string>() + "'");
  }
  if (!j.contains("dtype") || j["dtype"] != "f32le") {
    throw IoError(IoErrorCode::dtype_mismatch, path,
                  "dtype mismatch: only f32le is supported");
  }
  return j;
}

std::array<std::int64_t, 3> read_dims(const json& j, const std::string& path) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3) {
    throw IoError(IoErrorCode::malformed_header, path,
                  "header dims must be a 3-element array");
  }
  std::array<std::int64_t, 3> dims{};
  for (int i = 0; i < 3; ++i) {
    dims[i] = j["dims"][i].get<std::int64_t>();
    if (dims[i] < 1) {
      throw IoError(IoErrorCode::malformed_header, path,
                    "header dims must be positive");
    }
  }
  return dims;
}

void check_element_count(std::int64_t n0, std::int64_t n1, std::int64_t n2,
                         const std::string& path) {
  if (n0 > 0 && n1 > 0 && n2 > 0 &&
      (n0 > kMaxElements / n1 || n0 * n1 > kMaxElements / n2)) {
    throw IoError(IoErrorCode::dimension_overflow, path,
                  "dimension product exceeds addressable payload size");
  }
}

void write_bytes(std::ofstream& out, const void* data, std::size_t bytes,
                 const std::string& path) {
  out.write(static_cast<const char*>(data), std::streamsize(bytes));
  if (!out) throw IoError(IoErrorCode::write_failed, path, "write failure");
}

std::vector<char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorCode::open_failed, path, "cannot open file");
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<char> buf{};
  buf.resize(std::size_t(size));
  in.read(buf.data(), size);
  if (!in) throw IoError(IoErrorCode::open_failed, path, "read failure");
  return buf;
}

void write_header(const json& j, const std::string& path) {
  std::ofstream out(header_path(path));
  if (!out) {
    throw IoError(IoErrorCode::open_failed, header_path(path),
                  "cannot open header for writing");
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw IoError(IoErrorCode::write_failed, header_path(path),
                  "header write failure");
  }
}

}  // namespace

std::string header_path(const std::string& path) { return path + ".json"; }

void write_volume(const Volume& volume, const std::string& path) {
  const auto& g = volume.geometry;
  const std::int64_t L = g.side_length;
  check_element_count(L, L, g.slice_count, path);

  json header = {{"dims", {L, L, g.slice_count}},
                 {"dtype", "f32le"},
                 {"pixel_size", g.pixel_size},
                 {"kind", "volume"}};
  write_header(header, path);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(IoErrorCode::open_failed, path, "cannot open for writing");
  }
  Eigen::ArrayXXf plane(L, L);
  for (const auto& slice : volume.slices) {
    plane = slice.values.cast<float>();  // column-major buffer is x-fastest
    write_bytes(out, plane.data(), std::size_t(L) * L * sizeof(float), path);
  }
}

Volume read_volume(const std::string& path) {
  json header = load_header(path, "volume");
  check_keys(header, {"dims", "dtype", "pixel_size", "kind"},
             header_path(path));
  const auto dims = read_dims(header, header_path(path));
  if (dims[0] != dims[1]) {
    throw IoError(IoErrorCode::malformed_header, header_path(path),
                  "volume slices must be square");
  }
  const double pixel_size = header["pixel_size"].get<double>();
  check_element_count(dims[0], dims[1], dims[2], path);

  const auto payload = read_file(path);
  const std::size_t expected =
      std::size_t(dims[0]) * dims[1] * dims[2] * sizeof(float);
  if (payload.size() != expected) {
    throw IoError(IoErrorCode::payload_size_mismatch, path,
                  "payload size mismatch");
  }

  GridGeometry g = GridGeometry::uniform(int(dims[0]), 1, int(dims[2]),
                                         pixel_size, int(dims[0]));
  Volume v(g);
  const float* src = reinterpret_cast<const float*>(payload.data());
  const std::int64_t per_slice = dims[0] * dims[1];
  for (int l = 0; l < g.slice_count; ++l) {
    v.slices[l].values =
        Eigen::Map<const Eigen::ArrayXXf>(src + l * per_slice, dims[0],
                                          dims[1])
            .cast<double>();
  }
  return v;
}

void write_sinogram(const SinogramStack& sino, const std::string& path) {
  const auto& g = sino.geometry;
  const std::int64_t D = g.detector_count;
  const std::int64_t A = g.angle_count;
  const std::int64_t S = g.slice_count;
  check_element_count(D, A, S, path);

  json header = {{"dims", {D, A, S}},
                 {"dtype", "f32le"},
                 {"pixel_size", g.pixel_size},
                 {"kind", "sinogram"},
                 {"side_length", g.side_length},
                 {"mask", "packed_bits"}};
  write_header(header, path);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(IoErrorCode::open_failed, path, "cannot open for writing");
  }
  Eigen::ArrayXXf plane(D, A);
  for (const auto& slice_data : sino.data) {
    plane = slice_data.cast<float>();  // detector-fastest, angles consecutive
    write_bytes(out, plane.data(), std::size_t(D) * A * sizeof(float), path);
  }

  const std::int64_t bits = S * A * D;
  std::vector<std::uint8_t> packed(std::size_t((bits + 7) / 8), 0);
  std::int64_t b = 0;
  for (int l = 0; l < S; ++l) {
    for (int a = 0; a < A; ++a) {
      for (int d = 0; d < D; ++d, ++b) {
        if (sino.mask.valid[l](d, a)) {
          packed[std::size_t(b >> 3)] |= std::uint8_t(1u << (b & 7));
        }
      }
    }
  }
  write_bytes(out, packed.data(), packed.size(), path);
}

SinogramStack read_sinogram(const std::string& path) {
  json header = load_header(path, "sinogram");
  check_keys(header,
             {"dims", "dtype", "pixel_size", "kind", "side_length", "mask"},
             header_path(path));
  const auto dims = read_dims(header, header_path(path));
  if (header["mask"] != "packed_bits") {
    throw IoError(IoErrorCode::malformed_header, header_path(path),
                  "unknown mask encoding");
  }
  const double pixel_size = header["pixel_size"].get<double>();
  const int side_length = header["side_length"].get<int>();
  const std::int64_t D = dims[0], A = dims[1], S = dims[2];
  check_element_count(D, A, S, path);

  const auto payload = read_file(path);
  const std::size_t float_bytes = std::size_t(D) * A * S * sizeof(float);
  const std::size_t mask_bytes = std::size_t((D * A * S + 7) / 8);
  if (payload.size() != float_bytes + mask_bytes) {
    throw IoError(IoErrorCode::payload_size_mismatch, path,
                  "payload size mismatch");
  }

  GridGeometry g = GridGeometry::uniform(side_length, int(A), int(S),
                                         pixel_size, int(D));
  SinogramStack sino(g);
  const float* src = reinterpret_cast<const float*>(payload.data());
  const std::int64_t per_slice = D * A;
  for (int l = 0; l < S; ++l) {
    sino.data[l] =
        Eigen::Map<const Eigen::ArrayXXf>(src + l * per_slice, D, A)
            .cast<double>();
  }

  const auto* packed =
      reinterpret_cast<const std::uint8_t*>(payload.data() + float_bytes);
  std::int64_t b = 0;
  for (int l = 0; l < S; ++l) {
    for (int a = 0; a < A; ++a) {
      for (int d = 0; d < D; ++d, ++b) {
        sino.mask.valid[l](d, a) = (packed[b >> 3] >> (b & 7)) & 1u;
      }
    }
  }
  try {
    sino.mask.validate_edges();
  } catch (const std::invalid_argument& e) {
    throw IoError(IoErrorCode::invalid_mask, path, e.what());
  }
  sino.zero_invalid();
  return sino;
}

}  // namespace sdrct
