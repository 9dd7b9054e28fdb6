#pragma once

#include <stdexcept>
#include <string>

#include "sdrct/types.hpp"

namespace sdrct {

enum class IoErrorCode {
  open_failed,
  write_failed,
  malformed_header,
  payload_size_mismatch,
  dtype_mismatch,
  kind_mismatch,
  dimension_overflow,
  invalid_mask,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorCode code, const std::string& path, const std::string& what)
      : std::runtime_error(what + " (" + path + ")"),
        code_(code),
        path_(path) {}
  IoErrorCode code() const { return code_; }
  const std::string& path() const { return path_; }

 private:
  IoErrorCode code_;
  std::string path_;
};

// Raw + sidecar-header file format. The payload at `path` is little-endian
// f32; the header at `path + ".json"` declares dims (fastest index first),
// dtype, pixel_size and kind. Sinograms append the validity mask as packed
// bits, LSB first, in (slice, angle, detector) order with detector fastest.

void write_volume(const Volume& volume, const std::string& path);
Volume read_volume(const std::string& path);

void write_sinogram(const SinogramStack& sino, const std::string& path);
SinogramStack read_sinogram(const std::string& path);

std::string header_path(const std::string& path);

}  // namespace sdrct
