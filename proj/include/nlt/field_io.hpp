#pragma once

#include <string>

#include "nlt/grid_function.hpp"

namespace nlt {

/// Two-file field format: `<base>.meta` (text: n, N, name, mean) next to
/// `<base>.f64` (little-endian 64-bit floats, row-major axis order).
void write_field(const std::string& base, const GridFunction& f,
                 const std::string& name = "field");

struct NamedField {
  GridFunction field;
  std::string name;
};

NamedField read_field(const std::string& base);

/// CSV with coordinate columns; dimensions 1 and 2 only.
void write_field_csv(const std::string& path, const GridFunction& f);
GridFunction read_field_csv(const std::string& path, int n, int N);

/// FNV-1a content hash of a file, as used by the run manifests.
std::uint64_t file_digest(const std::string& path);

} // namespace nlt
