#include "nlt/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nlt/errors.hpp"

namespace nlt {

namespace {
void write_le_doubles(std::ofstream& os, const Array& values) {
  for (std::int64_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
  }
}

double read_le_double(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}
} // namespace

void write_field(const std::string& base, const GridFunction& f, const std::string& name) {
  {
    std::ofstream meta(base + ".meta");
    if (!meta) throw IoError("write_field: cannot open " + base + ".meta");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", f.mean());
    meta << "n = " << f.grid.n << "\n"
         << "N = " << f.grid.N << "\n"
         << "name = " << name << "\n"
         << "mean = " << buf << "\n";
  }
  std::ofstream bin(base + ".f64", std::ios::binary);
  if (!bin) throw IoError("write_field: cannot open " + base + ".f64");
  write_le_doubles(bin, f.values);
}

NamedField read_field(const std::string& base) {
  std::ifstream meta(base + ".meta");
  if (!meta) throw IoError("read_field: cannot open " + base + ".meta");
  int n = 0, N = 0;
  std::string name = "field";
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream ls(line);
    std::string key, eq;
    ls >> key >> eq;
    if (key == "n") ls >> n;
    if (key == "N") ls >> N;
    if (key == "name") ls >> name;
  }
  const TorusGrid grid(n, N);
  std::ifstream bin(base + ".f64", std::ios::binary);
  if (!bin) throw IoError("read_field: cannot open " + base + ".f64");
  GridFunction f(grid);
  for (std::int64_t i = 0; i < f.values.size(); ++i) f.values[i] = read_le_double(bin);
  if (!bin) throw IoError("read_field: truncated " + base + ".f64");
  if (!f.finite()) throw IoError("read_field: non-finite values in " + base);
  NamedField out;
  out.field = std::move(f);
  out.name = name;
  return out;
}

void write_field_csv(const std::string& path, const GridFunction& f) {
  require(f.grid.n <= 2, "write_field_csv: dimensions 1 and 2 only");
  std::ofstream os(path);
  if (!os) throw IoError("write_field_csv: cannot open " + path);
  char buf[96];
  if (f.grid.n == 1) {
    os << "x,value\n";
    for (std::int64_t i = 0; i < f.values.size(); ++i) {
      const Point x = f.grid.point(i);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[0], f.values[i]);
      os << buf;
    }
  } else {
    os << "x,y,value\n";
    for (std::int64_t i = 0; i < f.values.size(); ++i) {
      const Point x = f.grid.point(i);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], f.values[i]);
      os << buf;
    }
  }
}

GridFunction read_field_csv(const std::string& path, int n, int N) {
  require(n <= 2, "read_field_csv: dimensions 1 and 2 only");
  std::ifstream is(path);
  if (!is) throw IoError("read_field_csv: cannot open " + path);
  const TorusGrid grid(n, N);
  GridFunction f(grid);
  std::string line;
  std::getline(is, line); // header
  std::int64_t i = 0;
  while (std::getline(is, line) && i < f.values.size()) {
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw IoError("read_field_csv: malformed row");
    f.values[i++] = std::strtod(line.c_str() + comma + 1, nullptr);
  }
  if (i != f.values.size()) throw IoError("read_field_csv: row count mismatch");
  return f;
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("file_digest: cannot open " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (is.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace nlt
