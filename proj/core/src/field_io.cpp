#include "gpcollapse/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "gpcollapse/schema.hpp"

namespace gpcollapse {
namespace {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

void put(std::ostream& out, double v) {
  char buf[sizeof(double)];
  std::memcpy(buf, &v, sizeof(double));
  out.write(buf, sizeof(double));
}

double get(std::istream& in) {
  char buf[sizeof(double)];
  if (!in.read(buf, sizeof(double))) throw std::runtime_error("field binary: truncated input");
  double v;
  std::memcpy(&v, buf, sizeof(double));
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_binary(const ComplexField& u, std::ostream& out) {
  put(out, static_cast<double>(u.grid().n()));
  put(out, u.grid().extent());
  for (const auto& v : u.values()) {
    put(out, v.real());
    put(out, v.imag());
  }
  if (!out) throw std::runtime_error("field binary: write failed");
}

void write_field_binary(const ComplexField& u, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_field_binary(u, out);
}

ComplexField read_field_binary(std::istream& in) {
  const double nd = get(in);
  const double extent = get(in);
  if (!(nd >= 8.0) || nd != std::floor(nd) || nd > 65536.0) throw std::runtime_error("field binary: bad header");
  SpectralGrid grid(static_cast<int>(nd), extent);
  std::vector<cplx> values(grid.size());
  for (auto& v : values) {
    const double re = get(in);
    const double im = get(in);
    v = cplx(re, im);
  }
  return ComplexField(grid, std::move(values));
}

ComplexField read_field_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field_binary(in);
}

void write_field_csv(const ComplexField& u, std::ostream& out) {
  out << schema_comment("field") << "\n";
  out << "x1,x2,re,im\n";
  const SpectralGrid& g = u.grid();
  for (int i1 = 0; i1 < g.n(); ++i1) {
    for (int i2 = 0; i2 < g.n(); ++i2) {
      const cplx v = u.at(i1, i2);
      out << format_double(g.coordinate(i1)) << ',' << format_double(g.coordinate(i2)) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
}

void write_field_csv(const ComplexField& u, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_field_csv(u, out);
}

}  // namespace gpcollapse
