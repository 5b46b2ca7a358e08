#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gpcollapse/grid.hpp"

namespace gpcollapse {

/// "%.17g": round-trips every double.
std::string format_double(double v);

/// Flat binary layout: n and extent as little-endian 8-byte doubles, then
/// interleaved (re, im) doubles in row-major order.
void write_field_binary(const ComplexField& u, std::ostream& out);
void write_field_binary(const ComplexField& u, const std::filesystem::path& path);
ComplexField read_field_binary(std::istream& in);
ComplexField read_field_binary(const std::filesystem::path& path);

/// CSV with a schema comment line, then header `x1,x2,re,im` and one row per
/// grid point in row-major order.
void write_field_csv(const ComplexField& u, std::ostream& out);
void write_field_csv(const ComplexField& u, const std::filesystem::path& path);

}  // namespace gpcollapse
