#pragma once

#include <iosfwd>
#include <string>

#include "wbd/spectral.hpp"

namespace wbd::io {

// Binary layout, all little-endian:
//   char[4] "WBDF" | u32 version (1) | u32 d | u32 n | f64 length |
//   u32 components | components * n^d * (f64 re, f64 im) in storage order.
void write_binary(std::ostream& out, const SpectralField& field);
SpectralField read_binary(std::istream& in);

// CSV: "# d=<d> n=<n> length=<L> components=<c>" line, then the header
// "component,k1[,k2],re,im" and one row per coefficient in storage order.
void write_csv(std::ostream& out, const SpectralField& field);
SpectralField read_csv(std::istream& in);

void save(const std::string& path, const SpectralField& field);
SpectralField load(const std::string& path);

}  // namespace wbd::io
