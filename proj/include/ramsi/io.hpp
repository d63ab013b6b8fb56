#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ramsi/core.hpp"

namespace ramsi {

struct VectorTable {
  SignalVector x;
  SideInformationEnsemble ensemble;
};

/// CSV with one row per index: column 0 is x, columns 1..J are z_1..z_J.
/// An optional header row is recognized when its first cell is not a
/// number. Throws ParseError with the zero-based row (and column) on ragged
/// rows, non-numeric or non-finite cells, or an empty file.
VectorTable read_vectors_csv(std::istream& in);
VectorTable read_vectors_csv(const std::filesystem::path& path);

/// Writes header `x,z1,...,zJ` and shortest round-trip decimal values, so
/// reading the file back reproduces every entry exactly.
void write_vectors_csv(std::ostream& out, const SignalVector& x,
                       const SideInformationEnsemble& ensemble);
void write_vectors_csv(const std::filesystem::path& path, const SignalVector& x,
                       const SideInformationEnsemble& ensemble);

/// Shortest decimal string that parses back to `value`.
std::string format_double(double value);

}  // namespace ramsi
