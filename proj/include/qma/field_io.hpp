#pragma once

// Field files: a short text header (format tag, n, N, active coordinates,
// point count) followed by the raw little-endian 64-bit float values in grid
// order, plus a CSV export for plotting.

#include "qma/grid.hpp"

#include <iosfwd>
#include <string>

namespace qma {

void write_field(std::ostream& os, const ScalarField& f);
void write_field_file(const std::string& path, const ScalarField& f);

ScalarField read_field(std::istream& is);
ScalarField read_field_file(const std::string& path);

/// Columns: one per active coordinate (x<k+1>, 1-based labels), then value.
void write_field_csv(std::ostream& os, const ScalarField& f);
void write_field_csv_file(const std::string& path, const ScalarField& f);

/// Fixed shortest-round-trip decimal formatting used by every artifact writer.
std::string format_double(double v);

}  // namespace qma
