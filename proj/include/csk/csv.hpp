#pragma once

#include <iosfwd>
#include <string>

#include "csk/types.hpp"

namespace csk {

/// Load a delimiter-separated matrix of finite reals. No header by default;
/// with skip_header the first row is discarded. Throws io/parse/ragged_rows.
DataMatrix load_matrix_csv(const std::string& path, char delimiter = ',',
                           bool skip_header = false);

DataMatrix parse_matrix_csv(std::istream& in, char delimiter = ',',
                            bool skip_header = false);

/// Writes with 17 significant digits so a reload reproduces every value
/// bit for bit.
void write_matrix_csv(const DataMatrix& matrix, std::ostream& out,
                      char delimiter = ',');
void write_matrix_csv(const DataMatrix& matrix, const std::string& path,
                      char delimiter = ',');

}  // namespace csk
