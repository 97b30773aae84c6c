#include "csk/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace csk {

namespace {

// One cell -> finite double. std::from_chars accepts "inf"/"nan" spellings;
// those are rejected here along with trailing junk.
bool parse_cell(std::string_view cell, double& out) {
    // trim spaces
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
        cell.remove_suffix(1);
    }
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return false;
    return std::isfinite(out);
}

}  // namespace

DataMatrix parse_matrix_csv(std::istream& in, char delimiter,
                            bool skip_header) {
    std::vector<double> values;
    std::size_t n = 0;
    std::size_t width = 0;
    std::string line;
    std::size_t file_row = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skip_header && file_row == 0) {
            ++file_row;
            continue;
        }
        const std::size_t data_row = n;
        ++file_row;
        if (line.empty()) continue;  // tolerate blank lines

        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t end = line.find(delimiter, start);
            std::string_view cell(line.data() + start,
                                  (end == std::string::npos ? line.size() : end) -
                                      start);
            double v = 0.0;
            if (!parse_cell(cell, v)) {
                fail(errc::parse, "parse error at row " +
                                      std::to_string(data_row) + ", col " +
                                      std::to_string(col));
            }
            values.push_back(v);
            ++col;
            if (end == std::string::npos) break;
            start = end + 1;
        }
        if (first_data_row) {
            width = col;
            first_data_row = false;
        } else if (col != width) {
            fail(errc::ragged_rows,
                 "row " + std::to_string(data_row) + " has " +
                     std::to_string(col) + " columns, expected " +
                     std::to_string(width));
        }
        ++n;
    }
    if (n == 0 || width == 0) {
        fail(errc::parse, "no data rows");
    }
    return DataMatrix(n, width, std::move(values));
}

DataMatrix load_matrix_csv(const std::string& path, char delimiter,
                           bool skip_header) {
    std::ifstream in(path);
    if (!in) {
        fail(errc::io, "cannot open '" + path + "'");
    }
    return parse_matrix_csv(in, delimiter, skip_header);
}

void write_matrix_csv(const DataMatrix& matrix, std::ostream& out,
                      char delimiter) {
    char buf[40];
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        auto row = matrix.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            if (j) out << delimiter;
            out << buf;
        }
        out << '\n';
    }
}

void write_matrix_csv(const DataMatrix& matrix, const std::string& path,
                      char delimiter) {
    std::ofstream out(path);
    if (!out) {
        fail(errc::io, "cannot write '" + path + "'");
    }
    write_matrix_csv(matrix, out, delimiter);
    out.flush();
    if (!out) {
        fail(errc::io, "write failed for '" + path + "'");
    }
}

}  // namespace csk
