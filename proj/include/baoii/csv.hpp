#pragma once

#include <string>
#include <vector>

#include "baoii/linalg.hpp"

namespace baoii {

// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

// RFC-4180-style quoting: fields containing comma, quote, CR or LF are
// quoted, embedded quotes doubled.
std::string csv_quote(const std::string& field);
std::string csv_row(const std::vector<std::string>& cells);

// Whole-file write via temp-then-rename so readers never observe a partial
// file and reruns produce byte-identical results.
void atomic_write_file(const std::string& path, const std::string& content);

// Row-major matrix dump with a header row of labels and a leading label
// column.
std::string matrix_csv(const Matrix& m, const std::vector<std::string>& labels);
std::string vector_csv(const std::vector<double>& v, const std::vector<std::string>& labels);

std::string read_file(const std::string& path);  // throws input_error

} // namespace baoii
