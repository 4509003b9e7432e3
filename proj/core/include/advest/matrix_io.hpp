#pragma once

#include <filesystem>
#include <iosfwd>

#include "advest/linalg.hpp"

namespace advest {

// Text matrix format: one row per line, whitespace-separated decimal numbers.
// Blank lines and lines starting with '#' are skipped. Ragged rows are an
// error reported with the offending line number.
Matrix parse_matrix(std::istream& in, const std::string& source_name = "<stream>");
Matrix read_matrix(const std::filesystem::path& path);

// A vector file is a matrix with a single row or a single column.
Vector read_vector(const std::filesystem::path& path);

void write_matrix(std::ostream& out, const Matrix& m);

}  // namespace advest
