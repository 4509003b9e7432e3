#include "advest/matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace advest {

void require_size(Index actual, Index expected, const std::string& what) {
  if (actual != expected) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (got " << actual << ", expected "
        << expected << ")";
    throw std::invalid_argument(msg.str());
  }
}

Matrix parse_matrix(std::istream& in, const std::string& source_name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw std::invalid_argument(source_name + ":" + std::to_string(line_no) +
                                    ": not a number: '" + token + "'");
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument(source_name + ":" + std::to_string(line_no) +
                                  ": expected " + std::to_string(rows.front().size()) +
                                  " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument(source_name + ": no matrix rows");

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path.string());
  return parse_matrix(in, path.string());
}

Vector read_vector(const std::filesystem::path& path) {
  Matrix m = read_matrix(path);
  if (m.rows() != 1 && m.cols() != 1) {
    throw std::invalid_argument(path.string() + ": expected a single row or column");
  }
  return m.reshaped();
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

}  // namespace advest
