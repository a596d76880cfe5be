#include "stmesh/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace stmesh {

void write_matrix_market(std::ostream& out, const SpMat& matrix) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << "\n";
  char buf[32];
  for (int row = 0; row < matrix.outerSize(); ++row) {
    for (SpMat::InnerIterator it(matrix, row); it; ++it) {
      std::snprintf(buf, sizeof buf, "%.17g", it.value());
      out << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << buf << "\n";
    }
  }
}

void write_matrix_market(const std::string& path, const SpMat& matrix) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  write_matrix_market(out, matrix);
}

SpMat read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw ParseError("missing MatrixMarket banner");
  if (line.find("coordinate") == std::string::npos || line.find("real") == std::string::npos ||
      line.find("general") == std::string::npos)
    throw ParseError("only 'coordinate real general' is supported");
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream header(line);
  long rows, cols, nnz;
  header >> rows >> cols >> nnz;
  if (!header) throw ParseError("malformed MatrixMarket size line");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nnz));
  for (long i = 0; i < nnz; ++i) {
    long r, c;
    double v;
    in >> r >> c >> v;
    if (!in) throw ParseError("truncated MatrixMarket entries");
    trip.emplace_back(static_cast<int>(r - 1), static_cast<int>(c - 1), v);
  }
  SpMat m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path);
  return read_matrix_market(in);
}

void write_residual_csv(std::ostream& out, const std::vector<double>& history) {
  out << "iteration,relative_residual\n";
  char buf[32];
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", history[i]);
    out << i << ',' << buf << "\n";
  }
}

void write_residual_csv(const std::string& path, const std::vector<double>& history) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  write_residual_csv(out, history);
}

}  // namespace stmesh
