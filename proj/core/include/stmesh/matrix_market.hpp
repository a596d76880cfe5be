#ifndef STMESH_MATRIX_MARKET_HPP
#define STMESH_MATRIX_MARKET_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "stmesh/stokes.hpp"

namespace stmesh {

// MatrixMarket coordinate format (real, general), 1-based indices.
void write_matrix_market(std::ostream& out, const SpMat& matrix);
void write_matrix_market(const std::string& path, const SpMat& matrix);
SpMat read_matrix_market(std::istream& in);
SpMat read_matrix_market(const std::string& path);

// Residual history as CSV with header "iteration,relative_residual".
void write_residual_csv(std::ostream& out, const std::vector<double>& history);
void write_residual_csv(const std::string& path, const std::vector<double>& history);

}  // namespace stmesh

#endif
