#include "stmesh/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace stmesh {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void enumerate_compositions(int total, int slots, std::vector<int>& current,
                            std::vector<std::vector<int>>& out) {
  if (slots == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    current.push_back(v);
    enumerate_compositions(total - v, slots - 1, current, out);
    current.pop_back();
  }
}

QuadratureRule build_grundmann_moeller(int n, int s) {
  QuadratureRule rule;
  rule.dim = n;
  rule.exact_degree = 2 * s + 1;
  const int d = 2 * s + 1;
  for (int i = 0; i <= s; ++i) {
    const double w = ((i % 2 == 0) ? 1.0 : -1.0) * std::pow(2.0, -2 * s) *
                     std::pow(static_cast<double>(d + n - 2 * i), d) /
                     (factorial(i) * factorial(d + n - i));
    std::vector<std::vector<int>> betas;
    std::vector<int> current;
    enumerate_compositions(s - i, n + 1, current, betas);
    for (const auto& beta : betas) {
      Eigen::VectorXd lambda(n + 1);
      for (int j = 0; j <= n; ++j)
        lambda(j) = (2.0 * beta[static_cast<std::size_t>(j)] + 1.0) /
                    static_cast<double>(d + n - 2 * i);
      rule.bary.push_back(lambda);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace

const QuadratureRule& simplex_quadrature(int dim, int degree) {
  if (dim < 1 || dim > kMaxDim) {
    std::ostringstream msg;
    msg << "quadrature dimension " << dim << " outside 1.." << kMaxDim;
    throw Error(msg.str());
  }
  if (degree < 0 || degree > 5) {
    std::ostringstream msg;
    msg << "unsupported quadrature degree " << degree << " (max 5)";
    throw Error(msg.str());
  }
  const int s = degree <= 1 ? 0 : (degree <= 3 ? 1 : 2);

  static std::map<std::pair<int, int>, QuadratureRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(dim, s);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_grundmann_moeller(dim, s)).first;
  return it->second;
}

Point quadrature_point(const Eigen::VectorXd& bary, std::span<const Point> verts) {
  Point x = Point::Zero();
  for (int j = 0; j < bary.size(); ++j) x += bary(j) * verts[static_cast<std::size_t>(j)];
  return x;
}

double quadrature_scale(double measure, int dim) {
  double f = 1.0;
  for (int i = 2; i <= dim; ++i) f *= i;
  return measure * f;
}

}  // namespace stmesh
