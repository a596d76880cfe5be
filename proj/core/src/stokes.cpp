#include "stmesh/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stmesh {

void SolverConfig::validate() const {
  if (!(sigma_u > 0.0)) throw Error("sigma_u must be positive");
  if (!(sigma_p > 0.0)) throw Error("sigma_p must be positive");
  if (!(gmres.rel_tol > 0.0 && gmres.rel_tol < 1.0))
    throw Error("gmres relative tolerance must lie in (0,1)");
  if (gmres.restart < 1 || gmres.max_iter < 1) throw Error("gmres iteration limits must be >= 1");
}

double robin_valve(double t, SpatialTag tag) {
  if (t < -1e-14 || t > 1.0 + 1e-14) throw Error("valve coefficient defined for t in [0,1]");
  const bool first_half = t < 0.5;
  if (tag == SpatialTag::RobinOut) return first_half ? 1e6 : 0.0;
  if (tag == SpatialTag::RobinIn) return first_half ? 0.0 : 1e6;
  return 0.0;
}

Point facet_jump(double phi_k, double phi_l, const Point& n) { return phi_k * n - phi_l * n; }

Point facet_space_jump(double phi_k, double phi_l, const Point& n, int spatial_dim) {
  Point nx = n;
  for (int c = spatial_dim; c < 4; ++c) nx[c] = 0.0;
  return (phi_k - phi_l) * nx;
}

double facet_time_jump(double phi_k, double phi_l, const Point& n, int spatial_dim) {
  return (phi_k - phi_l) * n[spatial_dim];
}

double facet_average(double phi_k, double phi_l) { return 0.5 * (phi_k + phi_l); }

double facet_upwind(double phi_k, double phi_l, const Point& n, int spatial_dim) {
  const double nt = n[spatial_dim];
  if (nt > 0.0) return phi_k;
  if (nt < 0.0) return phi_l;
  return 0.0;
}

namespace {

struct FacetQuadrature {
  std::vector<Point> x;
  std::vector<double> w;
};

FacetQuadrature facet_points(const SpaceTimeMesh& mesh, const Facet& facet, int degree) {
  const int fdim = mesh.dim - 1;
  const QuadratureRule& rule = simplex_quadrature(fdim, degree);
  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>(facet.key.num_nodes()));
  for (int i = 0; i < facet.key.num_nodes(); ++i)
    verts.push_back(mesh.coords[static_cast<std::size_t>(facet.key.nodes[static_cast<std::size_t>(i)])]);
  FacetQuadrature out;
  const double scale = quadrature_scale(facet.measure, fdim);
  out.x.reserve(rule.bary.size());
  out.w.reserve(rule.bary.size());
  for (int q = 0; q < rule.num_points(); ++q) {
    out.x.push_back(quadrature_point(rule.bary[static_cast<std::size_t>(q)], verts));
    out.w.push_back(rule.weights[static_cast<std::size_t>(q)] * scale);
  }
  return out;
}

}  // namespace

StokesAssembler::StokesAssembler(const SpaceTimeMesh& mesh, const SolverConfig& config)
    : mesh_(mesh), config_(config) {
  config_.validate();
  if (mesh_.h.size() != static_cast<std::size_t>(mesh_.num_elements()))
    throw Error("mesh sizes h_k missing; run compute_mesh_sizes");
  vspace_ = DgSpace{&mesh_, DgSpaceKind::VelocityP1Vector};
  pspace_ = DgSpace{&mesh_, DgSpaceKind::PressureP0};
  bases_ = build_element_bases(mesh_);
  touches_dirichlet_.assign(static_cast<std::size_t>(mesh_.num_elements()), false);
  for (const Facet& f : mesh_.boundary_facets)
    if (f.cls == BoundaryClass::SigmaD)
      touches_dirichlet_[static_cast<std::size_t>(f.owner)] = true;
}

SpMat StokesAssembler::assemble_a_h(const ProblemData& data, unsigned terms) const {
  const int d = sdim();
  const int nn = dim() + 1;
  const long nv = count_dofs(vspace_);
  std::vector<Eigen::Triplet<double>> trip;

  if (terms & kAhVolume) {
    const QuadratureRule& rule = simplex_quadrature(dim(), config_.volume_quadrature_degree);
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
      Eigen::MatrixXd grads = basis.gradients(dim());  // (nn) x dim
      Eigen::MatrixXd gx = grads.leftCols(d);
      const double scale = quadrature_scale(basis.measure, dim());
      double wsum = 0.0;
      for (double w : rule.weights) wsum += w;
      const double vol_weight = data.nu * scale * wsum;  // integrand is constant
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
          const double val = vol_weight * gx.row(i).dot(gx.row(j));
          for (int c = 0; c < d; ++c)
            trip.emplace_back(vspace_.vdof(e, j, c), vspace_.vdof(e, i, c), val);
        }
    }
  }

  if (terms & (kAhConsistency | kAhPenalty)) {
    for (const Facet& facet : mesh_.interior_facets) {
      const int k = facet.owner;
      const int l = facet.neighbor;
      const double hbar =
          0.5 * (mesh_.h[static_cast<std::size_t>(k)] + mesh_.h[static_cast<std::size_t>(l)]);
      Eigen::VectorXd nx = facet.normal.head(d);
      const double nx2 = nx.squaredNorm();
      FacetQuadrature quad = facet_points(mesh_, facet, config_.facet_quadrature_degree);

      const ElementBasis& bk = bases_[static_cast<std::size_t>(k)];
      const ElementBasis& bl = bases_[static_cast<std::size_t>(l)];
      // Normal component of each basis gradient (constant on the facet).
      Eigen::VectorXd gnk = bk.gradients(dim()).leftCols(d) * nx;
      Eigen::VectorXd gnl = bl.gradients(dim()).leftCols(d) * nx;

      const std::array<int, 2> elems = {k, l};
      const std::array<double, 2> sign = {1.0, -1.0};
      const std::array<const Eigen::VectorXd*, 2> gn = {&gnk, &gnl};

      for (std::size_t q = 0; q < quad.x.size(); ++q) {
        const double w = quad.w[q];
        Eigen::VectorXd lam_k = bk.barycentric(quad.x[q], dim());
        Eigen::VectorXd lam_l = bl.barycentric(quad.x[q], dim());
        const std::array<const Eigen::VectorXd*, 2> lam = {&lam_k, &lam_l};

        for (int a = 0; a < 2; ++a) {    // trial side
          for (int b = 0; b < 2; ++b) {  // test side
            for (int i = 0; i < nn; ++i) {
              for (int j = 0; j < nn; ++j) {
                double val = 0.0;
                if (terms & kAhConsistency) {
                  // -nu {grad u} [v]_x  and  -nu {grad v} [u]_x
                  val += -data.nu * w * 0.5 * (*gn[static_cast<std::size_t>(a)])(i)*sign[static_cast<std::size_t>(b)] *
                         (*lam[static_cast<std::size_t>(b)])(j);
                  val += -data.nu * w * 0.5 * (*gn[static_cast<std::size_t>(b)])(j)*sign[static_cast<std::size_t>(a)] *
                         (*lam[static_cast<std::size_t>(a)])(i);
                }
                if (terms & kAhPenalty) {
                  val += config_.sigma_u / hbar * w * nx2 * sign[static_cast<std::size_t>(a)] *
                         sign[static_cast<std::size_t>(b)] * (*lam[static_cast<std::size_t>(a)])(i) *
                         (*lam[static_cast<std::size_t>(b)])(j);
                }
                if (val != 0.0) {
                  for (int c = 0; c < d; ++c)
                    trip.emplace_back(vspace_.vdof(elems[static_cast<std::size_t>(b)], j, c),
                                      vspace_.vdof(elems[static_cast<std::size_t>(a)], i, c), val);
                }
              }
            }
          }
        }
      }
    }
  }

  if ((terms & kAhRobin) && data.alpha_R) {
    for (const Facet& facet : mesh_.boundary_facets) {
      if (facet.cls != BoundaryClass::SigmaR) continue;
      const int e = facet.owner;
      const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
      FacetQuadrature quad = facet_points(mesh_, facet, config_.facet_quadrature_degree);
      for (std::size_t q = 0; q < quad.x.size(); ++q) {
        const double alpha = data.alpha_R(quad.x[q], facet.tag);
        if (alpha == 0.0) continue;
        Eigen::VectorXd lam = basis.barycentric(quad.x[q], dim());
        for (int i = 0; i < nn; ++i)
          for (int j = 0; j < nn; ++j) {
            const double val = alpha * quad.w[q] * lam(i) * lam(j);
            for (int c = 0; c < d; ++c)
              trip.emplace_back(vspace_.vdof(e, j, c), vspace_.vdof(e, i, c), val);
          }
      }
    }
  }

  SpMat a(nv, nv);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SpMat StokesAssembler::assemble_b_T(const ProblemData& data, unsigned terms,
                                    Eigen::VectorXd* f1) const {
  const int d = sdim();
  const int nn = dim() + 1;
  const long nv = count_dofs(vspace_);
  std::vector<Eigen::Triplet<double>> trip;

  if (terms & kBtVolume) {
    const QuadratureRule& rule = simplex_quadrature(dim(), config_.volume_quadrature_degree);
    std::vector<Point> verts(static_cast<std::size_t>(nn));
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
      Eigen::VectorXd dt = basis.gradients(dim()).col(d);  // time derivatives
      auto pts = mesh_.element_points(e);
      const double scale = quadrature_scale(basis.measure, dim());
      for (int q = 0; q < rule.num_points(); ++q) {
        const double w = rule.weights[static_cast<std::size_t>(q)] * scale;
        const Eigen::VectorXd& lam = rule.bary[static_cast<std::size_t>(q)];
        for (int i = 0; i < nn; ++i)
          for (int j = 0; j < nn; ++j) {
            const double val = -w * lam(i) * dt(j);
            for (int c = 0; c < d; ++c)
              trip.emplace_back(vspace_.vdof(e, j, c), vspace_.vdof(e, i, c), val);
          }
      }
    }
  }

  for (const Facet& facet : mesh_.boundary_facets) {
    if ((terms & kBtSigmaT) && facet.cls == BoundaryClass::SigmaT) {
      const int e = facet.owner;
      const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
      FacetQuadrature quad = facet_points(mesh_, facet, config_.facet_quadrature_degree);
      for (std::size_t q = 0; q < quad.x.size(); ++q) {
        Eigen::VectorXd lam = basis.barycentric(quad.x[q], dim());
        for (int i = 0; i < nn; ++i)
          for (int j = 0; j < nn; ++j) {
            const double val = quad.w[q] * lam(i) * lam(j);
            for (int c = 0; c < d; ++c)
              trip.emplace_back(vspace_.vdof(e, j, c), vspace_.vdof(e, i, c), val);
          }
      }
    }
    if (f1 && facet.cls == BoundaryClass::Sigma0 && data.u0) {
      const int e = facet.owner;
      const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
      FacetQuadrature quad = facet_points(mesh_, facet, config_.facet_quadrature_degree);
      for (std::size_t q = 0; q < quad.x.size(); ++q) {
        const Point u0 = data.u0(quad.x[q]);
        Eigen::VectorXd lam = basis.barycentric(quad.x[q], dim());
        for (int j = 0; j < nn; ++j)
          for (int c = 0; c < d; ++c)
            (*f1)(vspace_.vdof(e, j, c)) += quad.w[q] * u0[c] * lam(j);
      }
    }
  }

  if (terms & kBtUpwind) {
    for (const Facet& facet : mesh_.interior_facets) {
      const double nt = facet.normal[d];
      if (nt == 0.0) continue;
      const int k = facet.owner;
      const int l = facet.neighbor;
      const int up = nt > 0.0 ? k : l;
      const ElementBasis& bup = bases_[static_cast<std::size_t>(up)];
      const ElementBasis& bk = bases_[static_cast<std::size_t>(k)];
      const ElementBasis& bl = bases_[static_cast<std::size_t>(l)];
      FacetQuadrature quad = facet_points(mesh_, facet, config_.facet_quadrature_degree);
      const std::array<int, 2> elems = {k, l};
      const std::array<double, 2> nt_side = {nt, -nt};
      for (std::size_t q = 0; q < quad.x.size(); ++q) {
        Eigen::VectorXd lam_up = bup.barycentric(quad.x[q], dim());
        Eigen::VectorXd lam_k = bk.barycentric(quad.x[q], dim());
        Eigen::VectorXd lam_l = bl.barycentric(quad.x[q], dim());
        const std::array<const Eigen::VectorXd*, 2> lam = {&lam_k, &lam_l};
        for (int b = 0; b < 2; ++b) {
          for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j) {
              const double val = quad.w[q] * lam_up(i) * (*lam[static_cast<std::size_t>(b)])(j)*nt_side[static_cast<std::size_t>(b)];
              for (int c = 0; c < d; ++c)
                trip.emplace_back(vspace_.vdof(elems[static_cast<std::size_t>(b)], j, c),
                                  vspace_.vdof(up, i, c), val);
            }
        }
      }
    }
  }

  SpMat bt(nv, nv);
  bt.setFromTriplets(trip.begin(), trip.end());
  return bt;
}

SpMat StokesAssembler::assemble_b_p() const {
  const int d = sdim();
  const int nn = dim() + 1;
  const long nv = count_dofs(vspace_);
  const long np = count_dofs(pspace_);
  std::vector<Eigen::Triplet<double>> trip;

  // Volume: p div(v) with elementwise-constant pressure.
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
    Eigen::MatrixXd gx = basis.gradients(dim()).leftCols(d);
    for (int i = 0; i < nn; ++i)
      for (int c = 0; c < d; ++c)
        trip.emplace_back(pspace_.pdof(e), vspace_.vdof(e, i, c), basis.measure * gx(i, c));
  }

  // Facet: -{p} [v]_x.
  for (const Facet& facet : mesh_.interior_facets) {
    const int k = facet.owner;
    const int l = facet.neighbor;
    const ElementBasis& bk = bases_[static_cast<std::size_t>(k)];
    const ElementBasis& bl = bases_[static_cast<std::size_t>(l)];
    FacetQuadrature quad = facet_points(mesh_, facet, config_.facet_quadrature_degree);
    const std::array<int, 2> elems = {k, l};
    const std::array<double, 2> sign = {1.0, -1.0};
    for (std::size_t q = 0; q < quad.x.size(); ++q) {
      Eigen::VectorXd lam_k = bk.barycentric(quad.x[q], dim());
      Eigen::VectorXd lam_l = bl.barycentric(quad.x[q], dim());
      const std::array<const Eigen::VectorXd*, 2> lam = {&lam_k, &lam_l};
      for (int a = 0; a < 2; ++a) {    // pressure side ({p} carries 1/2)
        for (int b = 0; b < 2; ++b) {  // velocity side
          for (int j = 0; j < nn; ++j) {
            const double base = -quad.w[q] * 0.5 * sign[static_cast<std::size_t>(b)] *
                                (*lam[static_cast<std::size_t>(b)])(j);
            for (int c = 0; c < d; ++c)
              trip.emplace_back(pspace_.pdof(elems[static_cast<std::size_t>(a)]),
                                vspace_.vdof(elems[static_cast<std::size_t>(b)], j, c),
                                base * facet.normal[c]);
          }
        }
      }
    }
  }

  SpMat b(np, nv);
  b.setFromTriplets(trip.begin(), trip.end());
  return b;
}

SpMat StokesAssembler::assemble_d_p() const {
  const int d = sdim();
  const long np = count_dofs(pspace_);
  std::vector<Eigen::Triplet<double>> trip;
  for (const Facet& facet : mesh_.interior_facets) {
    const int k = facet.owner;
    const int l = facet.neighbor;
    const double hbar =
        0.5 * (mesh_.h[static_cast<std::size_t>(k)] + mesh_.h[static_cast<std::size_t>(l)]);
    const double nx2 = facet.normal.head(d).squaredNorm();
    const double val = config_.sigma_p * hbar * nx2 * facet.measure;
    trip.emplace_back(k, k, val);
    trip.emplace_back(l, l, val);
    trip.emplace_back(k, l, -val);
    trip.emplace_back(l, k, -val);
  }
  SpMat dp(np, np);
  dp.setFromTriplets(trip.begin(), trip.end());
  return dp;
}

Eigen::VectorXd StokesAssembler::assemble_source(const ProblemData& data) const {
  const int d = sdim();
  const int nn = dim() + 1;
  Eigen::VectorXd f1 = Eigen::VectorXd::Zero(count_dofs(vspace_));
  if (!data.f) return f1;
  const QuadratureRule& rule = simplex_quadrature(dim(), config_.volume_quadrature_degree);
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
    auto pts = mesh_.element_points(e);
    const double scale = quadrature_scale(basis.measure, dim());
    for (int q = 0; q < rule.num_points(); ++q) {
      const Eigen::VectorXd& lam = rule.bary[static_cast<std::size_t>(q)];
      const Point x = quadrature_point(lam, pts);
      const Point fx = data.f(x);
      const double w = rule.weights[static_cast<std::size_t>(q)] * scale;
      for (int j = 0; j < nn; ++j)
        for (int c = 0; c < d; ++c) f1(vspace_.vdof(e, j, c)) += w * fx[c] * lam(j);
    }
  }
  return f1;
}

Eigen::VectorXd StokesAssembler::l2_project_dirichlet(const ProblemData& data) const {
  const int d = sdim();
  const int nn = dim() + 1;
  Eigen::VectorXd ug = Eigen::VectorXd::Zero(count_dofs(vspace_));
  if (!data.g_D) return ug;
  const QuadratureRule& rule = simplex_quadrature(dim(), config_.volume_quadrature_degree);
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    if (!touches_dirichlet_[static_cast<std::size_t>(e)]) continue;
    const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
    auto pts = mesh_.element_points(e);
    const double scale = quadrature_scale(basis.measure, dim());
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nn, nn);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nn, d);
    for (int q = 0; q < rule.num_points(); ++q) {
      const Eigen::VectorXd& lam = rule.bary[static_cast<std::size_t>(q)];
      const double w = rule.weights[static_cast<std::size_t>(q)] * scale;
      const Point x = quadrature_point(lam, pts);
      const Point g = data.g_D(x);
      mass += w * lam * lam.transpose();
      for (int c = 0; c < d; ++c) rhs.col(c) += w * g[c] * lam;
    }
    Eigen::MatrixXd coeff = mass.ldlt().solve(rhs);
    for (int i = 0; i < nn; ++i)
      for (int c = 0; c < d; ++c) ug(vspace_.vdof(e, i, c)) = coeff(i, c);
  }
  return ug;
}

std::vector<bool> StokesAssembler::dirichlet_dof_mask() const {
  const int d = sdim();
  const int nn = dim() + 1;
  std::vector<bool> mask(static_cast<std::size_t>(count_dofs(vspace_)), false);
  for (const Facet& facet : mesh_.boundary_facets) {
    if (facet.cls != BoundaryClass::SigmaD) continue;
    const Simplex& el = mesh_.elements[static_cast<std::size_t>(facet.owner)];
    for (int i = 0; i < facet.key.num_nodes(); ++i) {
      const NodeId n = facet.key.nodes[static_cast<std::size_t>(i)];
      for (int local = 0; local < nn; ++local) {
        if (el[local] == n) {
          for (int c = 0; c < d; ++c)
            mask[static_cast<std::size_t>(vspace_.vdof(facet.owner, local, c))] = true;
          break;
        }
      }
    }
  }
  return mask;
}

BlockSystem StokesAssembler::build_block_system(const ProblemData& data) const {
  BlockSystem sys;
  const long nv = count_dofs(vspace_);
  const long np = count_dofs(pspace_);
  sys.full_velocity_dofs = nv;

  Eigen::VectorXd f1_full = assemble_source(data);
  SpMat a_full = assemble_a_h(data);
  {
    SpMat bt = assemble_b_T(data, kBtAll, &f1_full);
    a_full += bt;
  }
  sys.u_g = l2_project_dirichlet(data);
  f1_full -= a_full * sys.u_g;

  SpMat b_full = assemble_b_p();
  sys.D = assemble_d_p();
  sys.F2 = -(b_full * sys.u_g);
  if (data.div_source) {
    const QuadratureRule& rule = simplex_quadrature(dim(), config_.volume_quadrature_degree);
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      const ElementBasis& basis = bases_[static_cast<std::size_t>(e)];
      auto pts = mesh_.element_points(e);
      const double scale = quadrature_scale(basis.measure, dim());
      double val = 0.0;
      for (int q = 0; q < rule.num_points(); ++q)
        val += rule.weights[static_cast<std::size_t>(q)] * scale *
               data.div_source(quadrature_point(rule.bary[static_cast<std::size_t>(q)], pts));
      sys.F2(e) += val;
    }
  }

  std::vector<bool> constrained = dirichlet_dof_mask();
  std::vector<int> full_to_free(static_cast<std::size_t>(nv), -1);
  for (long i = 0; i < nv; ++i) {
    if (!constrained[static_cast<std::size_t>(i)]) {
      full_to_free[static_cast<std::size_t>(i)] = static_cast<int>(sys.free_dofs.size());
      sys.free_dofs.push_back(static_cast<int>(i));
    }
  }
  const long nfree = static_cast<long>(sys.free_dofs.size());

  std::vector<Eigen::Triplet<double>> ktrip;
  for (int row = 0; row < a_full.outerSize(); ++row) {
    const int r = full_to_free[static_cast<std::size_t>(row)];
    if (r < 0) continue;
    for (SpMat::InnerIterator it(a_full, row); it; ++it) {
      const int c = full_to_free[static_cast<std::size_t>(it.col())];
      if (c >= 0) ktrip.emplace_back(r, c, it.value());
    }
  }
  sys.K.resize(nfree, nfree);
  sys.K.setFromTriplets(ktrip.begin(), ktrip.end());

  std::vector<Eigen::Triplet<double>> btrip;
  for (int row = 0; row < b_full.outerSize(); ++row) {
    for (SpMat::InnerIterator it(b_full, row); it; ++it) {
      const int c = full_to_free[static_cast<std::size_t>(it.col())];
      if (c >= 0) btrip.emplace_back(row, c, it.value());
    }
  }
  sys.B.resize(np, nfree);
  sys.B.setFromTriplets(btrip.begin(), btrip.end());

  sys.F1.resize(nfree);
  for (long i = 0; i < nfree; ++i) sys.F1(i) = f1_full(sys.free_dofs[static_cast<std::size_t>(i)]);
  return sys;
}

Eigen::VectorXd BlockSystem::expand_velocity(const Eigen::VectorXd& u_free) const {
  Eigen::VectorXd full = u_g;
  for (std::size_t i = 0; i < free_dofs.size(); ++i)
    full(free_dofs[i]) += u_free(static_cast<Eigen::Index>(i));
  return full;
}

}  // namespace stmesh
