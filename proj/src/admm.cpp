#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "trsco/conic.hpp"

namespace trsco {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

constexpr int kRuizIterations = 15;
constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;
constexpr double kEqualityRhoFactor = 1e3;

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double safe_inverse_sqrt(double norm) {
  if (norm < kMinScale) return 1.0;
  return 1.0 / std::sqrt(std::min(norm, kMaxScale * kMaxScale));
}

struct Scaling {
  Vec D;  // variables
  Vec E;  // rows
  double c = 1.0;
};

Vec column_inf_norms(const SpMat& m) {
  Vec out = Vec::Zero(m.cols());
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SpMat::InnerIterator it(m, j); it; ++it) out[j] = std::max(out[j], std::abs(it.value()));
  }
  return out;
}

Vec row_inf_norms(const SpMat& m) {
  Vec out = Vec::Zero(m.rows());
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SpMat::InnerIterator it(m, j); it; ++it) {
      out[it.row()] = std::max(out[it.row()], std::abs(it.value()));
    }
  }
  return out;
}

// Ruiz equilibration of [P A^T; A 0]; SOC blocks get one shared row factor so the cone
// is mapped onto itself.
Scaling equilibrate(const ConicProgram& program, bool enabled) {
  const int n = program.n_variables;
  const int m = program.n_rows();
  Scaling sc{Vec::Ones(n), Vec::Ones(m), 1.0};
  if (!enabled) return sc;

  SpMat P = program.P;
  SpMat A = program.A;
  for (int iter = 0; iter < kRuizIterations; ++iter) {
    const Vec col_p = column_inf_norms(P);
    const Vec col_a = column_inf_norms(A);
    const Vec row_a = row_inf_norms(A);
    Vec d(n), e(m);
    for (int j = 0; j < n; ++j) d[j] = safe_inverse_sqrt(std::max(col_p[j], col_a[j]));
    for (int i = 0; i < m; ++i) e[i] = safe_inverse_sqrt(row_a[i]);
    int row = 0;
    for (const auto& cone : program.cones) {
      if (cone.kind == ConeKind::soc) {
        const double mean = e.segment(row, cone.dim).mean();
        e.segment(row, cone.dim).setConstant(mean);
      }
      row += cone.dim;
    }
    P = d.asDiagonal() * P * d.asDiagonal();
    A = e.asDiagonal() * A * d.asDiagonal();
    sc.D = (sc.D.array() * d.array()).cwiseMax(kMinScale).cwiseMin(kMaxScale).matrix();
    sc.E = (sc.E.array() * e.array()).cwiseMax(kMinScale).cwiseMin(kMaxScale).matrix();
  }

  const Vec q_scaled = sc.D.cwiseProduct(program.q);
  const Vec col_p = column_inf_norms(sc.D.asDiagonal() * program.P * sc.D.asDiagonal());
  const double p_mean = n > 0 ? col_p.mean() : 0.0;
  const double cost_norm = std::max(p_mean, inf_norm(q_scaled));
  sc.c = cost_norm < kMinScale ? 1.0 : std::clamp(1.0 / cost_norm, kMinScale, kMaxScale);
  return sc;
}

void project_product(const std::vector<ConeBlock>& cones, Vec& v) {
  int row = 0;
  for (const auto& cone : cones) {
    project_cone_block(cone.kind, v.segment(row, cone.dim));
    row += cone.dim;
  }
}

double polar_distance(const std::vector<ConeBlock>& cones, const Vec& v) {
  Vec proj = v;
  int row = 0;
  for (const auto& cone : cones) {
    project_polar_block(cone.kind, proj.segment(row, cone.dim));
    row += cone.dim;
  }
  return inf_norm(proj - v);
}

}  // namespace

Solution AdmmSolver::solve(const ConicProgram& program, const SolverSettings& settings,
                           const std::optional<WarmStart>& warm) const {
  const auto start = std::chrono::steady_clock::now();
  settings.validate();
  program.validate();

  const int n = program.n_variables;
  const int m = program.n_rows();
  const Scaling sc = equilibrate(program, settings.scaling);

  const SpMat P = SpMat(sc.D.asDiagonal() * program.P * sc.D.asDiagonal()) * sc.c;
  const Vec q = sc.c * sc.D.cwiseProduct(program.q);
  const SpMat A = sc.E.asDiagonal() * program.A * sc.D.asDiagonal();
  const SpMat At = A.transpose();
  const Vec b = sc.E.cwiseProduct(program.b);

  Vec rho = Vec::Constant(m, settings.rho);
  {
    int row = 0;
    for (const auto& cone : program.cones) {
      if (cone.kind == ConeKind::zero) rho.segment(row, cone.dim).setConstant(settings.rho * kEqualityRhoFactor);
      row += cone.dim;
    }
  }
  const Vec rho_inv = rho.cwiseInverse();

  // Upper triangle of [P + sigma I, A^T; A, -diag(1/rho)].
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(P.nonZeros() + A.nonZeros() + n + m);
  for (int j = 0; j < P.outerSize(); ++j) {
    for (SpMat::InnerIterator it(P, j); it; ++it) {
      if (it.row() <= it.col()) triplets.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int j = 0; j < n; ++j) triplets.emplace_back(j, j, settings.sigma);
  for (int j = 0; j < A.outerSize(); ++j) {
    for (SpMat::InnerIterator it(A, j); it; ++it) triplets.emplace_back(j, n + it.row(), it.value());
  }
  for (int i = 0; i < m; ++i) triplets.emplace_back(n + i, n + i, -rho_inv[i]);
  SpMat kkt(n + m, n + m);
  kkt.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<SpMat, Eigen::Upper> ldlt;
  ldlt.compute(kkt);
  if (ldlt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "solve_conic: KKT factorization failed (n=" << n << ", m=" << m
        << ", nnz=" << kkt.nonZeros() << ", sigma=" << settings.sigma << ", rho=" << settings.rho << ")";
    throw SolverError(msg.str());
  }

  Vec x = Vec::Zero(n);
  if (warm && warm->x.size() == n) x = warm->x.cwiseQuotient(sc.D);
  Vec s = b - A * x;
  project_product(program.cones, s);
  Vec y = Vec::Zero(m);
  if (warm && warm->y.size() == m) y = sc.c * warm->y.cwiseQuotient(sc.E);

  Vec rhs(n + m);
  Vec x_tilde(n), s_tilde(m), s_relaxed(m), s_next(m), y_next(m);
  const double alpha = settings.alpha;

  Solution sol;
  sol.status = SolveStatus::max_iterations;

  const auto unscale_primal = [&](const Vec& r) { return sc.E.cwiseInverse().cwiseProduct(r); };
  const auto unscale_dual = [&](const Vec& r) { return sc.D.cwiseInverse().cwiseProduct(r) / sc.c; };

  int iter = 0;
  for (iter = 1; iter <= settings.max_iterations; ++iter) {
    rhs.head(n) = settings.sigma * x - q;
    rhs.tail(m) = b - s + rho_inv.cwiseProduct(y);
    const Vec z = ldlt.solve(rhs);
    x_tilde = z.head(n);
    s_tilde = s - rho_inv.cwiseProduct(z.tail(m) + y);

    const Vec x_next = alpha * x_tilde + (1.0 - alpha) * x;
    s_relaxed = alpha * s_tilde + (1.0 - alpha) * s;
    s_next = s_relaxed + rho_inv.cwiseProduct(y);
    project_product(program.cones, s_next);
    y_next = y + rho.cwiseProduct(s_relaxed - s_next);

    const bool check = (iter % settings.check_interval == 0) || iter == settings.max_iterations;
    if (check) {
      const Vec Ax = A * x_next;
      const Vec Px = P * x_next;
      const Vec Aty = At * y_next;
      const Vec rp = unscale_primal(Ax + s_next - b);
      const Vec rd = unscale_dual(Px + q - Aty);
      const double p_scale = std::max({inf_norm(unscale_primal(Ax)), inf_norm(unscale_primal(s_next)),
                                       inf_norm(program.b)});
      const double d_scale = std::max({inf_norm(unscale_dual(Px)), inf_norm(program.q),
                                       inf_norm(unscale_dual(Aty))});
      sol.primal_residual = inf_norm(rp) / (1.0 + p_scale);
      sol.dual_residual = inf_norm(rd) / (1.0 + d_scale);
      if (sol.primal_residual <= settings.eps_primal && sol.dual_residual <= settings.eps_dual) {
        sol.status = SolveStatus::optimal;
      } else if (iter >= 100) {
        // Farkas direction: dy in polar(K), A^T dy = 0, b^T dy > 0.
        const Vec dy = sc.E.cwiseProduct(y_next - y);
        const double dy_norm = inf_norm(dy);
        if (dy_norm > 1e-12) {
          const Vec Atdy = sc.D.cwiseInverse().cwiseProduct(At * (y_next - y));
          const double eps = settings.eps_infeasible;
          if (inf_norm(Atdy) <= eps * dy_norm && program.b.dot(dy) > eps * dy_norm &&
              polar_distance(program.cones, dy) <= eps * dy_norm) {
            sol.status = SolveStatus::infeasible_detected;
          }
        }
      }
    }
    x = x_next;
    s = s_next;
    y = y_next;
    if (sol.status != SolveStatus::max_iterations) break;
  }

  sol.iterations = std::min(iter, settings.max_iterations);
  sol.x = sc.D.cwiseProduct(x);
  sol.s = sc.E.cwiseInverse().cwiseProduct(s);
  sol.y = sc.E.cwiseProduct(y) / sc.c;
  sol.objective = program.objective(sol.x);
  sol.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace trsco
