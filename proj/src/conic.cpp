#include "trsco/conic.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace trsco {

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::zero: return "zero";
    case ConeKind::nonneg: return "nonneg";
    case ConeKind::soc: return "soc";
  }
  return "unknown";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::infeasible_detected: return "infeasible_detected";
  }
  return "unknown";
}

double ConicProgram::objective(const Eigen::VectorXd& v) const {
  return 0.5 * v.dot(P * v) + q.dot(v) + objective_offset;
}

void ConicProgram::validate() const {
  if (n_variables <= 0) throw DomainError("ConicProgram: no variables");
  if (P.rows() != n_variables || P.cols() != n_variables) throw DomainError("ConicProgram: P has wrong shape");
  if (q.size() != n_variables) throw DomainError("ConicProgram: q has wrong size");
  if (A.cols() != n_variables || A.rows() != b.size()) throw DomainError("ConicProgram: A/b shape mismatch");
  auto finite = [](const auto& m) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (typename std::decay_t<decltype(m)>::InnerIterator it(m, k); it; ++it)
        if (!std::isfinite(it.value())) return false;
    return true;
  };
  if (!q.allFinite() || !b.allFinite() || !finite(P) || !finite(A) || !std::isfinite(objective_offset)) {
    throw DomainError("ConicProgram: non-finite data");
  }
  long covered = 0;
  for (const auto& cone : cones) {
    if (cone.dim <= 0) throw DomainError("ConicProgram: empty cone block");
    if (cone.kind == ConeKind::soc && cone.dim < 2) {
      throw DomainError("ConicProgram: second-order cone needs dimension >= 2");
    }
    covered += cone.dim;
  }
  if (covered != b.size()) throw DomainError("ConicProgram: cone blocks do not cover all rows");
}

ConicProgramBuilder::ConicProgramBuilder(int n_variables) : n_(n_variables), q_(n_variables, 0.0) {
  if (n_variables <= 0) throw DomainError("ConicProgramBuilder: need at least one variable");
}

void ConicProgramBuilder::add_linear_cost(int index, double coeff) {
  if (index < 0 || index >= n_) throw DomainError("ConicProgramBuilder: variable index out of range");
  q_[index] += coeff;
}

void ConicProgramBuilder::add_quadratic_cost(int i, int j, double value) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw DomainError("ConicProgramBuilder: variable index out of range");
  p_triplets_.emplace_back(i, j, value);
  if (i != j) p_triplets_.emplace_back(j, i, value);
}

void ConicProgramBuilder::push_row(const AffineExpr& expr) {
  for (const auto& [index, coeff] : expr.terms) {
    if (index < 0 || index >= n_) throw DomainError("ConicProgramBuilder: variable index out of range");
    if (coeff != 0.0) a_triplets_.emplace_back(rows_, index, -coeff);
  }
  b_.push_back(expr.constant);
  ++rows_;
}

void ConicProgramBuilder::add_inequality(const std::vector<std::pair<int, double>>& terms, double rhs) {
  // s = rhs - a^T v >= 0
  AffineExpr expr{rhs, {}};
  expr.terms.reserve(terms.size());
  for (const auto& [index, coeff] : terms) expr.terms.emplace_back(index, -coeff);
  push_row(expr);
  if (!cones_.empty() && cones_.back().kind == ConeKind::nonneg) {
    ++cones_.back().dim;
  } else {
    cones_.push_back({ConeKind::nonneg, 1});
  }
}

void ConicProgramBuilder::add_equality(const std::vector<std::pair<int, double>>& terms, double rhs) {
  AffineExpr expr{rhs, {}};
  for (const auto& [index, coeff] : terms) expr.terms.emplace_back(index, -coeff);
  push_row(expr);
  if (!cones_.empty() && cones_.back().kind == ConeKind::zero) {
    ++cones_.back().dim;
  } else {
    cones_.push_back({ConeKind::zero, 1});
  }
}

void ConicProgramBuilder::add_soc(const AffineExpr& t, const std::vector<AffineExpr>& u) {
  if (u.empty()) throw DomainError("ConicProgramBuilder: second-order cone needs dimension >= 2");
  push_row(t);
  for (const auto& expr : u) push_row(expr);
  cones_.push_back({ConeKind::soc, static_cast<int>(u.size()) + 1});
}

ConicProgram ConicProgramBuilder::build(VariableLayout layout) const {
  ConicProgram program;
  program.n_variables = n_;
  program.P.resize(n_, n_);
  program.P.setFromTriplets(p_triplets_.begin(), p_triplets_.end());
  program.q = Eigen::Map<const Eigen::VectorXd>(q_.data(), n_);
  program.objective_offset = offset_;
  program.A.resize(rows_, n_);
  program.A.setFromTriplets(a_triplets_.begin(), a_triplets_.end());
  program.b = Eigen::Map<const Eigen::VectorXd>(b_.data(), rows_);
  program.cones = cones_;
  program.layout = layout;
  return program;
}

Eigen::VectorXd project_soc(const Eigen::VectorXd& v) {
  if (v.size() < 2) throw DomainError("project_soc: dimension must be >= 2");
  Eigen::VectorXd out = v;
  project_cone_block(ConeKind::soc, out);
  return out;
}

void project_cone_block(ConeKind kind, Eigen::Ref<Eigen::VectorXd> segment) {
  switch (kind) {
    case ConeKind::zero:
      segment.setZero();
      return;
    case ConeKind::nonneg:
      segment = segment.cwiseMax(0.0);
      return;
    case ConeKind::soc: {
      const double t = segment[0];
      const double norm_u = segment.tail(segment.size() - 1).norm();
      if (norm_u <= t) return;
      if (norm_u <= -t) {
        segment.setZero();
        return;
      }
      const double scale = 0.5 * (t + norm_u);
      segment.tail(segment.size() - 1) *= scale / norm_u;
      segment[0] = scale;
      return;
    }
  }
}

void project_polar_block(ConeKind kind, Eigen::Ref<Eigen::VectorXd> segment) {
  switch (kind) {
    case ConeKind::zero:
      return;  // polar of {0} is the whole space
    case ConeKind::nonneg:
      segment = segment.cwiseMin(0.0);
      return;
    case ConeKind::soc: {
      segment = -segment;
      project_cone_block(ConeKind::soc, segment);
      segment = -segment;
      return;
    }
  }
}

void SolverSettings::validate() const {
  if (max_iterations < 1) throw DomainError("SolverSettings: max_iterations must be >= 1");
  if (!(eps_primal > 0.0) || !(eps_dual > 0.0)) throw DomainError("SolverSettings: tolerances must be > 0");
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("SolverSettings: alpha must lie in (0, 2)");
  if (!(rho > 0.0) || !(sigma > 0.0)) throw DomainError("SolverSettings: rho and sigma must be > 0");
  if (check_interval < 1) throw DomainError("SolverSettings: check_interval must be >= 1");
  if (!(eps_infeasible > 0.0)) throw DomainError("SolverSettings: eps_infeasible must be > 0");
}

Solution solve_conic(const ConicProgram& program, const SolverSettings& settings,
                     const std::optional<WarmStart>& warm) {
  return AdmmSolver{}.solve(program, settings, warm);
}

}  // namespace trsco
