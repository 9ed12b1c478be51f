#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "trsco/types.hpp"

namespace trsco {

enum class ConeKind { zero, nonneg, soc };

const char* to_string(ConeKind kind);

/// A contiguous block of constraint rows sharing one cone. SOC blocks use the
/// layout (t, u) with ||u||_2 <= t.
struct ConeBlock {
  ConeKind kind = ConeKind::nonneg;
  int dim = 0;
};

/// minimize 0.5 v^T P v + q^T v + offset  subject to  A v + s = b,  s in K.
/// P holds the full symmetric matrix.
struct ConicProgram {
  int n_variables = 0;
  Eigen::SparseMatrix<double> P;
  Eigen::VectorXd q;
  double objective_offset = 0.0;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<ConeBlock> cones;
  VariableLayout layout;  // informational; zero-sized for generic programs

  int n_rows() const { return static_cast<int>(b.size()); }
  double objective(const Eigen::VectorXd& v) const;
  /// Throws DomainError if dimensions, cone sizes or index ranges are inconsistent.
  void validate() const;
};

/// Affine scalar expression c + sum(coeff * v[index]).
struct AffineExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;
};

/// Incremental triplet assembly of a ConicProgram.
class ConicProgramBuilder {
 public:
  explicit ConicProgramBuilder(int n_variables);

  void add_linear_cost(int index, double coeff);
  /// Adds 0.5 * value * v_i v_j (and the symmetric entry when i != j).
  void add_quadratic_cost(int i, int j, double value);
  void add_objective_offset(double value) { offset_ += value; }

  /// a^T v <= rhs.
  void add_inequality(const std::vector<std::pair<int, double>>& terms, double rhs);
  /// a^T v == rhs.
  void add_equality(const std::vector<std::pair<int, double>>& terms, double rhs);
  /// ||(u_1, ..., u_d)||_2 <= t, each an affine expression of v.
  void add_soc(const AffineExpr& t, const std::vector<AffineExpr>& u);

  ConicProgram build(VariableLayout layout = {}) const;

 private:
  // Stores the cone row s = expr(v), i.e. A row = -terms, b = constant.
  void push_row(const AffineExpr& expr);

  int n_;
  int rows_ = 0;
  double offset_ = 0.0;
  std::vector<Eigen::Triplet<double>> p_triplets_;
  std::vector<Eigen::Triplet<double>> a_triplets_;
  std::vector<double> q_;
  std::vector<double> b_;
  std::vector<ConeBlock> cones_;
};

/// Euclidean projection onto {(t, u): ||u||_2 <= t}. Requires dimension >= 2.
Eigen::VectorXd project_soc(const Eigen::VectorXd& v);

/// In-place projection of a segment onto a single cone.
void project_cone_block(ConeKind kind, Eigen::Ref<Eigen::VectorXd> segment);

/// Projection onto the polar (negative dual) cone of a block.
void project_polar_block(ConeKind kind, Eigen::Ref<Eigen::VectorXd> segment);

struct SolverSettings {
  int max_iterations = 50000;
  double eps_primal = 1e-6;
  double eps_dual = 1e-6;
  double alpha = 1.5;    // over-relaxation
  bool scaling = true;   // static Ruiz equilibration
  double rho = 0.03;
  double sigma = 1e-6;
  int check_interval = 10;
  double eps_infeasible = 1e-6;

  void validate() const;
};

enum class SolveStatus { optimal, max_iterations, infeasible_detected };

const char* to_string(SolveStatus status);

struct Solution {
  Eigen::VectorXd x;
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double objective = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  double primal_residual = 0.0;  // ||Ax + s - b||_inf / (1 + scale)
  double dual_residual = 0.0;    // ||Px + q - A^T y||_inf / (1 + scale)
  int iterations = 0;
  double wall_time = 0.0;        // s
};

/// Initial iterate in unscaled units; an empty or wrongly sized vector is ignored.
struct WarmStart {
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // dual, same convention as Solution::y
};

/// Pluggable conic backend.
class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual Solution solve(const ConicProgram& program, const SolverSettings& settings,
                         const std::optional<WarmStart>& warm = std::nullopt) const = 0;
  virtual std::string name() const = 0;
};

/// Operator-splitting (ADMM) solver over the product of zero, nonnegative and second-order
/// cones. One sparse LDL^T factorization of the quasi-definite KKT matrix is reused for
/// every iteration.
class AdmmSolver final : public ConicSolver {
 public:
  Solution solve(const ConicProgram& program, const SolverSettings& settings,
                 const std::optional<WarmStart>& warm = std::nullopt) const override;
  std::string name() const override { return "admm"; }
};

Solution solve_conic(const ConicProgram& program, const SolverSettings& settings,
                     const std::optional<WarmStart>& warm = std::nullopt);

}  // namespace trsco
