#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>

namespace quadloco::qp {

/// Sentinel for one-sided constraint rows.
constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Convex QP:  min 1/2 x'Hx + g'x  s.t.  lb <= Ax <= ub.
/// H must be symmetric PSD; one-sided rows use +/-kInfinity bounds.
struct QpProblem {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd linear_cost;
  Eigen::MatrixXd constraint_matrix;
  Eigen::VectorXd lower_bounds;
  Eigen::VectorXd upper_bounds;

  int num_vars() const { return static_cast<int>(hessian.rows()); }
  int num_constraints() const { return static_cast<int>(constraint_matrix.rows()); }
  bool well_formed(double psd_tol = 1e-9, double sym_tol = 1e-10) const;
};

enum class QpStatus { Solved, MaxIterations, Infeasible };

struct QpSolution {
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;
  QpStatus status = QpStatus::MaxIterations;
  double kkt_residual = kInfinity;
  int iterations = 0;
};

/// Stationarity / primal-feasibility / complementarity residuals of a
/// candidate point, computed from problem data only (no solver internals).
double kkt_residual(const QpProblem& p, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y);

struct QpSettings {
  double tolerance = 1e-6;
  int max_iter = 4000;
  double rho = 0.1;       // initial ADMM penalty
  double sigma = 1e-6;    // proximal regularization
  double relax = 1.6;     // over-relaxation
};

/// Dense operator-splitting QP solver with an active-set polish step.
/// Holds factorization workspace, so one instance per control thread.
class QpSolver {
 public:
  explicit QpSolver(QpSettings settings = {}) : settings_(settings) {}

  QpSolution solve(const QpProblem& problem,
                   const QpSolution* warm_start = nullptr);

  QpSolution solve(const QpProblem& problem, double tolerance, int max_iter,
                   const QpSolution* warm_start = nullptr);

  const QpSettings& settings() const { return settings_; }

 private:
  QpSettings settings_;
  // warm-start carry-over between solves of the same structure
  Eigen::VectorXd last_primal_;
  Eigen::VectorXd last_dual_;

  void polish(const QpProblem& p, const Eigen::VectorXd& z,
              Eigen::VectorXd& x, Eigen::VectorXd& y) const;
};

}  // namespace quadloco::qp
