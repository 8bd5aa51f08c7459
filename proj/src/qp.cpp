#include "quadloco/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace quadloco::qp {

bool QpProblem::well_formed(double psd_tol, double sym_tol) const {
  const int n = num_vars();
  const int m = num_constraints();
  if (linear_cost.size() != n || hessian.cols() != n) return false;
  if (constraint_matrix.cols() != n && m > 0) return false;
  if (lower_bounds.size() != m || upper_bounds.size() != m) return false;
  const double scale = std::max(1.0, hessian.cwiseAbs().maxCoeff());
  if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
    return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -psd_tol * scale) return false;
  for (int i = 0; i < m; ++i)
    if (lower_bounds[i] > upper_bounds[i]) return false;
  return true;
}

double kkt_residual(const QpProblem& p, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& y) {
  const Eigen::VectorXd ax = p.constraint_matrix * x;
  double stat = (p.hessian * x + p.linear_cost +
                 p.constraint_matrix.transpose() * y)
                    .cwiseAbs()
                    .maxCoeff();
  double pfeas = 0.0;
  double comp = 0.0;
  for (int i = 0; i < p.num_constraints(); ++i) {
    if (std::isfinite(p.lower_bounds[i]))
      pfeas = std::max(pfeas, p.lower_bounds[i] - ax[i]);
    if (std::isfinite(p.upper_bounds[i]))
      pfeas = std::max(pfeas, ax[i] - p.upper_bounds[i]);
    // multiplier sign convention: y_i > 0 pushes against the upper bound
    if (y[i] > 0 && std::isfinite(p.upper_bounds[i]))
      comp = std::max(comp, y[i] * std::abs(p.upper_bounds[i] - ax[i]));
    else if (y[i] < 0 && std::isfinite(p.lower_bounds[i]))
      comp = std::max(comp, -y[i] * std::abs(ax[i] - p.lower_bounds[i]));
    else
      comp = std::max(comp, std::abs(y[i]) * 1e3);  // dual on a free row
  }
  return std::max({stat, pfeas, comp});
}

namespace {

Eigen::VectorXd clampToBounds(const Eigen::VectorXd& v,
                              const Eigen::VectorXd& lb,
                              const Eigen::VectorXd& ub) {
  return v.cwiseMax(lb).cwiseMin(ub);
}

}  // namespace

QpSolution QpSolver::solve(const QpProblem& problem, double tolerance,
                           int max_iter, const QpSolution* warm_start) {
  QpSettings saved = settings_;
  settings_.tolerance = tolerance;
  settings_.max_iter = max_iter;
  QpSolution sol = solve(problem, warm_start);
  settings_ = saved;
  return sol;
}

QpSolution QpSolver::solve(const QpProblem& problem,
                           const QpSolution* warm_start) {
  const int n = problem.num_vars();
  const int m = problem.num_constraints();
  const double tol = settings_.tolerance;

  QpSolution sol;
  sol.primal = Eigen::VectorXd::Zero(n);
  sol.dual = Eigen::VectorXd::Zero(m);

  for (int i = 0; i < m; ++i) {
    if (problem.lower_bounds[i] > problem.upper_bounds[i]) {
      sol.status = QpStatus::Infeasible;
      return sol;
    }
  }

  // Row equilibration keeps the result invariant under per-row scaling.
  Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(m);
  Eigen::MatrixXd A = problem.constraint_matrix;
  Eigen::VectorXd lb = problem.lower_bounds;
  Eigen::VectorXd ub = problem.upper_bounds;
  for (int i = 0; i < m; ++i) {
    const double norm = A.row(i).cwiseAbs().maxCoeff();
    if (norm > 0) {
      row_scale[i] = 1.0 / norm;
      A.row(i) *= row_scale[i];
      if (std::isfinite(lb[i])) lb[i] *= row_scale[i];
      if (std::isfinite(ub[i])) ub[i] *= row_scale[i];
    }
  }
  QpProblem scaled{problem.hessian, problem.linear_cost, A, lb, ub};

  const Eigen::MatrixXd& H = problem.hessian;
  const Eigen::VectorXd& g = problem.linear_cost;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  if (warm_start && warm_start->primal.size() == n) x = warm_start->primal;
  if (warm_start && warm_start->dual.size() == m) {
    for (int i = 0; i < m; ++i) y[i] = warm_start->dual[i] / row_scale[i];
  } else if (last_primal_.size() == n && last_dual_.size() == m &&
             !warm_start) {
    x = last_primal_;
    y = last_dual_;
  }

  Eigen::VectorXd z = clampToBounds(A * x, lb, ub);

  double rho = settings_.rho;
  const double sigma = settings_.sigma;
  const double alpha = settings_.relax;

  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  auto refactor = [&]() {
    Eigen::MatrixXd K = H + sigma * Eigen::MatrixXd::Identity(n, n) +
                        rho * A.transpose() * A;
    ldlt.compute(K);
  };
  refactor();

  int it = 0;
  double best_res = kInfinity;
  Eigen::VectorXd best_x = x, best_y = y;
  Eigen::VectorXd y_prev = y;

  for (it = 1; it <= settings_.max_iter; ++it) {
    y_prev = y;
    Eigen::VectorXd rhs = sigma * x - g + A.transpose() * (rho * z - y);
    Eigen::VectorXd xt = ldlt.solve(rhs);
    Eigen::VectorXd zt = A * xt;
    Eigen::VectorXd x_new = alpha * xt + (1 - alpha) * x;
    Eigen::VectorXd z_relaxed = alpha * zt + (1 - alpha) * z;
    Eigen::VectorXd z_new = clampToBounds(z_relaxed + y / rho, lb, ub);
    y += rho * (z_relaxed - z_new);
    x = x_new;
    z = z_new;

    if (it % 10 == 0 || it == settings_.max_iter) {
      double rp = m > 0 ? (A * x - z).cwiseAbs().maxCoeff() : 0.0;
      double rd = (H * x + g + A.transpose() * y).cwiseAbs().maxCoeff();
      if (rp < best_res && rd < best_res) {
        best_res = std::max(rp, rd);
        best_x = x;
        best_y = y;
      }
      if (rp <= 0.1 * tol && rd <= 0.1 * tol) break;

      // primal infeasibility certificate from the dual update direction
      if (m > 0) {
        Eigen::VectorXd dy = y - y_prev;
        const double dy_norm = dy.cwiseAbs().maxCoeff();
        if (dy_norm > 1e-12) {
          Eigen::VectorXd dyn = dy / dy_norm;
          double at_dy = (A.transpose() * dyn).cwiseAbs().maxCoeff();
          double support = 0.0;
          bool bounded = true;
          for (int i = 0; i < m; ++i) {
            if (dyn[i] > 1e-10) {
              if (!std::isfinite(ub[i])) { bounded = false; break; }
              support += ub[i] * dyn[i];
            } else if (dyn[i] < -1e-10) {
              if (!std::isfinite(lb[i])) { bounded = false; break; }
              support += lb[i] * dyn[i];
            }
          }
          if (bounded && at_dy <= 1e-10 && support < -1e-8) {
            sol.status = QpStatus::Infeasible;
            sol.iterations = it;
            return sol;
          }
        }
      }

      if (it % 100 == 0 && rd > 1e-14) {
        double ratio = std::sqrt(std::max(rp, 1e-16) / std::max(rd, 1e-16));
        double rho_new = std::clamp(rho * ratio, 1e-6, 1e6);
        if (rho_new > 5 * rho || rho_new < rho / 5) {
          rho = rho_new;
          refactor();
        }
      }
    }
  }

  sol.iterations = std::min(it, settings_.max_iter);
  sol.primal = x;
  sol.dual = y;
  polish(scaled, z, sol.primal, sol.dual);

  double res = kkt_residual(scaled, sol.primal, sol.dual);
  if (res > best_res && best_res < kInfinity) {
    sol.primal = best_x;
    sol.dual = best_y;
    res = kkt_residual(scaled, sol.primal, sol.dual);
  }

  // report duals for the caller's (unscaled) rows
  for (int i = 0; i < m; ++i) sol.dual[i] *= row_scale[i];
  sol.kkt_residual = res;
  sol.status = res <= tol ? QpStatus::Solved : QpStatus::MaxIterations;
  last_primal_ = sol.primal;
  last_dual_ = sol.dual;
  return sol;
}

void QpSolver::polish(const QpProblem& p, const Eigen::VectorXd& z,
                      Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const int n = p.num_vars();
  const int m = p.num_constraints();
  const double act_tol = 1e-7;

  std::vector<int> active;
  std::vector<double> active_rhs;
  Eigen::VectorXd ax = p.constraint_matrix * x;
  for (int i = 0; i < m; ++i) {
    if (std::isfinite(p.upper_bounds[i]) &&
        (y[i] > act_tol || ax[i] > p.upper_bounds[i] - act_tol)) {
      active.push_back(i);
      active_rhs.push_back(p.upper_bounds[i]);
    } else if (std::isfinite(p.lower_bounds[i]) &&
               (y[i] < -act_tol || ax[i] < p.lower_bounds[i] + act_tol)) {
      active.push_back(i);
      active_rhs.push_back(p.lower_bounds[i]);
    }
  }
  const int k = static_cast<int>(active.size());

  Eigen::MatrixXd K(n + k, n + k);
  K.setZero();
  K.topLeftCorner(n, n) = p.hessian;
  for (int j = 0; j < k; ++j) {
    K.block(0, n + j, n, 1) = p.constraint_matrix.row(active[j]).transpose();
    K.block(n + j, 0, 1, n) = p.constraint_matrix.row(active[j]);
  }
  Eigen::VectorXd rhs(n + k);
  rhs.head(n) = -p.linear_cost;
  for (int j = 0; j < k; ++j) rhs[n + j] = active_rhs[j];

  // least-squares solve handles a singular KKT system (degenerate Hessian)
  Eigen::VectorXd sol =
      K.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd x_p = sol.head(n);
  Eigen::VectorXd y_p = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < k; ++j) y_p[active[j]] = sol[n + j];

  if (kkt_residual(p, x_p, y_p) < kkt_residual(p, x, y)) {
    x = x_p;
    y = y_p;
  }
}

}  // namespace quadloco::qp
