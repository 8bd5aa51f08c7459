#include "quadloco/lyapunov.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace quadloco {

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(A'P + PA) = (I (x) A' + A' (x) I) vec(P)
  Eigen::MatrixXd K =
      Eigen::kroneckerProduct(I, A.transpose()).eval() +
      Eigen::kroneckerProduct(A.transpose(), I).eval();
  Eigen::VectorXd q(Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n));
  Eigen::VectorXd p = K.partialPivLu().solve(-q);
  Eigen::MatrixXd P(Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n));
  return 0.5 * (P + P.transpose());
}

LyapunovCertificate build_certificate(const Vec6& kp, const Vec6& kd,
                                      const Mat12& Q_L) {
  LyapunovCertificate cert;
  cert.A_m.topRightCorner<6, 6>().setIdentity();
  cert.A_m.bottomLeftCorner<6, 6>() = (-kp).asDiagonal();
  cert.A_m.bottomRightCorner<6, 6>() = (-kd).asDiagonal();
  cert.Q_L = Q_L;

  Eigen::EigenSolver<Mat12> es(cert.A_m);
  if (es.eigenvalues().real().maxCoeff() >= 0.0) throw NonHurwitz();

  cert.P = solve_lyapunov(cert.A_m, cert.Q_L);
  cert.residual = (cert.A_m.transpose() * cert.P + cert.P * cert.A_m + Q_L)
                      .cwiseAbs()
                      .maxCoeff();

  Eigen::SelfAdjointEigenSolver<Mat12> ep(cert.P, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat12> eq(Q_L, Eigen::EigenvaluesOnly);
  if (ep.eigenvalues().minCoeff() <= 0.0) throw NonHurwitz();
  cert.lambda = eq.eigenvalues().minCoeff() / ep.eigenvalues().maxCoeff();
  return cert;
}

DecayReport check_decay(const std::vector<Vec12>& error_trace,
                        const std::vector<double>& u_mismatch,
                        const LyapunovCertificate& cert, double dt,
                        double eps_v_override, int skip_ticks) {
  DecayReport report;
  const int n = static_cast<int>(error_trace.size());
  if (n < 7) return report;

  std::vector<double> v(n);
  double delta_e = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = error_trace[i].dot(cert.P * error_trace[i]);
    delta_e = std::max(delta_e, error_trace[i].norm());
  }

  if (eps_v_override >= 0.0) {
    report.eps_v = eps_v_override;
  } else {
    double delta_u = 0.0;
    for (double d : u_mismatch) delta_u = std::max(delta_u, d);
    report.eps_v = 2.0 * cert.P.norm() * delta_e * delta_u;
  }

  // 5-tick moving average before differencing
  std::vector<double> vs(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    int cnt = 0;
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      acc += v[j];
      ++cnt;
    }
    vs[i] = acc / cnt;
  }

  for (int i = std::max(3, skip_ticks); i < n - 3; ++i) {
    const double vdot = (vs[i + 1] - vs[i - 1]) / (2.0 * dt);
    const double lhs = vdot + cert.lambda * vs[i];
    ++report.checked;
    if (lhs > report.eps_v) {
      ++report.violations;
      report.max_excess = std::max(report.max_excess, lhs - report.eps_v);
    }
  }
  if (report.checked > 0)
    report.violation_fraction =
        static_cast<double>(report.violations) / report.checked;
  return report;
}

BoundsReport check_bounds(const std::vector<Vec12>& e_tilde_trace,
                          const Vec6& gamma, const LyapunovCertificate& cert,
                          const BoundConstants& c) {
  BoundsReport report;
  for (const Vec12& e : e_tilde_trace)
    report.e_tilde_max = std::max(report.e_tilde_max, e.norm());

  const double gamma_norm = gamma.maxCoeff();
  const double lam = cert.lambda;
  const double p_norm = cert.P.norm();
  const double eps_v_tilde = 2.0 * p_norm * report.e_tilde_max *
                             (c.alpha_tilde_b + c.beta_tilde_b);
  report.delta_v_tilde =
      2.0 / gamma_norm *
          (c.alpha_tilde_b * c.alpha_tilde_b + c.beta_tilde_b * c.beta_tilde_b +
           (c.alpha_tilde_b * c.alpha_dot_b + c.beta_tilde_b * c.beta_dot_b) /
               lam) +
      eps_v_tilde / lam;

  report.e_tilde_ceiling = std::sqrt(report.delta_v_tilde / p_norm);
  report.alpha_ceiling = std::sqrt(gamma_norm * report.delta_v_tilde);
  report.beta_ceiling = report.alpha_ceiling;
  report.within_bounds = report.e_tilde_max <= report.e_tilde_ceiling;
  return report;
}

}  // namespace quadloco
