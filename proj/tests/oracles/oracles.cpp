// Copyright 2026 The hjblearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oracles.hpp"

#include <algorithm>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

double naive_softplus(double s) {
  if (s > 30.0) return s + std::exp(-s);
  return std::log(1.0 + std::exp(s));
}

double network_forward(bool icnn, const std::vector<int>& widths, const Vec& params,
                       const Vec& y) {
  const int d0 = widths.front();
  std::size_t p = 0;
  std::vector<double> z(y.data(), y.data() + y.size());
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const int out = widths[i + 1];
    const int in = widths[i];
    std::vector<double> s(std::size_t(out), 0.0);
    const bool has_w = !icnn || i > 0;
    const bool has_a = icnn;
    if (has_w) {
      for (int r = 0; r < out; ++r) {
        for (int c = 0; c < in; ++c) s[std::size_t(r)] += params[Eigen::Index(p++)] * z[std::size_t(c)];
      }
    }
    if (has_a) {
      for (int r = 0; r < out; ++r) {
        for (int c = 0; c < d0; ++c) s[std::size_t(r)] += params[Eigen::Index(p++)] * y[c];
      }
    }
    for (int r = 0; r < out; ++r) s[std::size_t(r)] += params[Eigen::Index(p++)];
    if (i + 2 == widths.size()) return s[0];
    for (double& v : s) v = naive_softplus(v);
    z = s;
  }
  return 0.0;
}

double icnn_pd_forward(const std::vector<int>& widths, const Vec& params, const Vec& x, double t,
                       double eps, double h) {
  const int n = int(x.size());
  auto F = [&](const Vec& xs) {
    Vec y(n + 1);
    y.head(n) = xs;
    y(n) = t;
    return network_forward(true, widths, params, y);
  };
  const Vec zero = Vec::Zero(n);
  double linear = 0.0;
  for (int i = 0; i < n; ++i) linear += richardson_difference(F, zero, i, h) * x(i);
  return F(x) - F(zero) - linear + eps * x.squaredNorm();
}

double central_difference(const std::function<double(const Vec&)>& f, const Vec& x, int i,
                          double h) {
  Vec xp = x, xm = x;
  xp(i) += h;
  xm(i) -= h;
  return (f(xp) - f(xm)) / (2.0 * h);
}

double richardson_difference(const std::function<double(const Vec&)>& f, const Vec& x, int i,
                             double h) {
  const double coarse = central_difference(f, x, i, h);
  const double fine = central_difference(f, x, i, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

RiddersResult ridders_difference(const std::function<double(const Vec&)>& f, const Vec& x, int i,
                                 double h, int levels) {
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  constexpr double kSafe = 2.0;
  std::vector<std::vector<double>> a(std::size_t(levels), std::vector<double>(std::size_t(levels), 0.0));
  RiddersResult best{central_difference(f, x, i, h), std::numeric_limits<double>::infinity()};
  a[0][0] = best.value;
  double step = h;
  for (int k = 1; k < levels; ++k) {
    step /= kShrink;
    a[0][std::size_t(k)] = central_difference(f, x, i, step);
    double fac = kShrink2;
    for (int j = 1; j <= k; ++j) {
      const std::size_t jj = std::size_t(j), kk = std::size_t(k);
      a[jj][kk] = (a[jj - 1][kk] * fac - a[jj - 1][kk - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double err = std::max(std::abs(a[jj][kk] - a[jj - 1][kk]),
                                  std::abs(a[jj][kk] - a[jj - 1][kk - 1]));
      if (err <= best.error) {
        best = RiddersResult{a[jj][kk], err};
      }
    }
    const std::size_t kk = std::size_t(k);
    if (std::abs(a[kk][kk] - a[kk - 1][kk - 1]) >= kSafe * best.error) break;
  }
  return best;
}

RiddersResult resolved_difference(const std::function<double(const Vec&)>& f, const Vec& x, int i,
                                  double h) {
  RiddersResult r = ridders_difference(f, x, i, h);
  double spread = 2.0 * r.error;
  for (double step : {h, 0.1 * h}) {
    spread = std::max(spread, std::abs(r.value - richardson_difference(f, x, i, step)));
  }
  r.error = spread;
  return r;
}

double excess_rel_err(double analytic, const RiddersResult& fd) {
  const double excess = std::max(0.0, std::abs(analytic - fd.value) - fd.error);
  if (excess == 0.0) return 0.0;
  return excess / std::max(std::abs(fd.value), std::numeric_limits<double>::min());
}

Vec gradient_fd(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) g(i) = central_difference(f, x, i, h);
  return g;
}

namespace {

Mat riccati_rhs(const Mat& A, const Mat& B, const Mat& Q, const Mat& Rinv, const Mat& P) {
  // dP/dt = -(Q + A'P + PA - P B R^-1 B' P)
  return -(Q + A.transpose() * P + P * A - P * B * Rinv * B.transpose() * P);
}

}  // namespace

RiccatiSolution solve_riccati_rk4(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
                                  double horizon, double dt, const Mat& terminal) {
  RiccatiSolution s;
  s.horizon = horizon;
  s.dt = dt;
  s.A = A;
  s.B = B;
  s.Q = Q;
  s.R = R;
  const Mat Rinv = R.inverse();
  const long steps = std::lround(horizon / dt);
  s.P.assign(std::size_t(steps + 1), Mat());
  Mat P = terminal;
  s.P[std::size_t(steps)] = P;
  const double h = -dt;  // integrate from T down to 0
  for (long k = steps; k > 0; --k) {
    const Mat k1 = riccati_rhs(A, B, Q, Rinv, P);
    const Mat k2 = riccati_rhs(A, B, Q, Rinv, P + 0.5 * h * k1);
    const Mat k3 = riccati_rhs(A, B, Q, Rinv, P + 0.5 * h * k2);
    const Mat k4 = riccati_rhs(A, B, Q, Rinv, P + h * k3);
    P = P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    P = 0.5 * (P + P.transpose());
    s.P[std::size_t(k - 1)] = P;
  }
  return s;
}

Mat RiccatiSolution::at(double t) const {
  const double u = std::clamp(t / dt, 0.0, double(P.size() - 1));
  const std::size_t k = std::min<std::size_t>(std::size_t(u), P.size() - 2);
  const double w = u - double(k);
  return (1.0 - w) * P[k] + w * P[k + 1];
}

Mat RiccatiSolution::derivative(double t) const {
  return riccati_rhs(A, B, Q, R.inverse(), at(t));
}

Mat RiccatiSolution::gain(double t) const {
  return R.inverse() * B.transpose() * at(t);
}

Mat riccati_expm(const Mat& A, const Mat& B, const Mat& Q, const Mat& R, double horizon,
                 const Mat& terminal, double t) {
  const int n = int(A.rows());
  Mat H(2 * n, 2 * n);
  H << A, -B * R.inverse() * B.transpose(), -Q, -A.transpose();
  const Mat E = (H * (t - horizon)).exp();
  Mat end(2 * n, n);
  end << Mat::Identity(n, n), terminal;
  const Mat XY = E * end;
  const Mat X = XY.topRows(n);
  const Mat Y = XY.bottomRows(n);
  return Y * X.inverse();
}

Mat care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
  const int n = int(A.rows());
  Mat H(2 * n, 2 * n);
  H << A, -B * R.inverse() * B.transpose(), -Q, -A.transpose();
  Eigen::ComplexEigenSolver<Mat> es(H);
  Eigen::MatrixXcd stable(2 * n, n);
  int c = 0;
  for (int i = 0; i < 2 * n && c < n; ++i) {
    if (es.eigenvalues()(i).real() < 0.0) stable.col(c++) = es.eigenvectors().col(i);
  }
  const Eigen::MatrixXcd X = stable.topRows(n);
  const Eigen::MatrixXcd Y = stable.bottomRows(n);
  const Mat P = (Y * X.inverse()).real();
  return 0.5 * (P + P.transpose());
}

Vec continuous_adjoint_linear(const Mat& A, const Mat& B, const Mat& K, const Mat& Q,
                              const Mat& R, const Mat& terminal, double horizon, double dt,
                              const Vec& x0) {
  const Mat Acl = A - B * K;
  const Mat W = Q + K.transpose() * R * K;
  auto rhs = [&](const Mat& M) -> Mat { return -(Acl.transpose() * M + M * Acl + W); };
  Mat M = terminal;
  const long steps = std::lround(horizon / dt);
  const double h = -dt;
  for (long k = 0; k < steps; ++k) {
    const Mat k1 = rhs(M);
    const Mat k2 = rhs(M + 0.5 * h * k1);
    const Mat k3 = rhs(M + 0.5 * h * k2);
    const Mat k4 = rhs(M + h * k3);
    M = M + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return 2.0 * (0.5 * (M + M.transpose())) * x0;
}

double euler_lqr_cost(const Mat& A, const Mat& B, const Mat& Q, const Mat& R,
                      const std::function<Mat(double)>& gain, const Vec& x0, double horizon,
                      double dt) {
  Vec x = x0;
  double cost = 0.0;
  const long steps = std::lround(horizon / dt);
  for (long k = 0; k < steps; ++k) {
    const Vec u = -gain(double(k) * dt) * x;
    cost += dt * (x.dot(Q * x) + u.dot(R * u));
    x = x + dt * (A * x + B * u);
  }
  return cost;
}

}  // namespace oracle
