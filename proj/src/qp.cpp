#include "expdec/qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace expdec {

void simplex_project(Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0, theta = 0;
  int rho = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    css += u[i];
    double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::max(0.0, v(i) - theta);
}

ProductSimplexQP::Result ProductSimplexQP::solve(const Eigen::VectorXd* warm) const {
  Result res;
  const Eigen::Index N = A.cols();

  // exact infeasibility test: max of <a, x> over the product of simplices
  double amax = 0;
  for (auto [off, len] : blocks) amax += a.segment(off, len).maxCoeff();
  if (gamma > amax + 1e-12) {
    res.status = Status::infeasible;
    res.x = Eigen::VectorXd::Zero(N);
    return res;
  }

  const double anorm2 = a.squaredNorm();
  auto project = [&](Eigen::VectorXd& x) {
    // Dykstra between the product of simplices and the halfspace
    Eigen::VectorXd p = Eigen::VectorXd::Zero(N), qcorr = Eigen::VectorXd::Zero(N);
    for (int it = 0; it < dykstra_iters; ++it) {
      Eigen::VectorXd y = x + p;
      Eigen::VectorXd ys = y;
      for (auto [off, len] : blocks) {
        Eigen::VectorXd seg = ys.segment(off, len);
        simplex_project(seg);
        ys.segment(off, len) = seg;
      }
      p = y - ys;
      Eigen::VectorXd z = ys + qcorr;
      Eigen::VectorXd zs = z;
      if (anorm2 > 0) {
        double viol = gamma - a.dot(z);
        if (viol > 0) zs = z + (viol / anorm2) * a;
      }
      qcorr = z - zs;
      double gap = (zs - x).norm();
      x = zs;
      bool feas = anorm2 == 0 || a.dot(x) >= gamma - 1e-12;
      if (it > 0 && gap < 1e-14 && feas) break;
    }
  };

  Eigen::VectorXd x;
  if (warm && warm->size() == N) {
    x = *warm;
  } else {
    x = Eigen::VectorXd::Zero(N);
    for (auto [off, len] : blocks) x.segment(off, len).setConstant(1.0 / len);
  }
  project(x);

  // Lipschitz constant of the gradient 2 A^T A x via power iteration
  Eigen::VectorXd v = Eigen::VectorXd::Random(N);
  double L = 1;
  for (int i = 0; i < 60; ++i) {
    v.normalize();
    v = A.transpose() * (A * v);
    L = v.norm();
  }
  L = std::max(2 * L, 1e-12);
  const double step = 1.0 / L;

  for (res.iters = 1; res.iters <= max_iters; ++res.iters) {
    Eigen::VectorXd grad = 2.0 * (A.transpose() * (A * x));
    Eigen::VectorXd xn = x - step * grad;
    project(xn);
    double move = (xn - x).norm();
    x = xn;
    if (move < tol * std::max(1.0, x.norm())) break;
  }
  // KKT residual: fixed-point gap of the projected gradient map
  Eigen::VectorXd grad = 2.0 * (A.transpose() * (A * x));
  Eigen::VectorXd fp = x - step * grad;
  project(fp);
  res.kkt_residual = (fp - x).norm();
  res.x = x;
  res.psi = (A * x).squaredNorm();
  res.status = res.iters > max_iters ? Status::max_iters : Status::optimal;
  return res;
}

}  // namespace expdec
