#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace expdec {

// Euclidean projection onto the probability simplex (exact, sort-based)
void simplex_project(Eigen::VectorXd& v);

// minimize ||A x||^2 over a product of simplices intersected with <a, x> >= gamma.
// Blocks partition the coordinates of x; each block is one simplex. Projected
// gradient with a cyclic Dykstra projection onto the intersection.
struct ProductSimplexQP {
  enum class Status { optimal, infeasible, max_iters };

  struct Result {
    Eigen::VectorXd x;
    double psi = 0;
    double kkt_residual = 0;
    int iters = 0;
    Status status = Status::optimal;
  };

  Eigen::MatrixXd A;
  Eigen::VectorXd a;  // halfspace normal (in x-space)
  double gamma = 0;
  std::vector<std::pair<int, int>> blocks;  // (offset, length)

  int max_iters = 50000;
  double tol = 1e-9;
  int dykstra_iters = 200;

  Result solve(const Eigen::VectorXd* warm = nullptr) const;
};

}  // namespace expdec
