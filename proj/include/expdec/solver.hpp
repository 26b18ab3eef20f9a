#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expdec/pseudoexp.hpp"
#include "expdec/qp.hpp"

namespace expdec {

struct SolverParams {
  int max_iters = 50000;
  double eps_primal = 1e-6;
  double eps_dual = 1e-6;
  double rho = 0.1;             // ADMM penalty (adapted by residual balancing)
  double psd_tol = 0.0;         // eigenvalue clip threshold
  std::uint64_t seed = 0;
  std::optional<std::string> trace_csv;
};

enum class SolveStatus { optimal, infeasible_margin, max_iters };

struct SolveStats {
  SolveStatus status = SolveStatus::optimal;
  int iters = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  double psi = 0;
  double margin = 0;
  int refactorizations = 0;
};

// Covering program over constrained pseudoexpectations:
//   minimize   Psi = ||embedded moments||^2
//   subject to <embedded moments, u> >= gamma,
//              moment matrix PSD, cells in [0,1], marginalization ties,
//              code-constraint cells = 0, unit anchor.
// Operator splitting: PSD cone via symmetric eigendecomposition, box via
// clipping, affine block + proximal objective via one cached sparse KKT
// factorization per (rho, margin direction).
class MomentSdp {
 public:
  enum class ObjectiveKind { edges, folded };

  MomentSdp(std::shared_ptr<const BasisStructure> structure, ConstraintSet constraints,
            ObjectiveKind kind, const BipartiteExpander* graph = nullptr,
            std::uint64_t q0 = 0);

  struct Result {
    std::optional<Pseudoexpectation> pe;
    SolveStats stats;
  };

  Result solve(const Eigen::VectorXd& u, double gamma, const SolverParams& params);

  // warm start for sweeps over nearby received words
  void reset_warm_start() { have_warm_ = false; }

  Eigen::Index embed_dim() const { return P_.rows(); }
  std::size_t num_cells() const { return nfree_; }

 private:
  void assemble_rows();
  void factorize(double rho);

  std::shared_ptr<const BasisStructure> s_;
  ConstraintSet cs_;
  ObjectiveKind kind_;
  const BipartiteExpander* graph_ = nullptr;
  std::uint64_t q0_ = 0;

  std::size_t B_ = 0;        // basis size
  std::size_t nfree_ = 0;    // free cells (zeroed removed)
  std::vector<std::int32_t> cell_var_;  // cell -> var or -1
  // matrix positions (upper triangle, free cells)
  std::vector<std::int32_t> pos_i_, pos_j_, pos_var_;
  Eigen::VectorXd cnt_;      // Frobenius multiplicity per var
  Eigen::SparseMatrix<double> P_;  // embedding map (rows = embed dim)

  // static affine rows (unit + marginalization ties); margin row appended
  std::vector<Eigen::Triplet<double>> static_rows_;
  std::vector<double> static_rhs_;
  int n_static_rows_ = 0;

  Eigen::VectorXd cvec_;     // margin normal in var space (P^T u)
  double gamma_ = 0;

  Eigen::SparseMatrix<double> kkt_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  double rho_cached_ = -1;

  bool have_warm_ = false;
  Eigen::VectorXd warm_y_;
};

// Product-form pseudocodeword: one distribution over inner-codeword indices
// per outer coordinate.
struct ProductPseudocodeword {
  std::vector<Eigen::VectorXd> dists;  // n x q1
};

struct ProductQpResult {
  std::optional<ProductPseudocodeword> pc;
  double psi = 0;
  double kkt_residual = 0;
  int iters = 0;
  SolveStatus status = SolveStatus::optimal;
};

class ConcatQp {
 public:
  explicit ConcatQp(const ConcatCode& code);
  ProductQpResult solve(const Eigen::VectorXd& u, double gamma, const SolverParams& params);

 private:
  const ConcatCode* code_;
  Eigen::MatrixXd A_;
  std::vector<std::pair<int, int>> blocks_;
};

ProductQpResult solve_product_qp(const ConcatCode& code, const Eigen::VectorXd& u, double gamma,
                                 const SolverParams& params);

// first-order optimality against a feasible direction: mixing the solution
// toward the integral pe of h must not decrease Psi (within tol)
double psi_mixing_derivative(const Eigen::VectorXd& solution_embed,
                             const Eigen::VectorXd& h_embed);

}  // namespace expdec
