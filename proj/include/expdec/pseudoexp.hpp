#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expdec/basis.hpp"
#include "expdec/code.hpp"
#include "expdec/graph_codes.hpp"

namespace expdec {

// Code-membership constraints compiled to zeroed moment cells (homogeneous
// equalities); the PSD cone and the unit anchor live in the solver/checks.
struct ConstraintSet {
  std::shared_ptr<const BasisStructure> structure;
  std::vector<std::int32_t> zero_cells;
  bool strengthened = true;

  bool is_zeroed(std::size_t cell) const;
};

struct AxiomReport {
  double unit_error = 0;
  double min_eigenvalue = 0;
  double trace = 0;
  double consistency_residual = 0;
  double marginalization_residual = 0;
  double range_violation = 0;       // below 0 / above 1
  double constraint_residual = 0;   // max |moment| over zeroed cells
  bool psd_ok = false;
  bool pass = false;
  std::string summary() const;
};

// Degree-t pseudoexpectation represented by its moment matrix over an
// assignment basis. Entries of the matrix at positions sharing a merged cell
// are tied by construction when built from cell values; check_axioms measures
// the spread for externally supplied matrices.
class Pseudoexpectation {
 public:
  Pseudoexpectation(std::shared_ptr<const BasisStructure> s, Eigen::MatrixXd M);
  Pseudoexpectation(std::shared_ptr<const BasisStructure> s, const std::vector<double>& cells);

  const BasisStructure& structure() const { return *s_; }
  std::shared_ptr<const BasisStructure> structure_ptr() const { return s_; }
  const AssignmentBasis& basis() const { return *s_->basis; }
  int degree() const { return s_->basis->degree(); }
  const Eigen::MatrixXd& matrix() const { return M_; }

  // moment of an arbitrary representable merged assignment
  double moment(const PartialAssign& p) const;
  std::optional<double> try_moment(const PartialAssign& p) const;
  std::vector<double> cell_values() const;  // at canonical positions

  // distribution over [q]^S induced on vars (|S| <= t/2); odometer index with
  // vars[0] most significant. clip: clamp negatives and renormalize.
  std::vector<double> local_distribution(const std::vector<int>& vars, bool clip = false) const;

  double pseudo_cov(const std::vector<int>& S, const std::vector<int>& T) const;
  double pseudo_var(const std::vector<int>& S) const;

  // conditioned operator of degree t - 2|S| on the full basis (requires a
  // full host basis); threshold guards near-zero probability events
  Pseudoexpectation conditioned(const PartialAssign& ev, double prob_floor = 1e-9) const;

  AxiomReport check_axioms(double tol, const ConstraintSet* cs = nullptr) const;

 private:
  std::shared_ptr<const BasisStructure> s_;
  Eigen::MatrixXd M_;
};

Pseudoexpectation pe_from_mixture(std::shared_ptr<const BasisStructure> s,
                                  const std::vector<Word>& words,
                                  const std::vector<double>& weights);
Pseudoexpectation pe_from_word(std::shared_ptr<const BasisStructure> s, const Word& w);
// independent per-variable distributions (n x q)
Pseudoexpectation pe_from_product(std::shared_ptr<const BasisStructure> s,
                                  const std::vector<std::vector<double>>& dists);

// basis_build per spec: the full (S, alpha) basis
std::shared_ptr<const AssignmentBasis> basis_build(int m, std::uint32_t q, int t,
                                                   std::uint64_t budget = 20000);

// Tanner: both sides constrained to C0; AEL: left side only.
ConstraintSet compile_constraints(const TannerCode& code,
                                  std::shared_ptr<const BasisStructure> s,
                                  bool strengthen = true);
ConstraintSet compile_constraints(const AELCode& code,
                                  std::shared_ptr<const BasisStructure> s,
                                  bool strengthen = true);

// reduced solver bases (empty + singletons + admissible neighborhood tops)
std::shared_ptr<const AssignmentBasis> tops_basis(const TannerCode& code);
std::shared_ptr<const AssignmentBasis> tops_basis(const AELCode& code);

}  // namespace expdec
