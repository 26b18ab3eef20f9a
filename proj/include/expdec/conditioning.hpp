#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "expdec/pseudoexp.hpp"

namespace expdec {

// Average left-right neighborhood covariance (eta-goodness) diagnostics.
struct GoodnessReport {
  double eta_hat = 0;    // E_{l,r}[Cov(Z_{N_L(l)}, Z_{N_R(r)})]
  double max_pair = 0;
  Eigen::MatrixXd pair_cov;          // n x n
  std::optional<double> tau;         // sqrt(E_l E[X_l]) sqrt(E_r E[Y_r]) vs a reference codeword
};

GoodnessReport avg_lr_cov(const Pseudoexpectation& pe, const BipartiteExpander& g,
                          const Word* reference = nullptr);

// average left variance after conditioning on the right stars of V, weighted
// by the pe's own local law on N_R(V)
double variance_potential(const Pseudoexpectation& pe, const BipartiteExpander& g,
                          const std::vector<int>& V, double prob_floor = 1e-9);

struct ConditioningStep {
  int vertex = -1;
  PartialAssign beta;
  double probability = 1.0;
  double phi = 0;  // average left variance after this step
};

struct ConditioningTrace {
  std::vector<ConditioningStep> steps;
};

struct Branch {
  Pseudoexpectation pe;
  ConditioningTrace trace;
  GoodnessReport report;
  double probability = 1.0;
};

struct EtaGoodResult {
  std::vector<Branch> branches;  // includes the k=0 branch
  std::size_t best = 0;          // smallest eta_hat
  bool achieved = false;         // best eta_hat <= eta
};

enum class ConditioningMode { exhaustive, sample };

// BRS-style correlation reduction: condition on right-vertex neighborhoods
// until eta-good or the budget k_max is exhausted. Exhaustive mode enumerates
// every (V, beta) branch with local probability >= prob_floor; sample mode
// follows one seeded chain (uniform vertex choice, or greedy when greedy=true).
EtaGoodResult make_eta_good(const Pseudoexpectation& pe, const BipartiteExpander& g, double eta,
                            int k_max, ConditioningMode mode, std::uint64_t seed = 0,
                            const Word* reference = nullptr, bool greedy = false,
                            double prob_floor = 1e-9);

}  // namespace expdec
