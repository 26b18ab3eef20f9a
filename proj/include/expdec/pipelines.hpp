#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "expdec/conditioning.hpp"
#include "expdec/covering.hpp"
#include "expdec/graph_codes.hpp"
#include "expdec/rounding.hpp"
#include "expdec/solver.hpp"

namespace expdec {

struct DecodeConfig {
  double eps = 0.05;
  int k_max = 0;
  double eta = 0;        // 0: the proof's schedule (eps2-driven)
  std::uint64_t seed = 0;
  bool exhaustive = true;
  double delta_dec = 0;  // outer decoding radius (AEL/concat); 0: derived
  double kappa = 0;      // AEL; 0: lambda/delta_dec (0 when lambda is exactly 0)
  SolverParams solver;
  bool runtime_checks = true;      // assert lemma-level inequalities on enumerable instances
  double check_tol = 1e-6;
  std::uint64_t enum_budget = kDefaultEnumBudget;
  int jobs = 1;
};

struct RuntimeChecks {
  bool ran = false;
  int covering_violations = 0;
  int dichotomy_violations = 0;
  int amplification_violations = 0;
  int stationarity_violations = 0;
  bool all_ok() const {
    return !ran || (covering_violations == 0 && dichotomy_violations == 0 &&
                    amplification_violations == 0 && stationarity_violations == 0);
  }
};

struct DecodeStats {
  double psi = 0;
  double margin = 0;
  int solver_iters = 0;
  double primal_residual = 0;
  double dual_residual = 0;
  SolveStatus solver_status = SolveStatus::optimal;
  int branches = 0;
  double eta_hat_best = 0;
  RuntimeChecks checks;
  std::string note;
};

struct ListEntry {
  Word word;
  Rat distance;
};

struct DecodingList {
  std::vector<ListEntry> entries;  // sorted lexicographically, strict-radius pruned
  DecodeStats stats;

  bool contains(const Word& w) const;
  std::vector<Word> words() const;
};

// exact exhaustive list L(g, radius) = {h : dist(h, g) < radius}
DecodingList brute_force_list(const std::vector<Word>& codewords, const Word& g, double radius);
// AEL variant: folded right-distance
DecodingList brute_force_list_ael(const AELCode& code, const Word& folded_g, double radius);

bool rat_lt(const Rat& r, double v);

// Reusable decoders: construction assembles the relaxation once; decode()
// re-solves for each received word (warm-started).
class TannerListDecoder {
 public:
  TannerListDecoder(const TannerCode& code, DecodeConfig cfg);
  DecodingList decode(const Word& g);
  const std::vector<Word>& codewords() const { return codewords_; }
  double radius(double eps) const;  // J(designed) - eps

 private:
  const TannerCode* code_;
  DecodeConfig cfg_;
  std::shared_ptr<const BasisStructure> structure_;
  ConstraintSet cs_;
  std::unique_ptr<MomentSdp> sdp_;
  std::vector<Word> codewords_;
  Embedding emb_;
  double delta0_ = 0, lambda_ = 0, delta_ = 0, johnson_ = 0;
};

class AELListDecoder {
 public:
  AELListDecoder(const AELCode& code, DecodeConfig cfg);
  DecodingList decode(const Word& folded_g);
  const std::vector<Word>& outer_codewords() const { return outer_words_; }
  double radius(double eps) const;  // J(delta0 - kappa) - eps

 private:
  const AELCode* code_;
  DecodeConfig cfg_;
  std::shared_ptr<const BasisStructure> structure_;
  ConstraintSet cs_;
  std::unique_ptr<MomentSdp> sdp_;
  std::vector<Word> outer_words_;
  std::vector<Word> folded_words_;
  Embedding emb_folded_;
  double delta0_ = 0, lambda_ = 0, delta_dec_ = 0, kappa_ = 0, johnson_ = 0;
};

class ConcatListDecoder {
 public:
  ConcatListDecoder(const ConcatCode& code, DecodeConfig cfg);
  DecodingList decode(const Word& g);
  double radius(double eps) const;  // J(delta_dec * delta0) - eps

 private:
  const ConcatCode* code_;
  DecodeConfig cfg_;
  std::unique_ptr<ConcatQp> qp_;
  std::vector<Word> outer_words_;
  std::vector<Word> concat_words_;
  double delta_dec_ = 0, johnson_ = 0;
};

DecodingList list_decode_tanner(const TannerCode& code, const Word& g, const DecodeConfig& cfg);
DecodingList list_decode_ael(const AELCode& code, const Word& folded_g, const DecodeConfig& cfg);
DecodingList list_decode_concat(const ConcatCode& code, const Word& g, const DecodeConfig& cfg);

// near-MDS parameter calculator (no construction)
struct NearMdsReport {
  double eps1 = 0;
  double c = 1;
  double delta_dec = 0;
  double kappa = 0;
  double lambda = 0;
  std::uint64_t d = 0;         // minimal Ramanujan-admissible degree
  std::uint64_t q0 = 0;        // = d (MDS inner)
  double rho0 = 0.5;
  double rho = 0;              // (1 - eps1) rho0
  double alphabet_bits = 0;    // rho0 d log2 q0
  double distance_bound = 0;   // 1 - rho - 3 eps1
  bool degenerate = false;
};

NearMdsReport near_mds_params(double eps1, double c = 1.0, double rho0 = 0.5);

}  // namespace expdec
