#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "expdec/graph_codes.hpp"
#include "expdec/pseudoexp.hpp"
#include "expdec/rat.hpp"
#include "expdec/solver.hpp"

namespace expdec {

// n per-coordinate distributions over a finite alphabet; optionally exact.
struct DistributionCollection {
  std::uint64_t q = 2;
  std::vector<std::vector<double>> rows;
  std::optional<std::vector<std::vector<Rat>>> exact;

  std::size_t size() const { return rows.size(); }
};

// D_e(j) = E[Z_{e,j}], clipped at -tol and renormalized
DistributionCollection pe_to_edge_dists(const Pseudoexpectation& pe, double tol = 1e-6);

// D_l(alpha) = E[Z_{N_L(l)} = C0(alpha)]; residual mass outside the inner code
// must stay within tol when constraints were enforced
DistributionCollection pe_to_outer_dists(const Pseudoexpectation& pe, const AELCode& code,
                                         double tol = 1e-6);

DistributionCollection product_to_dists(const ProductPseudocodeword& pc, std::uint64_t q1);

// exact collection from a rational mixture of words
DistributionCollection dists_from_mixture(const std::vector<Word>& words,
                                          const std::vector<Rat>& weights);

// deterministic threshold rounding: every word obtainable by a common
// quantile threshold theta in [0,1); at most q*n + 1 distinct outputs
std::vector<Word> threshold_round(const DistributionCollection& dists);

// agreement deficit E_i E_{j ~ D_i}[ h_i != j ]
double deficit(const DistributionCollection& dists, const Word& h);
std::optional<Rat> deficit_exact(const DistributionCollection& dists, const Word& h);

// seeded per-coordinate sampling (statistical tests)
Word sample_word(const DistributionCollection& dists, std::mt19937_64& rng);

using UniqueDecoder = std::function<std::optional<Word>(const Word&)>;

// threshold rounding + unique decoding; returns the codeword with deficit
// <= delta_dec (unique by the distance argument), smallest deficit first
std::optional<Word> decode_from_dists(const UniqueDecoder& decoder,
                                      const DistributionCollection& dists, double delta_dec,
                                      double slack = 1e-9);

// all codewords decoded from any threshold candidate (pipeline superset;
// pruning happens against exact distances afterwards)
std::vector<Word> decode_candidates(const UniqueDecoder& decoder,
                                    const DistributionCollection& dists);

}  // namespace expdec
