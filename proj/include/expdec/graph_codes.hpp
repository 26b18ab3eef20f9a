#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "expdec/code.hpp"
#include "expdec/graph.hpp"

namespace expdec {

// Tanner code on a bipartite d-regular graph: edge assignments whose left and
// right neighborhood restrictions (in the fixed edge order) lie in the inner
// code C0 on both sides.
class TannerCode {
 public:
  TannerCode(BipartiteExpander graph, LinearCode inner);

  const BipartiteExpander& graph() const { return graph_; }
  const LinearCode& inner() const { return inner_; }
  std::uint64_t q() const { return inner_.field().q(); }
  int block_length() const { return graph_.num_edges(); }

  Rat delta0() const { return delta0_; }
  // delta0 * (delta0 - lambda); exact when lambda is exact
  double designed_distance() const;
  std::optional<Rat> designed_distance_exact() const;

  bool member(const Word& w) const;
  std::vector<Word> enumerate(std::uint64_t budget = kDefaultEnumBudget) const;
  // left-then-right rounds of local nearest-codeword replacement
  std::optional<Word> zemor_unique_decode(const Word& w, int max_rounds = -1) const;

 private:
  BipartiteExpander graph_;
  LinearCode inner_;
  Rat delta0_;
};

// AEL distance amplification: outer codeword symbols are pushed through C0
// onto left stars, then collected at right vertices into folded symbols in
// [q0^d]. The inner-index bijection [q1] <-> C0 is message order of C0.
class AELCode {
 public:
  AELCode(BipartiteExpander graph, LinearCode inner, LinearCode outer);

  const BipartiteExpander& graph() const { return graph_; }
  const LinearCode& inner() const { return inner_; }
  const LinearCode& outer() const { return outer_; }
  std::uint64_t q0() const { return inner_.field().q(); }
  std::uint64_t q1() const { return outer_.field().q(); }
  std::uint64_t folded_alphabet() const;  // q0^d
  Rat delta0() const { return delta0_; }
  Rat delta1() const { return delta1_; }
  double designed_distance() const;  // delta0 - lambda/delta1

  const Word& inner_codeword(std::uint64_t idx) const { return inner_words_[idx]; }
  // inverse of the bijection; nullopt if w is not an inner codeword
  std::optional<std::uint64_t> inner_index(const Word& w) const;

  Word encode_edges(const Word& outer_codeword) const;  // in [q0]^E
  Word fold(const Word& edge_word) const;               // in [q0^d]^R
  Word unfold(const Word& folded) const;                // back to [q0]^E
  Word encode_folded(const Word& outer_codeword) const { return fold(encode_edges(outer_codeword)); }

  // the three distances between edge words
  struct Deltas {
    Rat left, middle, right;
  };
  Deltas deltas(const Word& a, const Word& b) const;

  // per-left-vertex nearest inner codeword, then outer unique decoding
  std::optional<Word> unique_decode(const Word& folded) const;

  std::vector<Word> enumerate_outer(std::uint64_t budget = kDefaultEnumBudget) const {
    return outer_.enumerate(budget);
  }

 private:
  BipartiteExpander graph_;
  LinearCode inner_, outer_;
  std::vector<Word> inner_words_;
  Rat delta0_, delta1_;
};

// Plain concatenation: outer symbol i becomes the inner codeword block
// C0(f_i), blocklength n*d over [q0].
class ConcatCode {
 public:
  ConcatCode(LinearCode inner, LinearCode outer);

  const LinearCode& inner() const { return inner_; }
  const LinearCode& outer() const { return outer_; }
  std::uint64_t q0() const { return inner_.field().q(); }
  std::uint64_t q1() const { return outer_.field().q(); }
  int block_length() const { return outer_.n() * inner_.n(); }
  Rat delta0() const { return delta0_; }
  Rat delta1() const { return delta1_; }

  const Word& inner_codeword(std::uint64_t idx) const { return inner_words_[idx]; }
  std::optional<std::uint64_t> inner_index(const Word& w) const;

  Word encode(const Word& outer_codeword) const;
  bool member(const Word& w) const;
  std::vector<Word> enumerate(std::uint64_t budget = kDefaultEnumBudget) const;

 private:
  LinearCode inner_, outer_;
  std::vector<Word> inner_words_;
  Rat delta0_, delta1_;
};

}  // namespace expdec
