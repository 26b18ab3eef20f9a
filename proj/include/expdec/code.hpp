#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "expdec/field.hpp"
#include "expdec/rat.hpp"

namespace expdec {

// A word over alphabet [q]. Symbols are plain integers; q up to 2^32 so folded
// AEL symbols (q0^d) fit too.
struct Word {
  std::uint64_t q = 2;
  std::vector<std::uint64_t> s;

  Word() = default;
  Word(std::uint64_t q_, std::vector<std::uint64_t> syms);
  std::size_t size() const { return s.size(); }
  std::uint64_t operator[](std::size_t i) const { return s[i]; }
  std::uint64_t& operator[](std::size_t i) { return s[i]; }
  bool operator==(const Word& o) const { return q == o.q && s == o.s; }
  bool operator<(const Word& o) const { return s < o.s; }  // lexicographic
};

Rat hamming_distance(const Word& a, const Word& b);  // fractional
std::size_t hamming_count(const Word& a, const Word& b);

inline constexpr std::uint64_t kDefaultEnumBudget = 1ull << 20;

// [n, k] linear code over a finite field, generator + parity-check form.
class LinearCode {
 public:
  LinearCode() = default;
  LinearCode(const Field& f, FMatrix generator);

  const Field& field() const { return f_; }
  int n() const { return n_; }
  int k() const { return k_; }
  const FMatrix& generator() const { return G_; }
  const FMatrix& parity_check() const { return H_; }
  Rat rate() const { return Rat(k_, n_); }

  Word encode(const Word& message) const;
  bool contains(const Word& w) const;  // H w^T == 0
  std::uint64_t size() const;          // q^k (throws if too large)

  // message with index i in the canonical odometer order (base-q digits of i,
  // least significant digit first)
  Word message_at(std::uint64_t index) const;
  Word codeword_at(std::uint64_t index) const;
  std::vector<Word> enumerate(std::uint64_t budget = kDefaultEnumBudget) const;

  Rat min_distance(std::uint64_t budget = kDefaultEnumBudget) const;
  // tie-break: lexicographically smallest codeword
  std::pair<Word, Rat> nearest_codeword(const Word& w,
                                        std::uint64_t budget = kDefaultEnumBudget) const;

  std::optional<Rat> cached_distance() const { return dist_; }
  void set_cached_distance(Rat d) { dist_ = d; }

  // set by rs_build; gates the Berlekamp-Welch path
  bool is_reed_solomon() const { return is_rs_; }
  void set_reed_solomon(bool v) { is_rs_ = v; }

 private:
  Field f_ = Field::prime(2);
  int n_ = 0, k_ = 0;
  FMatrix G_, H_;
  mutable std::optional<Rat> dist_;
  bool is_rs_ = false;
};

// Reed-Solomon evaluation code at points 0,1,...,n-1 in the canonical field
// enumeration; distance exactly (n-k+1)/n.
LinearCode rs_build(const Field& f, int n, int k);

// Berlekamp-Welch unique decoding up to floor((n-k)/2) errors. Returns the
// codeword (not the message).
std::optional<Word> rs_unique_decode(const LinearCode& rs, const Word& w);

// message recovery: codeword -> message (solves G^T x = c)
std::optional<Word> decode_to_message(const LinearCode& code, const Word& codeword);

}  // namespace expdec
