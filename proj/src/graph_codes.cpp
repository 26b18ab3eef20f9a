#include "expdec/graph_codes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace expdec {

TannerCode::TannerCode(BipartiteExpander graph, LinearCode inner)
    : graph_(std::move(graph)), inner_(std::move(inner)) {
  if (inner_.n() != graph_.d())
    throw std::invalid_argument("TannerCode: inner blocklength != degree");
  delta0_ = inner_.min_distance();
}

double TannerCode::designed_distance() const {
  double d0 = delta0_.to_double();
  double lam = graph_.lambda_exact() ? graph_.lambda_exact()->to_double() : graph_.lambda();
  return d0 * (d0 - lam);
}

std::optional<Rat> TannerCode::designed_distance_exact() const {
  if (!graph_.lambda_exact()) return std::nullopt;
  return delta0_ * (delta0_ - *graph_.lambda_exact());
}

bool TannerCode::member(const Word& w) const {
  if (static_cast<int>(w.size()) != block_length() || w.q != q()) return false;
  auto check = [&](const std::vector<int>& star) {
    std::vector<std::uint64_t> local(star.size());
    for (std::size_t i = 0; i < star.size(); ++i) local[i] = w[star[i]];
    return inner_.contains(Word(q(), std::move(local)));
  };
  for (int v = 0; v < graph_.n(); ++v)
    if (!check(graph_.left_edges(v)) || !check(graph_.right_edges(v))) return false;
  return true;
}

std::vector<Word> TannerCode::enumerate(std::uint64_t budget) const {
  // nullspace of the stacked local parity checks
  const Field& f = inner_.field();
  const FMatrix& H0 = inner_.parity_check();
  int m = block_length();
  FMatrix H(f, 2 * graph_.n() * H0.rows(), m);
  int row = 0;
  auto add_rows = [&](const std::vector<int>& star) {
    for (int r = 0; r < H0.rows(); ++r, ++row)
      for (int i = 0; i < H0.cols(); ++i) H.at(row, star[i]) = H0.at(r, i);
  };
  for (int v = 0; v < graph_.n(); ++v) add_rows(graph_.left_edges(v));
  for (int v = 0; v < graph_.n(); ++v) add_rows(graph_.right_edges(v));
  FMatrix basis = H.nullspace();
  int dim = basis.rows();
  long double count = std::pow(static_cast<long double>(f.q()), dim);
  if (count > static_cast<long double>(budget))
    throw std::runtime_error("TannerCode::enumerate: budget exceeded");
  std::uint64_t total = 1;
  for (int i = 0; i < dim; ++i) total *= f.q();
  std::vector<Word> out;
  out.reserve(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<std::uint64_t> w(m, 0);
    std::uint64_t rem = idx;
    for (int b = 0; b < dim; ++b) {
      std::uint32_t coef = static_cast<std::uint32_t>(rem % f.q());
      rem /= f.q();
      if (coef == 0) continue;
      for (int j = 0; j < m; ++j)
        w[j] = f.add(static_cast<std::uint32_t>(w[j]), f.mul(coef, basis.at(b, j)));
    }
    out.emplace_back(q(), std::move(w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Word> TannerCode::zemor_unique_decode(const Word& w, int max_rounds) const {
  if (static_cast<int>(w.size()) != block_length() || w.q != q())
    throw std::invalid_argument("zemor_unique_decode: shape mismatch");
  if (max_rounds < 0)
    max_rounds = static_cast<int>(std::ceil(std::log2(std::max(2, block_length())))) + 4;
  Word cur = w;
  auto pass = [&](bool left) {
    Word next = cur;
    for (int v = 0; v < graph_.n(); ++v) {
      const auto& star = left ? graph_.left_edges(v) : graph_.right_edges(v);
      std::vector<std::uint64_t> local(star.size());
      for (std::size_t i = 0; i < star.size(); ++i) local[i] = cur[star[i]];
      Word dec = inner_.nearest_codeword(Word(q(), std::move(local))).first;
      for (std::size_t i = 0; i < star.size(); ++i) next[star[i]] = dec[i];
    }
    cur = std::move(next);
  };
  for (int round = 0; round < max_rounds; ++round) {
    Word before = cur;
    pass(true);
    pass(false);
    if (cur == before) break;
  }
  if (member(cur)) return cur;
  return std::nullopt;
}

namespace {

std::vector<Word> enumerate_inner_by_message(const LinearCode& c0, std::uint64_t q1) {
  if (c0.size() != q1)
    throw std::invalid_argument("inner/outer mismatch: |C0| != q1");
  std::vector<Word> words;
  words.reserve(q1);
  for (std::uint64_t i = 0; i < q1; ++i) words.push_back(c0.codeword_at(i));
  return words;
}

}  // namespace

AELCode::AELCode(BipartiteExpander graph, LinearCode inner, LinearCode outer)
    : graph_(std::move(graph)), inner_(std::move(inner)), outer_(std::move(outer)) {
  if (inner_.n() != graph_.d())
    throw std::invalid_argument("AELCode: inner blocklength != degree");
  if (outer_.n() != graph_.n())
    throw std::invalid_argument("AELCode: outer blocklength != n");
  inner_words_ = enumerate_inner_by_message(inner_, outer_.field().q());
  delta0_ = inner_.min_distance();
  delta1_ = outer_.min_distance();
}

std::uint64_t AELCode::folded_alphabet() const {
  std::uint64_t a = 1;
  for (int i = 0; i < graph_.d(); ++i) a *= q0();
  return a;
}

double AELCode::designed_distance() const {
  double lam = graph_.lambda_exact() ? graph_.lambda_exact()->to_double() : graph_.lambda();
  return delta0_.to_double() - lam / delta1_.to_double();
}

std::optional<std::uint64_t> AELCode::inner_index(const Word& w) const {
  for (std::uint64_t i = 0; i < inner_words_.size(); ++i)
    if (inner_words_[i] == w) return i;
  return std::nullopt;
}

Word AELCode::encode_edges(const Word& f) const {
  if (static_cast<int>(f.size()) != graph_.n() || f.q != q1())
    throw std::invalid_argument("ael encode: outer word shape mismatch");
  if (!outer_.contains(f)) throw std::invalid_argument("ael encode: not an outer codeword");
  std::vector<std::uint64_t> w(graph_.num_edges());
  for (int l = 0; l < graph_.n(); ++l) {
    const Word& block = inner_words_[f[l]];
    const auto& star = graph_.left_edges(l);
    for (int i = 0; i < graph_.d(); ++i) w[star[i]] = block[i];
  }
  return Word(q0(), std::move(w));
}

Word AELCode::fold(const Word& edge_word) const {
  if (static_cast<int>(edge_word.size()) != graph_.num_edges() || edge_word.q != q0())
    throw std::invalid_argument("fold: shape mismatch");
  std::vector<std::uint64_t> out(graph_.n());
  for (int r = 0; r < graph_.n(); ++r) {
    const auto& star = graph_.right_edges(r);
    std::uint64_t sym = 0;
    for (int i = 0; i < graph_.d(); ++i) sym = sym * q0() + edge_word[star[i]];
    out[r] = sym;
  }
  return Word(folded_alphabet(), std::move(out));
}

Word AELCode::unfold(const Word& folded) const {
  if (static_cast<int>(folded.size()) != graph_.n() || folded.q != folded_alphabet())
    throw std::invalid_argument("unfold: shape mismatch");
  std::vector<std::uint64_t> w(graph_.num_edges());
  for (int r = 0; r < graph_.n(); ++r) {
    const auto& star = graph_.right_edges(r);
    std::uint64_t sym = folded[r];
    for (int i = graph_.d() - 1; i >= 0; --i) {
      w[star[i]] = sym % q0();
      sym /= q0();
    }
  }
  return Word(q0(), std::move(w));
}

AELCode::Deltas AELCode::deltas(const Word& a, const Word& b) const {
  if (a.size() != b.size() || static_cast<int>(a.size()) != graph_.num_edges())
    throw std::invalid_argument("deltas: shape mismatch");
  int n = graph_.n(), d = graph_.d();
  std::int64_t left = 0, right = 0, mid = 0;
  for (int v = 0; v < n; ++v) {
    bool dl = false, dr = false;
    for (int e : graph_.left_edges(v)) dl |= a[e] != b[e];
    for (int e : graph_.right_edges(v)) dr |= a[e] != b[e];
    left += dl;
    right += dr;
  }
  for (int e = 0; e < n * d; ++e) mid += a[e] != b[e];
  return {Rat(left, n), Rat(mid, static_cast<std::int64_t>(n) * d), Rat(right, n)};
}

std::optional<Word> AELCode::unique_decode(const Word& folded) const {
  Word edges = unfold(folded);
  std::vector<std::uint64_t> y(graph_.n());
  for (int l = 0; l < graph_.n(); ++l) {
    const auto& star = graph_.left_edges(l);
    std::vector<std::uint64_t> local(star.size());
    for (std::size_t i = 0; i < star.size(); ++i) local[i] = edges[star[i]];
    Word nearest = inner_.nearest_codeword(Word(q0(), std::move(local))).first;
    y[l] = *inner_index(nearest);
  }
  Word received(q1(), std::move(y));
  int t = (outer_.n() - outer_.k()) / 2;
  if (outer_.is_reed_solomon()) return rs_unique_decode(outer_, received);
  auto [cand, dist] = outer_.nearest_codeword(received);
  if (dist > Rat(t, outer_.n())) return std::nullopt;
  return cand;
}

ConcatCode::ConcatCode(LinearCode inner, LinearCode outer)
    : inner_(std::move(inner)), outer_(std::move(outer)) {
  inner_words_ = enumerate_inner_by_message(inner_, outer_.field().q());
  delta0_ = inner_.min_distance();
  delta1_ = outer_.min_distance();
}

std::optional<std::uint64_t> ConcatCode::inner_index(const Word& w) const {
  for (std::uint64_t i = 0; i < inner_words_.size(); ++i)
    if (inner_words_[i] == w) return i;
  return std::nullopt;
}

Word ConcatCode::encode(const Word& f) const {
  if (static_cast<int>(f.size()) != outer_.n() || f.q != q1())
    throw std::invalid_argument("concat encode: shape mismatch");
  if (!outer_.contains(f))
    throw std::invalid_argument("concat encode: not an outer codeword");
  std::vector<std::uint64_t> w;
  w.reserve(block_length());
  for (int i = 0; i < outer_.n(); ++i) {
    const Word& block = inner_words_[f[i]];
    w.insert(w.end(), block.s.begin(), block.s.end());
  }
  return Word(q0(), std::move(w));
}

bool ConcatCode::member(const Word& w) const {
  if (static_cast<int>(w.size()) != block_length() || w.q != q0()) return false;
  int d = inner_.n();
  std::vector<std::uint64_t> f(outer_.n());
  for (int i = 0; i < outer_.n(); ++i) {
    Word block(q0(), std::vector<std::uint64_t>(w.s.begin() + i * d, w.s.begin() + (i + 1) * d));
    auto idx = inner_index(block);
    if (!idx) return false;
    f[i] = *idx;
  }
  return outer_.contains(Word(q1(), std::move(f)));
}

std::vector<Word> ConcatCode::enumerate(std::uint64_t budget) const {
  std::vector<Word> out;
  for (const Word& f : outer_.enumerate(budget)) out.push_back(encode(f));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace expdec
