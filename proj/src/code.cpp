#include "expdec/code.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expdec {

Word::Word(std::uint64_t q_, std::vector<std::uint64_t> syms) : q(q_), s(std::move(syms)) {
  for (auto v : s)
    if (v >= q) throw std::invalid_argument("Word: symbol out of range");
}

Rat hamming_distance(const Word& a, const Word& b) {
  if (a.size() != b.size() || a.q != b.q)
    throw std::invalid_argument("hamming_distance: shape mismatch");
  return Rat(static_cast<std::int64_t>(hamming_count(a, b)),
             static_cast<std::int64_t>(a.size()));
}

std::size_t hamming_count(const Word& a, const Word& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += a.s[i] != b.s[i];
  return c;
}

LinearCode::LinearCode(const Field& f, FMatrix generator)
    : f_(f), n_(generator.cols()), k_(generator.rows()), G_(std::move(generator)) {
  if (G_.rank() != k_) throw std::invalid_argument("LinearCode: generator not full rank");
  H_ = G_.nullspace();
  // G H^T = 0 by construction; sanity-checked in tests
}

Word LinearCode::encode(const Word& message) const {
  if (static_cast<int>(message.size()) != k_ || message.q != f_.q())
    throw std::invalid_argument("encode: message shape mismatch");
  std::vector<std::uint64_t> out(n_, 0);
  for (int j = 0; j < n_; ++j) {
    std::uint32_t acc = 0;
    for (int i = 0; i < k_; ++i)
      acc = f_.add(acc, f_.mul(static_cast<std::uint32_t>(message[i]), G_.at(i, j)));
    out[j] = acc;
  }
  return Word(f_.q(), std::move(out));
}

bool LinearCode::contains(const Word& w) const {
  if (static_cast<int>(w.size()) != n_ || w.q != f_.q()) return false;
  for (int r = 0; r < H_.rows(); ++r) {
    std::uint32_t acc = 0;
    for (int j = 0; j < n_; ++j)
      acc = f_.add(acc, f_.mul(H_.at(r, j), static_cast<std::uint32_t>(w[j])));
    if (acc != 0) return false;
  }
  return true;
}

std::uint64_t LinearCode::size() const {
  long double sz = std::pow(static_cast<long double>(f_.q()), k_);
  if (sz > static_cast<long double>(UINT64_MAX))
    throw std::overflow_error("LinearCode::size: too large");
  std::uint64_t r = 1;
  for (int i = 0; i < k_; ++i) r *= f_.q();
  return r;
}

Word LinearCode::message_at(std::uint64_t index) const {
  std::vector<std::uint64_t> m(k_);
  for (int i = 0; i < k_; ++i) {
    m[i] = index % f_.q();
    index /= f_.q();
  }
  return Word(f_.q(), std::move(m));
}

Word LinearCode::codeword_at(std::uint64_t index) const { return encode(message_at(index)); }

std::vector<Word> LinearCode::enumerate(std::uint64_t budget) const {
  std::uint64_t sz = size();
  if (sz > budget) throw std::runtime_error("LinearCode::enumerate: budget exceeded");
  std::vector<Word> out;
  out.reserve(sz);
  for (std::uint64_t i = 0; i < sz; ++i) out.push_back(codeword_at(i));
  return out;
}

Rat LinearCode::min_distance(std::uint64_t budget) const {
  if (dist_) return *dist_;
  std::uint64_t sz = size();
  if (sz > budget) throw std::runtime_error("min_distance: budget exceeded");
  std::size_t best = n_ + 1;
  for (std::uint64_t i = 1; i < sz; ++i) {
    Word c = codeword_at(i);
    std::size_t w = 0;
    for (auto v : c.s) w += v != 0;
    best = std::min(best, w);
  }
  if (best > static_cast<std::size_t>(n_))
    throw std::runtime_error("min_distance: trivial code");
  Rat d(static_cast<std::int64_t>(best), n_);
  dist_ = d;
  return d;
}

std::pair<Word, Rat> LinearCode::nearest_codeword(const Word& w, std::uint64_t budget) const {
  std::uint64_t sz = size();
  if (sz > budget) throw std::runtime_error("nearest_codeword: budget exceeded");
  Word best;
  std::size_t best_cnt = SIZE_MAX;
  for (std::uint64_t i = 0; i < sz; ++i) {
    Word c = codeword_at(i);
    std::size_t cnt = hamming_count(c, w);
    if (cnt < best_cnt || (cnt == best_cnt && c < best)) {
      best_cnt = cnt;
      best = std::move(c);
    }
  }
  return {best, Rat(static_cast<std::int64_t>(best_cnt), n_)};
}

LinearCode rs_build(const Field& f, int n, int k) {
  if (n > static_cast<int>(f.q())) throw std::invalid_argument("rs_build: n > q");
  if (k < 1 || k > n) throw std::invalid_argument("rs_build: bad k");
  FMatrix G(f, k, n);
  for (int j = 0; j < n; ++j) {
    std::uint32_t x = static_cast<std::uint32_t>(j);
    std::uint32_t p = 1;
    for (int i = 0; i < k; ++i) {
      G.at(i, j) = p;
      p = f.mul(p, x);
    }
  }
  LinearCode code(f, std::move(G));
  code.set_cached_distance(Rat(n - k + 1, n));
  code.set_reed_solomon(true);
  return code;
}

namespace {

// solve A x = b over the field; A rows x cols with rows >= cols allowed.
// Returns any solution, or nothing if inconsistent.
std::optional<std::vector<std::uint32_t>> solve_linear(const Field& f, FMatrix A,
                                                       std::vector<std::uint32_t> b) {
  int rows = A.rows(), cols = A.cols();
  FMatrix aug(f, rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, cols) = b[i];
  }
  std::vector<int> piv = aug.rref();
  for (int c : piv)
    if (c == cols) return std::nullopt;  // pivot in the rhs column: inconsistent
  std::vector<std::uint32_t> x(cols, 0);
  for (std::size_t pi = 0; pi < piv.size(); ++pi) x[piv[pi]] = aug.at(static_cast<int>(pi), cols);
  return x;
}

}  // namespace

std::optional<Word> rs_unique_decode(const LinearCode& rs, const Word& w) {
  const Field& f = rs.field();
  int n = rs.n(), k = rs.k();
  if (static_cast<int>(w.size()) != n || w.q != f.q())
    throw std::invalid_argument("rs_unique_decode: shape mismatch");
  int t = (n - k) / 2;

  // Berlekamp-Welch: find E (monic, deg <= t) and Q (deg <= k+t-1) with
  // Q(x_i) = w_i E(x_i). Unknowns: e_0..e_{t-1}, q_0..q_{k+t-1}.
  for (int te = t; te >= 0; --te) {
    int ne = te, nq = k + te;
    FMatrix A(f, n, ne + nq);
    std::vector<std::uint32_t> b(n, 0);
    for (int i = 0; i < n; ++i) {
      std::uint32_t x = static_cast<std::uint32_t>(i);
      std::uint32_t wi = static_cast<std::uint32_t>(w[i]);
      std::uint32_t xp = 1;
      for (int j = 0; j < ne; ++j) {
        A.at(i, j) = f.mul(wi, xp);
        xp = f.mul(xp, x);
      }
      // moving w_i x^te to the rhs (monic leading term of E)
      b[i] = f.neg(f.mul(wi, xp));
      xp = 1;
      for (int j = 0; j < nq; ++j) {
        A.at(i, ne + j) = f.neg(xp);
        xp = f.mul(xp, x);
      }
    }
    auto sol = solve_linear(f, A, b);
    if (!sol) continue;
    // E(x) = x^te + sum e_j x^j ; f(x) = Q / E by long division
    std::vector<std::uint32_t> E(te + 1, 0), Q(nq, 0);
    for (int j = 0; j < te; ++j) E[j] = (*sol)[j];
    E[te] = 1;
    for (int j = 0; j < nq; ++j) Q[j] = (*sol)[ne + j];
    // polynomial long division Q / E
    std::vector<std::uint32_t> rem = Q, quot(k, 0);
    for (int d = nq - 1; d >= te; --d) {
      std::uint32_t c = rem[d];
      if (c == 0) continue;
      int shift = d - te;
      if (shift >= k) return std::nullopt;
      quot[shift] = c;  // E is monic
      for (int j = 0; j <= te; ++j) rem[shift + j] = f.sub(rem[shift + j], f.mul(c, E[j]));
    }
    bool clean = true;
    for (auto c : rem)
      if (c != 0) {
        clean = false;
        break;
      }
    if (!clean) continue;
    Word msg(f.q(), std::vector<std::uint64_t>(quot.begin(), quot.end()));
    Word cand = rs.encode(msg);
    if (hamming_count(cand, w) <= static_cast<std::size_t>(t)) return cand;
  }
  return std::nullopt;
}

std::optional<Word> decode_to_message(const LinearCode& code, const Word& codeword) {
  const Field& f = code.field();
  auto sol = solve_linear(f, code.generator().transpose(),
                          std::vector<std::uint32_t>(codeword.s.begin(), codeword.s.end()));
  if (!sol) return std::nullopt;
  Word m(f.q(), std::vector<std::uint64_t>(sol->begin(), sol->end()));
  if (!(code.encode(m) == codeword)) return std::nullopt;
  return m;
}

}  // namespace expdec
