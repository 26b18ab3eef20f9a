#include "expdec/field.hpp"

#include <stdexcept>

namespace expdec {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// primitive polynomials over GF(2), degree 1..16 (bit m is the leading term)
constexpr std::uint32_t kGF2Poly[17] = {
    0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,  0x11D,
    0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

}  // namespace

Field::Field(std::uint32_t q, std::uint32_t p, std::uint32_t m, std::uint32_t poly)
    : q_(q), p_(p), m_(m), poly_(poly) {
  if (q_ <= 1024) {
    mul_table_.assign(static_cast<std::size_t>(q_) * q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) mul_table_[a * q_ + b] = mul_slow(a, b);
    inv_table_.assign(q_, 0);
    for (std::uint32_t a = 1; a < q_; ++a) {
      for (std::uint32_t b = 1; b < q_; ++b)
        if (mul_table_[a * q_ + b] == 1) {
          inv_table_[a] = b;
          break;
        }
    }
  }
}

std::uint32_t Field::mul_slow(std::uint32_t a, std::uint32_t b) const {
  if (p_ != 2 || m_ == 1) return static_cast<std::uint32_t>((std::uint64_t)a * b % q_);
  // carry-less multiply then reduce by poly_
  std::uint64_t acc = 0, x = a;
  std::uint32_t y = b;
  while (y) {
    if (y & 1) acc ^= x;
    x <<= 1;
    y >>= 1;
  }
  for (int bit = 2 * static_cast<int>(m_) - 2; bit >= static_cast<int>(m_); --bit)
    if (acc >> bit & 1) acc ^= static_cast<std::uint64_t>(poly_) << (bit - m_);
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("Field::inv(0)");
  if (!inv_table_.empty()) return inv_table_[a];
  return pow(a, q_ - 2);
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("Field::prime: not a prime");
  return Field(p, p, 1, 0);
}

Field Field::gf2m(std::uint32_t m) {
  if (m < 1 || m > 16) throw std::invalid_argument("Field::gf2m: m out of range");
  return Field(1u << m, 2, m, kGF2Poly[m]);
}

Field Field::of_order(std::uint32_t q) {
  if (q < 2 || q > (1u << 16)) throw std::invalid_argument("Field: order out of range");
  if (is_prime(q)) return prime(q);
  if ((q & (q - 1)) == 0) {
    std::uint32_t m = 0, t = q;
    while (t > 1) {
      t >>= 1;
      ++m;
    }
    return gf2m(m);
  }
  throw std::invalid_argument("Field: odd prime powers are not supported");
}

std::vector<int> FMatrix::rref() {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int piv = -1;
    for (int i = r; i < rows_; ++i)
      if (at(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < cols_; ++j) std::swap(at(piv, j), at(r, j));
    std::uint32_t s = f_->inv(at(r, c));
    for (int j = 0; j < cols_; ++j) at(r, j) = f_->mul(at(r, j), s);
    for (int i = 0; i < rows_; ++i) {
      if (i == r || at(i, c) == 0) continue;
      std::uint32_t factor = at(i, c);
      for (int j = 0; j < cols_; ++j)
        at(i, j) = f_->sub(at(i, j), f_->mul(factor, at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int FMatrix::rank() const {
  FMatrix copy = *this;
  return static_cast<int>(copy.rref().size());
}

FMatrix FMatrix::nullspace() const {
  FMatrix copy = *this;
  std::vector<int> pivots = copy.rref();
  std::vector<char> is_pivot(cols_, 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<int> free_cols;
  for (int c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  FMatrix basis(*f_, static_cast<int>(free_cols.size()), cols_);
  for (std::size_t bi = 0; bi < free_cols.size(); ++bi) {
    int fc = free_cols[bi];
    basis.at(static_cast<int>(bi), fc) = 1;
    for (std::size_t pi = 0; pi < pivots.size(); ++pi)
      basis.at(static_cast<int>(bi), pivots[pi]) = f_->neg(copy.at(static_cast<int>(pi), fc));
  }
  return basis;
}

FMatrix FMatrix::mul(const FMatrix& other) const {
  FMatrix out(*f_, rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      std::uint32_t v = at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < other.cols_; ++j)
        out.at(i, j) = f_->add(out.at(i, j), f_->mul(v, other.at(k, j)));
    }
  return out;
}

FMatrix FMatrix::transpose() const {
  FMatrix out(*f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

}  // namespace expdec
