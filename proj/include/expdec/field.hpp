#pragma once

#include <cstdint>
#include <vector>

namespace expdec {

// GF(q) for q prime or q = 2^m, m <= 16. Elements are 0..q-1; for GF(2^m) the
// integer is the coefficient bit pattern over the fixed primitive polynomial
// (table in the README). Multiplication/inverse tables are materialized for
// q <= 1024, otherwise computed on the fly.
class Field {
 public:
  static Field of_order(std::uint32_t q);
  static Field prime(std::uint32_t p);
  static Field gf2m(std::uint32_t m);

  std::uint32_t q() const { return q_; }
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t extension_degree() const { return m_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    return p_ == 2 ? (a ^ b) : (a + b) % q_;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return p_ == 2 ? (a ^ b) : (a + q_ - b) % q_;
  }
  std::uint32_t neg(std::uint32_t a) const { return p_ == 2 ? a : (q_ - a) % q_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (!mul_table_.empty()) return mul_table_[a * q_ + b];
    return mul_slow(a, b);
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

  bool operator==(const Field& o) const { return q_ == o.q_; }

 private:
  Field(std::uint32_t q, std::uint32_t p, std::uint32_t m, std::uint32_t poly);
  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t q_ = 2, p_ = 2, m_ = 1;
  std::uint32_t poly_ = 0;  // reduction polynomial for GF(2^m), bit m set
  std::vector<std::uint32_t> mul_table_;
  std::vector<std::uint32_t> inv_table_;
};

// Dense matrix over a Field, row major. Just enough linear algebra for codes:
// row reduction, rank, nullspace, product.
class FMatrix {
 public:
  FMatrix() = default;
  FMatrix(const Field& f, int rows, int cols)
      : f_(&f), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::uint32_t& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::uint32_t at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Field& field() const { return *f_; }

  int rank() const;
  // reduced row echelon form; returns pivot columns
  std::vector<int> rref();
  // basis of the right nullspace {x : A x = 0}, rows of the returned matrix
  FMatrix nullspace() const;
  FMatrix mul(const FMatrix& other) const;
  FMatrix transpose() const;

 private:
  const Field* f_ = nullptr;
  int rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> a_;
};

}  // namespace expdec
