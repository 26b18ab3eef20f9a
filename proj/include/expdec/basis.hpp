#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "expdec/graph.hpp"

namespace expdec {

// Partial assignment (S, alpha): sorted (variable, value) pairs. Variables
// index edges of the host graph (or plain coordinates).
struct PartialAssign {
  std::vector<std::pair<std::int32_t, std::uint32_t>> a;

  PartialAssign() = default;
  explicit PartialAssign(std::vector<std::pair<std::int32_t, std::uint32_t>> pairs);

  std::size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }
  std::optional<std::uint32_t> value_of(std::int32_t var) const;

  // nullopt on conflicting values
  static std::optional<PartialAssign> merged(const PartialAssign& x, const PartialAssign& y);
  PartialAssign restricted(const std::vector<int>& vars) const;

  bool operator==(const PartialAssign& o) const { return a == o.a; }
  bool operator<(const PartialAssign& o) const;
};

struct PartialAssignHash {
  std::size_t operator()(const PartialAssign& p) const;
};

// Ordered list of basis assignments (S, alpha). `full` is the spec basis
// (every S with |S| <= t/2, closed under restriction); `vertex_tops` is the
// reduced solver basis: empty + all singletons + total neighborhood
// assignments (optionally filtered to inner-codeword patterns per side).
class AssignmentBasis {
 public:
  static std::shared_ptr<const AssignmentBasis> full(int m, std::uint32_t q, int t,
                                                     std::uint64_t budget = 20000);
  // allowed_left/right: per-vertex list of admissible total patterns (empty
  // list = all q^d patterns)
  static std::shared_ptr<const AssignmentBasis> vertex_tops(
      const BipartiteExpander& g, std::uint32_t q,
      const std::vector<std::vector<PartialAssign>>& left_tops,
      const std::vector<std::vector<PartialAssign>>& right_tops,
      bool include_singletons = true);

  int m() const { return m_; }
  std::uint32_t q() const { return q_; }
  int degree() const { return t_; }
  bool is_full() const { return full_; }
  std::size_t size() const { return elems_.size(); }
  const PartialAssign& elem(std::size_t i) const { return elems_[i]; }
  std::optional<std::size_t> find(const PartialAssign& p) const;

 private:
  int m_ = 0;
  std::uint32_t q_ = 2;
  int t_ = 0;
  bool full_ = false;
  std::vector<PartialAssign> elems_;
  std::unordered_map<PartialAssign, std::size_t, PartialAssignHash> index_;
};

// Merge structure of a basis: every compatible pair (i <= j) maps to a cell
// (the canonical merged assignment). Cells are the free moment coordinates.
struct BasisStructure {
  std::shared_ptr<const AssignmentBasis> basis;
  std::vector<PartialAssign> cells;
  std::unordered_map<PartialAssign, std::size_t, PartialAssignHash> cell_index;
  // row-major upper triangle: pair_cell[idx(i,j)] = cell id or -1 (conflict)
  std::vector<std::int32_t> pair_cell;
  std::vector<std::pair<std::int32_t, std::int32_t>> cell_rep;  // canonical position
  std::vector<std::int32_t> cell_count;                          // positions per cell

  static std::shared_ptr<const BasisStructure> build(
      std::shared_ptr<const AssignmentBasis> basis);

  std::size_t pair_index(std::size_t i, std::size_t j) const {  // i <= j
    return i * basis->size() - i * (i + 1) / 2 + j;
  }
  std::optional<std::size_t> find_cell(const PartialAssign& p) const;
};

}  // namespace expdec
