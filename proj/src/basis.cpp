#include "expdec/basis.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace expdec {

PartialAssign::PartialAssign(std::vector<std::pair<std::int32_t, std::uint32_t>> pairs)
    : a(std::move(pairs)) {
  std::sort(a.begin(), a.end());
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i].first == a[i - 1].first)
      throw std::invalid_argument("PartialAssign: duplicate variable");
}

std::optional<std::uint32_t> PartialAssign::value_of(std::int32_t var) const {
  auto it = std::lower_bound(a.begin(), a.end(), std::make_pair(var, 0u));
  if (it != a.end() && it->first == var) return it->second;
  return std::nullopt;
}

std::optional<PartialAssign> PartialAssign::merged(const PartialAssign& x,
                                                   const PartialAssign& y) {
  PartialAssign out;
  out.a.reserve(x.a.size() + y.a.size());
  std::size_t i = 0, j = 0;
  while (i < x.a.size() && j < y.a.size()) {
    if (x.a[i].first < y.a[j].first)
      out.a.push_back(x.a[i++]);
    else if (y.a[j].first < x.a[i].first)
      out.a.push_back(y.a[j++]);
    else {
      if (x.a[i].second != y.a[j].second) return std::nullopt;
      out.a.push_back(x.a[i++]);
      ++j;
    }
  }
  out.a.insert(out.a.end(), x.a.begin() + i, x.a.end());
  out.a.insert(out.a.end(), y.a.begin() + j, y.a.end());
  return out;
}

PartialAssign PartialAssign::restricted(const std::vector<int>& vars) const {
  PartialAssign out;
  for (int v : vars) {
    auto val = value_of(v);
    if (val) out.a.emplace_back(v, *val);
  }
  std::sort(out.a.begin(), out.a.end());
  return out;
}

bool PartialAssign::operator<(const PartialAssign& o) const {
  if (a.size() != o.a.size()) return a.size() < o.a.size();
  // first compare variable sets, then values
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != o.a[i].first) return a[i].first < o.a[i].first;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].second != o.a[i].second) return a[i].second < o.a[i].second;
  return false;
}

std::size_t PartialAssignHash::operator()(const PartialAssign& p) const {
  std::size_t h = 1469598103934665603ull;
  for (auto [v, x] : p.a) {
    h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
  }
  return h;
}

namespace {

void gen_subsets(int m, int k, std::vector<int>& cur, int start,
                 const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == k) {
    emit(cur);
    return;
  }
  for (int v = start; v < m; ++v) {
    cur.push_back(v);
    gen_subsets(m, k, cur, v + 1, emit);
    cur.pop_back();
  }
}

}  // namespace

std::shared_ptr<const AssignmentBasis> AssignmentBasis::full(int m, std::uint32_t q, int t,
                                                             std::uint64_t budget) {
  if (t % 2 != 0) throw std::invalid_argument("AssignmentBasis::full: t must be even");
  auto b = std::make_shared<AssignmentBasis>();
  b->m_ = m;
  b->q_ = q;
  b->t_ = t;
  b->full_ = true;
  int kmax = std::min(m, t / 2);
  // size check before enumerating
  long double total = 0;
  {
    long double binom = 1;
    long double qp = 1;
    for (int k = 0; k <= kmax; ++k) {
      total += binom * qp;
      if (total > static_cast<long double>(budget))
        throw std::runtime_error("AssignmentBasis::full: budget exceeded");
      binom = binom * (m - k) / (k + 1);
      qp *= q;
    }
  }
  for (int k = 0; k <= kmax; ++k) {
    std::vector<int> cur;
    gen_subsets(m, k, cur, 0, [&](const std::vector<int>& S) {
      // odometer over alpha, first position most significant
      std::vector<std::uint32_t> alpha(S.size(), 0);
      while (true) {
        PartialAssign p;
        for (std::size_t i = 0; i < S.size(); ++i) p.a.emplace_back(S[i], alpha[i]);
        b->elems_.push_back(std::move(p));
        int pos = static_cast<int>(S.size()) - 1;
        while (pos >= 0 && ++alpha[pos] == q) alpha[pos--] = 0;
        if (pos < 0) break;
      }
    });
  }
  for (std::size_t i = 0; i < b->elems_.size(); ++i) b->index_[b->elems_[i]] = i;
  return b;
}

std::shared_ptr<const AssignmentBasis> AssignmentBasis::vertex_tops(
    const BipartiteExpander& g, std::uint32_t q,
    const std::vector<std::vector<PartialAssign>>& left_tops,
    const std::vector<std::vector<PartialAssign>>& right_tops, bool include_singletons) {
  auto b = std::make_shared<AssignmentBasis>();
  b->m_ = g.num_edges();
  b->q_ = q;
  b->t_ = 2 * g.d();
  b->full_ = false;
  b->elems_.emplace_back();  // empty assignment
  if (include_singletons)
    for (int e = 0; e < g.num_edges(); ++e)
      for (std::uint32_t j = 0; j < q; ++j)
        b->elems_.push_back(PartialAssign({{e, j}}));
  for (int v = 0; v < g.n(); ++v)
    for (const PartialAssign& p : left_tops[v]) b->elems_.push_back(p);
  for (int v = 0; v < g.n(); ++v)
    for (const PartialAssign& p : right_tops[v]) b->elems_.push_back(p);
  for (std::size_t i = 0; i < b->elems_.size(); ++i) b->index_[b->elems_[i]] = i;
  if (b->index_.size() != b->elems_.size())
    throw std::invalid_argument("vertex_tops: duplicate basis elements");
  return b;
}

std::optional<std::size_t> AssignmentBasis::find(const PartialAssign& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const BasisStructure> BasisStructure::build(
    std::shared_ptr<const AssignmentBasis> basis) {
  auto s = std::make_shared<BasisStructure>();
  s->basis = basis;
  std::size_t B = basis->size();
  s->pair_cell.assign(B * (B + 1) / 2, -1);
  for (std::size_t i = 0; i < B; ++i) {
    for (std::size_t j = i; j < B; ++j) {
      auto merged = PartialAssign::merged(basis->elem(i), basis->elem(j));
      if (!merged) continue;
      auto it = s->cell_index.find(*merged);
      std::size_t cid;
      if (it == s->cell_index.end()) {
        cid = s->cells.size();
        s->cell_index[*merged] = cid;
        s->cells.push_back(std::move(*merged));
        s->cell_rep.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
        s->cell_count.push_back(0);
      } else {
        cid = it->second;
      }
      s->pair_cell[s->pair_index(i, j)] = static_cast<std::int32_t>(cid);
      s->cell_count[cid] += 1;
    }
  }
  return s;
}

std::optional<std::size_t> BasisStructure::find_cell(const PartialAssign& p) const {
  auto it = cell_index.find(p);
  if (it == cell_index.end()) return std::nullopt;
  return it->second;
}

}  // namespace expdec
