#include "expdec/pseudoexp.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace expdec {

bool ConstraintSet::is_zeroed(std::size_t cell) const {
  return std::binary_search(zero_cells.begin(), zero_cells.end(),
                            static_cast<std::int32_t>(cell));
}

std::string AxiomReport::summary() const {
  std::ostringstream os;
  os << "unit=" << unit_error << " min_eig=" << min_eigenvalue
     << " consistency=" << consistency_residual
     << " marginals=" << marginalization_residual << " range=" << range_violation
     << " constraints=" << constraint_residual << (pass ? " PASS" : " FAIL");
  return os.str();
}

Pseudoexpectation::Pseudoexpectation(std::shared_ptr<const BasisStructure> s, Eigen::MatrixXd M)
    : s_(std::move(s)), M_(std::move(M)) {
  if (M_.rows() != M_.cols() || M_.rows() != static_cast<Eigen::Index>(s_->basis->size()))
    throw std::invalid_argument("Pseudoexpectation: matrix shape mismatch");
}

Pseudoexpectation::Pseudoexpectation(std::shared_ptr<const BasisStructure> s,
                                     const std::vector<double>& cells)
    : s_(std::move(s)) {
  std::size_t B = s_->basis->size();
  if (cells.size() != s_->cells.size())
    throw std::invalid_argument("Pseudoexpectation: cell vector shape mismatch");
  M_.setZero(B, B);
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t j = i; j < B; ++j) {
      std::int32_t c = s_->pair_cell[s_->pair_index(i, j)];
      if (c < 0) continue;
      M_(i, j) = cells[c];
      M_(j, i) = cells[c];
    }
}

double Pseudoexpectation::moment(const PartialAssign& p) const {
  auto v = try_moment(p);
  if (!v) throw std::runtime_error("moment: assignment not representable in this basis");
  return *v;
}

std::optional<double> Pseudoexpectation::try_moment(const PartialAssign& p) const {
  auto cid = s_->find_cell(p);
  if (!cid) return std::nullopt;
  auto [i, j] = s_->cell_rep[*cid];
  return M_(i, j);
}

std::vector<double> Pseudoexpectation::cell_values() const {
  std::vector<double> out(s_->cells.size());
  for (std::size_t c = 0; c < s_->cells.size(); ++c) {
    auto [i, j] = s_->cell_rep[c];
    out[c] = M_(i, j);
  }
  return out;
}

std::vector<double> Pseudoexpectation::local_distribution(const std::vector<int>& vars,
                                                          bool clip) const {
  if (2 * static_cast<int>(vars.size()) > degree())
    throw std::invalid_argument("local_distribution: |S| > t/2");
  std::uint32_t q = basis().q();
  std::size_t total = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) total *= q;
  std::vector<double> dist(total);
  std::vector<std::uint32_t> alpha(vars.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t i = vars.size(); i-- > 0;) {
      alpha[i] = static_cast<std::uint32_t>(rem % q);
      rem /= q;
    }
    PartialAssign p;
    for (std::size_t i = 0; i < vars.size(); ++i) p.a.emplace_back(vars[i], alpha[i]);
    std::sort(p.a.begin(), p.a.end());
    dist[idx] = try_moment(p).value_or(0.0);
  }
  if (clip) {
    double sum = 0;
    for (double& v : dist) {
      if (v < 0) v = 0;
      sum += v;
    }
    if (sum > 0)
      for (double& v : dist) v /= sum;
  }
  return dist;
}

namespace {

// iterate all assignments alpha over vars, first var most significant
template <typename F>
void for_assignments(const std::vector<int>& vars, std::uint32_t q, F&& fn) {
  std::vector<std::uint32_t> alpha(vars.size(), 0);
  while (true) {
    PartialAssign p;
    for (std::size_t i = 0; i < vars.size(); ++i) p.a.emplace_back(vars[i], alpha[i]);
    std::sort(p.a.begin(), p.a.end());
    fn(p);
    int pos = static_cast<int>(vars.size()) - 1;
    while (pos >= 0 && ++alpha[pos] == q) alpha[pos--] = 0;
    if (pos < 0) break;
  }
}

}  // namespace

double Pseudoexpectation::pseudo_cov(const std::vector<int>& S, const std::vector<int>& T) const {
  // patterns missing from a constrained reduced basis are exactly the
  // constraint-zeroed ones, so absent moments read as 0
  std::uint32_t q = basis().q();
  double total = 0;
  for_assignments(S, q, [&](const PartialAssign& pa) {
    double ea = try_moment(pa).value_or(0.0);
    for_assignments(T, q, [&](const PartialAssign& pb) {
      double eb = try_moment(pb).value_or(0.0);
      auto m = PartialAssign::merged(pa, pb);
      double eab = m ? try_moment(*m).value_or(0.0) : 0.0;  // conflict: product is 0
      total += std::abs(eab - ea * eb);
    });
  });
  return total;
}

double Pseudoexpectation::pseudo_var(const std::vector<int>& S) const {
  std::uint32_t q = basis().q();
  double total = 0;
  for_assignments(S, q, [&](const PartialAssign& pa) {
    double ea = try_moment(pa).value_or(0.0);
    total += std::abs(ea - ea * ea);  // E[Z^2] = E[Z] for indicators
  });
  return total;
}

Pseudoexpectation Pseudoexpectation::conditioned(const PartialAssign& ev,
                                                 double prob_floor) const {
  if (!basis().is_full())
    throw std::runtime_error("conditioned: basis does not support conditioning");
  double p = moment(ev);
  if (p <= prob_floor)
    throw std::runtime_error("conditioned: event probability below floor");
  int t2 = degree() - 2 * static_cast<int>(ev.size());
  if (t2 < 0) throw std::runtime_error("conditioned: degree exhausted");
  auto b2 = AssignmentBasis::full(basis().m(), basis().q(), t2,
                                  /*budget=*/std::max<std::uint64_t>(basis().size(), 20000));
  auto s2 = BasisStructure::build(b2);
  std::vector<double> cells(s2->cells.size(), 0.0);
  for (std::size_t c = 0; c < s2->cells.size(); ++c) {
    auto m = PartialAssign::merged(s2->cells[c], ev);
    cells[c] = m ? moment(*m) / p : 0.0;
  }
  return Pseudoexpectation(s2, cells);
}

AxiomReport Pseudoexpectation::check_axioms(double tol, const ConstraintSet* cs) const {
  AxiomReport rep;
  std::size_t B = s_->basis->size();
  rep.unit_error = std::abs(M_(0, 0) - 1.0);  // elem 0 is the empty assignment
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (M_ + M_.transpose()),
                                                     Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  rep.trace = M_.trace();
  // consistency: spread across positions of the same cell
  std::vector<double> lo(s_->cells.size(), 1e300), hi(s_->cells.size(), -1e300);
  for (std::size_t i = 0; i < B; ++i)
    for (std::size_t j = i; j < B; ++j) {
      std::int32_t c = s_->pair_cell[s_->pair_index(i, j)];
      if (c < 0) continue;
      lo[c] = std::min({lo[c], M_(i, j), M_(j, i)});
      hi[c] = std::max({hi[c], M_(i, j), M_(j, i)});
    }
  for (std::size_t c = 0; c < s_->cells.size(); ++c)
    rep.consistency_residual = std::max(rep.consistency_residual, hi[c] - lo[c]);
  // marginalization and range over representable extensions
  std::uint32_t q = basis().q();
  for (std::size_t i = 0; i < B; ++i) {
    const PartialAssign& p = s_->basis->elem(i);
    double v = M_(i, i);  // diagonal: E[Z^2] = E[Z]
    rep.range_violation = std::max({rep.range_violation, -v, v - 1.0});
    if (2 * (static_cast<int>(p.size()) + 1) > degree()) continue;
    for (int var = 0; var < basis().m(); ++var) {
      if (p.value_of(var)) continue;
      double sum = 0;
      bool ok = true;
      for (std::uint32_t j = 0; j < q && ok; ++j) {
        PartialAssign ext = p;
        ext.a.emplace_back(var, j);
        std::sort(ext.a.begin(), ext.a.end());
        auto mv = try_moment(ext);
        if (!mv)
          ok = false;
        else
          sum += *mv;
      }
      if (ok)
        rep.marginalization_residual =
            std::max(rep.marginalization_residual, std::abs(sum - M_(i, i)));
    }
  }
  if (cs) {
    for (std::int32_t c : cs->zero_cells) {
      auto [i, j] = s_->cell_rep[c];
      rep.constraint_residual = std::max(rep.constraint_residual, std::abs(M_(i, j)));
    }
  }
  rep.psd_ok = rep.min_eigenvalue >= -tol * std::max(1.0, rep.trace);
  rep.pass = rep.psd_ok && rep.unit_error <= tol && rep.consistency_residual <= tol &&
             rep.marginalization_residual <= tol && rep.range_violation <= tol &&
             rep.constraint_residual <= tol;
  return rep;
}

Pseudoexpectation pe_from_mixture(std::shared_ptr<const BasisStructure> s,
                                  const std::vector<Word>& words,
                                  const std::vector<double>& weights) {
  if (words.size() != weights.size() || words.empty())
    throw std::invalid_argument("pe_from_mixture: shape mismatch");
  double wsum = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("pe_from_mixture: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("pe_from_mixture: weights must sum to 1");
  for (const Word& w : words)
    if (static_cast<int>(w.size()) != s->basis->m() || w.q != s->basis->q())
      throw std::invalid_argument("pe_from_mixture: word shape mismatch");
  std::vector<double> cells(s->cells.size(), 0.0);
  for (std::size_t c = 0; c < s->cells.size(); ++c) {
    const PartialAssign& pat = s->cells[c];
    double acc = 0;
    for (std::size_t w = 0; w < words.size(); ++w) {
      bool match = true;
      for (auto [var, val] : pat.a)
        if (words[w][var] != val) {
          match = false;
          break;
        }
      if (match) acc += weights[w];
    }
    cells[c] = acc;
  }
  return Pseudoexpectation(std::move(s), cells);
}

Pseudoexpectation pe_from_word(std::shared_ptr<const BasisStructure> s, const Word& w) {
  return pe_from_mixture(std::move(s), {w}, {1.0});
}

Pseudoexpectation pe_from_product(std::shared_ptr<const BasisStructure> s,
                                  const std::vector<std::vector<double>>& dists) {
  if (static_cast<int>(dists.size()) != s->basis->m())
    throw std::invalid_argument("pe_from_product: shape mismatch");
  std::vector<double> cells(s->cells.size(), 0.0);
  for (std::size_t c = 0; c < s->cells.size(); ++c) {
    double acc = 1.0;
    for (auto [var, val] : s->cells[c].a) acc *= dists[var][val];
    cells[c] = acc;
  }
  return Pseudoexpectation(std::move(s), cells);
}

std::shared_ptr<const AssignmentBasis> basis_build(int m, std::uint32_t q, int t,
                                                   std::uint64_t budget) {
  return AssignmentBasis::full(m, q, t, budget);
}

namespace {

// zero every cell whose restriction to some constrained neighborhood has no
// completion inside the inner code (strengthened) / is a total non-codeword
ConstraintSet compile_generic(std::shared_ptr<const BasisStructure> s,
                              const BipartiteExpander& g, const std::vector<Word>& inner_words,
                              bool left_side, bool right_side, bool strengthen) {
  ConstraintSet cs;
  cs.structure = s;
  cs.strengthened = strengthen;
  auto star_blocked = [&](const PartialAssign& cell, const std::vector<int>& star) {
    int present = 0;
    for (int e : star)
      if (cell.value_of(e)) ++present;
    if (present == 0) return false;
    if (!strengthen && present < static_cast<int>(star.size())) return false;
    for (const Word& cw : inner_words) {
      bool match = true;
      for (std::size_t i = 0; i < star.size() && match; ++i) {
        auto v = cell.value_of(star[i]);
        if (v && *v != cw[i]) match = false;
      }
      if (match) return false;
    }
    return true;
  };
  for (std::size_t c = 0; c < s->cells.size(); ++c) {
    const PartialAssign& cell = s->cells[c];
    bool zero = false;
    for (int v = 0; v < g.n() && !zero; ++v) {
      if (left_side && star_blocked(cell, g.left_edges(v))) zero = true;
      if (!zero && right_side && star_blocked(cell, g.right_edges(v))) zero = true;
    }
    if (zero) cs.zero_cells.push_back(static_cast<std::int32_t>(c));
  }
  std::sort(cs.zero_cells.begin(), cs.zero_cells.end());
  return cs;
}

std::vector<Word> inner_list(const LinearCode& c0) {
  std::vector<Word> out;
  for (std::uint64_t i = 0; i < c0.size(); ++i) out.push_back(c0.codeword_at(i));
  return out;
}

}  // namespace

ConstraintSet compile_constraints(const TannerCode& code,
                                  std::shared_ptr<const BasisStructure> s, bool strengthen) {
  if (s->basis->degree() < 2 * code.graph().d())
    throw std::invalid_argument("compile_constraints: degree below 2d");
  return compile_generic(std::move(s), code.graph(), inner_list(code.inner()), true, true,
                         strengthen);
}

ConstraintSet compile_constraints(const AELCode& code,
                                  std::shared_ptr<const BasisStructure> s, bool strengthen) {
  if (s->basis->degree() < 2 * code.graph().d())
    throw std::invalid_argument("compile_constraints: degree below 2d");
  std::vector<Word> inner;
  for (std::uint64_t i = 0; i < code.outer().field().q(); ++i)
    inner.push_back(code.inner_codeword(i));
  return compile_generic(std::move(s), code.graph(), inner, true, false, strengthen);
}

namespace {

std::vector<PartialAssign> star_patterns(const std::vector<int>& star,
                                         const std::vector<Word>& words) {
  std::vector<PartialAssign> out;
  for (const Word& w : words) {
    PartialAssign p;
    for (std::size_t i = 0; i < star.size(); ++i)
      p.a.emplace_back(star[i], static_cast<std::uint32_t>(w[i]));
    std::sort(p.a.begin(), p.a.end());
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PartialAssign> star_all_patterns(const std::vector<int>& star, std::uint32_t q) {
  std::vector<PartialAssign> out;
  std::vector<std::uint32_t> alpha(star.size(), 0);
  while (true) {
    PartialAssign p;
    for (std::size_t i = 0; i < star.size(); ++i) p.a.emplace_back(star[i], alpha[i]);
    std::sort(p.a.begin(), p.a.end());
    out.push_back(std::move(p));
    int pos = static_cast<int>(star.size()) - 1;
    while (pos >= 0 && ++alpha[pos] == q) alpha[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

}  // namespace

std::shared_ptr<const AssignmentBasis> tops_basis(const TannerCode& code) {
  const auto& g = code.graph();
  std::vector<Word> inner = inner_list(code.inner());
  std::vector<std::vector<PartialAssign>> left(g.n()), right(g.n());
  for (int v = 0; v < g.n(); ++v) {
    left[v] = star_patterns(g.left_edges(v), inner);
    right[v] = star_patterns(g.right_edges(v), inner);
  }
  return AssignmentBasis::vertex_tops(g, static_cast<std::uint32_t>(code.q()), left, right);
}

std::shared_ptr<const AssignmentBasis> tops_basis(const AELCode& code) {
  const auto& g = code.graph();
  std::vector<Word> inner;
  for (std::uint64_t i = 0; i < code.q1(); ++i) inner.push_back(code.inner_codeword(i));
  std::vector<std::vector<PartialAssign>> left(g.n()), right(g.n());
  for (int v = 0; v < g.n(); ++v) {
    left[v] = star_patterns(g.left_edges(v), inner);
    right[v] = star_all_patterns(g.right_edges(v), static_cast<std::uint32_t>(code.q0()));
  }
  // singleton moments are not needed by the folded objective or any AEL
  // check; dropping them shrinks the PSD block considerably
  return AssignmentBasis::vertex_tops(g, static_cast<std::uint32_t>(code.q0()), left, right,
                                      /*include_singletons=*/false);
}

}  // namespace expdec
