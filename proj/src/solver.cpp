#include "expdec/solver.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "expdec/covering.hpp"
#include "expdec/kernels/kernels.hpp"

namespace expdec {

namespace {

// projection onto the PSD cone; dsyevd + positive-part reconstruction
void psd_project(const Eigen::MatrixXd& S, Eigen::MatrixXd& X, double clip,
                 Eigen::MatrixXd& work, Eigen::VectorXd& evals) {
  const int n = static_cast<int>(S.rows());
  work = S;
  evals.resize(n);
  int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, work.data(), n, evals.data());
  if (info != 0) {  // fall back to Eigen's solver
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    X = es.eigenvectors() * es.eigenvalues().cwiseMax(clip).asDiagonal() *
        es.eigenvectors().transpose();
    return;
  }
  int first_pos = 0;
  while (first_pos < n && evals(first_pos) <= clip) ++first_pos;
  const int k = n - first_pos;
  if (k == 0) {
    X.setZero(n, n);
    return;
  }
  Eigen::MatrixXd vpos = work.rightCols(k);
  for (int c = 0; c < k; ++c) vpos.col(c) *= std::sqrt(evals(first_pos + c));
  X.noalias() = vpos * vpos.transpose();
}

std::string row_key(const std::vector<std::pair<std::int32_t, double>>& row, double rhs) {
  std::string k;
  k.reserve(row.size() * 12 + 8);
  for (auto [c, v] : row) {
    k.append(reinterpret_cast<const char*>(&c), sizeof(c));
    k.append(reinterpret_cast<const char*>(&v), sizeof(v));
  }
  k.append(reinterpret_cast<const char*>(&rhs), sizeof(rhs));
  return k;
}

}  // namespace

MomentSdp::MomentSdp(std::shared_ptr<const BasisStructure> structure, ConstraintSet constraints,
                     ObjectiveKind kind, const BipartiteExpander* graph, std::uint64_t q0)
    : s_(std::move(structure)), cs_(std::move(constraints)), kind_(kind), graph_(graph), q0_(q0) {
  B_ = s_->basis->size();
  const std::size_t C = s_->cells.size();
  cell_var_.assign(C, -1);
  std::size_t v = 0;
  for (std::size_t c = 0; c < C; ++c) {
    if (cs_.is_zeroed(c)) continue;
    cell_var_[c] = static_cast<std::int32_t>(v++);
  }
  nfree_ = v;
  cnt_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nfree_));
  for (std::size_t i = 0; i < B_; ++i)
    for (std::size_t j = i; j < B_; ++j) {
      std::int32_t c = s_->pair_cell[s_->pair_index(i, j)];
      if (c < 0 || cell_var_[c] < 0) continue;
      pos_i_.push_back(static_cast<std::int32_t>(i));
      pos_j_.push_back(static_cast<std::int32_t>(j));
      pos_var_.push_back(cell_var_[c]);
      cnt_(cell_var_[c]) += (i == j) ? 1.0 : 2.0;
    }

  const AssignmentBasis& basis = *s_->basis;
  std::vector<Eigen::Triplet<double>> pt;
  if (kind_ == ObjectiveKind::edges) {
    std::uint32_t q = basis.q();
    Embedding emb = chi_build(q);
    int m = basis.m();
    double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Eigen::Index dim = static_cast<Eigen::Index>(q - 1);
    for (int e = 0; e < m; ++e)
      for (std::uint32_t j = 0; j < q; ++j) {
        auto cid = s_->find_cell(PartialAssign({{e, j}}));
        if (!cid || cell_var_[*cid] < 0) continue;
        for (Eigen::Index r = 0; r < dim; ++r)
          pt.emplace_back(dim * e + r, cell_var_[*cid], scale * emb.U(static_cast<Eigen::Index>(j), r));
      }
    P_.resize(dim * m, static_cast<Eigen::Index>(nfree_));
  } else {
    if (!graph_ || q0_ < 2)
      throw std::invalid_argument("MomentSdp: folded objective needs a graph");
    std::uint64_t qd = 1;
    for (int i = 0; i < graph_->d(); ++i) qd *= q0_;
    Embedding emb = chi_build(qd);
    Eigen::Index dim = static_cast<Eigen::Index>(qd - 1);
    double scale = 1.0 / std::sqrt(static_cast<double>(graph_->n()));
    for (int r = 0; r < graph_->n(); ++r) {
      const auto& star = graph_->right_edges(r);
      std::vector<std::uint32_t> beta(star.size(), 0);
      while (true) {
        PartialAssign p;
        std::uint64_t sym = 0;
        for (std::size_t i = 0; i < star.size(); ++i) {
          p.a.emplace_back(star[i], beta[i]);
          sym = sym * static_cast<std::uint32_t>(q0_) + beta[i];
        }
        std::sort(p.a.begin(), p.a.end());
        auto cid = s_->find_cell(p);
        if (cid && cell_var_[*cid] >= 0)
          for (Eigen::Index rr = 0; rr < dim; ++rr)
            pt.emplace_back(dim * r + rr, cell_var_[*cid],
                            scale * emb.U(static_cast<Eigen::Index>(sym), rr));
        int pos = static_cast<int>(star.size()) - 1;
        while (pos >= 0 && ++beta[pos] == static_cast<std::uint32_t>(q0_)) beta[pos--] = 0;
        if (pos < 0) break;
      }
    }
    P_.resize(dim * graph_->n(), static_cast<Eigen::Index>(nfree_));
  }
  P_.setFromTriplets(pt.begin(), pt.end());

  assemble_rows();
}

void MomentSdp::assemble_rows() {
  const AssignmentBasis& basis = *s_->basis;
  std::unordered_map<std::string, int> seen;
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows;
  std::vector<double> rhs_list;

  auto var_of = [&](const PartialAssign& p) -> std::pair<bool, std::int32_t> {
    auto cid = s_->find_cell(p);
    if (!cid) return {false, -1};       // not representable
    return {true, cell_var_[*cid]};     // -1 means zeroed (coefficient dropped)
  };
  auto push_row = [&](std::vector<std::pair<std::int32_t, double>> row, double r) {
    std::sort(row.begin(), row.end());
    std::vector<std::pair<std::int32_t, double>> merged;
    for (auto [c, v] : row) {
      if (!merged.empty() && merged.back().first == c)
        merged.back().second += v;
      else
        merged.emplace_back(c, v);
    }
    std::erase_if(merged, [](const auto& p) { return p.second == 0.0; });
    if (merged.empty()) return;
    auto key = row_key(merged, r);
    if (seen.emplace(key, 1).second) {
      rows.push_back(std::move(merged));
      rhs_list.push_back(r);
    }
  };

  {
    auto [ok, var] = var_of(PartialAssign());
    if (!ok || var < 0) throw std::logic_error("MomentSdp: empty cell missing");
    push_row({{var, 1.0}}, 1.0);
  }

  const std::uint32_t q = basis.q();

  // vertex stars and their admissible total patterns, discovered from the basis
  std::vector<std::vector<int>> stars;
  std::vector<std::vector<const PartialAssign*>> star_tops;
  if (graph_) {
    for (int v = 0; v < graph_->n(); ++v) {
      stars.push_back(graph_->left_edges(v));
      stars.push_back(graph_->right_edges(v));
    }
    star_tops.resize(stars.size());
    std::map<std::vector<int>, std::size_t> star_of;
    for (std::size_t si = 0; si < stars.size(); ++si) {
      std::vector<int> key = stars[si];
      std::sort(key.begin(), key.end());
      star_of[key] = si;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const PartialAssign& p = basis.elem(i);
      if (p.size() < 2) continue;
      std::vector<int> key;
      key.reserve(p.size());
      for (auto [var, val] : p.a) key.push_back(var);
      auto it = star_of.find(key);
      if (it != star_of.end()) star_tops[it->second].push_back(&p);
    }
  }

  for (std::size_t bi = 0; bi < basis.size(); ++bi) {
    const PartialAssign& base = basis.elem(bi);
    auto [bok, bvar] = var_of(base);
    if (!bok) continue;

    // (a) single-edge extensions
    for (int e = 0; e < basis.m(); ++e) {
      if (base.value_of(e)) continue;
      std::vector<std::pair<std::int32_t, double>> row;
      bool valid = true;
      for (std::uint32_t j = 0; j < q && valid; ++j) {
        PartialAssign ext = base;
        ext.a.emplace_back(e, j);
        std::sort(ext.a.begin(), ext.a.end());
        auto [ok, var] = var_of(ext);
        if (!ok)
          valid = false;
        else if (var >= 0)
          row.emplace_back(var, 1.0);
      }
      if (!valid) continue;
      if (bvar >= 0) row.emplace_back(bvar, -1.0);
      push_row(std::move(row), 0.0);
    }

    // (b) vertex-star extensions over the admissible total patterns
    for (std::size_t si = 0; si < stars.size(); ++si) {
      if (star_tops[si].empty()) continue;
      bool overlap_total = true;  // skip when base already covers the star
      for (int e : stars[si])
        if (!base.value_of(e)) {
          overlap_total = false;
          break;
        }
      if (overlap_total) continue;
      std::vector<std::pair<std::int32_t, double>> row;
      bool valid = true;
      for (const PartialAssign* top : star_tops[si]) {
        auto m = PartialAssign::merged(base, *top);
        if (!m) continue;  // incompatible: indicator product is 0
        auto [ok, var] = var_of(*m);
        if (!ok) {
          valid = false;
          break;
        }
        if (var >= 0) row.emplace_back(var, 1.0);
      }
      if (!valid) continue;
      if (bvar >= 0) row.emplace_back(bvar, -1.0);
      push_row(std::move(row), 0.0);
    }
  }

  static_rows_.clear();
  static_rhs_ = std::move(rhs_list);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (auto [c, v] : rows[r])
      static_rows_.emplace_back(static_cast<int>(r), c, v);
  n_static_rows_ = static_cast<int>(rows.size());
}

void MomentSdp::factorize(double rho) {
  const Eigen::Index nv = static_cast<Eigen::Index>(nfree_) + 1;  // + slack
  const Eigen::Index nr = n_static_rows_ + 1;                      // + margin row
  const Eigen::Index N = nv + nr;
  const double reg = 1e-10;

  Eigen::SparseMatrix<double> PtP(static_cast<Eigen::Index>(nfree_),
                                  static_cast<Eigen::Index>(nfree_));
  PtP = Eigen::SparseMatrix<double>(P_.transpose()) * P_;

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(PtP.nonZeros() + static_rows_.size() * 2 + nv + nr + nfree_);
  for (int k = 0; k < PtP.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(PtP, k); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), 2.0 * it.value());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(nfree_); ++i)
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), rho * (cnt_(i) + 1.0));
  t.emplace_back(static_cast<int>(nv - 1), static_cast<int>(nv - 1), rho);  // slack
  for (const auto& tri : static_rows_) {
    t.emplace_back(static_cast<int>(nv) + tri.row(), tri.col(), tri.value());
    t.emplace_back(tri.col(), static_cast<int>(nv) + tri.row(), tri.value());
  }
  // margin row: c^T y - s = gamma
  const int mrow = static_cast<int>(nv) + n_static_rows_;
  for (Eigen::Index i = 0; i < cvec_.size(); ++i)
    if (cvec_(i) != 0.0) {
      t.emplace_back(mrow, static_cast<int>(i), cvec_(i));
      t.emplace_back(static_cast<int>(i), mrow, cvec_(i));
    }
  t.emplace_back(mrow, static_cast<int>(nv - 1), -1.0);
  t.emplace_back(static_cast<int>(nv - 1), mrow, -1.0);
  for (Eigen::Index r = 0; r < nr; ++r)
    t.emplace_back(static_cast<int>(nv + r), static_cast<int>(nv + r), -reg);

  kkt_.resize(N, N);
  kkt_.setFromTriplets(t.begin(), t.end());
  lu_.compute(kkt_);
  if (lu_.info() != Eigen::Success) throw std::runtime_error("MomentSdp: KKT factorization failed");
  rho_cached_ = rho;
}

MomentSdp::Result MomentSdp::solve(const Eigen::VectorXd& u, double gamma,
                                   const SolverParams& params) {
  Result res;
  if (gamma > 1.0 + 1e-9) {
    // ||E[chi(Z)]|| <= 1 for every feasible point (Cauchy-Schwarz cap)
    res.stats.status = SolveStatus::infeasible_margin;
    return res;
  }
  cvec_ = P_.transpose() * u;
  gamma_ = gamma;

  double rho = params.rho;
  factorize(rho);
  res.stats.refactorizations = 1;

  const Eigen::Index nv = static_cast<Eigen::Index>(nfree_) + 1;
  const Eigen::Index nr = n_static_rows_ + 1;
  const Eigen::Index Bx = static_cast<Eigen::Index>(B_);

  Eigen::VectorXd y;
  if (have_warm_ && warm_y_.size() == static_cast<Eigen::Index>(nfree_))
    y = warm_y_;
  else
    y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nfree_));
  double s = 0.0;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(Bx, Bx);
  auto fill_M = [&](const Eigen::VectorXd& yy) {
    M.setZero();
    for (std::size_t p = 0; p < pos_var_.size(); ++p) {
      double v = yy(pos_var_[p]);
      M(pos_i_[p], pos_j_[p]) = v;
      M(pos_j_[p], pos_i_[p]) = v;
    }
  };
  auto adjointA = [&](const Eigen::MatrixXd& Z, Eigen::VectorXd& out) {
    out.setZero();
    for (std::size_t p = 0; p < pos_var_.size(); ++p) {
      if (pos_i_[p] == pos_j_[p])
        out(pos_var_[p]) += Z(pos_i_[p], pos_j_[p]);
      else
        out(pos_var_[p]) += Z(pos_i_[p], pos_j_[p]) + Z(pos_j_[p], pos_i_[p]);
    }
  };

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(Bx, Bx), U = Eigen::MatrixXd::Zero(Bx, Bx);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(nv), V = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd atz(static_cast<Eigen::Index>(nfree_));
  Eigen::VectorXd kkt_rhs(nv + nr), sol(nv + nr);
  Eigen::MatrixXd Xprev = X, Mrel(Bx, Bx), eig_work(Bx, Bx);
  Eigen::VectorXd wprev = w, wrel(nv), evals(Bx);
  const double alpha = 1.6;  // over-relaxation

  std::ofstream trace;
  if (params.trace_csv) {
    trace.open(*params.trace_csv, std::ios::app);
    trace << "iter,rho,primal,dual,psi\n";
  }

  fill_M(y);
  psd_project(M, X, params.psd_tol, eig_work, evals);
  w.head(static_cast<Eigen::Index>(nfree_)) = y;
  kernels::ops().clip_box(w.data(), 0.0, 1.0, nfree_);
  w(nv - 1) = std::max(0.0, s);

  int it = 1;
  double r_prim = 0, r_dual = 0;
  for (; it <= params.max_iters; ++it) {
    // y-update: proximal objective + affine block through the cached KKT
    adjointA(X - U, atz);
    kkt_rhs.setZero();
    kkt_rhs.head(static_cast<Eigen::Index>(nfree_)) =
        rho * (atz + (w - V).head(static_cast<Eigen::Index>(nfree_)));
    kkt_rhs(nv - 1) = rho * (w(nv - 1) - V(nv - 1));
    for (int r = 0; r < n_static_rows_; ++r) kkt_rhs(nv + r) = static_rhs_[r];
    kkt_rhs(nv + n_static_rows_) = gamma_;
    sol = lu_.solve(kkt_rhs);
    y = sol.head(static_cast<Eigen::Index>(nfree_));
    s = sol(nv - 1);

    // splitting blocks with over-relaxation
    fill_M(y);
    Mrel = alpha * M + (1.0 - alpha) * X;
    wrel = w;
    wrel.head(static_cast<Eigen::Index>(nfree_)) =
        alpha * y + (1.0 - alpha) * w.head(static_cast<Eigen::Index>(nfree_));
    wrel(nv - 1) = alpha * s + (1.0 - alpha) * w(nv - 1);

    Xprev.swap(X);
    psd_project(Mrel + U, X, params.psd_tol, eig_work, evals);
    wprev.swap(w);
    w = wrel + V;
    kernels::ops().clip_box(w.data(), 0.0, 1.0, nfree_);
    w(nv - 1) = std::max(0.0, wrel(nv - 1) + V(nv - 1));

    U += Mrel - X;
    V += wrel - w;

    double pm = (M - X).norm();
    double pw = std::sqrt((y - w.head(static_cast<Eigen::Index>(nfree_))).squaredNorm() +
                          (s - w(nv - 1)) * (s - w(nv - 1)));
    r_prim = std::sqrt(pm * pm + pw * pw);
    adjointA(Xprev - X, atz);
    double dm = atz.norm();
    double dw = (w - wprev).norm();
    r_dual = rho * std::sqrt(dm * dm + dw * dw);

    double scale = std::max({1.0, M.norm(), X.norm()});
    if (trace.is_open() && it % 10 == 0)
      trace << it << ',' << rho << ',' << r_prim << ',' << r_dual << ','
            << (P_ * y).squaredNorm() << '\n';
    if (r_prim <= params.eps_primal * scale && r_dual <= params.eps_dual * scale) break;

    if (it % 25 == 0 && res.stats.refactorizations < 30) {
      if (r_prim > 10.0 * r_dual) {
        rho *= 2.0;
        U *= 0.5;
        V *= 0.5;
        factorize(rho);
        ++res.stats.refactorizations;
      } else if (r_dual > 10.0 * r_prim) {
        rho *= 0.5;
        U *= 2.0;
        V *= 2.0;
        factorize(rho);
        ++res.stats.refactorizations;
      }
    }
  }

  res.stats.iters = std::min(it, params.max_iters);
  res.stats.primal_residual = r_prim;
  res.stats.dual_residual = r_dual;
  res.stats.psi = (P_ * y).squaredNorm();
  res.stats.margin = cvec_.dot(y);
  res.stats.status = it > params.max_iters ? SolveStatus::max_iters : SolveStatus::optimal;

  warm_y_ = y;
  have_warm_ = true;

  std::vector<double> cells(s_->cells.size(), 0.0);
  for (std::size_t c = 0; c < s_->cells.size(); ++c)
    if (cell_var_[c] >= 0) cells[c] = y(cell_var_[c]);
  res.pe = Pseudoexpectation(s_, cells);
  return res;
}

ConcatQp::ConcatQp(const ConcatCode& code) : code_(&code) {
  int n = code.outer().n(), d = code.inner().n();
  std::uint64_t q1 = code.q1();
  Embedding emb = chi_build(code.q0());
  Eigen::Index dim = static_cast<Eigen::Index>(code.q0() - 1);
  A_.setZero(dim * n * d, static_cast<Eigen::Index>(n * q1));
  double scale = 1.0 / std::sqrt(static_cast<double>(n) * d);
  for (int i = 0; i < n; ++i) {
    for (std::uint64_t f = 0; f < q1; ++f) {
      const Word& block = code.inner_codeword(f);
      Eigen::Index col = static_cast<Eigen::Index>(i * q1 + f);
      for (int j = 0; j < d; ++j)
        A_.block(dim * (static_cast<Eigen::Index>(i) * d + j), col, dim, 1) =
            scale * emb.chi(block[j]);
    }
    blocks_.emplace_back(static_cast<int>(i * q1), static_cast<int>(q1));
  }
}

ProductQpResult ConcatQp::solve(const Eigen::VectorXd& u, double gamma,
                                const SolverParams& params) {
  ProductQpResult out;
  ProductSimplexQP qp;
  qp.A = A_;
  qp.a = A_.transpose() * u;
  qp.gamma = gamma;
  qp.blocks = blocks_;
  qp.max_iters = params.max_iters;
  qp.tol = std::min(params.eps_primal, params.eps_dual) * 1e-2;
  auto res = qp.solve();
  out.psi = res.psi;
  out.kkt_residual = res.kkt_residual;
  out.iters = res.iters;
  switch (res.status) {
    case ProductSimplexQP::Status::infeasible:
      out.status = SolveStatus::infeasible_margin;
      return out;
    case ProductSimplexQP::Status::max_iters:
      out.status = SolveStatus::max_iters;
      break;
    case ProductSimplexQP::Status::optimal:
      out.status = SolveStatus::optimal;
      break;
  }
  ProductPseudocodeword pc;
  std::uint64_t q1 = code_->q1();
  for (int i = 0; i < code_->outer().n(); ++i)
    pc.dists.push_back(res.x.segment(static_cast<Eigen::Index>(i * q1),
                                     static_cast<Eigen::Index>(q1)));
  out.pc = std::move(pc);
  return out;
}

ProductQpResult solve_product_qp(const ConcatCode& code, const Eigen::VectorXd& u, double gamma,
                                 const SolverParams& params) {
  ConcatQp qp(code);
  return qp.solve(u, gamma, params);
}

double psi_mixing_derivative(const Eigen::VectorXd& solution_embed,
                             const Eigen::VectorXd& h_embed) {
  return 2.0 * solution_embed.dot(h_embed - solution_embed);
}

}  // namespace expdec
