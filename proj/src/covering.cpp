#include "expdec/covering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expdec/qp.hpp"

namespace expdec {

Embedding chi_build(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("chi_build: q >= 2 required");
  Eigen::Index n = static_cast<Eigen::Index>(q);
  Eigen::MatrixXd G(n, n);
  G.setConstant(-1.0 / static_cast<double>(q - 1));
  G.diagonal().setOnes();
  // Cholesky by hand; the Gram has rank q-1, the last pivot vanishes
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = G(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= L(j, k) * L(j, k);
    if (diag <= 1e-12) {
      L(j, j) = 0;
      continue;
    }
    L(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = G(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
      L(i, j) = v / L(j, j);
    }
  }
  Embedding emb;
  emb.q = q;
  emb.U = L.leftCols(n - 1);
  return emb;
}

Eigen::VectorXd embed_word(const Word& w, const Embedding& emb) {
  if (w.q != emb.q) throw std::invalid_argument("embed_word: alphabet mismatch");
  Eigen::Index dim = static_cast<Eigen::Index>(emb.q - 1);
  Eigen::VectorXd out(dim * static_cast<Eigen::Index>(w.size()));
  double scale = 1.0 / std::sqrt(static_cast<double>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i)
    out.segment(dim * static_cast<Eigen::Index>(i), dim) = scale * emb.chi(w[i]);
  return out;
}

Eigen::VectorXd pe_embed_edges(const Pseudoexpectation& pe, const Embedding& emb) {
  int m = pe.basis().m();
  std::uint32_t q = pe.basis().q();
  if (emb.q != q) throw std::invalid_argument("pe_embed_edges: alphabet mismatch");
  Eigen::Index dim = static_cast<Eigen::Index>(q - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim * m);
  double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int e = 0; e < m; ++e)
    for (std::uint32_t j = 0; j < q; ++j) {
      double w = pe.moment(PartialAssign({{e, j}}));
      out.segment(dim * e, dim) += scale * w * emb.chi(j);
    }
  return out;
}

Eigen::VectorXd pe_embed_folded(const Pseudoexpectation& pe, const BipartiteExpander& g,
                                std::uint64_t q0, const Embedding& emb_folded) {
  Eigen::Index dim = static_cast<Eigen::Index>(emb_folded.q - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim * g.n());
  double scale = 1.0 / std::sqrt(static_cast<double>(g.n()));
  int d = g.d();
  for (int r = 0; r < g.n(); ++r) {
    const auto& star = g.right_edges(r);
    std::vector<std::uint32_t> beta(d, 0);
    while (true) {
      PartialAssign p;
      std::uint64_t sym = 0;
      for (int i = 0; i < d; ++i) {
        p.a.emplace_back(star[i], beta[i]);
        sym = sym * q0 + beta[i];
      }
      std::sort(p.a.begin(), p.a.end());
      double w = pe.moment(p);
      if (w != 0.0) out.segment(dim * r, dim) += scale * w * emb_folded.chi(sym);
      int pos = d - 1;
      while (pos >= 0 && ++beta[pos] == q0) beta[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return out;
}

Eigen::VectorXd embed_product_dists(const std::vector<Eigen::VectorXd>& dists,
                                    const ConcatCode& code, const Embedding& emb_q0) {
  int n = code.outer().n(), d = code.inner().n();
  Eigen::Index dim = static_cast<Eigen::Index>(emb_q0.q - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim * n * d);
  double scale = 1.0 / std::sqrt(static_cast<double>(n) * d);
  for (int i = 0; i < n; ++i)
    for (std::uint64_t f = 0; f < code.q1(); ++f) {
      double w = dists[i](static_cast<Eigen::Index>(f));
      if (w == 0.0) continue;
      const Word& block = code.inner_codeword(f);
      for (int j = 0; j < d; ++j)
        out.segment(dim * (static_cast<Eigen::Index>(i) * d + j), dim) +=
            scale * w * emb_q0.chi(block[j]);
    }
  return out;
}

JohnsonParams johnson(std::uint64_t q, const Rat& delta) {
  Rat qm1(static_cast<std::int64_t>(q - 1));
  Rat one(1);
  Rat limit = qm1 / Rat(static_cast<std::int64_t>(q));
  if (delta < Rat(0) || delta > limit)
    throw std::invalid_argument("johnson: delta outside [0, 1-1/q]");
  JohnsonParams jp;
  jp.q = q;
  jp.delta = delta;
  jp.beta = one - Rat(static_cast<std::int64_t>(q)) * delta / qm1;
  Rat sq;
  if (jp.beta.sqrt_exact(sq)) {
    jp.johnson_exact = limit * (one - sq);
    jp.johnson = jp.johnson_exact->to_double();
  } else {
    jp.johnson = limit.to_double() * (1.0 - std::sqrt(jp.beta.to_double()));
  }
  return jp;
}

double johnson_radius(std::uint64_t q, double delta) {
  double f = 1.0 - 1.0 / static_cast<double>(q);
  double beta = 1.0 - delta / f;
  if (beta < 0) throw std::invalid_argument("johnson_radius: delta too large");
  return f * (1.0 - std::sqrt(beta));
}

double weighted_threshold(const std::vector<std::vector<double>>& weights, std::uint64_t q,
                          double delta) {
  double f = 1.0 - 1.0 / static_cast<double>(q);
  double beta = 1.0 - delta / f;
  double acc = 0;
  for (const auto& row : weights) {
    double sum = 0, sq = 0;
    for (double w : row) {
      sum += w;
      sq += w * w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("weighted_threshold: rows must be normalized");
    acc += sq - 1.0 / static_cast<double>(q);
  }
  acc /= static_cast<double>(weights.size());
  return 1.0 / static_cast<double>(q) + std::sqrt(f * acc * beta);
}

Eigen::VectorXd weights_to_u(const std::vector<std::vector<double>>& weights,
                             const Embedding& emb) {
  Eigen::Index dim = static_cast<Eigen::Index>(emb.q - 1);
  Eigen::Index n = static_cast<Eigen::Index>(weights.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim * n);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::uint64_t j = 0; j < emb.q; ++j)
      out.segment(dim * i, dim) += scale * weights[i][j] * emb.chi(j);
  }
  double norm = out.norm();
  if (norm < 1e-12)
    throw std::invalid_argument("weights_to_u: degenerate weights (zero embedded norm)");
  out /= norm;
  return out;
}

namespace {

CoveringProblem setup_from(double delta, std::uint64_t alphabet, Eigen::VectorXd u, double eps) {
  double f = 1.0 - 1.0 / static_cast<double>(alphabet);
  double beta = 1.0 - delta / f;
  double radius = f * (1.0 - std::sqrt(beta));
  if (eps <= 0 || eps >= radius)
    throw std::invalid_argument("covering_setup: eps outside (0, J(delta))");
  CoveringProblem cp;
  cp.alphabet = alphabet;
  cp.beta = beta;
  cp.designed_delta = delta;
  cp.gamma = std::sqrt(beta) + eps / f;
  cp.eps2 = 2.0 * eps * std::sqrt(beta);
  cp.radius = radius - eps;
  cp.u = std::move(u);
  if (cp.gamma >= 1.0)
    throw std::invalid_argument("covering_setup: eps too large (gamma >= 1)");
  return cp;
}

}  // namespace

CoveringProblem covering_setup_tanner(const TannerCode& code, const Word& g, double eps) {
  Embedding emb = chi_build(code.q());
  return setup_from(code.designed_distance(), code.q(), embed_word(g, emb), eps);
}

CoveringProblem covering_setup_ael(const AELCode& code, const Word& folded, double eps,
                                   double kappa) {
  Embedding emb = chi_build(code.folded_alphabet());
  // decoding radius J(delta0 - kappa); the caller guarantees lambda <= kappa*delta_dec
  double delta = code.delta0().to_double() - kappa;
  return setup_from(delta, code.folded_alphabet(), embed_word(folded, emb), eps);
}

CoveringProblem covering_setup_concat(const ConcatCode& code, const Word& g, double eps,
                                      double delta_dec) {
  Embedding emb = chi_build(code.q0());
  double delta = delta_dec * code.delta0().to_double();
  return setup_from(delta, code.q0(), embed_word(g, emb), eps);
}

bool verify_cover(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& embedded,
                  const Eigen::VectorXd& u, double gamma, double tol) {
  for (const auto& f : embedded) {
    if (u.dot(f) > gamma && x.dot(f) <= gamma * gamma - tol) return false;
  }
  return true;
}

Eigen::VectorXd min_norm_cover_point(const std::vector<Eigen::VectorXd>& F,
                                     const Eigen::VectorXd& g, double eps) {
  if (F.empty()) throw std::invalid_argument("min_norm_cover_point: empty family");
  Eigen::Index dim = F[0].size();
  Eigen::MatrixXd A(dim, static_cast<Eigen::Index>(F.size()));
  for (std::size_t i = 0; i < F.size(); ++i) A.col(static_cast<Eigen::Index>(i)) = F[i];
  ProductSimplexQP qp;
  qp.A = A;
  qp.a = A.transpose() * g;
  qp.gamma = eps;
  qp.blocks = {{0, static_cast<int>(F.size())}};
  qp.tol = 1e-10;
  auto res = qp.solve();
  if (res.status == ProductSimplexQP::Status::infeasible)
    throw std::runtime_error("min_norm_cover_point: halfspace infeasible over hull");
  return A * res.x;
}

}  // namespace expdec
