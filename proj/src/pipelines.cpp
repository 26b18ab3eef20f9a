#include "expdec/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace expdec {

bool rat_lt(const Rat& r, double v) {
  return static_cast<long double>(r.num) < static_cast<long double>(v) * r.den;
}

bool DecodingList::contains(const Word& w) const {
  for (const auto& e : entries)
    if (e.word == w) return true;
  return false;
}

std::vector<Word> DecodingList::words() const {
  std::vector<Word> out;
  for (const auto& e : entries) out.push_back(e.word);
  return out;
}

DecodingList brute_force_list(const std::vector<Word>& codewords, const Word& g, double radius) {
  DecodingList out;
  for (const Word& h : codewords) {
    Rat d = hamming_distance(h, g);
    if (rat_lt(d, radius)) out.entries.push_back({h, d});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ListEntry& a, const ListEntry& b) { return a.word < b.word; });
  return out;
}

DecodingList brute_force_list_ael(const AELCode& code, const Word& folded_g, double radius) {
  DecodingList out;
  for (const Word& f : code.enumerate_outer()) {
    Word folded = code.encode_folded(f);
    Rat d = hamming_distance(folded, folded_g);
    if (rat_lt(d, radius)) out.entries.push_back({folded, d});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ListEntry& a, const ListEntry& b) { return a.word < b.word; });
  return out;
}

namespace {

void sorted_unique(std::vector<Word>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

double auto_eta_tanner(double eps2, double delta) { return eps2 * eps2 / (60.0 * delta); }

double auto_eta_ael(double eps2, double delta_dec, double delta0_minus_kappa) {
  return eps2 * eps2 * delta_dec / (16.0 * delta0_minus_kappa);
}

// Depth-1 conditioning at the rounding level: the conditioned moments
// E[Z_x | Z_{N_R(v)} = beta] for degree-1 (or left-top) queries are exact
// matrix entries of the degree-2d relaxation. Enumerating every (v, beta) is
// the paper's derandomization restricted to |V| = 1.
struct RoundingBranch {
  int vertex = -1;  // -1: unconditioned root
  PartialAssign beta;
  double prob = 1.0;
};

std::vector<RoundingBranch> rounding_branches(const Pseudoexpectation& pe,
                                              const BipartiteExpander& g,
                                              double floor_p = 1e-6) {
  std::vector<RoundingBranch> out;
  out.push_back({});
  std::uint32_t q = pe.basis().q();
  for (int v = 0; v < g.n(); ++v) {
    const auto& star = g.right_edges(v);
    std::vector<std::uint32_t> beta(star.size(), 0);
    while (true) {
      PartialAssign p;
      for (std::size_t i = 0; i < star.size(); ++i) p.a.emplace_back(star[i], beta[i]);
      std::sort(p.a.begin(), p.a.end());
      double prob = pe.try_moment(p).value_or(0.0);
      if (prob >= floor_p) out.push_back({v, p, prob});
      int pos = static_cast<int>(star.size()) - 1;
      while (pos >= 0 && ++beta[pos] == q) beta[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return out;
}

DistributionCollection conditioned_edge_dists(const Pseudoexpectation& pe, int m,
                                              const RoundingBranch& br) {
  DistributionCollection out;
  out.q = pe.basis().q();
  for (int e = 0; e < m; ++e) {
    std::vector<double> row(out.q, 0.0);
    double sum = 0;
    for (std::uint32_t j = 0; j < out.q; ++j) {
      PartialAssign p({{e, j}});
      double v;
      if (br.vertex < 0) {
        v = pe.try_moment(p).value_or(0.0);
      } else {
        auto merged = PartialAssign::merged(p, br.beta);
        v = merged ? pe.try_moment(*merged).value_or(0.0) / br.prob : 0.0;
      }
      row[j] = std::max(0.0, v);
      sum += row[j];
    }
    if (sum <= 0) {
      row.assign(out.q, 1.0 / static_cast<double>(out.q));
      sum = 1.0;
    }
    for (double& v : row) v /= sum;
    out.rows.push_back(std::move(row));
  }
  return out;
}

DistributionCollection conditioned_outer_dists(const Pseudoexpectation& pe, const AELCode& code,
                                               const RoundingBranch& br) {
  DistributionCollection out;
  out.q = code.q1();
  const auto& g = code.graph();
  for (int l = 0; l < g.n(); ++l) {
    const auto& star = g.left_edges(l);
    std::vector<double> row(out.q, 0.0);
    double sum = 0;
    for (std::uint64_t a = 0; a < out.q; ++a) {
      const Word& cw = code.inner_codeword(a);
      PartialAssign p;
      for (int i = 0; i < g.d(); ++i)
        p.a.emplace_back(star[i], static_cast<std::uint32_t>(cw[i]));
      std::sort(p.a.begin(), p.a.end());
      double v;
      if (br.vertex < 0) {
        v = pe.try_moment(p).value_or(0.0);
      } else {
        auto merged = PartialAssign::merged(p, br.beta);
        v = merged ? pe.try_moment(*merged).value_or(0.0) / br.prob : 0.0;
      }
      row[a] = std::max(0.0, v);
      sum += row[a];
    }
    if (sum <= 0) {
      row.assign(out.q, 1.0 / static_cast<double>(out.q));
      sum = 1.0;
    }
    for (double& v : row) v /= sum;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

TannerListDecoder::TannerListDecoder(const TannerCode& code, DecodeConfig cfg)
    : code_(&code), cfg_(cfg) {
  structure_.reset();
  if (cfg_.k_max >= 1) {
    // full conditioning needs a restriction-closed basis of degree 2d(k_max+1)
    try {
      int t = 2 * code.graph().d() * (cfg_.k_max + 1);
      auto fb = AssignmentBasis::full(code.block_length(),
                                      static_cast<std::uint32_t>(code.q()), t);
      structure_ = BasisStructure::build(fb);
    } catch (const std::exception&) {
      structure_.reset();  // budget exceeded: degrade to the reduced basis
    }
  }
  if (!structure_) structure_ = BasisStructure::build(tops_basis(code));
  cs_ = compile_constraints(code, structure_);
  sdp_ = std::make_unique<MomentSdp>(structure_, cs_, MomentSdp::ObjectiveKind::edges,
                                     &code.graph(), code.q());
  codewords_ = code.enumerate(cfg_.enum_budget);
  emb_ = chi_build(code.q());
  delta0_ = code.delta0().to_double();
  lambda_ = code.graph().lambda_exact() ? code.graph().lambda_exact()->to_double()
                                        : code.graph().lambda();
  delta_ = code.designed_distance();
  johnson_ = johnson_radius(code.q(), delta_);
}

double TannerListDecoder::radius(double eps) const { return johnson_ - eps; }

DecodingList TannerListDecoder::decode(const Word& g) {
  DecodingList out;
  const double rad = radius(cfg_.eps);
  if (rad <= 0) {
    out.stats.note = "radius <= 0";
    return out;
  }
  if (lambda_ > delta0_ / 3.0 + 1e-12)
    out.stats.note = "warning: lambda > delta0/3, dichotomy constants unavailable";

  CoveringProblem cp = covering_setup_tanner(*code_, g, cfg_.eps);
  auto sres = sdp_->solve(cp.u, cp.gamma, cfg_.solver);
  out.stats.solver_status = sres.stats.status;
  out.stats.solver_iters = sres.stats.iters;
  out.stats.primal_residual = sres.stats.primal_residual;
  out.stats.dual_residual = sres.stats.dual_residual;
  out.stats.psi = sres.stats.psi;
  out.stats.margin = sres.stats.margin;
  if (!sres.pe || sres.stats.status == SolveStatus::infeasible_margin) {
    out.stats.note += "; solver infeasible";
    return out;
  }
  const Pseudoexpectation& pe = *sres.pe;

  double eta_target = cfg_.eta > 0 ? cfg_.eta : auto_eta_tanner(cp.eps2, delta_);
  EtaGoodResult branches;
  try {
    branches = make_eta_good(pe, code_->graph(), eta_target, cfg_.k_max,
                             cfg_.exhaustive ? ConditioningMode::exhaustive
                                             : ConditioningMode::sample,
                             cfg_.seed);
  } catch (const std::exception&) {
    // basis without conditioning support: proceed with the root branch
    branches.branches.push_back({pe, {}, avg_lr_cov(pe, code_->graph()), 1.0});
    branches.best = 0;
  }
  out.stats.branches = static_cast<int>(branches.branches.size());
  out.stats.eta_hat_best = branches.branches[branches.best].report.eta_hat;

  const double delta_dec = delta_ / 4.0;
  UniqueDecoder dec = [&](const Word& w) -> std::optional<Word> {
    const Word* best = nullptr;
    std::size_t best_cnt = SIZE_MAX;
    for (const Word& h : codewords_) {
      std::size_t c = hamming_count(h, w);
      if (c < best_cnt || (c == best_cnt && best && h < *best)) {
        best_cnt = c;
        best = &h;
      }
    }
    if (!best) return std::nullopt;
    Rat d(static_cast<std::int64_t>(best_cnt), static_cast<std::int64_t>(w.size()));
    if (d.to_double() > delta_dec + 1e-12) return std::nullopt;
    return *best;
  };

  std::vector<Word> candidates;
  for (const Branch& br : branches.branches) {
    for (const RoundingBranch& rb : rounding_branches(br.pe, code_->graph())) {
      DistributionCollection dists = conditioned_edge_dists(br.pe, code_->block_length(), rb);
      for (Word& w : decode_candidates(dec, dists)) candidates.push_back(std::move(w));
    }
  }
  sorted_unique(candidates);

  for (const Word& h : candidates) {
    Rat d = hamming_distance(h, g);
    if (rat_lt(d, rad)) out.entries.push_back({h, d});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ListEntry& a, const ListEntry& b) { return a.word < b.word; });

  if (cfg_.runtime_checks) {
    out.stats.checks.ran = true;
    const double tol = cfg_.check_tol;
    // covering: every bona fide list member is close to the covering pe
    for (const Word& h : codewords_) {
      Rat d = hamming_distance(h, g);
      if (!rat_lt(d, rad)) continue;
      double dp = 0;
      for (int e = 0; e < code_->block_length(); ++e)
        dp += 1.0 - pe.try_moment(PartialAssign({{e, static_cast<std::uint32_t>(h[e])}}))
                        .value_or(0.0);
      dp /= code_->block_length();
      if (dp >= delta_ - cp.eps2 + tol) ++out.stats.checks.covering_violations;
      // first-order optimality against feasible integral points
      Eigen::VectorXd hv = embed_word(h, emb_);
      if (cp.u.dot(hv) >= cp.gamma) {
        Eigen::VectorXd pv = pe_embed_edges(pe, emb_);
        if (psi_mixing_derivative(pv, hv) < -tol) ++out.stats.checks.stationarity_violations;
      }
    }
    // distance dichotomy on eta-good branches
    for (const Branch& br : branches.branches) {
      double eta_hat = br.report.eta_hat;
      if (lambda_ > delta0_ / 3.0 + 1e-12) continue;
      if (eta_hat > delta0_ * delta0_ / 9.0) continue;
      for (const Word& h : codewords_) {
        double dp = 0;
        for (int e = 0; e < code_->block_length(); ++e)
          dp += 1.0 -
                br.pe.try_moment(PartialAssign({{e, static_cast<std::uint32_t>(h[e])}}))
                    .value_or(0.0);
        dp /= code_->block_length();
        bool close = dp <= 3.0 * eta_hat + tol;
        bool far = dp >= delta0_ * (delta0_ - lambda_) - 3.0 * eta_hat - tol;
        if (!close && !far) ++out.stats.checks.dichotomy_violations;
      }
    }
  }
  return out;
}

AELListDecoder::AELListDecoder(const AELCode& code, DecodeConfig cfg) : code_(&code), cfg_(cfg) {
  structure_ = BasisStructure::build(tops_basis(code));
  cs_ = compile_constraints(code, structure_);
  sdp_ = std::make_unique<MomentSdp>(structure_, cs_, MomentSdp::ObjectiveKind::folded,
                                     &code.graph(), code.q0());
  outer_words_ = code.enumerate_outer(cfg_.enum_budget);
  for (const Word& f : outer_words_) folded_words_.push_back(code.encode_folded(f));
  emb_folded_ = chi_build(code.folded_alphabet());
  delta0_ = code.delta0().to_double();
  lambda_ = code.graph().lambda_exact() ? code.graph().lambda_exact()->to_double()
                                        : code.graph().lambda();
  delta_dec_ = cfg_.delta_dec > 0
                   ? cfg_.delta_dec
                   : static_cast<double>((code.outer().n() - code.outer().k()) / 2) /
                         code.outer().n();
  kappa_ = cfg_.kappa > 0 ? cfg_.kappa : (lambda_ == 0.0 ? 0.0 : lambda_ / delta_dec_);
  johnson_ = johnson_radius(code.folded_alphabet(), delta0_ - kappa_);
}

double AELListDecoder::radius(double eps) const { return johnson_ - eps; }

DecodingList AELListDecoder::decode(const Word& folded_g) {
  DecodingList out;
  const double rad = radius(cfg_.eps);
  if (rad <= 0) {
    out.stats.note = "radius <= 0";
    return out;
  }
  if (lambda_ > kappa_ * delta_dec_ + 1e-12)
    out.stats.note = "warning: lambda > kappa*delta_dec";

  CoveringProblem cp = covering_setup_ael(*code_, folded_g, cfg_.eps, kappa_);
  auto sres = sdp_->solve(cp.u, cp.gamma, cfg_.solver);
  out.stats.solver_status = sres.stats.status;
  out.stats.solver_iters = sres.stats.iters;
  out.stats.primal_residual = sres.stats.primal_residual;
  out.stats.dual_residual = sres.stats.dual_residual;
  out.stats.psi = sres.stats.psi;
  out.stats.margin = sres.stats.margin;
  if (!sres.pe || sres.stats.status == SolveStatus::infeasible_margin) {
    out.stats.note += "; solver infeasible";
    return out;
  }
  const Pseudoexpectation& pe = *sres.pe;

  double eta_target =
      cfg_.eta > 0 ? cfg_.eta : auto_eta_ael(cp.eps2, delta_dec_, delta0_ - kappa_);
  EtaGoodResult branches;
  try {
    branches = make_eta_good(pe, code_->graph(), eta_target, cfg_.k_max,
                             cfg_.exhaustive ? ConditioningMode::exhaustive
                                             : ConditioningMode::sample,
                             cfg_.seed);
  } catch (const std::exception&) {
    branches.branches.push_back({pe, {}, avg_lr_cov(pe, code_->graph()), 1.0});
    branches.best = 0;
  }
  out.stats.branches = static_cast<int>(branches.branches.size());
  out.stats.eta_hat_best = branches.branches[branches.best].report.eta_hat;

  UniqueDecoder outer_dec = [&](const Word& y) -> std::optional<Word> {
    if (code_->outer().is_reed_solomon()) return rs_unique_decode(code_->outer(), y);
    auto [cand, dist] = code_->outer().nearest_codeword(y);
    int t = (code_->outer().n() - code_->outer().k()) / 2;
    if (dist > Rat(t, code_->outer().n())) return std::nullopt;
    return cand;
  };

  std::vector<Word> candidates;  // outer codewords
  for (const Branch& br : branches.branches) {
    for (const RoundingBranch& rb : rounding_branches(br.pe, code_->graph())) {
      DistributionCollection dists = conditioned_outer_dists(br.pe, *code_, rb);
      for (Word& w : decode_candidates(outer_dec, dists)) candidates.push_back(std::move(w));
    }
  }
  sorted_unique(candidates);

  for (const Word& f : candidates) {
    Word folded = code_->encode_folded(f);
    Rat d = hamming_distance(folded, folded_g);
    if (rat_lt(d, rad)) out.entries.push_back({folded, d});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ListEntry& a, const ListEntry& b) { return a.word < b.word; });

  if (cfg_.runtime_checks) {
    out.stats.checks.ran = true;
    const double tol = cfg_.check_tol;
    const auto& g = code_->graph();
    auto right_dist = [&](const Pseudoexpectation& q, const Word& folded) {
      double acc = 0;
      for (int r = 0; r < g.n(); ++r) {
        const auto& star = g.right_edges(r);
        Word edges = code_->unfold(folded);
        PartialAssign p;
        for (int i = 0; i < g.d(); ++i)
          p.a.emplace_back(star[i], static_cast<std::uint32_t>(edges[star[i]]));
        std::sort(p.a.begin(), p.a.end());
        acc += 1.0 - q.try_moment(p).value_or(0.0);
      }
      return acc / g.n();
    };
    auto left_dist = [&](const Pseudoexpectation& q, const Word& folded) {
      Word edges = code_->unfold(folded);
      double acc = 0;
      for (int l = 0; l < g.n(); ++l) {
        const auto& star = g.left_edges(l);
        PartialAssign p;
        for (int i = 0; i < g.d(); ++i)
          p.a.emplace_back(star[i], static_cast<std::uint32_t>(edges[star[i]]));
        std::sort(p.a.begin(), p.a.end());
        acc += 1.0 - q.try_moment(p).value_or(0.0);
      }
      return acc / g.n();
    };
    for (std::size_t i = 0; i < folded_words_.size(); ++i) {
      const Word& folded = folded_words_[i];
      Rat d = hamming_distance(folded, folded_g);
      bool in_list = rat_lt(d, rad);
      if (in_list && right_dist(pe, folded) >= (delta0_ - kappa_) - cp.eps2 + tol)
        ++out.stats.checks.covering_violations;
      for (const Branch& br : branches.branches) {
        double dl = left_dist(br.pe, folded);
        if (dl <= tol) continue;
        double dr = right_dist(br.pe, folded);
        double bound = delta0_ - (lambda_ + br.report.eta_hat + tol) / dl;
        if (dr < bound - tol) ++out.stats.checks.amplification_violations;
      }
    }
  }
  return out;
}

ConcatListDecoder::ConcatListDecoder(const ConcatCode& code, DecodeConfig cfg)
    : code_(&code), cfg_(cfg) {
  qp_ = std::make_unique<ConcatQp>(code);
  outer_words_ = code.outer().enumerate(cfg_.enum_budget);
  for (const Word& f : outer_words_) concat_words_.push_back(code.encode(f));
  delta_dec_ = cfg_.delta_dec > 0 ? cfg_.delta_dec : 0.5;
  johnson_ = johnson_radius(code.q0(), delta_dec_ * code.delta0().to_double());
}

double ConcatListDecoder::radius(double eps) const { return johnson_ - eps; }

DecodingList ConcatListDecoder::decode(const Word& g) {
  DecodingList out;
  const double rad = radius(cfg_.eps);
  if (rad <= 0) {
    out.stats.note = "radius <= 0";
    return out;
  }
  CoveringProblem cp = covering_setup_concat(*code_, g, cfg_.eps, delta_dec_);
  auto qres = qp_->solve(cp.u, cp.gamma, cfg_.solver);
  out.stats.solver_status = qres.status;
  out.stats.solver_iters = qres.iters;
  out.stats.psi = qres.psi;
  out.stats.primal_residual = qres.kkt_residual;
  if (!qres.pc || qres.status == SolveStatus::infeasible_margin) {
    out.stats.note += "; qp infeasible";
    return out;
  }
  out.stats.branches = 1;

  DistributionCollection dists = product_to_dists(*qres.pc, code_->q1());
  std::set<Word> outer_hits;
  for (const Word& y : threshold_round(dists)) {
    for (std::size_t i = 0; i < outer_words_.size(); ++i) {
      Rat d = hamming_distance(outer_words_[i], y);
      if (rat_lt(d, delta_dec_)) outer_hits.insert(outer_words_[i]);
    }
  }
  for (const Word& f : outer_hits) {
    Word h = code_->encode(f);
    Rat d = hamming_distance(h, g);
    if (rat_lt(d, rad)) out.entries.push_back({h, d});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ListEntry& a, const ListEntry& b) { return a.word < b.word; });

  if (cfg_.runtime_checks) {
    out.stats.checks.ran = true;
    const double tol = cfg_.check_tol;
    int n = code_->outer().n(), dd = code_->inner().n();
    for (std::size_t ci = 0; ci < concat_words_.size(); ++ci) {
      const Word& h = concat_words_[ci];
      Rat d = hamming_distance(h, g);
      if (!rat_lt(d, rad)) continue;
      // distance between the product pseudocodeword and h
      double dp = 0;
      for (int i = 0; i < n; ++i)
        for (std::uint64_t f = 0; f < code_->q1(); ++f) {
          double w = dists.rows[i][f];
          if (w == 0) continue;
          const Word& block = code_->inner_codeword(f);
          int mism = 0;
          for (int j = 0; j < dd; ++j)
            if (block[j] != h[i * dd + j]) ++mism;
          dp += w * mism;
        }
      dp /= static_cast<double>(n) * dd;
      double delta_bound = delta_dec_ * code_->delta0().to_double();
      if (dp >= delta_bound - cp.eps2 + tol) ++out.stats.checks.covering_violations;
    }
  }
  return out;
}

DecodingList list_decode_tanner(const TannerCode& code, const Word& g, const DecodeConfig& cfg) {
  TannerListDecoder dec(code, cfg);
  return dec.decode(g);
}

DecodingList list_decode_ael(const AELCode& code, const Word& folded_g, const DecodeConfig& cfg) {
  AELListDecoder dec(code, cfg);
  return dec.decode(folded_g);
}

DecodingList list_decode_concat(const ConcatCode& code, const Word& g, const DecodeConfig& cfg) {
  ConcatListDecoder dec(code, cfg);
  return dec.decode(g);
}

NearMdsReport near_mds_params(double eps1, double c, double rho0) {
  if (eps1 <= 0 || eps1 >= 0.5) throw std::invalid_argument("near_mds_params: eps1 in (0, 1/2)");
  NearMdsReport rep;
  rep.eps1 = eps1;
  rep.c = c;
  rep.rho0 = rho0;
  rep.delta_dec = c * eps1 * eps1;
  rep.kappa = eps1;
  rep.lambda = rep.kappa * rep.delta_dec;
  // minimal d with 2 sqrt(d-1)/d <= lambda
  std::uint64_t lo = 2, hi = 2;
  auto ok = [&](std::uint64_t d) {
    double dd = static_cast<double>(d);
    return 2.0 * std::sqrt(dd - 1.0) <= rep.lambda * dd;
  };
  while (!ok(hi)) {
    hi *= 2;
    if (hi > (1ull << 62)) break;
  }
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  rep.d = lo;
  rep.q0 = rep.d;
  rep.alphabet_bits = rho0 * static_cast<double>(rep.d) * std::log2(static_cast<double>(rep.q0));
  rep.rho = (1.0 - eps1) * rho0;
  rep.distance_bound = 1.0 - rep.rho - 3.0 * eps1;
  rep.degenerate = rep.distance_bound <= 0;
  return rep;
}

}  // namespace expdec
