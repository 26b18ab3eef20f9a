#include "expdec/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace expdec {

namespace {

// all assignments over vars with pe-probability above the floor, paired with
// their probabilities (odometer order, first var most significant)
std::vector<std::pair<PartialAssign, double>> local_support(const Pseudoexpectation& pe,
                                                            const std::vector<int>& vars,
                                                            double floor_p) {
  std::uint32_t q = pe.basis().q();
  std::vector<std::pair<PartialAssign, double>> out;
  std::vector<std::uint32_t> alpha(vars.size(), 0);
  while (true) {
    PartialAssign p;
    for (std::size_t i = 0; i < vars.size(); ++i) p.a.emplace_back(vars[i], alpha[i]);
    std::sort(p.a.begin(), p.a.end());
    auto mv = pe.try_moment(p);
    double w = mv.value_or(0.0);
    if (w >= floor_p) out.emplace_back(std::move(p), w);
    int pos = static_cast<int>(vars.size()) - 1;
    while (pos >= 0 && ++alpha[pos] == q) alpha[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

double avg_left_variance(const Pseudoexpectation& pe, const BipartiteExpander& g) {
  double acc = 0;
  for (int l = 0; l < g.n(); ++l) acc += pe.pseudo_var(g.left_edges(l));
  return acc / g.n();
}

}  // namespace

GoodnessReport avg_lr_cov(const Pseudoexpectation& pe, const BipartiteExpander& g,
                          const Word* reference) {
  if (pe.degree() < 2 * g.d())
    throw std::invalid_argument("avg_lr_cov: degree below 2d");
  GoodnessReport rep;
  rep.pair_cov.setZero(g.n(), g.n());
  for (int l = 0; l < g.n(); ++l)
    for (int r = 0; r < g.n(); ++r) {
      double c = pe.pseudo_cov(g.left_edges(l), g.right_edges(r));
      rep.pair_cov(l, r) = c;
      rep.eta_hat += c;
      rep.max_pair = std::max(rep.max_pair, c);
    }
  rep.eta_hat /= static_cast<double>(g.n()) * g.n();
  if (reference) {
    double xl = 0, yr = 0;
    for (int l = 0; l < g.n(); ++l) {
      const auto& star = g.left_edges(l);
      PartialAssign p;
      for (int i = 0; i < g.d(); ++i)
        p.a.emplace_back(star[i], static_cast<std::uint32_t>((*reference)[star[i]]));
      std::sort(p.a.begin(), p.a.end());
      xl += 1.0 - pe.try_moment(p).value_or(0.0);
    }
    for (int r = 0; r < g.n(); ++r) {
      const auto& star = g.right_edges(r);
      PartialAssign p;
      for (int i = 0; i < g.d(); ++i)
        p.a.emplace_back(star[i], static_cast<std::uint32_t>((*reference)[star[i]]));
      std::sort(p.a.begin(), p.a.end());
      yr += 1.0 - pe.try_moment(p).value_or(0.0);
    }
    rep.tau = std::sqrt(xl / g.n()) * std::sqrt(yr / g.n());
  }
  return rep;
}

double variance_potential(const Pseudoexpectation& pe, const BipartiteExpander& g,
                          const std::vector<int>& V, double prob_floor) {
  if (V.empty()) return avg_left_variance(pe, g);
  std::vector<int> vars;
  for (int v : V)
    for (int e : g.right_edges(v)) vars.push_back(e);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  double phi = 0;
  for (auto& [beta, p] : local_support(pe, vars, prob_floor)) {
    Pseudoexpectation cond = pe.conditioned(beta, prob_floor);
    phi += p * avg_left_variance(cond, g);
  }
  return phi;
}

EtaGoodResult make_eta_good(const Pseudoexpectation& pe, const BipartiteExpander& g, double eta,
                            int k_max, ConditioningMode mode, std::uint64_t seed,
                            const Word* reference, bool greedy, double prob_floor) {
  if (eta <= 0) throw std::invalid_argument("make_eta_good: eta must be positive");
  EtaGoodResult res;
  {
    Branch root{pe, {}, avg_lr_cov(pe, g, reference), 1.0};
    res.branches.push_back(std::move(root));
  }
  if (res.branches[0].report.eta_hat <= eta || k_max == 0) {
    res.achieved = res.branches[0].report.eta_hat <= eta;
    return res;
  }

  if (mode == ConditioningMode::exhaustive) {
    // breadth-first over (V, beta) branches up to depth k_max
    std::vector<std::size_t> frontier{0};
    for (int depth = 1; depth <= k_max; ++depth) {
      std::vector<std::size_t> next;
      for (std::size_t bi : frontier) {
        // copy: res.branches may reallocate while we extend it
        Branch parent = res.branches[bi];
        if (parent.report.eta_hat <= eta) continue;
        for (int v = 0; v < g.n(); ++v) {
          for (auto& [beta, p] : local_support(parent.pe, g.right_edges(v), prob_floor)) {
            Pseudoexpectation cond = parent.pe.conditioned(beta, prob_floor);
            GoodnessReport rep = avg_lr_cov(cond, g, reference);
            Branch b{std::move(cond), parent.trace, std::move(rep), parent.probability * p};
            b.trace.steps.push_back({v, beta, p, avg_left_variance(b.pe, g)});
            next.push_back(res.branches.size());
            res.branches.push_back(std::move(b));
          }
        }
      }
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    Branch cur = res.branches[0];
    for (int depth = 1; depth <= k_max; ++depth) {
      if (cur.report.eta_hat <= eta) break;
      int v;
      if (greedy) {
        Eigen::Index best;
        cur.report.pair_cov.colwise().mean().maxCoeff(&best);
        v = static_cast<int>(best);
      } else {
        v = static_cast<int>(rng() % g.n());
      }
      auto support = local_support(cur.pe, g.right_edges(v), prob_floor);
      double total = 0;
      for (auto& [beta, p] : support) total += p;
      std::uniform_real_distribution<double> unif(0.0, total);
      double pick = unif(rng), acc = 0;
      const std::pair<PartialAssign, double>* chosen = &support.back();
      for (auto& sp : support) {
        acc += sp.second;
        if (pick <= acc) {
          chosen = &sp;
          break;
        }
      }
      Pseudoexpectation cond = cur.pe.conditioned(chosen->first, prob_floor);
      GoodnessReport rep = avg_lr_cov(cond, g, reference);
      Branch b{std::move(cond), cur.trace, std::move(rep), cur.probability * chosen->second};
      b.trace.steps.push_back({v, chosen->first, chosen->second, avg_left_variance(b.pe, g)});
      res.branches.push_back(b);
      cur = res.branches.back();
    }
  }

  res.best = 0;
  for (std::size_t i = 1; i < res.branches.size(); ++i)
    if (res.branches[i].report.eta_hat < res.branches[res.best].report.eta_hat) res.best = i;
  res.achieved = res.branches[res.best].report.eta_hat <= eta;
  return res;
}

}  // namespace expdec
