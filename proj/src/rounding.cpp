#include "expdec/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace expdec {

DistributionCollection pe_to_edge_dists(const Pseudoexpectation& pe, double tol) {
  DistributionCollection out;
  out.q = pe.basis().q();
  int m = pe.basis().m();
  for (int e = 0; e < m; ++e) {
    std::vector<double> row(out.q, 0.0);
    double sum = 0;
    for (std::uint32_t j = 0; j < out.q; ++j) {
      double v = pe.try_moment(PartialAssign({{e, j}})).value_or(0.0);
      if (v < -tol) throw std::runtime_error("pe_to_edge_dists: negative mass beyond tolerance");
      row[j] = std::max(0.0, v);
      sum += row[j];
    }
    if (sum <= 0) throw std::runtime_error("pe_to_edge_dists: empty distribution");
    for (double& v : row) v /= sum;
    out.rows.push_back(std::move(row));
  }
  return out;
}

DistributionCollection pe_to_outer_dists(const Pseudoexpectation& pe, const AELCode& code,
                                         double tol) {
  if (pe.degree() < 2 * code.graph().d())
    throw std::invalid_argument("pe_to_outer_dists: degree below 2d");
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
      double v = pe.try_moment(p).value_or(0.0);
      row[a] = std::max(0.0, v);
      sum += row[a];
    }
    if (1.0 - sum > tol)
      throw std::runtime_error("pe_to_outer_dists: residual mass outside the inner code");
    if (sum <= 0) throw std::runtime_error("pe_to_outer_dists: empty distribution");
    for (double& v : row) v /= sum;
    out.rows.push_back(std::move(row));
  }
  return out;
}

DistributionCollection product_to_dists(const ProductPseudocodeword& pc, std::uint64_t q1) {
  DistributionCollection out;
  out.q = q1;
  for (const auto& d : pc.dists) {
    std::vector<double> row(d.data(), d.data() + d.size());
    double sum = 0;
    for (double& v : row) {
      v = std::max(0.0, v);
      sum += v;
    }
    for (double& v : row) v /= sum;
    out.rows.push_back(std::move(row));
  }
  return out;
}

DistributionCollection dists_from_mixture(const std::vector<Word>& words,
                                          const std::vector<Rat>& weights) {
  if (words.empty() || words.size() != weights.size())
    throw std::invalid_argument("dists_from_mixture: shape mismatch");
  DistributionCollection out;
  out.q = words[0].q;
  std::size_t n = words[0].size();
  std::vector<std::vector<Rat>> ex(n, std::vector<Rat>(out.q, Rat(0)));
  for (std::size_t w = 0; w < words.size(); ++w)
    for (std::size_t i = 0; i < n; ++i) ex[i][words[w][i]] = ex[i][words[w][i]] + weights[w];
  out.rows.assign(n, std::vector<double>(out.q, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < out.q; ++j) out.rows[i][j] = ex[i][j].to_double();
  out.exact = std::move(ex);
  return out;
}

namespace {

template <typename T>
std::vector<Word> threshold_words(const DistributionCollection& dists,
                                  const std::vector<std::vector<T>>& rows) {
  const std::size_t n = rows.size();
  const std::uint64_t q = dists.q;
  // cumulative sums; interior breakpoints partition [0,1)
  std::vector<std::vector<T>> cum(n);
  std::set<T> breaks;
  for (std::size_t i = 0; i < n; ++i) {
    T acc{0};
    for (std::uint64_t j = 0; j < q; ++j) {
      acc = acc + rows[i][j];
      cum[i].push_back(acc);
      if (j + 1 < q) breaks.insert(acc);
    }
  }
  std::vector<T> thetas;
  thetas.push_back(T{0});
  for (const T& b : breaks)
    if (T{0} < b && b < T{1}) thetas.push_back(b);
  std::set<Word> words;
  for (const T& theta : thetas) {
    std::vector<std::uint64_t> w(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t j = 0;
      while (j + 1 < q && !(theta < cum[i][j])) ++j;
      w[i] = j;
    }
    words.insert(Word(q, std::move(w)));
  }
  return {words.begin(), words.end()};
}

}  // namespace

std::vector<Word> threshold_round(const DistributionCollection& dists) {
  if (dists.exact) return threshold_words<Rat>(dists, *dists.exact);
  return threshold_words<double>(dists, dists.rows);
}

double deficit(const DistributionCollection& dists, const Word& h) {
  if (h.size() != dists.size() || h.q != dists.q)
    throw std::invalid_argument("deficit: shape mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < dists.size(); ++i) acc += 1.0 - dists.rows[i][h[i]];
  return acc / static_cast<double>(dists.size());
}

std::optional<Rat> deficit_exact(const DistributionCollection& dists, const Word& h) {
  if (!dists.exact) return std::nullopt;
  Rat acc(0);
  for (std::size_t i = 0; i < dists.size(); ++i)
    acc = acc + (Rat(1) - (*dists.exact)[i][h[i]]);
  return acc / Rat(static_cast<std::int64_t>(dists.size()));
}

Word sample_word(const DistributionCollection& dists, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::uint64_t> w(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    double theta = unif(rng), acc = 0;
    std::uint64_t j = 0;
    for (; j < dists.q; ++j) {
      acc += dists.rows[i][j];
      if (theta < acc) break;
    }
    w[i] = std::min(j, dists.q - 1);
  }
  return Word(dists.q, std::move(w));
}

std::optional<Word> decode_from_dists(const UniqueDecoder& decoder,
                                      const DistributionCollection& dists, double delta_dec,
                                      double slack) {
  std::optional<Word> best;
  double best_deficit = 0;
  for (const Word& cand : threshold_round(dists)) {
    auto dec = decoder(cand);
    if (!dec) continue;
    auto ex = deficit_exact(dists, *dec);
    double def = ex ? ex->to_double() : deficit(dists, *dec);
    if (def > delta_dec + slack) continue;
    if (!best || def < best_deficit || (def == best_deficit && *dec < *best)) {
      best = *dec;
      best_deficit = def;
    }
  }
  return best;
}

std::vector<Word> decode_candidates(const UniqueDecoder& decoder,
                                    const DistributionCollection& dists) {
  std::set<Word> out;
  for (const Word& cand : threshold_round(dists)) {
    auto dec = decoder(cand);
    if (dec) out.insert(*dec);
  }
  return {out.begin(), out.end()};
}

}  // namespace expdec
