#include "expdec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace expdec {

void BipartiteExpander::build_orders() {
  left_order_.assign(n_, {});
  right_order_.assign(n_, {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    left_order_[edges_[e].first].push_back(e);
    right_order_[edges_[e].second].push_back(e);
  }
  for (int v = 0; v < n_; ++v)
    if (static_cast<int>(left_order_[v].size()) != d_ ||
        static_cast<int>(right_order_[v].size()) != d_)
      throw std::invalid_argument("BipartiteExpander: graph is not d-biregular");
}

BipartiteExpander BipartiteExpander::complete(int n) {
  BipartiteExpander g;
  g.n_ = n;
  g.d_ = n;
  for (int l = 0; l < n; ++l)
    for (int r = 0; r < n; ++r) g.edges_.emplace_back(l, r);
  g.build_orders();
  g.measure_lambda();
  g.lambda_exact_ = Rat(0);
  return g;
}

BipartiteExpander BipartiteExpander::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: n >= 3 required");
  BipartiteExpander g;
  g.n_ = n;
  g.d_ = 2;
  for (int i = 0; i < n; ++i) {
    g.edges_.emplace_back(i, i);
    g.edges_.emplace_back(i, (i + 1) % n);
  }
  g.build_orders();
  g.measure_lambda();
  if (n == 3) g.lambda_exact_ = Rat(1, 2);  // cos(pi/3)
  return g;
}

BipartiteExpander BipartiteExpander::random_regular(int n, int d, std::uint64_t seed) {
  if (d > n) throw std::invalid_argument("random_regular: d > n");
  BipartiteExpander g;
  g.n_ = n;
  g.d_ = d;
  std::mt19937_64 rng(seed);
  std::set<std::pair<int, int>> used;
  const int retry_cap = 1000;
  for (int m = 0; m < d; ++m) {
    int attempts = 0;
    while (true) {
      if (++attempts > retry_cap)
        throw std::runtime_error("random_regular: retry cap exceeded");
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      bool clash = false;
      for (int l = 0; l < n; ++l)
        if (used.count({l, perm[l]})) {
          clash = true;
          break;
        }
      if (clash) continue;
      for (int l = 0; l < n; ++l) used.insert({l, perm[l]});
      for (int l = 0; l < n; ++l) g.edges_.emplace_back(l, perm[l]);
      break;
    }
  }
  // reorder edges to group by left vertex (keeps the bijections intuitive)
  std::stable_sort(g.edges_.begin(), g.edges_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  g.build_orders();
  g.measure_lambda();
  return g;
}

BipartiteExpander BipartiteExpander::from_edges(int n, int d,
                                                std::vector<std::pair<int, int>> edges) {
  if (static_cast<int>(edges.size()) != n * d)
    throw std::invalid_argument("from_edges: |E| != n*d");
  BipartiteExpander g;
  g.n_ = n;
  g.d_ = d;
  g.edges_ = std::move(edges);
  g.build_orders();
  g.measure_lambda();
  return g;
}

double expectation_norm(const std::vector<double>& f) {
  double acc = 0;
  for (double v : f) acc += v * v;
  return std::sqrt(acc / static_cast<double>(f.size()));
}

double BipartiteExpander::measure_lambda(double tol, int max_iters) {
  if (tol <= 0) throw std::invalid_argument("measure_lambda: tol must be positive");
  const double nd = static_cast<double>(n_);
  // normal matrix C = (A^T A) / d^2 acting on R-functions, with the top pair
  // (all-ones) deflated; its top eigenvalue is lambda^2.
  auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
    std::vector<double> lv(n_, 0.0);
    for (auto [l, r] : edges_) lv[l] += v[r];
    std::fill(out.begin(), out.end(), 0.0);
    for (auto [l, r] : edges_) out[r] += lv[l];
    const double scale = 1.0 / (static_cast<double>(d_) * d_);
    for (double& x : out) x *= scale;
  };
  auto deflate = [&](std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / nd;
    for (double& x : v) x -= mean;
  };

  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(n_), w(n_);
  for (double& x : v) x = unif(rng);
  deflate(v);
  double nv = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  if (nv == 0) v[0] = 1, deflate(v);

  double theta = 0;
  for (int it = 0; it < max_iters; ++it) {
    nv = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (nv < 1e-300) {  // C is zero on the deflated space (e.g. complete graph)
      lambda_ = 0.0;
      lambda_tol_ = tol;
      return lambda_;
    }
    for (double& x : v) x /= nv;
    apply(v, w);
    deflate(w);
    theta = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
    // residual ||Cv - theta v||: a symmetric-eigenvalue certificate
    double res = 0;
    for (int i = 0; i < n_; ++i) {
      double r = w[i] - theta * v[i];
      res += r * r;
    }
    res = std::sqrt(res);
    double lam = std::sqrt(std::max(0.0, theta));
    if (res <= tol * std::max(1.0, std::abs(theta)) && it > 2) {
      lambda_ = lam;
      lambda_tol_ = tol;
      return lambda_;
    }
    v = w;
  }
  throw std::runtime_error("measure_lambda: power iteration did not converge");
}

double BipartiteExpander::eml_residual(const std::vector<double>& f,
                                       const std::vector<double>& h) const {
  if (static_cast<int>(f.size()) != n_ || static_cast<int>(h.size()) != n_)
    throw std::invalid_argument("eml_residual: shape mismatch");
  double edge_avg = 0;
  for (auto [l, r] : edges_) edge_avg += f[l] * h[r];
  edge_avg /= static_cast<double>(edges_.size());
  double fl = std::accumulate(f.begin(), f.end(), 0.0) / n_;
  double hr = std::accumulate(h.begin(), h.end(), 0.0) / n_;
  return std::abs(edge_avg - fl * hr);
}

BipartiteExpander BipartiteExpander::relabeled(const std::vector<int>& lperm,
                                               const std::vector<int>& rperm) const {
  std::vector<std::pair<int, int>> e2;
  e2.reserve(edges_.size());
  for (auto [l, r] : edges_) e2.emplace_back(lperm[l], rperm[r]);
  return from_edges(n_, d_, std::move(e2));
}

}  // namespace expdec
