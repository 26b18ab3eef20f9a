#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "expdec/rat.hpp"

namespace expdec {

// d-regular bipartite graph with |L| = |R| = n and a fixed edge ordering, so
// E is in bijection with L x [d] and with R x [d]. lambda is the measured
// normalized second singular value of the biadjacency matrix.
class BipartiteExpander {
 public:
  enum class Kind { complete, cycle, random_regular, from_file };

  static BipartiteExpander complete(int n);                   // d = n, lambda = 0
  static BipartiteExpander cycle(int n);                      // d = 2 bipartite double cover
  static BipartiteExpander random_regular(int n, int d, std::uint64_t seed);
  static BipartiteExpander from_edges(int n, int d, std::vector<std::pair<int, int>> edges);

  int n() const { return n_; }
  int d() const { return d_; }
  int num_edges() const { return n_ * d_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int edge_left(int e) const { return edges_[e].first; }
  int edge_right(int e) const { return edges_[e].second; }
  // i-th edge incident on a left/right vertex (the fixed ordering)
  const std::vector<int>& left_edges(int l) const { return left_order_[l]; }
  const std::vector<int>& right_edges(int r) const { return right_order_[r]; }

  double lambda() const { return lambda_; }
  double lambda_tolerance() const { return lambda_tol_; }
  std::optional<Rat> lambda_exact() const { return lambda_exact_; }
  void set_lambda_exact(Rat v) { lambda_exact_ = v; }

  // power iteration on the deflated normal matrix; certified within tol
  double measure_lambda(double tol = 1e-10, int max_iters = 100000);

  // |E_{l~r}[f(l) h(r)] - E_l[f] E_r[h]|
  double eml_residual(const std::vector<double>& f, const std::vector<double>& h) const;

  // relabel vertices (test helper; preserves the edge multiset)
  BipartiteExpander relabeled(const std::vector<int>& lperm, const std::vector<int>& rperm) const;

 private:
  BipartiteExpander() = default;
  void build_orders();

  int n_ = 0, d_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> left_order_, right_order_;
  double lambda_ = 1.0, lambda_tol_ = 0.0;
  std::optional<Rat> lambda_exact_;
};

// expectation norms: sqrt(E_i[f_i^2])
double expectation_norm(const std::vector<double>& f);

}  // namespace expdec
