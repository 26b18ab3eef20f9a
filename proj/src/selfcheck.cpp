#include "expdec/selfcheck.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "expdec/covering.hpp"
#include "expdec/pipelines.hpp"
#include "expdec/rounding.hpp"

namespace expdec::selfcheck {

namespace {

bool report(const char* name, bool ok) {
  std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << '\n';
  return ok;
}

LinearCode parity3() {
  Field f = Field::prime(2);
  FMatrix G(f, 2, 3);
  G.at(0, 0) = 1;
  G.at(0, 2) = 1;
  G.at(1, 1) = 1;
  G.at(1, 2) = 1;
  return LinearCode(f, std::move(G));
}

bool check_fields() {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 16u}) {
    Field f = Field::of_order(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      if (f.add(a, f.neg(a)) != 0) return false;
      if (a && f.mul(a, f.inv(a)) != 1) return false;
      for (std::uint32_t b = 0; b < q; ++b)
        for (std::uint32_t c = 0; c < q; ++c)
          if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) return false;
    }
  }
  return true;
}

bool check_rs() {
  Field f5 = Field::prime(5);
  LinearCode rs = rs_build(f5, 5, 2);
  Word msg(5, {1, 2});
  Word cw = rs.encode(msg);
  if (!(cw == Word(5, {1, 3, 0, 2, 4}))) return false;
  Word corrupted = cw;
  corrupted[2] = 3;
  auto dec = rs_unique_decode(rs, corrupted);
  return dec && *dec == cw;
}

bool check_eml(bool full) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<BipartiteExpander> graphs;
  graphs.push_back(BipartiteExpander::complete(3));
  graphs.push_back(BipartiteExpander::cycle(3));
  graphs.push_back(BipartiteExpander::random_regular(20, 5, 7));
  int rounds = full ? 200 : 30;
  for (const auto& g : graphs) {
    for (int t = 0; t < rounds; ++t) {
      std::vector<double> f(g.n()), h(g.n());
      double fm = 0, hm = 0;
      for (int i = 0; i < g.n(); ++i) {
        f[i] = unif(rng);
        h[i] = unif(rng);
        fm += f[i];
        hm += h[i];
      }
      for (int i = 0; i < g.n(); ++i) {
        f[i] -= fm / g.n();
        h[i] -= hm / g.n();
      }
      double bound = (g.lambda() + 1e-9) * expectation_norm(f) * expectation_norm(h);
      if (g.eml_residual(f, h) > bound + 1e-12) return false;
    }
  }
  return true;
}

bool check_chi() {
  std::mt19937_64 rng(99);
  for (std::uint64_t q : {2ull, 3ull, 4ull, 5ull}) {
    Embedding emb = chi_build(q);
    for (int t = 0; t < 20; ++t) {
      std::size_t n = 6;
      std::vector<std::uint64_t> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = rng() % q;
        b[i] = rng() % q;
      }
      Word wa(q, a), wb(q, b);
      Rat d = hamming_distance(wa, wb);
      double expect = 1.0 - static_cast<double>(q) / (q - 1) * d.to_double();
      double got = embed_word(wa, emb).dot(embed_word(wb, emb));
      if (std::abs(expect - got) > 1e-10) return false;
    }
  }
  return true;
}

bool check_axioms_mixture() {
  auto basis = basis_build(9, 2, 6);
  auto st = BasisStructure::build(basis);
  BipartiteExpander g = BipartiteExpander::complete(3);
  TannerCode tensor(g, parity3());
  auto words = tensor.enumerate();
  std::vector<double> w(words.size(), 1.0 / words.size());
  Pseudoexpectation pe = pe_from_mixture(st, words, w);
  return pe.check_axioms(1e-12).pass;
}

bool check_threshold(bool full) {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int rounds = full ? 100 : 20;
  for (int t = 0; t < rounds; ++t) {
    std::size_t n = 1 + rng() % 6;
    std::uint64_t q = 2 + rng() % 3;
    DistributionCollection dc;
    dc.q = q;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(q);
      double s = 0;
      for (auto& v : row) {
        v = unif(rng) + 1e-3;
        s += v;
      }
      for (auto& v : row) v /= s;
      dc.rows.push_back(row);
    }
    auto words = threshold_round(dc);
    if (words.size() > q * n + 1) return false;
    // direct theta sweep must land inside the emitted set
    for (int s = 0; s < 200; ++s) {
      double theta = unif(rng);
      std::vector<std::uint64_t> w(n);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0;
        std::uint64_t j = 0;
        for (; j < q; ++j) {
          acc += dc.rows[i][j];
          if (theta < acc) break;
        }
        w[i] = std::min(j, q - 1);
      }
      Word ww(q, w);
      bool found = false;
      for (const auto& cand : words)
        if (cand == ww) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  }
  return true;
}

bool check_johnson_sweep() {
  BipartiteExpander g = BipartiteExpander::complete(3);
  TannerCode tensor(g, parity3());
  auto words = tensor.enumerate();
  double radius = johnson_radius(2, 4.0 / 9.0);
  std::size_t maxlist = 0;
  for (std::uint32_t x = 0; x < 512; ++x) {
    std::vector<std::uint64_t> s(9);
    for (int b = 0; b < 9; ++b) s[b] = (x >> b) & 1;
    Word gw(2, s);
    auto list = brute_force_list(words, gw, radius);
    maxlist = std::max(maxlist, list.entries.size());
  }
  return maxlist <= 10;
}

}  // namespace

bool run(bool full) {
  bool ok = true;
  ok &= report("field axioms", check_fields());
  ok &= report("reed-solomon unique decoding", check_rs());
  ok &= report("expander mixing bound", check_eml(full));
  ok &= report("simplex embedding identity", check_chi());
  ok &= report("pseudoexpectation axioms (mixture)", check_axioms_mixture());
  ok &= report("threshold rounding image", check_threshold(full));
  if (full) ok &= report("johnson list bound sweep", check_johnson_sweep());
  return ok;
}

}  // namespace expdec::selfcheck
