#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "expdec/graph_codes.hpp"
#include "expdec/pseudoexp.hpp"
#include "expdec/rat.hpp"

namespace expdec {

// q unit vectors in R^{q-1} with pairwise inner product -1/(q-1), fixed by a
// deterministic Cholesky factorization of the Gram matrix (row j = chi(j)).
struct Embedding {
  std::uint64_t q = 2;
  Eigen::MatrixXd U;  // q x (q-1)

  Eigen::VectorXd chi(std::uint64_t j) const { return U.row(static_cast<Eigen::Index>(j)); }
};

Embedding chi_build(std::uint64_t q);

// Coordinate blocks are scaled by 1/sqrt(n) so plain dot products realize the
// expectation inner product and embedded words are unit vectors.
Eigen::VectorXd embed_word(const Word& w, const Embedding& emb);

// pe as a vector: degree-1 moments through chi (Tanner side)
Eigen::VectorXd pe_embed_edges(const Pseudoexpectation& pe, const Embedding& emb);
// folded view: full right-neighborhood moments through chi_{q0^d}
Eigen::VectorXd pe_embed_folded(const Pseudoexpectation& pe, const BipartiteExpander& g,
                                std::uint64_t q0, const Embedding& emb_folded);
// product pseudocodeword (n distributions over inner indices) through the
// concatenated code's blocks
Eigen::VectorXd embed_product_dists(const std::vector<Eigen::VectorXd>& dists,
                                    const ConcatCode& code, const Embedding& emb_q0);

struct JohnsonParams {
  std::uint64_t q = 2;
  Rat delta;
  Rat beta;                    // 1 - q delta/(q-1), exact
  std::optional<Rat> johnson_exact;  // when beta is a rational square
  double johnson = 0;
};

JohnsonParams johnson(std::uint64_t q, const Rat& delta);
double johnson_radius(std::uint64_t q, double delta);

// Weighted Johnson bound with row-normalized weights; threshold on the
// agreement E_i[w_{i,h_i}]
double weighted_threshold(const std::vector<std::vector<double>>& weights, std::uint64_t q,
                          double delta);
Eigen::VectorXd weights_to_u(const std::vector<std::vector<double>>& weights,
                             const Embedding& emb);

// Inputs of the covering program: embedded received word u, margin
// gamma = sqrt(beta) + q/(q-1) eps, and the distance slack eps2 = 2 eps sqrt(beta).
struct CoveringProblem {
  Eigen::VectorXd u;
  double gamma = 0;
  double eps2 = 0;
  double beta = 0;
  std::uint64_t alphabet = 2;
  double designed_delta = 0;
  double radius = 0;  // J(delta) - eps
};

CoveringProblem covering_setup_tanner(const TannerCode& code, const Word& g, double eps);
CoveringProblem covering_setup_ael(const AELCode& code, const Word& folded, double eps,
                                   double kappa = 0);
CoveringProblem covering_setup_concat(const ConcatCode& code, const Word& g, double eps,
                                      double delta_dec);

// true iff every listed embedded codeword correlated with u beyond gamma is
// covered: <x, f> > gamma^2 - tol
bool verify_cover(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& embedded,
                  const Eigen::VectorXd& u, double gamma, double tol = 1e-6);

// norm-minimizing point of conv(F) within the halfspace <., g> >= eps
// (the geometric covering-lemma oracle)
Eigen::VectorXd min_norm_cover_point(const std::vector<Eigen::VectorXd>& F,
                                     const Eigen::VectorXd& g, double eps);

}  // namespace expdec
