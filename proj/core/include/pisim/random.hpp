#pragma once

#include <cstdint>
#include <random>

#include "pisim/jordan.hpp"

namespace pisim {

/// Seeded source for every randomized routine; no other entropy is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  int integer(int lo, int hi);  ///< inclusive range
  double normal();
  Complex complex_normal();
  /// Uniform point in the annulus lo <= |z| <= hi.
  Complex in_annulus(double lo, double hi);
  bool coin(double p_true = 0.5);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

ComplexMat random_gaussian(Rng& rng, int rows, int cols);

/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
ComplexMat random_unitary(Rng& rng, int n);

/// Orthogonal projection onto a random rank-r subspace.
ComplexMat random_projection(Rng& rng, int n, int rank);

/// U * P with U a random unitary and P a random projection of random rank.
ComplexMat random_partial_isometry(Rng& rng, int n);

/// U diag(s) W^* with singular values in [1, max_cond).
ComplexMat random_similarity(Rng& rng, int n, double max_cond);

struct SpecOptions {
  int n_max = 20;
  double max_modulus = 0.95;   ///< bound on nonzero interior eigenvalues
  double min_separation = 1e-3;
  bool allow_unitary = true;
  /// Probability of placing a new eigenvalue just beyond min_separation from
  /// an existing one. Combined with long blocks this produces Jordan forms
  /// whose eigenvector conditioning exceeds double precision.
  double close_pair_probability = 0.0;
};

/// Random Jordan form satisfying all three partial-isometry conditions.
JordanSpec random_admissible_spec(Rng& rng, const SpecOptions& options);

/// Random Jordan form satisfying the projection-product conditions.
JordanSpec random_projection_product_spec(Rng& rng, int n_max);

/// Arbitrary Jordan form: eigenvalues with modulus <= 1.5, blocks up to max_block.
JordanSpec random_jordan_spec(Rng& rng, int n_max, int max_block, double min_separation);

}  // namespace pisim
