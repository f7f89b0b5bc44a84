#include "pisim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "pisim/errors.hpp"

namespace pisim {

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int Rng::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex{re, im} / std::numbers::sqrt2;
}

Complex Rng::in_annulus(double lo, double hi) {
  const double r = std::sqrt(uniform(lo * lo, hi * hi));
  return std::polar(r, uniform(-std::numbers::pi, std::numbers::pi));
}

bool Rng::coin(double p_true) { return uniform(0.0, 1.0) < p_true; }

ComplexMat random_gaussian(Rng& rng, int rows, int cols) {
  ComplexMat m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_normal();
  }
  return m;
}

ComplexMat random_unitary(Rng& rng, int n) {
  if (n == 0) return ComplexMat(0, 0);
  Eigen::HouseholderQR<ComplexMat> qr(random_gaussian(rng, n, n));
  ComplexMat q = qr.householderQ() * ComplexMat::Identity(n, n);
  const ComplexMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0.0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

ComplexMat random_projection(Rng& rng, int n, int rank) {
  if (rank < 0 || rank > n) throw InvalidInput("random_projection: rank out of range");
  const ComplexMat u = random_unitary(rng, n);
  const ComplexMat basis = u.leftCols(rank);
  return basis * basis.adjoint();
}

ComplexMat random_partial_isometry(Rng& rng, int n) {
  const int rank = rng.integer(0, n);
  const ComplexMat u = random_unitary(rng, n);
  return u * random_projection(rng, n, rank);
}

ComplexMat random_similarity(Rng& rng, int n, double max_cond) {
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = i == 0 ? 1.0 : rng.uniform(1.0, max_cond);
  return random_unitary(rng, n) * s.cast<Complex>().asDiagonal() *
         random_unitary(rng, n).adjoint();
}

namespace {

bool separated(Complex z, const std::vector<Complex>& taken, double min_sep) {
  return std::all_of(taken.begin(), taken.end(),
                     [&](Complex w) { return std::abs(z - w) >= min_sep; });
}

// Rejection-samples `draw` until the point is min_sep away from every taken
// value; with probability p_close it is instead placed just beyond min_sep
// from a random taken value.
template <typename Draw>
Complex draw_separated(Rng& rng, std::vector<Complex>& taken, double min_sep, Draw draw,
                       double max_modulus, double p_close = 0.0) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Complex z = draw();
    if (!taken.empty() && p_close > 0.0 && rng.coin(p_close)) {
      const Complex anchor = taken[static_cast<std::size_t>(
          rng.integer(0, static_cast<int>(taken.size()) - 1))];
      z = anchor + std::polar(rng.uniform(1.05, 2.0) * min_sep,
                              rng.uniform(-std::numbers::pi, std::numbers::pi));
    }
    const double r = std::abs(z);
    if (r < min_sep || r > max_modulus) continue;
    if (separated(z, taken, min_sep)) {
      taken.push_back(z);
      return z;
    }
  }
  throw InvalidInput("random spec: could not place separated eigenvalues");
}

// Adds `extra` units of size to randomly chosen blocks.
void grow_blocks(Rng& rng, std::vector<JordanEigenBlocks>& entries, int extra) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    for (std::size_t b = 0; b < entries[e].sizes.size(); ++b) slots.emplace_back(e, b);
  }
  if (slots.empty()) return;
  for (int i = 0; i < extra; ++i) {
    const auto [e, b] = slots[static_cast<std::size_t>(rng.integer(0, static_cast<int>(slots.size()) - 1))];
    ++entries[e].sizes[b];
  }
}

}  // namespace

JordanSpec random_admissible_spec(Rng& rng, const SpecOptions& options) {
  int budget = rng.integer(1, options.n_max);
  std::vector<JordanEigenBlocks> entries;
  std::vector<Complex> taken;

  if (options.allow_unitary && rng.coin(0.3)) {
    const int distinct = rng.integer(1, 2);
    for (int i = 0; i < distinct && budget > 0; ++i) {
      const Complex zeta = draw_separated(
          rng, taken, std::max(options.min_separation, 1e-2),
          [&] { return std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi)); }, 1.0);
      const int mult = std::min(budget, rng.integer(1, 2));
      entries.push_back({zeta, std::vector<int>(static_cast<std::size_t>(mult), 1)});
      budget -= mult;
    }
  }
  if (budget > 0) {
    const int zero_blocks = rng.integer(1, std::min(3, budget));
    entries.push_back({Complex{}, std::vector<int>(static_cast<std::size_t>(zero_blocks), 1)});
    budget -= zero_blocks;
    const std::size_t first_interior = entries.size();
    const int distinct = rng.integer(0, 4);
    for (int i = 0; i < distinct && budget > 0; ++i) {
      const Complex lambda = draw_separated(
          rng, taken, options.min_separation,
          [&] { return rng.in_annulus(0.05, options.max_modulus); }, options.max_modulus,
          options.close_pair_probability);
      const int blocks = std::min(budget, rng.integer(1, zero_blocks));
      entries.push_back({lambda, std::vector<int>(static_cast<std::size_t>(blocks), 1)});
      budget -= blocks;
    }
    // Remaining dimension goes into the zero and interior blocks.
    std::vector<JordanEigenBlocks> growable(entries.begin() + static_cast<std::ptrdiff_t>(first_interior) - 1,
                                            entries.end());
    grow_blocks(rng, growable, budget);
    std::copy(growable.begin(), growable.end(),
              entries.begin() + static_cast<std::ptrdiff_t>(first_interior) - 1);
  } else if (entries.empty()) {
    entries.push_back({Complex{1.0, 0.0}, {1}});
  }
  return JordanSpec::canonical(std::move(entries));
}

JordanSpec random_projection_product_spec(Rng& rng, int n_max) {
  int budget = rng.integer(1, n_max);
  std::vector<JordanEigenBlocks> entries;
  const int ones = rng.integer(0, std::min(2, budget));
  if (ones > 0) entries.push_back({Complex{1.0, 0.0}, std::vector<int>(static_cast<std::size_t>(ones), 1)});
  budget -= ones;

  std::vector<Complex> taken;
  int paired = 0;
  while (budget >= 2 && rng.coin(0.7)) {
    const int mult = rng.integer(1, std::max(1, std::min(2, budget / 2)));
    const Complex c2 = draw_separated(
        rng, taken, 1e-3, [&] { return Complex{rng.uniform(0.05, 0.95), 0.0}; }, 0.95);
    entries.push_back({Complex{c2.real(), 0.0}, std::vector<int>(static_cast<std::size_t>(mult), 1)});
    paired += mult;
    budget -= 2 * mult;
  }
  const int zeros = paired + budget;
  if (zeros > 0) entries.push_back({Complex{}, std::vector<int>(static_cast<std::size_t>(zeros), 1)});
  if (entries.empty()) entries.push_back({Complex{}, {1}});
  return JordanSpec::canonical(std::move(entries));
}

JordanSpec random_jordan_spec(Rng& rng, int n_max, int max_block, double min_separation) {
  int budget = rng.integer(1, n_max);
  std::vector<JordanEigenBlocks> entries;
  std::vector<Complex> taken;
  while (budget > 0) {
    const Complex lambda = draw_separated(
        rng, taken, min_separation, [&] { return rng.in_annulus(0.0, 1.5); }, 1.5);
    JordanEigenBlocks entry{lambda, {}};
    const int blocks = rng.integer(1, 3);
    for (int b = 0; b < blocks && budget > 0; ++b) {
      const int size = std::min(budget, rng.integer(1, max_block));
      entry.sizes.push_back(size);
      budget -= size;
    }
    entries.push_back(std::move(entry));
  }
  return JordanSpec::canonical(std::move(entries));
}

}  // namespace pisim
