#include <gtest/gtest.h>

#include <numbers>

#include "helpers.hpp"
#include "pisim/decide.hpp"
#include "pisim/errors.hpp"
#include "pisim/random.hpp"

namespace {

using namespace pisim;
using namespace testing_support;

const Tolerances kTol{};

JordanSpec spec(std::vector<JordanEigenBlocks> blocks) { return JordanSpec::canonical(std::move(blocks)); }

const ConditionReport& report(const Decision& d, ConditionId id) {
  for (const auto& c : d.conditions) {
    if (c.id == id) return c;
  }
  throw std::logic_error("condition missing");
}

TEST(DecidePartialIsometry, Examples) {
  EXPECT_TRUE(decide_partial_isometry(spec({{0.0, {1}}, {0.5, {1}}})).verdict);

  const Decision half = decide_partial_isometry(spec({{0.5, {1}}}));
  EXPECT_FALSE(half.verdict);
  EXPECT_FALSE(report(half, ConditionId::ZeroNullityDominates).passed);
  EXPECT_TRUE(report(half, ConditionId::SpectrumInDisk).passed);
  ASSERT_EQ(report(half, ConditionId::ZeroNullityDominates).eigenvalues.size(), 1u);
  EXPECT_EQ(report(half, ConditionId::ZeroNullityDominates).eigenvalues[0], Complex(0.5));

  const Decision j21 = decide_partial_isometry(spec({{1.0, {2}}}));
  EXPECT_FALSE(j21.verdict);
  EXPECT_FALSE(report(j21, ConditionId::UnimodularDiagonalizable).passed);

  EXPECT_TRUE(decide_partial_isometry(spec({{1.0, {1, 1, 1}}})).verdict);
}

TEST(DecidePartialIsometry, OutsideDisk) {
  const Decision d = decide_partial_isometry(spec({{2.0, {1}}, {0.0, {3}}}));
  EXPECT_FALSE(d.verdict);
  EXPECT_FALSE(report(d, ConditionId::SpectrumInDisk).passed);
}

TEST(DecidePartialIsometry, EmptySpecIsTrue) {
  EXPECT_TRUE(decide_partial_isometry(JordanSpec{}).verdict);
}

// Admissible spec with one random edit that may or may not break a condition.
JordanSpec mutated_admissible(Rng& rng) {
  auto blocks = random_admissible_spec(rng, {.n_max = 10}).blocks();
  auto& e = blocks[static_cast<std::size_t>(rng.integer(0, static_cast<int>(blocks.size()) - 1))];
  switch (rng.integer(0, 3)) {
    case 0: e.sizes.push_back(1); break;             // extra block
    case 1: e.sizes.front() += 1; break;             // longer block
    case 2: e.eigenvalue *= rng.uniform(0.5, 1.5); break;
    default: break;                                  // unchanged
  }
  if (e.eigenvalue != Complex(0.0)) {
    for (const auto& other : blocks) {
      if (&other != &e && std::abs(other.eigenvalue - e.eigenvalue) < 1e-3) return mutated_admissible(rng);
    }
  }
  return spec(blocks);
}

TEST(DecidePartialIsometry, AgreesWithConditionOracle) {
  Rng rng(101);
  int trues = 0;
  int falses = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const JordanSpec s = trial % 3 == 0   ? random_jordan_spec(rng, 8, 3, 1e-3)
                         : trial % 3 == 1 ? random_admissible_spec(rng, {.n_max = 12})
                                          : mutated_admissible(rng);
    const bool expected = oracle::partial_isometry_conditions(s, kTol.cluster_abs);
    EXPECT_EQ(decide_partial_isometry(s, kTol).verdict, expected) << "trial " << trial;
    (expected ? trues : falses) += 1;
  }
  EXPECT_GE(trues, 200);
  EXPECT_GE(falses, 100);
}

TEST(DecidePartialIsometry, AddingZeroBlockIsMonotone) {
  Rng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const JordanSpec s = random_jordan_spec(rng, 8, 3, 1e-3);
    if (!decide_partial_isometry(s, kTol).verdict) continue;
    auto blocks = s.blocks();
    bool found = false;
    for (auto& e : blocks) {
      if (e.eigenvalue == Complex(0.0)) {
        e.sizes.push_back(1);
        found = true;
      }
    }
    if (!found) blocks.push_back({0.0, {1}});
    EXPECT_TRUE(decide_partial_isometry(spec(blocks), kTol).verdict);
  }
}

TEST(DecidePartialIsometry, SummandNonClosure) {
  EXPECT_TRUE(decide_partial_isometry(spec({{0.0, {1}}, {0.5, {1}}})).verdict);
  EXPECT_FALSE(decide_partial_isometry(spec({{0.5, {1}}})).verdict);
}

TEST(DecideMatrix, Examples) {
  const auto [d, s] = decide_matrix_partial_isometry(diag_example(), kTol);
  EXPECT_TRUE(d.verdict);
  EXPECT_TRUE(s.equivalent(spec({{0.0, {1}}, {0.5, {1}}}), 1e-12));
  EXPECT_TRUE(decide_matrix_partial_isometry(ComplexMat::Identity(2, 2), kTol).first.verdict);
  EXPECT_FALSE(decide_matrix_partial_isometry(mat({{0.5}}), kTol).first.verdict);
}

TEST(DecideProjectionProduct, Examples) {
  EXPECT_TRUE(decide_projection_product(spec({{1.0, {1}}, {0.5, {1}}, {0.0, {1}}})).verdict);

  const Decision no_zero = decide_projection_product(spec({{0.5, {1}}, {0.25, {1}}}));
  EXPECT_FALSE(no_zero.verdict);
  EXPECT_FALSE(report(no_zero, ConditionId::NullitySumBound).passed);
  EXPECT_TRUE(report(no_zero, ConditionId::SpectrumInUnitInterval).passed);

  const Decision neg = decide_projection_product(spec({{-0.5, {1}}, {0.0, {1}}}));
  EXPECT_FALSE(neg.verdict);
  EXPECT_FALSE(report(neg, ConditionId::SpectrumInUnitInterval).passed);

  const Decision defective = decide_projection_product(spec({{0.0, {2}}}));
  EXPECT_FALSE(defective.verdict);
  EXPECT_FALSE(report(defective, ConditionId::Diagonalizable).passed);
}

TEST(DecideProjectionProduct, AgreesWithConditionOracle) {
  Rng rng(104);
  for (int trial = 0; trial < 300; ++trial) {
    const JordanSpec s = trial % 2 == 0 ? random_jordan_spec(rng, 8, 2, 1e-3)
                                        : random_projection_product_spec(rng, 10);
    EXPECT_EQ(decide_projection_product(s, kTol).verdict,
              oracle::projection_product_conditions(s, kTol.cluster_abs))
        << "trial " << trial;
  }
}

TEST(ConditionIds, RoundTrip) {
  for (ConditionId id : {ConditionId::SpectrumInDisk, ConditionId::UnimodularDiagonalizable,
                         ConditionId::ZeroNullityDominates, ConditionId::SpectrumInUnitInterval,
                         ConditionId::Diagonalizable, ConditionId::NullitySumBound}) {
    EXPECT_EQ(condition_id_from_string(to_string(id)), id);
  }
  EXPECT_THROW(condition_id_from_string("nope"), InvalidInput);
}

TEST(SingularProfile, Validation) {
  EXPECT_THROW(SingularProfile({0.5, 1.0}), InvalidInput);
  EXPECT_THROW(SingularProfile({1.0, -0.1}), InvalidInput);
  EXPECT_EQ(SingularProfile::partial_isometry(2, 4).values(), (std::vector<double>{1, 1, 0, 0}));
}

TEST(WeylHorn, Examples) {
  const std::vector<Complex> a{0.9, 0.5, 0.0};
  EXPECT_TRUE(weyl_horn_feasible(SingularProfile({1, 1, 0}), a));
  EXPECT_TRUE(oracle::weyl_horn({1, 1, 0}, a, 1e-12));

  const std::vector<Complex> b{0.5, 0.5};
  EXPECT_FALSE(weyl_horn_feasible(SingularProfile({1, 0}), b));
  EXPECT_FALSE(oracle::weyl_horn({1, 0}, b, 1e-12));

  const std::vector<Complex> c{1.0, 1.0};
  EXPECT_TRUE(weyl_horn_feasible(SingularProfile({1, 1}), c));
}

TEST(WeylHorn, AgreesWithDirectEvaluation) {
  Rng rng(105);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.integer(1, 5);
    std::vector<double> sig;
    std::vector<Complex> lam;
    for (int i = 0; i < n; ++i) {
      sig.push_back(rng.coin(0.3) ? 0.0 : rng.uniform(0.0, 2.0));
      lam.push_back(rng.coin(0.3) ? Complex(0.0) : rng.in_annulus(0.0, 2.0));
    }
    // Make the determinant condition hold half the time.
    if (rng.coin()) {
      double ps = 1.0;
      double pl = 1.0;
      for (int i = 0; i < n; ++i) {
        ps *= sig[static_cast<std::size_t>(i)];
        pl *= std::abs(lam[static_cast<std::size_t>(i)]);
      }
      if (pl > 0.0 && ps > 0.0) {
        const double scale = std::pow(pl / ps, 1.0 / n);
        for (auto& s : sig) s *= scale;
      }
    }
    std::sort(sig.rbegin(), sig.rend());
    const double slack = 1e-9;
    const bool expected = oracle::weyl_horn(sig, lam, slack);
    const bool got = weyl_horn_feasible(SingularProfile(sig), lam, kTol);
    // Only compare cases that are not within rounding of the boundary.
    const bool loose = oracle::weyl_horn(sig, lam, 1e-6);
    const bool tight = oracle::weyl_horn(sig, lam, 1e-12);
    if (loose == tight) EXPECT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(PiSpectrumFeasible, Examples) {
  const std::vector<Complex> a{0.9, 0.0, 0.0};
  EXPECT_TRUE(pi_spectrum_feasible(a, 1, 3));
  const std::vector<Complex> b{0.9, 0.5, 0.0};
  EXPECT_FALSE(pi_spectrum_feasible(b, 1, 3));
  const std::vector<Complex> c{std::polar(1.0, 0.7)};
  EXPECT_TRUE(pi_spectrum_feasible(c, 1, 1));
}

TEST(PiSpectrumFeasible, AgreesWithWeylHornOnPartialIsometryProfile) {
  Rng rng(106);
  for (int n = 1; n <= 6; ++n) {
    for (int r = 0; r <= n; ++r) {
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<Complex> lam;
        for (int i = 0; i < n; ++i) {
          const double u = rng.uniform(0.0, 1.0);
          if (u < 0.4) lam.emplace_back(0.0);
          else if (u < 0.6) lam.push_back(std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi)));
          else lam.push_back(rng.in_annulus(0.05, 0.99));
        }
        std::vector<double> sig(static_cast<std::size_t>(n), 0.0);
        std::fill_n(sig.begin(), r, 1.0);
        EXPECT_EQ(pi_spectrum_feasible(lam, r, n, kTol), oracle::weyl_horn(sig, lam, 1e-12))
            << "n=" << n << " r=" << r << " trial " << trial;
      }
    }
  }
}

}  // namespace
