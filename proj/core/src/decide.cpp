#include "pisim/decide.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pisim {
namespace {

enum class DiskRegion { Zero, Interior, Circle, Outside };

DiskRegion region_of(Complex lambda, double radius) {
  const double r = std::abs(lambda);
  if (r <= radius) return DiskRegion::Zero;
  if (std::abs(r - 1.0) <= radius) return DiskRegion::Circle;
  return r < 1.0 ? DiskRegion::Interior : DiskRegion::Outside;
}

std::string format(Complex z) {
  std::ostringstream out;
  out.precision(6);
  out << z.real();
  if (z.imag() != 0.0) out << (z.imag() < 0.0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return out.str();
}

void finish(ConditionReport& report, std::string_view ok, std::string_view failed) {
  report.passed = report.eigenvalues.empty();
  std::ostringstream out;
  out << (report.passed ? ok : failed);
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    out << (i == 0 ? ": " : ", ") << format(report.eigenvalues[i]);
  }
  report.detail = out.str();
}

Decision collect(std::vector<ConditionReport> reports) {
  Decision d;
  d.verdict = std::all_of(reports.begin(), reports.end(),
                          [](const ConditionReport& r) { return r.passed; });
  d.conditions = std::move(reports);
  return d;
}

}  // namespace

std::string_view to_string(ConditionId id) {
  switch (id) {
    case ConditionId::SpectrumInDisk: return "SpectrumInDisk";
    case ConditionId::UnimodularDiagonalizable: return "UnimodularDiagonalizable";
    case ConditionId::ZeroNullityDominates: return "ZeroNullityDominates";
    case ConditionId::SpectrumInUnitInterval: return "SpectrumInUnitInterval";
    case ConditionId::Diagonalizable: return "Diagonalizable";
    case ConditionId::NullitySumBound: return "NullitySumBound";
  }
  return "Unknown";
}

ConditionId condition_id_from_string(std::string_view name) {
  for (auto id : {ConditionId::SpectrumInDisk, ConditionId::UnimodularDiagonalizable,
                  ConditionId::ZeroNullityDominates, ConditionId::SpectrumInUnitInterval,
                  ConditionId::Diagonalizable, ConditionId::NullitySumBound}) {
    if (to_string(id) == name) return id;
  }
  throw InvalidInput("unknown condition id: " + std::string(name));
}

Decision decide_partial_isometry(const JordanSpec& spec, const Tolerances& tol) {
  const double radius = tol.cluster_abs;
  ConditionReport in_disk{ConditionId::SpectrumInDisk, true, {}, {}};
  ConditionReport unimodular{ConditionId::UnimodularDiagonalizable, true, {}, {}};
  ConditionReport nullity{ConditionId::ZeroNullityDominates, true, {}, {}};

  const int zero_blocks = spec.block_count(Complex{}, radius);
  for (const auto& entry : spec.blocks()) {
    switch (region_of(entry.eigenvalue, radius)) {
      case DiskRegion::Outside:
        in_disk.eigenvalues.push_back(entry.eigenvalue);
        break;
      case DiskRegion::Circle:
        if (entry.sizes.front() > 1) unimodular.eigenvalues.push_back(entry.eigenvalue);
        break;
      case DiskRegion::Interior:
        if (entry.geometric_multiplicity() > zero_blocks) {
          nullity.eigenvalues.push_back(entry.eigenvalue);
        }
        break;
      case DiskRegion::Zero:
        break;
    }
  }
  finish(in_disk, "spectrum lies in the closed unit disk",
         "eigenvalues outside the closed unit disk");
  finish(unimodular, "unimodular eigenvalues are semisimple",
         "unimodular eigenvalues with a Jordan block of size > 1");
  {
    std::ostringstream ok;
    ok << "nullity(A) = " << zero_blocks << " bounds nullity(A - lambda I) on the open disk";
    std::ostringstream bad;
    bad << "nullity(A) = " << zero_blocks << " is smaller than nullity(A - lambda I) at";
    finish(nullity, ok.str(), bad.str());
  }
  return collect({std::move(in_disk), std::move(unimodular), std::move(nullity)});
}

std::pair<Decision, JordanSpec> decide_matrix_partial_isometry(const ComplexMat& a,
                                                               const Tolerances& tol) {
  JordanSpec spec = jordan_structure(a, tol);
  Decision d = decide_partial_isometry(spec, tol);
  return {std::move(d), std::move(spec)};
}

Decision decide_projection_product(const JordanSpec& spec, const Tolerances& tol) {
  const double radius = tol.cluster_abs;
  ConditionReport interval{ConditionId::SpectrumInUnitInterval, true, {}, {}};
  ConditionReport diagonal{ConditionId::Diagonalizable, true, {}, {}};
  ConditionReport nullity{ConditionId::NullitySumBound, true, {}, {}};

  const int zero_blocks = spec.block_count(Complex{}, radius);
  int interior_blocks = 0;
  std::vector<Complex> interior;
  for (const auto& entry : spec.blocks()) {
    const Complex z = entry.eigenvalue;
    const bool real_unit = std::abs(z.imag()) <= radius && z.real() >= -radius &&
                           z.real() <= 1.0 + radius;
    if (!real_unit) {
      interval.eigenvalues.push_back(z);
    } else if (std::abs(z) > radius && std::abs(z - 1.0) > radius) {
      interior_blocks += entry.geometric_multiplicity();
      interior.push_back(z);
    }
    if (entry.sizes.front() > 1) diagonal.eigenvalues.push_back(z);
  }
  if (interior_blocks > zero_blocks) nullity.eigenvalues = interior;

  finish(interval, "spectrum lies in [0, 1]", "eigenvalues outside [0, 1]");
  finish(diagonal, "every eigenvalue is semisimple", "eigenvalues with a nontrivial Jordan block");
  {
    std::ostringstream ok;
    ok << "nullity(T) = " << zero_blocks << " >= " << interior_blocks
       << " = sum of nullity(T - cI) over c in (0, 1)";
    std::ostringstream bad;
    bad << "nullity(T) = " << zero_blocks << " < " << interior_blocks
        << " = sum of nullity(T - cI) over c in (0, 1)";
    finish(nullity, ok.str(), bad.str());
  }
  return collect({std::move(interval), std::move(diagonal), std::move(nullity)});
}

SingularProfile::SingularProfile(std::vector<double> sigmas) : sigmas_(std::move(sigmas)) {
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    if (!std::isfinite(sigmas_[i]) || sigmas_[i] < 0.0) {
      throw InvalidInput("SingularProfile: singular values must be finite and nonnegative");
    }
    if (i > 0 && sigmas_[i] > sigmas_[i - 1]) {
      throw InvalidInput("SingularProfile: singular values must be sorted descending");
    }
  }
}

SingularProfile SingularProfile::partial_isometry(int r, int n) {
  if (n < 1 || r < 0 || r > n) throw InvalidInput("SingularProfile: need 0 <= r <= n, n >= 1");
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  std::fill_n(s.begin(), r, 1.0);
  return SingularProfile(std::move(s));
}

bool weyl_horn_feasible(const SingularProfile& sigmas, std::span<const Complex> lambdas,
                        const Tolerances& tol) {
  const std::size_t n = sigmas.size();
  if (n == 0 || lambdas.size() != n) {
    throw InvalidInput("weyl_horn_feasible: need equally many (>= 1) singular values and eigenvalues");
  }
  std::vector<double> moduli;
  moduli.reserve(n);
  for (Complex z : lambdas) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  double sigma_prod = 1.0;
  double lambda_prod = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    sigma_prod *= sigmas.values()[k];
    lambda_prod *= moduli[k];
    const double slack = tol.residual_abs * std::max({1.0, sigma_prod, lambda_prod});
    if (k + 1 < n) {
      if (sigma_prod < lambda_prod - slack) return false;
    } else if (std::abs(sigma_prod - lambda_prod) > slack) {
      return false;
    }
  }
  return true;
}

bool pi_spectrum_feasible(std::span<const Complex> lambdas, int r, int n, const Tolerances& tol) {
  if (n < 1 || r < 0 || r > n) throw InvalidInput("pi_spectrum_feasible: need 0 <= r <= n, n >= 1");
  if (lambdas.size() != static_cast<std::size_t>(n)) {
    throw InvalidInput("pi_spectrum_feasible: expected n eigenvalues");
  }
  const double radius = tol.cluster_abs;
  if (r == n) {
    // Full rank means unitary: every eigenvalue is unimodular.
    return std::all_of(lambdas.begin(), lambdas.end(), [&](Complex z) {
      return region_of(z, radius) == DiskRegion::Circle;
    });
  }
  int zeros = 0;
  for (Complex z : lambdas) {
    const DiskRegion where = region_of(z, radius);
    if (where == DiskRegion::Outside) return false;
    if (where == DiskRegion::Zero) ++zeros;
  }
  return zeros >= n - r;
}

}  // namespace pisim
