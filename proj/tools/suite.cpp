#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "pisim/construct.hpp"
#include "pisim/decide.hpp"
#include "pisim/projections.hpp"
#include "pisim/random.hpp"

namespace pisim::suite {
namespace {

using Verdict = std::optional<std::string>;  // nullopt = pass

struct Property {
  std::string name;
  bool fixed = false;  // no random input; runs once
  std::function<Json(Rng&, int)> generate;
  std::function<Verdict(const Json&, const Tolerances&)> check;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; std::hash is not stable across standard libraries.
std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t case_seed(std::uint64_t seed, const std::string& property, int index) {
  return splitmix64(splitmix64(seed ^ name_hash(property)) + static_cast<std::uint64_t>(index));
}

Json complex_list(std::span<const Complex> zs) {
  Json out = Json::array();
  for (Complex z : zs) out.push_back(complex_to_json(z));
  return out;
}

std::vector<Complex> complex_list_from(const Json& j) {
  std::vector<Complex> out;
  for (const Json& z : j) out.push_back(complex_from_json(z));
  return out;
}

ComplexMat conjugate(const ComplexMat& s, const ComplexMat& m) {
  return s * m * s.partialPivLu().inverse();
}

Verdict fail_if(bool bad, const std::string& message) {
  return bad ? Verdict{message} : std::nullopt;
}

std::string num(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

// Well separated Jordan form with short blocks, conjugated by cond < 100.
Json similar_to_random_jordan(Rng& rng, int size_max) {
  const JordanSpec spec = random_jordan_spec(rng, size_max, 4, 0.05);
  const ComplexMat s = random_similarity(rng, spec.dimension(), 100.0);
  return Json{{"spec", spec_to_json(spec)}, {"S", matrix_to_json(s)}};
}

std::vector<Property> make_properties() {
  std::vector<Property> props;

  props.push_back(
      {"linalg.rank_nullity", false,
       [](Rng& rng, int size_max) {
         const int n = rng.integer(1, size_max);
         const int r = rng.integer(0, n);
         const ComplexMat a = random_gaussian(rng, n, r) * random_gaussian(rng, r, n);
         return Json{{"A", matrix_to_json(a)}, {"rank", r}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const ComplexMat a = matrix_from_json(in.at("A"));
         const int rank = rank_with_tol(a, tol);
         if (rank != in.at("rank").get<int>()) return "rank " + std::to_string(rank);
         return fail_if(rank + nullity_at(a, 0.0, tol) != a.rows(), "rank + nullity != n");
       }});

  props.push_back(
      {"linalg.schur_reconstruction", false,
       [](Rng& rng, int size_max) {
         const int n = rng.integer(1, size_max);
         return Json{{"A", matrix_to_json(random_gaussian(rng, n, n))}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const ComplexMat a = matrix_from_json(in.at("A"));
         const SchurForm s = schur_upper_triangularize(a, tol);
         const Index n = a.rows();
         const double bound = tol.residual_abs * (1.0 + a.norm());
         const double recon = (s.unitary * s.triangular * s.unitary.adjoint() - a).norm();
         const double orth = (s.unitary.adjoint() * s.unitary - ComplexMat::Identity(n, n)).norm();
         const ComplexMat lower = s.triangular.triangularView<Eigen::StrictlyLower>();
         if (recon > bound) return "reconstruction residual " + num(recon);
         if (orth > bound) return "unitary residual " + num(orth);
         return fail_if(lower.norm() != 0.0, "triangular factor has subdiagonal entries");
       }});

  props.push_back(
      {"linalg.unitary_invariance", false,
       [](Rng& rng, int size_max) {
         const int n = rng.integer(1, size_max);
         return Json{{"A", matrix_to_json(random_gaussian(rng, n, n))},
                     {"U", matrix_to_json(random_unitary(rng, n))},
                     {"W", matrix_to_json(random_unitary(rng, n))}};
       },
       [](const Json& in, const Tolerances&) -> Verdict {
         const ComplexMat a = matrix_from_json(in.at("A"));
         const ComplexMat u = matrix_from_json(in.at("U"));
         const ComplexMat w = matrix_from_json(in.at("W"));
         const auto s0 = singular_values(a);
         const auto s1 = singular_values(u * a * w);
         for (std::size_t i = 0; i < s0.size(); ++i) {
           if (std::abs(s0[i] - s1[i]) > 1e-10 * (1.0 + s0.front())) {
             return "singular value " + std::to_string(i) + " moved by " +
                    num(std::abs(s0[i] - s1[i]));
           }
         }
         return std::nullopt;
       }});

  props.push_back({"jordan.round_trip", false, similar_to_random_jordan,
                   [](const Json& in, const Tolerances& tol) -> Verdict {
                     const JordanSpec spec = spec_from_json(in.at("spec"), tol);
                     const ComplexMat a =
                         conjugate(matrix_from_json(in.at("S")), jordan_matrix(spec));
                     const JordanSpec got = jordan_structure(a, tol);
                     return fail_if(!got.equivalent(spec, tol.cluster_abs),
                                    "recovered " + spec_to_json(got).dump());
                   }});

  props.push_back(
      {"jordan.segre_monotone", false, similar_to_random_jordan,
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const JordanSpec spec = spec_from_json(in.at("spec"), tol);
         const ComplexMat a = conjugate(matrix_from_json(in.at("S")), jordan_matrix(spec));
         const JordanAnalysis an = jordan_analysis(a, tol);
         for (const auto& seq : an.nullity_sequences) {
           for (std::size_t k = 1; k < seq.size(); ++k) {
             if (seq[k] < seq[k - 1]) return std::string("nullity sequence decreases");
             if (k >= 2 && seq[k] - seq[k - 1] > seq[k - 1] - seq[k - 2]) {
               return std::string("nullity increments increase");
             }
           }
         }
         return std::nullopt;
       }});

  props.push_back(
      {"jordan.similarity_compose", false,
       [](Rng& rng, int size_max) {
         Json in = similar_to_random_jordan(rng, size_max);
         const int n = in["spec"]["n"].get<int>();
         in["T"] = matrix_to_json(random_similarity(rng, n, 100.0));
         return in;
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const JordanSpec spec = spec_from_json(in.at("spec"), tol);
         const ComplexMat j = jordan_matrix(spec);
         const ComplexMat a = conjugate(matrix_from_json(in.at("S")), j);
         const ComplexMat b = conjugate(matrix_from_json(in.at("T")), j);
         const SimilarityCertificate ab = similarity_between(a, b, tol);
         const SimilarityCertificate ba = similarity_between(b, a, tol);
         const Index n = a.rows();
         const double err = (ba.similarity * ab.similarity - ComplexMat::Identity(n, n)).norm();
         const double bound = tol.residual_abs * ab.cond * ba.cond * (1.0 + a.norm());
         return fail_if(!(err <= bound), "||S_ba S_ab - I|| = " + num(err) + " > " + num(bound));
       }});

  props.push_back(
      {"decide.pi_weyl_horn_agreement", false,
       [](Rng& rng, int size_max) {
         const int n = rng.integer(1, std::min(6, size_max));
         std::vector<Complex> lambdas(static_cast<std::size_t>(n));
         for (auto& l : lambdas) {
           const double u = rng.uniform(0.0, 1.0);
           l = u < 0.4   ? Complex{}
               : u < 0.6 ? std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi))
                         : rng.in_annulus(0.0, 1.0);
         }
         return Json{{"lambdas", complex_list(lambdas)}, {"r", rng.integer(0, n)}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const auto lambdas = complex_list_from(in.at("lambdas"));
         const int n = static_cast<int>(lambdas.size());
         const int r = in.at("r").get<int>();
         const bool a = pi_spectrum_feasible(lambdas, r, n, tol);
         const bool b = weyl_horn_feasible(SingularProfile::partial_isometry(r, n), lambdas, tol);
         return fail_if(a != b, "pi_spectrum_feasible = " + std::to_string(a) +
                                    ", weyl_horn_feasible = " + std::to_string(b));
       }});

  props.push_back({"decide.necessity", false,
                   [](Rng& rng, int size_max) {
                     const int n = rng.integer(1, std::min(8, size_max));
                     return Json{{"V", matrix_to_json(random_partial_isometry(rng, n))}};
                   },
                   [](const Json& in, const Tolerances& tol) -> Verdict {
                     const auto [d, spec] =
                         decide_matrix_partial_isometry(matrix_from_json(in.at("V")), tol);
                     return fail_if(!d.verdict, "partial isometry rejected: " +
                                                    spec_to_json(spec).dump());
                   }});

  props.push_back(
      {"decide.zero_block_monotone", false,
       [](Rng& rng, int size_max) {
         const JordanSpec spec = rng.coin() ? random_admissible_spec(rng, {.n_max = size_max})
                                            : random_jordan_spec(rng, size_max, 3, 0.05);
         return Json{{"spec", spec_to_json(spec)}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const JordanSpec spec = spec_from_json(in.at("spec"), tol);
         if (!decide_partial_isometry(spec, tol).verdict) return std::nullopt;
         std::vector<JordanEigenBlocks> blocks = spec.blocks();
         auto zero = std::find_if(blocks.begin(), blocks.end(),
                                  [](const JordanEigenBlocks& b) { return b.eigenvalue == 0.0; });
         if (zero == blocks.end()) {
           blocks.push_back({0.0, {1}});
         } else {
           zero->sizes.push_back(1);
         }
         return fail_if(!decide_partial_isometry(JordanSpec::canonical(blocks, tol), tol).verdict,
                        "adding a zero block flipped the verdict");
       }});

  props.push_back(
      {"decide.summand_non_closure", true, [](Rng&, int) { return Json::object(); },
       [](const Json&, const Tolerances& tol) -> Verdict {
         const JordanSpec both = JordanSpec::canonical({{0.0, {1}}, {0.5, {1}}}, tol);
         const JordanSpec half = JordanSpec::canonical({{0.5, {1}}}, tol);
         if (!decide_partial_isometry(both, tol).verdict) return std::string("{0, 1/2} rejected");
         return fail_if(decide_partial_isometry(half, tol).verdict, "{1/2} accepted");
       }});

  props.push_back(
      {"construct.superdiagonal", false,
       [](Rng& rng, int size_max) {
         std::vector<Complex> xis(static_cast<std::size_t>(rng.integer(1, size_max) - 1));
         for (auto& x : xis) x = rng.coin(0.1) ? Complex{} : rng.in_annulus(0.0, 0.99);
         return Json{{"xis", complex_list(xis)}};
       },
       [](const Json& in, const Tolerances&) -> Verdict {
         const auto xis = complex_list_from(in.at("xis"));
         const ComplexMat v = superdiagonal_partial_isometry(xis);
         const Index n = v.rows();
         ComplexMat expected = ComplexMat::Identity(n, n);
         expected(0, 0) = 0.0;
         if (v(0, 0) != Complex{}) return std::string("first diagonal entry is not zero");
         for (Index i = 1; i < n; ++i) {
           if (v(i, i) != xis[static_cast<std::size_t>(i - 1)]) {
             return "diagonal entry " + std::to_string(i) + " differs";
           }
         }
         const double err = (v.adjoint() * v - expected).norm();
         if (err > 1e-10) return "||V*V - (0 + I)|| = " + num(err);
         for (Index i = 0; i + 1 < n; ++i) {
           const Complex s = v(i, i + 1);
           if (!(s.imag() == 0.0 && s.real() > 0.0)) {
             return "superdiagonal entry " + std::to_string(i) + " is not real positive";
           }
         }
         return std::nullopt;
       }});

  props.push_back(
      {"construct.synthesis_round_trip", false,
       [](Rng& rng, int size_max) {
         return Json{{"spec", spec_to_json(random_admissible_spec(rng, {.n_max = size_max}))}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const JordanSpec spec = spec_from_json(in.at("spec"), tol);
         const ComplexMat v = assemble_partial_isometry(partition_blocks(spec, tol));
         const double variety = partial_isometry_residual(v);
         if (variety > tol.residual_abs) return "residual_variety " + num(variety);
         const JordanSpec got = jordan_structure(v, tol);
         if (!got.equivalent(spec, tol.cluster_abs)) return "recovered " + spec_to_json(got).dump();
         // Certificates for larger forms can exceed double precision.
         if (spec.dimension() > 16) return std::nullopt;
         const Certificate cert = synthesize_partial_isometry(spec, tol);
         const VerificationReport report = verify_certificate(cert, jordan_matrix(spec), tol);
         return fail_if(!report.passed, "certificate failed verification");
       }});

  props.push_back(
      {"construct.coherence", false,
       [](Rng& rng, int size_max) {
         const int n_max = std::min(8, size_max);
         const JordanSpec spec = rng.coin()
                                     ? random_admissible_spec(rng, {.n_max = n_max,
                                                                    .min_separation = 0.05})
                                     : random_jordan_spec(rng, n_max, 2, 0.1);
         const ComplexMat s = random_similarity(rng, spec.dimension(), 10.0);
         return Json{{"spec", spec_to_json(spec)}, {"S", matrix_to_json(s)}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const JordanSpec spec = spec_from_json(in.at("spec"), tol);
         const ComplexMat a = conjugate(matrix_from_json(in.at("S")), jordan_matrix(spec));
         const bool admissible = decide_matrix_partial_isometry(a, tol).first.verdict;
         bool built = false;
         try {
           const Certificate cert = construct_similar_partial_isometry(a, tol);
           built = verify_certificate(cert, a, tol).passed;
         } catch (const NotAdmissible&) {
           built = false;
         }
         return fail_if(admissible != built, "decide = " + std::to_string(admissible) +
                                                 ", construct = " + std::to_string(built));
       }});

  props.push_back(
      {"construct.peel_unimodular", false,
       [](Rng& rng, int size_max) {
         const int n_max = std::max(2, size_max);
         for (;;) {
           const JordanSpec spec = random_admissible_spec(rng, {.n_max = n_max});
           const BlockGrouping g = partition_blocks(spec);
           if (g.unitary_part.empty()) continue;
           const ComplexMat u = random_unitary(rng, spec.dimension());
           const ComplexMat v = u * assemble_partial_isometry(g) * u.adjoint();
           Json part = Json::array();
           for (const auto& [zeta, m] : g.unitary_part) {
             part.push_back(Json{{"eig", complex_to_json(zeta)}, {"multiplicity", m}});
           }
           return Json{{"V", matrix_to_json(v)}, {"unitary_part", part}};
         }
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const PeeledUnitary peeled = peel_unimodular(matrix_from_json(in.at("V")), tol);
         const Json& expected = in.at("unitary_part");
         if (peeled.unitary_part.size() != expected.size()) {
           return "found " + std::to_string(peeled.unitary_part.size()) +
                  " unimodular eigenvalues";
         }
         for (const Json& e : expected) {
           const Complex zeta = complex_from_json(e.at("eig"));
           const auto hit = std::find_if(
               peeled.unitary_part.begin(), peeled.unitary_part.end(),
               [&](const EigenMultiplicity& p) { return std::abs(p.eigenvalue - zeta) <= 1e-6; });
           if (hit == peeled.unitary_part.end() ||
               hit->multiplicity != e.at("multiplicity").get<int>()) {
             return "unitary part mismatch at " + e.at("eig").dump();
           }
         }
         return std::nullopt;
       }});

  const auto projection_pair = [](Rng& rng, int size_max) {
    const int n = rng.integer(1, std::min(12, size_max));
    return Json{{"P", matrix_to_json(random_projection(rng, n, rng.integer(0, n)))},
                {"Q", matrix_to_json(random_projection(rng, n, rng.integer(0, n)))}};
  };

  props.push_back(
      {"projections.reconstruction", false, projection_pair,
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const ComplexMat p = matrix_from_json(in.at("P"));
         const ComplexMat q = matrix_from_json(in.at("Q"));
         const TwoProjectionDecomposition d = canonical_two_projections(p, q, tol);
         const auto [pc, qc] = assemble_two_projections(d.form);
         const ComplexMat& u = d.unitary;
         const double err = std::max((u * pc * u.adjoint() - p).norm(),
                                     (u * qc * u.adjoint() - q).norm());
         return fail_if(err > tol.residual_abs, "reassembly residual " + num(err));
       }});

  props.push_back({"projections.spectrum_law", false, projection_pair,
                   [](const Json& in, const Tolerances& tol) -> Verdict {
                     const ComplexMat pq =
                         matrix_from_json(in.at("P")) * matrix_from_json(in.at("Q"));
                     const JordanSpec spec = jordan_structure(pq, tol);
                     return fail_if(!decide_projection_product(spec, tol).verdict,
                                    "PQ has structure " + spec_to_json(spec).dump());
                   }});

  props.push_back(
      {"projections.pairing", false,
       [](Rng& rng, int size_max) {
         return Json{
             {"spec", spec_to_json(random_projection_product_spec(rng, std::min(16, size_max)))}};
       },
       [](const Json& in, const Tolerances& tol) -> Verdict {
         const JordanSpec spec = spec_from_json(in.at("spec"), tol);
         const ProjectionCertificate cert = construct_projection_pair(spec, tol);
         const JordanSpec got = jordan_structure(cert.p * cert.q, tol);
         if (!got.equivalent(spec, tol.cluster_abs)) return "PQ has structure " + spec_to_json(got).dump();
         int interior = 0;
         for (const auto& e : got.blocks()) {
           const double x = e.eigenvalue.real();
           if (x > tol.cluster_abs && x < 1.0 - tol.cluster_abs) interior += e.geometric_multiplicity();
         }
         const int zeros = got.block_count(0.0, tol.cluster_abs);
         if (zeros < interior) return std::string("fewer zero blocks than interior blocks");
         return fail_if(zeros != spec.block_count(0.0, tol.cluster_abs),
                        "zero block count changed");
       }});

  props.push_back(
      {"projections.set_s_non_closure", true, [](Rng&, int) { return Json::object(); },
       [](const Json&, const Tolerances& tol) -> Verdict {
         const double r = 1.0 / std::numbers::sqrt2;
         ComplexMat inside(2, 2);
         ComplexMat outside(2, 2);
         inside << r, r, 0.0, 0.0;
         outside << r, 1.0, 0.0, 0.0;
         if (!in_set_S(inside, tol)) return std::string("[[1/sqrt2, 1/sqrt2], [0, 0]] not in S");
         if (in_set_S(outside, tol)) return std::string("[[1/sqrt2, 1], [0, 0]] in S");
         return fail_if(!jordan_structure(inside, tol).equivalent(jordan_structure(outside, tol),
                                                                  tol.cluster_abs),
                        "the two examples are not similar");
       }});

  return props;
}

const std::vector<Property>& properties() {
  static const std::vector<Property> props = make_properties();
  return props;
}

Verdict run_check(const Property& p, const Json& input, const Tolerances& tol) {
  try {
    return p.check(input, tol);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

}  // namespace

Json Failure::to_json() const {
  return Json{{"property", property},
              {"case_seed", case_seed},
              {"size_max", size_max},
              {"input", input},
              {"message", message}};
}

Failure Failure::from_json(const Json& j) {
  try {
    Failure f;
    f.property = j.at("property").get<std::string>();
    f.case_seed = j.at("case_seed").get<std::uint64_t>();
    f.size_max = j.at("size_max").get<int>();
    f.input = j.at("input");
    if (j.contains("message")) f.message = j.at("message").get<std::string>();
    return f;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("replay file: ") + e.what());
  }
}

Json Report::to_json() const {
  Json props = Json::array();
  for (const auto& p : properties) {
    props.push_back(Json{{"name", p.name}, {"cases", p.cases}, {"passed", p.passed}});
  }
  return Json{{"seed", seed},
              {"size_max", size_max},
              {"passed", passed()},
              {"properties", std::move(props)},
              {"first_failure", first_failure ? first_failure->to_json() : Json(nullptr)}};
}

std::vector<std::string> property_names() {
  std::vector<std::string> names;
  for (const auto& p : properties()) names.push_back(p.name);
  return names;
}

Report run_all(const Options& options, const Tolerances& tol) {
  if (options.size_max < 1) throw InvalidInput("suite: size-max must be at least 1");
  if (options.cases < 1) throw InvalidInput("suite: cases must be at least 1");
  tol.validate();
  Report report;
  report.seed = options.seed;
  report.size_max = options.size_max;
  for (const auto& p : properties()) {
    PropertyTally tally{p.name, 0, 0};
    const int cases = p.fixed ? 1 : options.cases;
    for (int i = 0; i < cases; ++i) {
      const std::uint64_t cs = case_seed(options.seed, p.name, i);
      Rng rng(cs);
      const Json input = p.generate(rng, options.size_max);
      ++tally.cases;
      const Verdict v = run_check(p, input, tol);
      if (!v) {
        ++tally.passed;
      } else if (!report.first_failure) {
        report.first_failure = Failure{p.name, cs, options.size_max, input, *v};
      }
    }
    report.properties.push_back(std::move(tally));
  }
  return report;
}

Report replay(const Failure& failure, const Tolerances& tol) {
  tol.validate();
  const auto& props = properties();
  const auto it = std::find_if(props.begin(), props.end(),
                               [&](const Property& p) { return p.name == failure.property; });
  if (it == props.end()) throw InvalidInput("replay: unknown property \"" + failure.property + "\"");
  Report report;
  report.size_max = failure.size_max;
  PropertyTally tally{it->name, 1, 0};
  const Verdict v = run_check(*it, failure.input, tol);
  if (!v) {
    tally.passed = 1;
  } else {
    report.first_failure =
        Failure{failure.property, failure.case_seed, failure.size_max, failure.input, *v};
  }
  report.properties.push_back(std::move(tally));
  return report;
}

}  // namespace pisim::suite
