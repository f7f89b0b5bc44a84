#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "pisim/construct.hpp"
#include "pisim/decide.hpp"
#include "pisim/io.hpp"
#include "pisim/projections.hpp"
#include "suite.hpp"

namespace pisim::cli {
namespace {

// Raised when the tool itself fails (unwritable --out file and the like).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open \"" + path + "\"");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string& path) { return parse_json(read_text(path)); }

enum class InputKind { Matrix, Spec };

InputKind kind_of(const Json& j) {
  if (j.is_object() && j.contains("blocks")) return InputKind::Spec;
  if (j.is_object() && j.contains("rows")) return InputKind::Matrix;
  throw InvalidInput("input is neither a matrix {\"rows\", ...} nor a Jordan spec {\"blocks\", ...}");
}

ComplexMat square_matrix(const Json& j) {
  ComplexMat m = matrix_from_json(j);
  require_square(m, "input");
  return m;
}

// Result of one subcommand: a JSON document and the exit code it implies.
struct Outcome {
  Json document;
  int code = kTrue;
};

Outcome cmd_analyze(const std::string& file, const RunConfig& cfg) {
  const ComplexMat a = square_matrix(read_json(file));
  return {spec_to_json(jordan_structure(a, cfg.tolerances)), kTrue};
}

Outcome cmd_decide(const std::string& file, bool pp, const RunConfig& cfg) {
  const Tolerances& tol = cfg.tolerances;
  const Json in = read_json(file);
  JordanSpec spec = kind_of(in) == InputKind::Spec ? spec_from_json(in, tol)
                                                   : jordan_structure(square_matrix(in), tol);
  const Decision d = pp ? decide_projection_product(spec, tol) : decide_partial_isometry(spec, tol);
  return {decision_to_json(d), d.verdict ? kTrue : kFalse};
}

Outcome cmd_construct(const std::string& file, bool pp, const RunConfig& cfg) {
  const Tolerances& tol = cfg.tolerances;
  const Json in = read_json(file);
  try {
    if (kind_of(in) == InputKind::Spec) {
      const JordanSpec spec = spec_from_json(in, tol);
      if (pp) return {projection_certificate_to_json(construct_projection_pair(spec, tol)), kTrue};
      return {certificate_to_json(synthesize_partial_isometry(spec, tol)), kTrue};
    }
    const ComplexMat a = square_matrix(in);
    if (pp) return {projection_certificate_to_json(construct_projection_pair(a, tol)), kTrue};
    return {certificate_to_json(construct_similar_partial_isometry(a, tol)), kTrue};
  } catch (const NotAdmissible& e) {
    return {decision_to_json(e.decision()), kFalse};
  }
}

Outcome cmd_verify(const std::string& cert_file, const std::string& original_file,
                   const RunConfig& cfg, std::ostream& err) {
  const Tolerances& tol = cfg.tolerances;
  const Json cert = read_json(cert_file);
  const Json orig = read_json(original_file);
  const ComplexMat original = kind_of(orig) == InputKind::Spec
                                  ? jordan_matrix(spec_from_json(orig, tol))
                                  : square_matrix(orig);
  VerificationReport report;
  if (cert.is_object() && cert.contains("P")) {
    report = verify_projection_certificate(projection_certificate_from_json(cert), original, tol);
  } else {
    report = verify_certificate(certificate_from_json(cert), original, tol);
  }
  for (const auto& c : report.checks) {
    if (!c.passed) {
      err << "verification failed: " << c.name << " = " << c.value << " exceeds bound " << c.bound
          << "\n";
    }
  }
  return {verification_to_json(report), report.passed ? kTrue : kFalse};
}

Outcome cmd_suite(int size_max, int cases, const std::string& replay_file, const RunConfig& cfg,
                  std::ostream& err) {
  suite::Report report;
  if (!replay_file.empty()) {
    report = suite::replay(suite::Failure::from_json(read_json(replay_file)), cfg.tolerances);
  } else {
    report = suite::run_all({cfg.seed, size_max, cases}, cfg.tolerances);
  }
  if (report.first_failure) {
    err << "property " << report.first_failure->property
        << " failed: " << report.first_failure->message << "\n";
  }
  return {report.to_json(), report.passed() ? kTrue : kFalse};
}

void emit(const Json& doc, const RunConfig& cfg, std::ostream& out) {
  const std::string text = dump_json(doc);
  if (!cfg.output_path) {
    out << text;
    return;
  }
  std::ofstream file(*cfg.output_path, std::ios::binary);
  if (!(file << text)) throw UsageError("cannot write \"" + *cfg.output_path + "\"");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity to partial isometries and to products of two projections"};
  app.name("pisim");
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig cfg;
  std::string out_path;
  app.add_option("--tol-rank", cfg.tolerances.rank_rel, "relative singular value cutoff")
      ->capture_default_str();
  app.add_option("--tol-cluster", cfg.tolerances.cluster_abs, "eigenvalue clustering radius")
      ->capture_default_str();
  app.add_option("--tol-residual", cfg.tolerances.residual_abs, "certificate residual threshold")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
  app.add_option("--out", out_path, "write the JSON result to this file");

  std::string input;
  std::string certificate;
  std::string original;
  bool pp = false;
  int size_max = 8;
  int cases = 20;
  std::string replay_file;

  auto* analyze = app.add_subcommand("analyze", "print the Jordan structure of a matrix");
  analyze->add_option("matrix", input, "matrix JSON file ('-' for stdin)")->required();

  auto* decide = app.add_subcommand("decide", "decide similarity to a partial isometry");
  decide->add_option("input", input, "matrix or Jordan spec JSON file")->required();
  decide->add_flag("--pp", pp, "decide similarity to a product of two projections instead");

  auto* construct = app.add_subcommand("construct", "build a similar partial isometry");
  construct->add_option("input", input, "matrix or Jordan spec JSON file")->required();
  construct->add_flag("--pp", pp, "build a pair of projections instead");

  auto* verify = app.add_subcommand("verify", "recompute a certificate's residuals");
  verify->add_option("certificate", certificate, "certificate JSON file")->required();
  verify->add_option("original", original, "the matrix or spec the certificate is for")
      ->required();

  auto* suite_cmd = app.add_subcommand("suite", "run the randomized property suites");
  suite_cmd->add_option("--size-max", size_max, "largest matrix dimension")->capture_default_str();
  suite_cmd->add_option("--cases", cases, "cases per property")->capture_default_str();
  suite_cmd->add_option("--replay", replay_file, "rerun a serialized failing case");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kParse;
  }
  if (!out_path.empty()) cfg.output_path = out_path;

  try {
    cfg.tolerances.validate();
    Outcome result;
    if (*analyze) {
      result = cmd_analyze(input, cfg);
    } else if (*decide) {
      result = cmd_decide(input, pp, cfg);
    } else if (*construct) {
      result = cmd_construct(input, pp, cfg);
    } else if (*verify) {
      result = cmd_verify(certificate, original, cfg, err);
    } else {
      result = cmd_suite(size_max, cases, replay_file, cfg, err);
    }
    emit(result.document, cfg, out);
    return result.code;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ClusterAmbiguity& e) {
    err << "cluster ambiguity: " << e.what() << "\n";
    return kNumerical;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFalse;
  }
}

}  // namespace pisim::cli
