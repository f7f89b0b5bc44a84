#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pisim/io.hpp"

namespace pisim::suite {

/// A failing case, serialized so that `pisim suite --replay` can rerun it.
struct Failure {
  std::string property;
  std::uint64_t case_seed = 0;
  int size_max = 0;
  Json input;
  std::string message;

  Json to_json() const;
  static Failure from_json(const Json& j);
};

struct PropertyTally {
  std::string name;
  int cases = 0;
  int passed = 0;
};

struct Report {
  std::uint64_t seed = 0;
  int size_max = 0;
  std::vector<PropertyTally> properties;
  std::optional<Failure> first_failure;

  bool passed() const { return !first_failure.has_value(); }
  Json to_json() const;
};

struct Options {
  std::uint64_t seed = 42;
  int size_max = 8;
  int cases = 20;  ///< per property
};

/// Names of every property, in execution order.
std::vector<std::string> property_names();

/// Runs every property for `cases` generated inputs each. Cases run in a
/// fixed order, and each draws from its own generator seeded by
/// (seed, property, index), so the report depends only on the options.
Report run_all(const Options& options, const Tolerances& tol);

/// Reruns the check of one serialized case on its stored input.
Report replay(const Failure& failure, const Tolerances& tol);

}  // namespace pisim::suite
