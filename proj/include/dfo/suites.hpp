#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dfo {

struct SuiteFailure {
  int trial = 0;
  std::string description; // includes serialized counterexamples
};

struct SuiteReport {
  std::string name;
  int trials = 0;
  std::vector<SuiteFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Known suites: lemma1..lemma8, pad, strategy.
std::vector<std::string> suite_names();

/// Runs `trials` seeded random instances of the named property; per-trial
/// seeds derive from the master seed, so results do not depend on `jobs`.
SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed,
                      int jobs = 1);

/// `SUITE <name> trials=<n> failures=<k>` plus one block per failure.
std::string format_report(const SuiteReport& report);

} // namespace dfo
