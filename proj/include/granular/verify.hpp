#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace granular {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string counterexample;  // JSON text of the first failing input
};

struct VerifyOptions {
  std::uint64_t seed = 12345;
  // Flips the sign of the energy-loss term in the collision bookkeeping, to
  // demonstrate that the harness catches it.
  bool inject_deltav_sign_fault = false;
};

const std::vector<std::string>& suite_names();

// Throws DomainError for an unknown suite; "all" runs every suite.
std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options = {});

// Prints the pass/fail table and, on failure, the first counterexample.
// Returns 0 when every check passes and 1 otherwise.
int verify(const std::string& suite, const VerifyOptions& options, std::ostream& out);

}  // namespace granular
