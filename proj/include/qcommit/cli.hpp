/** @file
 * Batch experiment driver.  Every verification suite is a subcommand with
 * seeded determinism; reports are JSON (or CSV for scaling sweeps) and
 * identical (subcommand, flags, seed) runs produce identical bytes.
 * Exit codes: 0 all assertions passed, 1 an assertion failed, 2 usage error.
 */

#ifndef QCOMMIT_CLI_HPP
#define QCOMMIT_CLI_HPP

#include <cstdint>
#include <string>

namespace qcommit::cli {

inline constexpr const char* version = "0.1.0";

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::size_t qubits = 2;
  std::size_t d = 2;
  std::size_t m = 4;
  int k = 2;
  int restarts = 32;
  std::size_t samples = 10000;
  double mu = 1e-6;
  std::string out;  // empty: stdout
  std::string format = "json";
};

// Validates ranges, runs the experiment and writes the report.
int run(const RunConfig& config);

// Parses flags (and an optional --config JSON file mirroring them).
int main_entry(int argc, char** argv);

}  // namespace qcommit::cli

#endif
