// Acceptance runner: executes the full verification battery and prints one
// PASS/FAIL line per criterion. Exit code 0 only when every criterion passes.

#include "shrinklab/report.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>

int main(int argc, char** argv) {
  shrinklab::report::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    }
  }

  bool all = true;
  std::cout << std::fixed << std::setprecision(2);
  const auto results = shrinklab::report::run_acceptance(opts);
  for (const auto& res : results) {
    std::cout << res.id << (res.pass ? " PASS" : " FAIL") << "  [" << res.runtime_seconds
              << " s]  " << res.title << "\n";
    if (!res.pass) {
      for (const auto& row : res.rows) {
        if (!row.pass) {
          std::cout << "    failed: " << row.check_id << "  value="
                    << std::setprecision(12) << row.value << "  tolerance="
                    << row.tolerance << "  expected=" << row.expected << "\n"
                    << std::setprecision(2);
        }
      }
    }
    all = all && res.pass;
  }
  std::cout << (all ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}
