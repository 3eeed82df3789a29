// Runs every acceptance criterion and prints one line per criterion.
// Optional arguments select criteria by number.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "dihedral/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  int failures = 0;
  dihedral::run_acceptance(ids, {}, [&](const dihedral::CriterionResult& r) {
    std::printf("%s\n", dihedral::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failures;
  });
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
