#include "ultrana/acceptance.hpp"

#include <iostream>

int main(int argc, char** argv) {
  ultrana::AcceptanceOptions options;
  options.precision = ultrana::default_precision();
  options.golden_dir = ULTRANA_GOLDEN_DIR;
  if (argc > 1) options.only = argv[1];
  bool all = true;
  ultrana::run_acceptance(options, [&](const ultrana::CriterionResult& r) {
    all = all && r.passed;
    std::cout << ultrana::format_result_line(r) << std::endl;
  });
  return all ? 0 : 1;
}
