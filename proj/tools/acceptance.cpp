#include <cstdlib>
#include <iostream>

#include "fracineq/harness.hpp"

// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
int main(int argc, char** argv) {
  fracineq::AcceptanceOptions opt;
  if (argc > 1) opt.sweep_samples = std::atoi(argv[1]);
  bool all = true;
  for (const auto& c : fracineq::run_acceptance(opt)) {
    fracineq::print_criterion(std::cout, c);
    all = all && c.pass;
  }
  return all ? 0 : 1;
}
