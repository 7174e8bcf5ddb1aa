#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

// One line per criterion; exit status 0 iff every criterion passes.
int main(int argc, char** argv) {
  fanoscope::cli::AcceptanceOptions opt;
  opt.corpus = argc > 1 ? argv[1] : FANOSCOPE_CORPUS_DIR;
  if (const char* seed = std::getenv("FANOSCOPE_SEED")) opt.seed = std::stoull(seed);
  opt.on_result = [](const fanoscope::cli::CriterionResult& r) { std::cout << fanoscope::cli::format_line(r) << std::endl; };
  bool pass = true;
  for (const auto& r : fanoscope::cli::run_acceptance(opt)) pass = pass && r.pass;
  std::cout << (pass ? "acceptance: all criteria pass" : "acceptance: FAILED") << std::endl;
  return pass ? 0 : 1;
}
