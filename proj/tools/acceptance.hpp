#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "input.hpp"

namespace fanoscope::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string tolerance;  // pinned bound: exactness and time limit
  std::string detail;     // deterministic counts and first witness
  double seconds = 0;
  double limit_seconds = 0;  // 0: no time limit
};

struct AcceptanceOptions {
  std::string corpus;  // directory with threefolds/, fourfolds/ and rational/
  std::uint64_t seed = 1;
  // Criterion 12 reruns criteria 1..11 and compares report bytes.
  bool determinism = true;
  std::function<void(const CriterionResult&)> on_result;
};

// Criteria 1..12 in order. Time limits count toward pass.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// Deterministic report: timings are left out.
Json acceptance_json(const std::vector<CriterionResult>& results);

// One line per criterion: "[PASS] 3 name: detail (tolerance; 1.2s)".
std::string format_line(const CriterionResult& r);

// Corpus files of one kind ("threefolds", "fourfolds", "rational"), sorted.
std::vector<std::string> corpus_files(const std::string& corpus, const std::string& kind);

}  // namespace fanoscope::cli
