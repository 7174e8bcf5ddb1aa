#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "input.hpp"

namespace fanoscope::cli {

inline constexpr const char* kReportSchema = "fanoscope.report.v1";
inline constexpr const char* kVersion = "0.1.0";

struct JobOptions {
  std::string command;
  std::string input;
  std::string output;  // empty: stdout
  std::string csv;     // fiber-scan table; empty: next to the output
  std::string corpus;  // selftest corpus directory
  std::uint64_t seed = 1;
  std::optional<int> budget;
  std::optional<int> scan_depth;
  int height_bound = 20;
  int threads = 1;
  bool timing = false;
};

struct CommandResult {
  Json report;
  bool pass = false;
  std::string csv;
};

// Known commands in the order of the usage text.
const std::vector<std::string>& command_names();

// Dispatches on job.command. Throws SchemaError or CharacteristicTwoInput for
// rejected inputs.
CommandResult run(const JobOptions& job);

// Collects checks; every entry names the operation that produced it and the
// verification method.
class Checks {
 public:
  void add(const std::string& name, bool pass, const std::string& operation, const std::string& method,
           const std::string& witness = {});
  bool pass() const { return pass_; }
  const Json& json() const { return list_; }

 private:
  Json list_ = Json::array();
  bool pass_ = true;
};

Json job_echo(const JobOptions& job);

}  // namespace fanoscope::cli
