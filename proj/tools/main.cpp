#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fanoscope/error.hpp"

namespace {

using fanoscope::cli::Json;

constexpr int kExitFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitCharacteristicTwo = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

std::string csv_path(const fanoscope::cli::JobOptions& job) {
  if (!job.csv.empty()) return job.csv;
  if (job.output.empty() || job.output == "-") return {};
  const auto dot = job.output.rfind('.');
  const auto slash = job.output.rfind('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? job.output.substr(0, dot) : job.output) + ".csv";
}

int error_exit(int code, const std::string& kind, const std::string& message, const std::string* pointer) {
  Json e;
  e["error"] = kind;
  e["message"] = message;
  if (pointer) e["pointer"] = *pointer;
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  fanoscope::cli::JobOptions job;
  job.corpus = FANOSCOPE_CORPUS_DIR;

  CLI::App app{"Cubic threefolds and fourfolds containing a plane: exact checks over finite fields and Q"};
  app.set_version_flag("--version", fanoscope::cli::kVersion);
  app.require_subcommand(1);
  for (const auto& name : fanoscope::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input,-i", job.input, "Input JSON (fanoscope.input.v1)")->envname("FANOSCOPE_INPUT");
    sub->add_option("--output,-o", job.output, "Report path; stdout when omitted")->envname("FANOSCOPE_OUTPUT");
    sub->add_option("--seed", job.seed, "Seed for every sampled check")->envname("FANOSCOPE_SEED");
    sub->add_option("--budget", job.budget, "Sample budget: axiom trials or scanned dual points")
        ->envname("FANOSCOPE_BUDGET")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--scan-depth", job.scan_depth, "Extension degree bound for generality scans (1 or 2)")
        ->envname("FANOSCOPE_SCAN_DEPTH")
        ->check(CLI::Range(1, 2));
    sub->add_option("--height-bound", job.height_bound, "Height bound for rational searches")
        ->envname("FANOSCOPE_HEIGHT_BOUND")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", job.threads, "Worker threads for fiber scans")
        ->envname("FANOSCOPE_THREADS")
        ->check(CLI::PositiveNumber);
    sub->add_option("--csv", job.csv, "Fiber-scan table; next to --output when omitted");
    sub->add_option("--corpus", job.corpus, "Corpus directory for selftest")->envname("FANOSCOPE_CORPUS");
    sub->add_flag("--timing", job.timing, "Add wall-clock time to the report (breaks byte identity)");
    sub->callback([&job, name] { job.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    const fanoscope::cli::CommandResult result = fanoscope::cli::run(job);
    write_text(job.output, result.report.dump(2) + "\n");
    if (!result.csv.empty()) {
      const std::string path = csv_path(job);
      if (path.empty()) {
        std::cerr << result.csv;
      } else {
        write_text(path, result.csv);
      }
    }
    return result.pass ? 0 : kExitFailed;
  } catch (const fanoscope::cli::SchemaError& e) {
    return error_exit(kExitSchema, "schema", e.what(), &e.pointer());
  } catch (const fanoscope::cli::CharacteristicTwoInput& e) {
    return error_exit(kExitCharacteristicTwo, "characteristic", e.what(), nullptr);
  } catch (const fanoscope::Error& e) {
    return error_exit(kExitFailed, std::string(fanoscope::to_string(e.code())), e.what(), nullptr);
  } catch (const std::exception& e) {
    return error_exit(kExitFailed, "internal", e.what(), nullptr);
  }
}
