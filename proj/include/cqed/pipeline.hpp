#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/config.hpp"

namespace cqed {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
  kExitIo = 5,
};

struct OutputFile {
  std::string name;
  std::string content;
};

/// Everything a run produces, held in memory until it is written.
struct RunArtifacts {
  nlohmann::ordered_json report;
  std::vector<OutputFile> files;  // report.json included, last
  int status = kExitOk;           // kExitInfeasible when an optimisation found nothing
};

/// Runs the scenario. Throws on configuration or numerical failure.
RunArtifacts execute(const ScenarioConfig& config);

/// Directory a run writes into: `override_dir` if given, an absolute
/// output_dir as is, otherwise output_dir under $CQED_OUTPUT_ROOT (or the
/// working directory).
std::filesystem::path resolve_output_dir(const ScenarioConfig& config,
                                         const std::optional<std::filesystem::path>& override_dir);

/// Writes every file into `dir` (created if needed). Throws IoError.
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir);

int exit_code_for(const std::exception& e);
std::string_view exit_kind(int code);

/// {"error": kind, "exit_code": n, "message": ...} as one line of JSON.
std::string error_message(int code, std::string_view message);

}  // namespace cqed
