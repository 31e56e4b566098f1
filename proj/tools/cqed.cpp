#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cqed/catalog.hpp"
#include "cqed/config.hpp"
#include "cqed/errors.hpp"
#include "cqed/pipeline.hpp"
#include "cqed/report.hpp"
#include "cqed/units.hpp"

namespace {

using namespace cqed;

// A path on disk wins over a catalog name of the same spelling.
ScenarioConfig load_target(const std::string& target) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(target, ec)) return load_config(target);
  if (const auto entry = find_scenario(target)) return parse_config(entry->text);
  throw ConfigError("'" + target + "' is neither a readable file nor a catalog scenario (see 'cqed list')");
}

int fail(int code, const std::string& message) {
  std::cerr << error_message(code, message) << '\n';
  return code;
}

void print_value(const nlohmann::ordered_json& v) {
  if (v.is_number_float()) std::cout << shortest_repr(v.get<double>()) << '\n';
  else if (v.is_string()) std::cout << v.get<std::string>() << '\n';
  else if (v.is_primitive()) std::cout << v.dump() << '\n';
  else std::cout << v.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cantilever / condensate coupling calculator"};
  app.require_subcommand(1);

  std::string target;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::string key;

  auto* run = app.add_subcommand("run", "Run a scenario and write its report and data files");
  run->add_option("config", target, "Configuration file or catalog scenario name")->required();
  run->add_option("--seed", seed, "Override the configured seed");
  run->add_option("--out-dir", out_dir, "Write into this directory instead of output_dir");
  run->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  auto* list = app.add_subcommand("list", "List the shipped example scenarios");

  auto* show = app.add_subcommand("show", "Print a catalog scenario's configuration");
  show->add_option("name", target, "Catalog scenario name")->required();

  auto* derive = app.add_subcommand("derive", "Print derived device parameters");
  derive->add_option("config", target, "Configuration file or catalog scenario name")->required();
  derive->add_option("--key", key, "Dotted path of a single value, e.g. g_hz or derived.kappa_hz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, e.what());
  }

  try {
    if (list->parsed()) {
      for (const auto& entry : catalog()) {
        const auto cfg = parse_config(entry.text);
        std::cout << entry.name << "\t" << to_string(cfg.kind) << "\t" << cfg.description << '\n';
      }
      return kExitOk;
    }
    if (show->parsed()) {
      const auto entry = find_scenario(target);
      if (!entry) return fail(kExitConfig, "unknown catalog scenario '" + target + "'");
      std::cout << entry->text;
      return kExitOk;
    }
    if (derive->parsed()) {
      const auto cfg = load_target(target);
      if (!cfg.device) return fail(kExitConfig, "configuration has no device section");
      const auto specs = resolve_device(*cfg.device, cfg.constants);
      const auto derived = derive_all(specs, cfg.constants);
      nlohmann::ordered_json root;
      root["derived"] = derived_report(derived, specs, cfg.constants);
      root["warnings"] = device_warnings(derived, specs);
      if (key.empty()) {
        std::cout << root.dump(2) << '\n';
        return kExitOk;
      }
      auto value = lookup(root, key);
      if (!value) value = lookup(root["derived"], key);
      if (!value) return fail(kExitUsage, "no derived value at '" + key + "'");
      print_value(*value);
      return kExitOk;
    }

    auto cfg = load_target(target);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    const auto dir = resolve_output_dir(cfg, out_dir ? std::optional<std::filesystem::path>(*out_dir)
                                                    : std::nullopt);
    const RunArtifacts artifacts = execute(cfg);
    write_artifacts(artifacts, dir);
    for (const auto& w : artifacts.report["warnings"])
      std::cerr << "warning: " << w.get<std::string>() << '\n';
    std::cout << (dir / "report.json").string() << '\n';
    if (artifacts.status != kExitOk)
      return fail(artifacts.status, "no feasible design within the search space");
    return kExitOk;
  } catch (const std::exception& e) {
    return fail(exit_code_for(e), e.what());
  }
}
