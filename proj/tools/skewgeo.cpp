#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewgeo/errors.hpp"
#include "skewgeo/pipeline.hpp"
#include "skewgeo/report.hpp"
#include "skewgeo/scenario.hpp"

namespace {

struct RunArgs {
  std::string scenario;
  std::optional<int> samples;
  std::optional<unsigned long> seed;
  std::vector<std::string> sets;
  std::map<std::string, double> tol;
  std::string report;
  std::string format = "text";
  int threads = 0;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("scenario", a.scenario, "built-in scenario name or JSON config path")->required();
  cmd->add_option("--samples", a.samples, "number of sample points (default 100)");
  cmd->add_option("--seed", a.seed, "sampling seed (default 42)");
  cmd->add_option("--set", a.sets, "override a scenario constant, name=value");
  cmd->add_option("--report", a.report, "write the report to this path");
  cmd->add_option("--format", a.format, "report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--threads", a.threads, "worker threads, 0 for all cores");
  for (const auto& key : skewgeo::Tolerances::keys()) {
    auto* opt = cmd->add_option_function<double>(
        "--tol-" + key, [&a, key](double v) { a.tol[key] = v; }, "tolerance override");
    opt->group("Tolerances");
  }
}

int run(const RunArgs& a, skewgeo::Stage stage) {
  skewgeo::Scenario sc = skewgeo::resolve_scenario(a.scenario);
  for (const auto& s : a.sets) skewgeo::apply_override(sc, s);
  if (a.samples) sc.samples = *a.samples;
  sc.seed = a.seed.value_or(42);
  for (const auto& [k, v] : a.tol) sc.tolerances.at(k) = v;

  const skewgeo::VerificationReport rep = skewgeo::run_scenario(sc, {stage, a.threads});
  const auto format = skewgeo::parse_format(a.format);
  if (a.report.empty())
    std::cout << (format == skewgeo::ReportFormat::Json ? skewgeo::to_json(rep) : skewgeo::to_text(rep));
  else
    skewgeo::emit_report(rep, format, a.report);
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skew CR submanifold and warped product checker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", skewgeo::kToolVersion);

  auto* list = app.add_subcommand("list-scenarios", "list the built-in scenarios");
  std::string show_name;
  auto* show = app.add_subcommand("show-scenario", "print a scenario as a JSON config");
  show->add_option("scenario", show_name)->required();

  RunArgs ambient_args, classify_args, verify_args;
  auto* ambient = app.add_subcommand("check-ambient", "structure identities of the ambient model");
  add_run_options(ambient, ambient_args);
  auto* classify = app.add_subcommand("classify", "frames, second fundamental form and the Q split");
  add_run_options(classify, classify_args);
  auto* verify = app.add_subcommand("verify", "full pipeline including warped-product checks");
  add_run_options(verify, verify_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : skewgeo::builtin_names()) std::cout << n << "  " << skewgeo::builtin(n).description << "\n";
      return 0;
    }
    if (show->parsed()) {
      std::cout << skewgeo::scenario_to_json(skewgeo::resolve_scenario(show_name)) << "\n";
      return 0;
    }
    if (ambient->parsed()) return run(ambient_args, skewgeo::Stage::Ambient);
    if (classify->parsed()) return run(classify_args, skewgeo::Stage::Classify);
    if (verify->parsed()) return run(verify_args, skewgeo::Stage::Verify);
  } catch (const skewgeo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
