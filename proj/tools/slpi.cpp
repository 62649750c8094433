// Command-line front end: one subcommand per runner task.

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "slpi/run.hpp"
#include "slpi/version.hpp"

namespace {

const char* describe(const std::string& task) {
  if (task == "validate") return "check a configuration and report violations";
  if (task == "shoot") return "propagate one solution and dump the trace";
  if (task == "green-sweep") return "diagonal Green function over a z grid";
  if (task == "krein-check") return "coupling-relation residuals over a z grid";
  if (task == "spectrum") return "eigenvalues in an energy window";
  if (task == "classify") return "all-couplings vs measure-zero verdict at E";
  if (task == "certify") return "oscillation certificates at E";
  if (task == "montecarlo") return "sampled eigenvalue-persistence probability";
  if (task == "scan") return "montecarlo over an energy grid, with findings";
  if (task == "truncate") return "half-line truncation ladder around an inner task";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sturm-Liouville operators with point interactions"};
  app.set_version_flag("--version", slpi::version());
  app.require_subcommand(1);

  std::string config_path, out, format;
  std::uint64_t seed = 0;
  int threads = 1;
  for (const auto& name : slpi::task_names()) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config_path, "configuration file (sectioned text or JSON)")
        ->required();
    sub->add_option("--out", out, "report path (overrides [output] path)");
    sub->add_option("--format", format, "report format (overrides [output] format)")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "override the ensemble master seed");
    sub->add_option("--threads", threads, "worker threads for sampling tasks")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad invocation is a configuration error
  }

  CLI::App* chosen = app.get_subcommands().front();
  slpi::RunOverrides ov;
  if (chosen->count("--out")) ov.out = out;
  if (chosen->count("--format")) ov.format = format;
  if (chosen->count("--seed")) ov.seed = seed;
  ov.threads = threads;

  slpi::RunOutcome oc = slpi::run_task(config_path, chosen->get_name(), ov);
  if (!oc.report_path.empty())
    std::printf("task=%s wall=%.3fs report=%s\n", chosen->get_name().c_str(),
                oc.wall_seconds, oc.report_path.c_str());
  if (oc.exit_code != 0 && !oc.message.empty())
    std::fprintf(stderr, "error: %s\n", oc.message.c_str());
  return oc.exit_code;
}
