#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "pfg/report.hpp"
#include "pfg/scenario.hpp"

namespace {

struct RunArgs {
  std::string format = "text";
  std::string out;
  std::optional<std::size_t> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> order_guard;
  bool timing = false;
};

std::size_t env_jobs() {
  if (const char* v = std::getenv("PFG_JOBS")) {
    try {
      auto n = std::stoul(v);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring PFG_JOBS=" << v << "\n";
  }
  return 1;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--format", a.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", a.out, "write the report here instead of stdout");
  cmd->add_option("--jobs", a.jobs, "worker threads (default: PFG_JOBS or 1)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "seed for randomized sweeps");
  cmd->add_option("--order-guard", a.order_guard, "largest group order accepted")->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", a.timing, "record wall time per analysis");
}

int execute(const std::string& source, const std::string& name, const std::string& base_dir, const RunArgs& a) {
  auto parsed = pfg::parse(source);
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) std::cerr << name << ":" << pfg::format(d) << "\n";
    return 2;
  }
  pfg::Scenario sc;
  try {
    sc = pfg::validate(*parsed.spec, {a.order_guard, base_dir});
  } catch (const pfg::ScenarioError& e) {
    std::cerr << name << ":" << e.loc().line << ":" << e.loc().column << ": error: " << e.what() << "\n";
    return 2;
  }
  pfg::RunConfig cfg;
  cfg.jobs = a.jobs ? *a.jobs : sc.options.jobs ? *sc.options.jobs : env_jobs();
  cfg.seed = a.seed ? *a.seed : sc.options.seed.value_or(0);
  cfg.timing = a.timing;
  auto report = pfg::run(sc, cfg);
  auto text = pfg::emit(report, a.format == "json" ? pfg::Format::Json : pfg::Format::Text);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << a.out << "\n";
      return 2;
    }
    f << text;
  }
  return pfg::exit_code(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Endomorphism analyses for finite groups and towers of finite quotients"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::string file;
  auto* run = app.add_subcommand("run", "run the analyses of a .pfg scenario");
  run->add_option("file", file, "scenario file")->required()->check(CLI::ExistingFile);
  add_run_options(run, run_args);

  RunArgs demo_args;
  std::uint64_t p = 3;
  std::size_t depth = 3;
  auto* demo = app.add_subcommand("demo", "built-in demonstration scenarios");
  auto* example = demo->add_subcommand("paper-example", "the Z/p^k x| units tower with phi(a,u) = (pa,u)");
  demo->require_subcommand(1);
  example->add_option("--p", p, "odd prime")->check(CLI::PositiveNumber);
  example->add_option("--depth", depth, "tower depth")->check(CLI::PositiveNumber);
  add_run_options(example, demo_args);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      std::ifstream in(file, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      auto base = std::filesystem::path(file).parent_path().string();
      return execute(ss.str(), file, base, run_args);
    }
    if (example->parsed()) return execute(pfg::demo_scenario(p, depth), "paper-example", "", demo_args);
    if (selftest->parsed()) {
      auto results = pfg::acceptance::run_all(std::cout);
      return pfg::acceptance::all_passed(results) ? 0 : 1;
    }
  } catch (const pfg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
