#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "otterbench/cli.h"

using namespace otterbench::cli;

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("OTTERBENCH_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Busy beaver machine runner, enumerator and classifier"};
  app.require_subcommand(1);
  app.set_version_flag("--version", OTTERBENCH_VERSION);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run one machine on the blank tape");
  run_cmd->add_option("machine", run.machine, "Machine-line or file holding one")->required();
  run_cmd->add_option("--engine", run.engine, "naive or macro")
      ->check(CLI::IsMember({"naive", "macro"}));
  run_cmd->add_flag("--otter", run.otter, "Enable observant-otter jumps");
  run_cmd->add_flag("--verify-otter", run.verify, "Check each jump against the next occurrence");
  run_cmd->add_option("--k", run.k, "Block size or auto");
  run_cmd->add_option("--window", run.window, "Otter history window");
  run_cmd->add_option("--max-steps", run.max_steps, "Engine step budget");
  run_cmd->add_option("--max-hops", run.max_hops, "Hop budget (decimal)");
  run_cmd->add_flag("--trace", run.trace, "Print every configuration to stderr");

  EnumerateOptions en;
  auto* en_cmd = app.add_subcommand("enumerate", "Generate a machine list");
  en_cmd->add_option("--states", en.states)->required();
  en_cmd->add_option("--symbols", en.symbols)->required();
  en_cmd->add_option("--mode", en.mode, "all, free or tnf");
  en_cmd->add_option("--out", en.out, "Machine list file (default stdout)");
  en_cmd->add_option("--exclusions", en.exclusions, "Exclusion records (JSONL)");
  en_cmd->add_option("--max-hops", en.max_hops, "Per-branch hop budget");
  en_cmd->add_option("--max-cells", en.max_cells, "Per-branch tape budget");

  ClassifyCliOptions cl;
  cl.parallel = default_threads();
  auto* cl_cmd = app.add_subcommand("classify", "Classify a machine list into evidence JSONL");
  cl_cmd->add_option("--in", cl.in, "Machine list")->required();
  cl_cmd->add_option("--out", cl.out, "Evidence file (default stdout)");
  cl_cmd->add_option("--max-steps", cl.max_steps);
  cl_cmd->add_option("--max-hops", cl.max_hops);
  cl_cmd->add_flag("--otter", cl.otter);
  cl_cmd->add_flag("--verify-otter", cl.verify);
  cl_cmd->add_option("--k", cl.k, "Block size or auto");
  cl_cmd->add_option("--window", cl.window);
  cl_cmd->add_option("--parallel", cl.parallel, "Worker threads (env OTTERBENCH_THREADS)");
  cl_cmd->add_flag("--resume", cl.resume, "Append after the last record already in --out");

  BenchOptions be;
  auto* be_cmd = app.add_subcommand("bench", "Run corpus entries with and without the otter");
  be_cmd->add_option("--corpus", be.corpus)->required();
  be_cmd->add_option("--out", be.out, "TSV report (default stdout)");
  be_cmd->add_option("--ids", be.ids, "Only these entry ids");
  be_cmd->add_option("--max-steps", be.max_steps);
  be_cmd->add_option("--baseline-steps", be.baseline_steps, "Step cap for the otter-off leg");
  be_cmd->add_option("--window", be.window);

  AggregateOptions ag;
  auto* ag_cmd = app.add_subcommand("aggregate", "Summarise evidence files");
  ag_cmd->add_option("--evidence", ag.evidence)->required();
  ag_cmd->add_flag("--pp", ag.pp, "Print the pp(k,m) table");
  ag_cmd->add_option("--pp-max", ag.pp_max, "Largest k in the pp table");
  ag_cmd->add_option("--out", ag.out, "ResultsDB JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*en_cmd) return cmd_enumerate(en, std::cout, std::cerr);
  if (*cl_cmd) return cmd_classify(cl, std::cout, std::cerr);
  if (*be_cmd) return cmd_bench(be, std::cout, std::cerr);
  if (*ag_cmd) return cmd_aggregate(ag, std::cout, std::cerr);
  return kExitError;
}
