#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "otterbench/bigint.h"
#include "otterbench/machine.h"
#include "otterbench/rle_tape.h"

namespace otterbench {

enum class RunStatus {
  kHalted,
  kInnerLoopNonTerm,
  kRepeatNonTerm,
  kBlankRunawayNonTerm,
  kBudgetExceeded,
};

const char* to_string(RunStatus status);
bool is_nonterminating(RunStatus status);

// Outcome of simulating one block inside its k-cell window.
struct MacroRule {
  enum class Kind : std::uint8_t { kStep, kHalt, kHaltUndefined, kInnerLoop };

  Kind kind = Kind::kStep;
  Block block;             // rewritten window contents
  Side exit = Side::kRight;  // Step only: edge the head leaves through
  State next = 0;          // Step only
  int head_offset = 0;     // Halt only: cell the head was on when halting
  std::uint64_t hop_cost = 0;
};

// Simulates `block` in state `state` with the head entering through the
// `entry` edge (kLeft: head starts on cell 0).
MacroRule compute_macro_rule(const Machine& machine, State state, const Block& block, Side entry);

// Lazily filled cache of macro rules for one machine and block size.
class RuleCache {
 public:
  RuleCache(const Machine& machine, int block_size);

  const MacroRule& get(State state, const Block& block, Side entry);
  void clear() { rules_.clear(); }
  std::size_t size() const { return rules_.size(); }
  int block_size() const { return block_size_; }
  const Machine& machine() const { return *machine_; }

 private:
  const Machine* machine_;
  int block_size_;
  std::unordered_map<std::uint64_t, MacroRule> rules_;
};

enum class StepKind : std::uint8_t { kMacro, kAccel, kOtter, kHalt };

const char* to_string(StepKind kind);

struct StepOutcome {
  StepKind kind = StepKind::kMacro;
  BigInt hops_delta;
  bool inner_loop = false;
  bool halted_via_undefined = false;
};

// Entry edge of the block the head is facing.
inline Side entry_edge(Side facing) { return other(facing); }

// One macro step: decouple one block from the facing side and apply its rule.
StepOutcome macro_step(MacroConfig& config, RuleCache& cache);

// True when the facing run can be rewritten in one step with `rule`.
bool can_accelerate(const MacroConfig& config, const MacroRule& rule);

// Rewrites the entire facing segment S^e as S'^e on the other side.
BigInt block_run_accelerate(MacroConfig& config, const MacroRule& rule);

// Accelerated run when the precondition holds, single macro step otherwise.
StepOutcome plain_step(MacroConfig& config, RuleCache& cache);

struct EngineParams {
  int block_size = 1;  // 0 selects the automatic k policy
  bool otter = false;
  int window = 150;
  bool verify = false;
  std::uint64_t verify_budget = 100'000;
  std::uint64_t max_steps = 10'000'000;
  std::optional<BigInt> max_hops;  // unlimited when empty
  bool collect_otter_log = false;
};

struct OtterLogEntry {
  BigInt h3, h2, h1;
  std::size_t regressor_index = 0;
  BigInt a;
  BigInt m;
  BigInt predicted_hop;
  std::string shape;
  bool verified = false;
  std::uint64_t multi_regressor_skips = 0;
};

struct RunResult {
  RunStatus status = RunStatus::kBudgetExceeded;
  bool halted_via_undefined = false;
  BigInt ones;
  BigInt hops;
  std::uint64_t steps = 0;
  std::uint64_t otters = 0;
  BigInt otter_hops;
  std::uint64_t multi_regressor_skips = 0;
  std::uint64_t failed_verifications = 0;
  MacroConfig final_config;
  EngineParams params;
  std::string witness;  // non-termination witness rendering
  std::vector<OtterLogEntry> otter_log;
};

// Observer hook called after every engine step with the new configuration.
// Returning a status stops the run with that status.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual std::optional<RunStatus> observe(const MacroConfig& config, const BigInt& hops,
                                           std::uint64_t steps, StepKind kind) = 0;
  virtual std::string witness() const { return {}; }
  // Called before each fresh run when the engine retries with another k.
  virtual void reset() {}
};

using TraceSink = std::function<void(const BigInt& hop, StepKind kind, const MacroConfig&)>;

// Cell-by-cell reference interpreter. Hops count executed transitions,
// including the halting one.
RunResult naive_run(const Machine& machine, const BigInt& max_hops);

// Macro-machine engine with optional otter jumps.
RunResult run(const Machine& machine, const EngineParams& params, RunObserver* observer = nullptr,
              const TraceSink& trace = {});

// Cache-clearing variant for transparency tests: the cache is dropped every
// `clear_every` steps.
RunResult run_with_cache_clearing(const Machine& machine, const EngineParams& params,
                                  std::uint64_t clear_every);

}  // namespace otterbench
