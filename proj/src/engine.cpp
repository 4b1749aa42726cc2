#include "otterbench/engine.h"

#include <stdexcept>
#include <unordered_set>

#include "otterbench/otter.h"

namespace otterbench {

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kHalted: return "halted";
    case RunStatus::kInnerLoopNonTerm: return "inner_loop";
    case RunStatus::kRepeatNonTerm: return "exact_config_repeat";
    case RunStatus::kBlankRunawayNonTerm: return "blank_runaway";
    case RunStatus::kBudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

bool is_nonterminating(RunStatus status) {
  return status == RunStatus::kInnerLoopNonTerm || status == RunStatus::kRepeatNonTerm ||
         status == RunStatus::kBlankRunawayNonTerm;
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kMacro: return "MACRO";
    case StepKind::kAccel: return "ACCEL";
    case StepKind::kOtter: return "OTTER";
    case StepKind::kHalt: return "HALT";
  }
  return "?";
}

namespace {

struct WindowKey {
  std::uint64_t cells;
  std::uint16_t state_offset;
  bool operator==(const WindowKey&) const = default;
};

struct WindowKeyHash {
  std::size_t operator()(const WindowKey& k) const {
    return std::hash<std::uint64_t>()(k.cells * 31 + k.state_offset);
  }
};

// Window simulations shorter than this never touch the visited set; a
// repeat is still caught on a later lap.
constexpr std::uint64_t kLoopCheckAfter = 32;

}  // namespace

MacroRule compute_macro_rule(const Machine& machine, State state, const Block& block, Side entry) {
  MacroRule rule;
  rule.block = block;
  const int k = block.size();
  int offset = entry == Side::kLeft ? 0 : k - 1;
  std::unordered_set<WindowKey, WindowKeyHash> visited;
  std::uint64_t hops = 0;
  while (true) {
    const auto& t = machine.at(state, rule.block[offset]);
    if (!t) {
      rule.kind = MacroRule::Kind::kHaltUndefined;
      rule.head_offset = offset;
      rule.hop_cost = hops;
      return rule;
    }
    rule.block[offset] = t->output;
    ++hops;
    if (t->halts()) {
      rule.kind = MacroRule::Kind::kHalt;
      rule.head_offset = offset;
      rule.hop_cost = hops;
      return rule;
    }
    state = t->next;
    offset += t->dir == Dir::kRight ? 1 : -1;
    if (offset < 0 || offset >= k) {
      rule.kind = MacroRule::Kind::kStep;
      rule.exit = offset < 0 ? Side::kLeft : Side::kRight;
      rule.next = state;
      rule.hop_cost = hops;
      return rule;
    }
    if (hops > kLoopCheckAfter) {
      WindowKey key{rule.block.packed(),
                    static_cast<std::uint16_t>((state << 8) | static_cast<unsigned>(offset))};
      if (!visited.insert(key).second) {
        rule.kind = MacroRule::Kind::kInnerLoop;
        rule.head_offset = offset;
        rule.hop_cost = hops;
        return rule;
      }
    }
  }
}

RuleCache::RuleCache(const Machine& machine, int block_size)
    : machine_(&machine), block_size_(block_size) {
  if (block_size < 1 || block_size > kMaxBlockSize) {
    throw std::invalid_argument("block size out of range: " + std::to_string(block_size));
  }
}

const MacroRule& RuleCache::get(State state, const Block& block, Side entry) {
  const std::uint64_t key = (block.packed() << 8) |
                            (static_cast<std::uint64_t>(state) << 1) |
                            static_cast<std::uint64_t>(entry);
  auto it = rules_.find(key);
  if (it != rules_.end()) return it->second;
  return rules_.emplace(key, compute_macro_rule(*machine_, state, block, entry)).first->second;
}

StepOutcome macro_step(MacroConfig& config, RuleCache& cache) {
  if (config.terminal) throw std::logic_error("macro_step on a halted configuration");
  StepOutcome out;
  const Side facing = config.facing;
  SegmentStack& ahead = config.side(facing);
  const Block block = ahead.decouple(config.block_size);
  const MacroRule& rule = cache.get(config.state, block, entry_edge(facing));
  switch (rule.kind) {
    case MacroRule::Kind::kStep:
      if (rule.exit == Side::kRight) {
        config.left.push(rule.block);
        config.facing = Side::kRight;
      } else {
        config.right.push(rule.block);
        config.facing = Side::kLeft;
      }
      config.state = rule.next;
      out.kind = StepKind::kMacro;
      break;
    case MacroRule::Kind::kHalt:
    case MacroRule::Kind::kHaltUndefined:
      ahead.push(rule.block);
      config.terminal = true;
      config.state = kHalt;
      out.kind = StepKind::kHalt;
      out.halted_via_undefined = rule.kind == MacroRule::Kind::kHaltUndefined;
      break;
    case MacroRule::Kind::kInnerLoop:
      ahead.push(block);
      out.inner_loop = true;
      break;
  }
  out.hops_delta = BigInt(static_cast<unsigned long>(rule.hop_cost));
  return out;
}

bool can_accelerate(const MacroConfig& config, const MacroRule& rule) {
  return rule.kind == MacroRule::Kind::kStep && rule.next == config.state &&
         rule.exit == config.facing && !config.side(config.facing).empty();
}

BigInt block_run_accelerate(MacroConfig& config, const MacroRule& rule) {
  if (!can_accelerate(config, rule)) throw std::logic_error("acceleration precondition not met");
  Segment seg = config.side(config.facing).pop();
  BigInt hops = seg.exponent * static_cast<unsigned long>(rule.hop_cost);
  config.side(other(config.facing)).push(rule.block, seg.exponent);
  return hops;
}

// Accelerated run when possible, single macro step otherwise.
StepOutcome plain_step(MacroConfig& config, RuleCache& cache) {
  const SegmentStack& ahead = config.side(config.facing);
  if (!ahead.empty()) {
    const MacroRule& rule = cache.get(config.state, ahead.top().block, entry_edge(config.facing));
    if (can_accelerate(config, rule)) {
      StepOutcome out;
      out.kind = StepKind::kAccel;
      out.hops_delta = block_run_accelerate(config, rule);
      return out;
    }
  }
  return macro_step(config, cache);
}

RunResult naive_run(const Machine& machine, const BigInt& max_hops) {
  RunResult result;
  result.params.block_size = 1;
  const std::uint64_t budget = saturating_u64(max_hops);
  std::vector<Symbol> tape(64, 0);
  std::size_t head = 32;
  State state = 0;
  std::uint64_t hops = 0;
  bool halted = false;
  while (hops < budget) {
    const auto& t = machine.at(state, tape[head]);
    if (!t) {
      halted = true;
      result.halted_via_undefined = true;
      break;
    }
    tape[head] = t->output;
    ++hops;
    if (t->halts()) {
      halted = true;
      break;
    }
    state = t->next;
    if (t->dir == Dir::kRight) {
      if (++head == tape.size()) tape.resize(tape.size() * 2, 0);
    } else {
      if (head == 0) {
        const std::size_t grow = tape.size();
        tape.insert(tape.begin(), grow, 0);
        head = grow;
      }
      --head;
    }
  }
  if (!halted) {
    // A halt exactly at the budget still counts as halted.
    if (const auto& t = machine.at(state, tape[head]); !t) {
      halted = true;
      result.halted_via_undefined = true;
    }
  }
  std::uint64_t ones = 0;
  for (Symbol s : tape) ones += s != 0;
  result.ones = from_u64(ones);
  result.hops = from_u64(hops);
  result.steps = hops;
  result.final_config = compress(tape, head, 1, halted ? kHalt : state, Side::kRight);
  result.final_config.terminal = halted;
  result.status = halted ? RunStatus::kHalted : RunStatus::kBudgetExceeded;
  return result;
}

namespace {

RunResult run_fixed(const Machine& machine, const EngineParams& params, RunObserver* observer,
                    const TraceSink& trace, std::uint64_t clear_every) {
  RunResult result;
  result.params = params;
  RuleCache cache(machine, params.block_size);
  MacroConfig config = MacroConfig::blank(params.block_size);
  HistoryBuffer history(static_cast<std::size_t>(std::max(params.window, 1)));
  BigInt hops = 0;
  std::uint64_t steps = 0;

  auto finish = [&](RunStatus status) {
    result.status = status;
    result.hops = hops;
    result.steps = steps;
    result.ones = ones_count(config);
    result.final_config = std::move(config);
    return result;
  };

  while (true) {
    if (steps >= params.max_steps) return finish(RunStatus::kBudgetExceeded);
    if (clear_every != 0 && steps % clear_every == 0) cache.clear();

    StepOutcome step;
    bool jumped = false;
    if (params.otter) {
      ShapedConfig shaped = shape_of(config);
      MatchScan scan = find_match(history, hops, shaped);
      result.multi_regressor_skips += scan.multi_regressor_skips;
      if (scan.match && scan.match->m >= 1) {
        const OtterMatch& match = *scan.match;
        bool verified = false;
        bool accept = true;
        if (params.verify) {
          verified = verify_jump(cache, config, match, params.verify_budget);
          accept = verified;
          if (!verified) ++result.failed_verifications;
        }
        if (params.collect_otter_log) {
          OtterLogEntry log{match.h3, match.h2, match.h1, match.regressor_index,
                            match.a,  match.m,  match.predicted_hop, render_shape(shaped.shape),
                            verified, result.multi_regressor_skips};
          result.otter_log.push_back(std::move(log));
        }
        if (accept) {
          history.record(hops, std::move(shaped));
          config = apply_jump(config, match);
          step.kind = StepKind::kOtter;
          step.hops_delta = match.predicted_hop - hops;
          result.otter_hops += step.hops_delta;
          ++result.otters;
          jumped = true;
        }
      }
      if (!jumped) history.record(hops, std::move(shaped));
    }
    if (!jumped) step = plain_step(config, cache);

    ++steps;
    if (step.inner_loop) {
      result.witness = render(config);
      return finish(RunStatus::kInnerLoopNonTerm);
    }
    hops += step.hops_delta;
    if (trace) trace(hops, step.kind, config);
    if (params.max_hops && hops > *params.max_hops) return finish(RunStatus::kBudgetExceeded);
    if (config.terminal) {
      result.halted_via_undefined = step.halted_via_undefined;
      return finish(RunStatus::kHalted);
    }
    if (observer) {
      if (auto stop = observer->observe(config, hops, steps, step.kind)) {
        result.witness = observer->witness();
        return finish(*stop);
      }
    }
  }
}

}  // namespace

RunResult run(const Machine& machine, const EngineParams& params, RunObserver* observer,
              const TraceSink& trace) {
  if (params.otter && params.window < 3) throw std::invalid_argument("otter window must be >= 3");
  if (params.block_size != 0) return run_fixed(machine, params, observer, trace, 0);

  // Automatic k: round-robin over k = 1..6 with doubling step budgets; the first
  // run that finishes wins, otherwise the k with the best hops per step.
  int best_k = 1;
  double best_ratio = -1.0;
  for (std::uint64_t budget = 1000; budget < params.max_steps; budget *= 2) {
    for (int k = 1; k <= 6; ++k) {
      EngineParams trial = params;
      trial.block_size = k;
      trial.max_steps = budget;
      if (observer) observer->reset();
      RunResult r = run_fixed(machine, trial, observer, {}, 0);
      if (r.status != RunStatus::kBudgetExceeded ||
          (params.max_hops && r.hops > *params.max_hops)) {
        r.params.max_steps = params.max_steps;
        return r;
      }
      const double ratio = r.hops.get_d() / static_cast<double>(std::max<std::uint64_t>(r.steps, 1));
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_k = k;
      }
    }
  }
  EngineParams final_params = params;
  final_params.block_size = best_k;
  if (observer) observer->reset();
  return run_fixed(machine, final_params, observer, trace, 0);
}

RunResult run_with_cache_clearing(const Machine& machine, const EngineParams& params,
                                  std::uint64_t clear_every) {
  return run_fixed(machine, params, nullptr, {}, clear_every);
}

}  // namespace otterbench
