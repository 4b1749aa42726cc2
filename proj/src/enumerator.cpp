#include "otterbench/enumerator.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

#ifndef OTTERBENCH_VERSION
#define OTTERBENCH_VERSION "dev"
#endif

namespace otterbench {

const char* to_string(GenerationMode mode) {
  switch (mode) {
    case GenerationMode::kAll: return "all";
    case GenerationMode::kFree: return "free";
    case GenerationMode::kTnf: return "tnf";
  }
  return "?";
}

GenerationMode parse_generation_mode(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "all") return GenerationMode::kAll;
  if (lower == "free") return GenerationMode::kFree;
  if (lower == "tnf") return GenerationMode::kTnf;
  throw std::invalid_argument("unknown generation mode: " + std::string(text));
}

int max_dimension(GenerationMode mode) { return mode == GenerationMode::kTnf ? 10 : 6; }

const char* to_string(ExclusionRule rule) {
  switch (rule) {
    case ExclusionRule::kFirstTransitionFixed: return "FirstTransitionFixed";
    case ExclusionRule::kSecondTransitionSet: return "SecondTransitionSet";
    case ExclusionRule::kSelfLoopOnBlank: return "SelfLoopOnBlank";
    case ExclusionRule::kRightRunaway: return "RightRunaway";
    case ExclusionRule::kInnerLoopFamily: return "InnerLoopFamily";
    case ExclusionRule::kBudgetHoldoutFamily: return "BudgetHoldoutFamily";
  }
  return "?";
}

std::string to_json_line(const ExclusionRecord& record) {
  nlohmann::ordered_json j;
  j["partial"] = record.partial;
  j["rule"] = to_string(record.rule);
  j["subtree_note"] = record.subtree_note;
  return j.dump();
}

void validate(const EnumerationOptions& o) {
  if (o.states < 1 || o.states > kMaxStates) throw std::invalid_argument("states out of range");
  if (o.symbols < 2 || o.symbols > kMaxSymbols) throw std::invalid_argument("symbols out of range");
  const int dim = o.states * o.symbols;
  if (!o.allow_oversize && dim > max_dimension(o.mode)) {
    throw std::invalid_argument(std::string("dimension ") + std::to_string(dim) + " exceeds " +
                                std::to_string(max_dimension(o.mode)) + " for mode " +
                                to_string(o.mode));
  }
  if (o.max_hops == 0 || o.max_cells < 2) throw std::invalid_argument("enumeration budgets too small");
}

namespace {

std::string describe(const Transition& t) {
  std::string s;
  s += static_cast<char>('0' + t.output);
  s += t.dir == Dir::kLeft ? 'L' : 'R';
  s += t.halts() ? 'Z' : state_letter(t.next);
  return s;
}

std::string slot_name(State s, Symbol sym) {
  return std::string("(") + static_cast<char>(std::tolower(state_letter(s))) + "," +
         static_cast<char>('0' + sym) + ")";
}

constexpr Transition kHaltOne{1, Dir::kRight, kHalt};

// Highest state index referenced (start state counts) and highest symbol printed.
void used_extent(const Machine& m, int& top_state, int& top_symbol) {
  top_state = 0;
  top_symbol = 0;
  for (int s = 0; s < m.states(); ++s) {
    for (int y = 0; y < m.symbols(); ++y) {
      const auto& t = m.at(static_cast<State>(s), static_cast<Symbol>(y));
      if (!t) continue;
      if (!t->halts()) top_state = std::max(top_state, static_cast<int>(t->next));
      top_symbol = std::max(top_symbol, static_cast<int>(t->output));
    }
  }
}

// Exception used by sinks to unwind the search.
struct Abort {};

class Emitter {
 public:
  Emitter(const EnumerationOptions& o, EnumerationSink& sink, EnumerationSummary& summary)
      : options_(o), sink_(sink), summary_(summary) {}

  void machine(const Machine& m) {
    const std::uint64_t index = next_index_++;
    if (index < options_.resume_from) return;
    if (!sink_.machine(index, m)) {
      summary_.cursor = index;
      throw Abort{};
    }
    ++summary_.emitted;
    summary_.cursor = index + 1;
  }

  void exclusion(ExclusionRecord r) {
    ++summary_.exclusions[r.rule];
    // Exclusions are replayed only for the part of the tree being emitted.
    if (next_index_ < options_.resume_from) return;
    if (!sink_.exclusion(r)) {
      summary_.cursor = next_index_;
      throw Abort{};
    }
  }

  std::uint64_t total() const { return next_index_; }

 private:
  const EnumerationOptions& options_;
  EnumerationSink& sink_;
  EnumerationSummary& summary_;
  std::uint64_t next_index_ = 0;
};

// ---------------------------------------------------------------- TNF search

struct Sim {
  std::vector<Symbol> tape;
  std::size_t head = 0;
  std::size_t lo = 0, hi = 0;  // visited span, inclusive
  State state = 0;
  std::uint64_t hops = 0;
  // outward streak over fresh cells
  int streak_dir = 0;
  std::uint32_t streak_states = 0;
  // saved configuration for the power-of-two repeat check
  std::uint64_t saved_at = 0;
  State saved_state = 0;
  std::size_t saved_head = 0, saved_lo = 0, saved_hi = 0;
  std::vector<Symbol> saved_cells;
};

// Re-simulates a partial machine from blank looking for a translated cycle:
// the head reaches a fresh cell in state s after an earlier fresh-cell visit in
// s, and every cell touched in between matches the earlier window shifted.
// Returns the hop of the repeat, or 0.
std::uint64_t find_translated_cycle(const Machine& m, std::uint64_t max_hops,
                                    std::uint64_t max_cells) {
  struct Edge {
    bool valid = false;
    std::size_t pos = 0, reach = 0, lo = 0, hi = 0;
    std::vector<Symbol> cells;
  };
  const std::size_t size = 2 * max_cells + 3;
  std::vector<Symbol> tape(size, 0);
  std::size_t head = max_cells + 1, lo = head, hi = head;
  State state = 0;
  std::vector<Edge> edges(2 * static_cast<std::size_t>(m.states()));
  for (std::uint64_t hops = 1; hops <= max_hops; ++hops) {
    const auto& t = m.at(state, tape[head]);
    if (!t || t->halts()) return 0;
    tape[head] = t->output;
    state = t->next;
    const bool right = t->dir == Dir::kRight;
    head += right ? 1 : -1;
    if (head == 0 || head + 1 >= size) return 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      Edge& e = edges[i];
      if (!e.valid) continue;
      e.reach = (i % 2 == 1) ? std::min(e.reach, head) : std::max(e.reach, head);
    }
    const bool fresh = right ? head > hi : head < lo;
    if (!fresh) continue;
    (right ? hi : lo) = head;
    if (hi - lo + 1 > max_cells) return 0;
    Edge& e = edges[2 * static_cast<std::size_t>(state) + (right ? 1 : 0)];
    if (e.valid) {
      const std::ptrdiff_t shift =
          static_cast<std::ptrdiff_t>(head) - static_cast<std::ptrdiff_t>(e.pos);
      const std::size_t from = right ? e.reach : e.pos, to = right ? e.pos : e.reach;
      bool same = true;
      for (std::size_t p = from; p <= to && same; ++p) {
        const Symbol old = (p >= e.lo && p <= e.hi) ? e.cells[p - e.lo] : 0;
        same = old == tape[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + shift)];
      }
      if (same) return hops;
    }
    e.valid = true;
    e.pos = e.reach = head;
    e.lo = lo;
    e.hi = hi;
    e.cells.assign(tape.begin() + static_cast<std::ptrdiff_t>(lo),
                   tape.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  }
  return 0;
}

class TnfSearch {
 public:
  TnfSearch(const EnumerationOptions& o, Emitter& out) : o_(o), out_(out) {}

  void start() {
    Machine m(o_.states, o_.symbols);
    if (o_.states == 1) {
      // A single state cannot leave the start state; only the immediate halt is productive.
      m.set(0, 0, kHaltOne);
      out_.exclusion({format_machine(m), ExclusionRule::kFirstTransitionFixed,
                      "(a,0) fixed to 1RZ: any other first move stays in a on blank cells"});
      out_.machine(m);
      return;
    }
    m.set(0, 0, Transition{1, Dir::kRight, 1});
    out_.exclusion({format_machine(m), ExclusionRule::kFirstTransitionFixed,
                    "(a,0) fixed to 1RB: other first moves are renamings, mirror images, "
                    "blank self-loops or immediate halts"});
    Sim sim;
    sim.tape.assign(2 * o_.max_cells + 3, 0);
    sim.head = sim.lo = sim.hi = o_.max_cells + 1;
    sim.tape[sim.head] = 1;
    ++sim.head;
    sim.hi = sim.head;
    sim.state = 1;
    sim.hops = 1;
    sim.streak_dir = 1;
    sim.streak_states = 1u << 1;
    explore(m, sim);
  }

 private:
  void budget_exhausted(const Machine& m, const std::string& note) {
    if (const std::uint64_t hop = find_translated_cycle(m, o_.max_hops, o_.max_cells)) {
      out_.exclusion({format_machine(m), ExclusionRule::kInnerLoopFamily,
                      "translated cycle: fresh-cell visit at hop " + std::to_string(hop) +
                          " repeats an earlier one shifted"});
      return;
    }
    out_.exclusion({format_machine(m), ExclusionRule::kBudgetHoldoutFamily, note});
  }

  // Runs until an undefined slot is read; returns false when the branch ends
  // in a loop or exhausts its budget (the record has been written).
  bool advance(const Machine& m, Sim& sim) {
    while (true) {
      const Symbol read = sim.tape[sim.head];
      const auto& t = m.at(sim.state, read);
      if (!t) return true;
      if (sim.hops >= o_.max_hops) {
        budget_exhausted(m, "no new slot within " + std::to_string(o_.max_hops) + " hops");
        return false;
      }
      sim.tape[sim.head] = t->output;
      sim.state = t->next;
      ++sim.hops;
      const int dir = t->dir == Dir::kRight ? 1 : -1;
      sim.head += dir;
      bool fresh = false;
      if (sim.head > sim.hi) {
        sim.hi = sim.head;
        fresh = true;
      } else if (sim.head < sim.lo) {
        sim.lo = sim.head;
        fresh = true;
      }
      if (sim.hi - sim.lo + 1 > o_.max_cells || sim.head == 0 || sim.head + 1 >= sim.tape.size()) {
        budget_exhausted(m, "tape span exceeds " + std::to_string(o_.max_cells) + " cells");
        return false;
      }
      if (fresh) {
        const std::uint32_t bit = 1u << sim.state;
        if (sim.streak_dir == dir && (sim.streak_states & bit)) {
          out_.exclusion({format_machine(m), ExclusionRule::kInnerLoopFamily,
                          std::string("state ") + state_letter(sim.state) +
                              " repeats while sweeping blank cells " +
                              (dir > 0 ? "right" : "left") + " at hop " +
                              std::to_string(sim.hops)});
          return false;
        }
        if (sim.streak_dir != dir) {
          sim.streak_dir = dir;
          sim.streak_states = 0;
        }
        sim.streak_states |= bit;
      } else {
        sim.streak_dir = 0;
        sim.streak_states = 0;
      }
      if (repeats(sim)) {
        out_.exclusion({format_machine(m), ExclusionRule::kInnerLoopFamily,
                        "configuration at hop " + std::to_string(sim.hops) + " repeats hop " +
                            std::to_string(sim.saved_at)});
        return false;
      }
    }
  }

  // Brent-style cycle check against the configuration saved at the last power of two.
  static bool repeats(Sim& sim) {
    if (sim.saved_at != 0 && sim.state == sim.saved_state && sim.head == sim.saved_head &&
        sim.lo == sim.saved_lo && sim.hi == sim.saved_hi &&
        std::equal(sim.saved_cells.begin(), sim.saved_cells.end(), sim.tape.begin() + sim.lo)) {
      return true;
    }
    if ((sim.hops & (sim.hops - 1)) == 0) {
      sim.saved_at = sim.hops;
      sim.saved_state = sim.state;
      sim.saved_head = sim.head;
      sim.saved_lo = sim.lo;
      sim.saved_hi = sim.hi;
      sim.saved_cells.assign(sim.tape.begin() + sim.lo, sim.tape.begin() + sim.hi + 1);
    }
    return false;
  }

  void explore(const Machine& m, Sim sim) {
    if (!advance(m, sim)) return;
    const State s = sim.state;
    const Symbol y = sim.tape[sim.head];
    if (m.undefined_count() == 1) {
      // Last free slot: anything but a halt leaves a machine that cannot halt.
      Machine done = m;
      done.set(s, y, kHaltOne);
      out_.machine(done);
      return;
    }
    std::vector<std::pair<Transition, ExclusionRule>> excluded;
    const std::vector<Transition> candidates = choice_set(m, s, y, &excluded);
    note_exclusions(m, s, y, excluded);
    for (const Transition& c : candidates) {
      Machine next = m;
      next.set(s, y, c);
      if (c.halts()) {
        out_.machine(next);
      } else {
        explore(next, sim);
      }
    }
  }

  void note_exclusions(const Machine& m, State s, Symbol y,
                       const std::vector<std::pair<Transition, ExclusionRule>>& excluded) {
    std::map<ExclusionRule, std::string> by_rule;
    for (const auto& [t, rule] : excluded) {
      std::string& list = by_rule[rule];
      if (!list.empty()) list += ' ';
      list += describe(t);
    }
    for (const auto& [rule, list] : by_rule) {
      out_.exclusion({format_machine(m), rule, slot_name(s, y) + " excludes " + list});
    }
  }

  const EnumerationOptions& o_;
  Emitter& out_;
};

// --------------------------------------------------------------- ALL / FREE

std::vector<Transition> all_options(int states, int symbols) {
  std::vector<Transition> out;
  for (int y = 0; y < symbols; ++y) {
    for (Dir d : {Dir::kLeft, Dir::kRight}) {
      for (int s = 0; s < states; ++s) out.push_back({static_cast<Symbol>(y), d, static_cast<State>(s)});
      out.push_back({static_cast<Symbol>(y), d, kHalt});
    }
  }
  return out;
}

bool free_second_ok(const Transition& t) {
  if (t.halts()) return false;
  if (t.next >= 2) return true;
  return t.dir == Dir::kLeft;
}

void enumerate_syntactic(const EnumerationOptions& o, Emitter& out) {
  const int n = o.states, m = o.symbols, dim = n * m;
  const std::vector<Transition> options = all_options(n, m);
  std::vector<std::vector<Transition>> per_slot(dim, options);
  if (o.mode == GenerationMode::kFree) {
    if (n == 1) {
      per_slot[0] = {kHaltOne};
      out.exclusion({"1RZ", ExclusionRule::kFirstTransitionFixed,
                     "(a,0) fixed to 1RZ: any other first move stays in a on blank cells"});
    } else {
      per_slot[0] = {Transition{1, Dir::kRight, 1}};
      out.exclusion({"1RB", ExclusionRule::kFirstTransitionFixed,
                     "(a,0) fixed to 1RB: other first moves are renamings, mirror images, "
                     "blank self-loops or immediate halts"});
      auto& second = per_slot[static_cast<std::size_t>(m)];
      std::vector<Transition> kept;
      std::uint64_t dropped = 0;
      for (const Transition& t : second) {
        if (free_second_ok(t)) {
          kept.push_back(t);
        } else {
          ++dropped;
        }
      }
      second = kept;
      out.exclusion({"1RB", ExclusionRule::kSecondTransitionSet,
                     "(b,0) limited to L to a/b or any move to c; " + std::to_string(dropped) +
                         " options per table dropped"});
    }
  }
  std::vector<std::size_t> idx(dim, 0);
  Machine machine(n, m);
  while (true) {
    int halts = 0;
    for (int i = 0; i < dim; ++i) halts += per_slot[i][idx[i]].halts();
    if (halts > 0) {
      for (int i = 0; i < dim; ++i) {
        machine.set(static_cast<State>(i / m), static_cast<Symbol>(i % m), per_slot[i][idx[i]]);
      }
      out.machine(machine);
    }
    // odometer, last slot fastest
    int i = dim - 1;
    while (i >= 0 && ++idx[i] == per_slot[i].size()) idx[i--] = 0;
    if (i < 0) break;
  }
}

}  // namespace

std::vector<Transition> choice_set(const Machine& partial, State state, Symbol symbol,
                                   std::vector<std::pair<Transition, ExclusionRule>>* excluded) {
  if (partial.at(state, symbol)) throw std::invalid_argument("choice_set on a defined slot");
  const int n = partial.states(), m = partial.symbols();
  std::vector<Transition> out;
  auto drop = [&](const Transition& t, ExclusionRule rule) {
    if (excluded) excluded->emplace_back(t, rule);
  };
  bool empty = true;
  for (int s = 0; s < n && empty; ++s) {
    for (int y = 0; y < m; ++y) {
      if (partial.at(static_cast<State>(s), static_cast<Symbol>(y))) {
        empty = false;
        break;
      }
    }
  }
  if (state == 0 && symbol == 0 && empty) {
    out.push_back(n == 1 ? kHaltOne : Transition{1, Dir::kRight, 1});
    return out;
  }
  int top_state = 0, top_symbol = 0;
  used_extent(partial, top_state, top_symbol);
  const int out_cap = std::min(top_symbol + 1, m - 1);
  const int next_cap = std::min(top_state + 1, n - 1);
  const bool second_slot = state == 1 && symbol == 0;
  for (int y = 0; y <= out_cap; ++y) {
    for (Dir d : {Dir::kLeft, Dir::kRight}) {
      for (int s = 0; s <= next_cap; ++s) {
        const Transition t{static_cast<Symbol>(y), d, static_cast<State>(s)};
        if (symbol == 0 && state == 0 && s == 0) {
          drop(t, ExclusionRule::kSelfLoopOnBlank);
          continue;
        }
        if (second_slot && d == Dir::kRight && s <= 1) {
          drop(t, ExclusionRule::kRightRunaway);
          continue;
        }
        out.push_back(t);
      }
    }
  }
  // The halt prints a 1, which may itself complete the symbol set.
  const bool all_present = top_state == n - 1 && std::max(top_symbol, 1) == m - 1;
  if (all_present) {
    if (second_slot) {
      drop(kHaltOne, ExclusionRule::kSecondTransitionSet);
    } else {
      out.push_back(kHaltOne);
    }
  }
  return out;
}

EnumerationSummary enumerate(const EnumerationOptions& options, EnumerationSink& sink) {
  validate(options);
  EnumerationSummary summary;
  summary.cursor = options.resume_from;
  Emitter out(options, sink, summary);
  try {
    if (options.mode == GenerationMode::kTnf) {
      TnfSearch search(options, out);
      search.start();
    } else {
      enumerate_syntactic(options, out);
    }
  } catch (const Abort&) {
    return summary;
  }
  summary.completed = true;
  summary.total = out.total();
  summary.cursor = out.total();
  return summary;
}

namespace {

class VectorSink : public EnumerationSink {
 public:
  explicit VectorSink(CollectedEnumeration& c) : c_(c) {}
  bool machine(std::uint64_t, const Machine& m) override {
    c_.machines.push_back(m);
    return true;
  }
  bool exclusion(const ExclusionRecord& r) override {
    c_.exclusions.push_back(r);
    return true;
  }

 private:
  CollectedEnumeration& c_;
};

}  // namespace

CollectedEnumeration enumerate_to_vector(const EnumerationOptions& options) {
  CollectedEnumeration c;
  VectorSink sink(c);
  c.summary = enumerate(options, sink);
  return c;
}

std::string canonical_form(const Machine& machine) {
  const int n = machine.states(), m = machine.symbols();
  std::vector<int> sp(n), yp(m);
  std::iota(sp.begin(), sp.end(), 0);
  std::string best;
  bool first = true;
  Machine renamed(n, m);
  do {
    std::iota(yp.begin(), yp.end(), 0);
    do {
      for (int s = 0; s < n; ++s) {
        for (int y = 0; y < m; ++y) {
          auto t = machine.at(static_cast<State>(s), static_cast<Symbol>(y));
          if (t) {
            t->output = static_cast<Symbol>(yp[t->output]);
            if (!t->halts()) t->next = static_cast<State>(sp[t->next]);
          }
          renamed.set(static_cast<State>(sp[s]), static_cast<Symbol>(yp[y]), t);
        }
      }
      std::string text = format_machine(renamed);
      if (first || text < best) {
        best = std::move(text);
        first = false;
      }
    } while (m > 2 && std::next_permutation(yp.begin() + 1, yp.end()));
  } while (n > 2 && std::next_permutation(sp.begin() + 1, sp.end()));
  return best;
}

DuplicateReport dedupe_check(const std::vector<Machine>& machines) {
  DuplicateReport report;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < machines.size(); ++i) {
    auto [it, inserted] = seen.emplace(canonical_form(machines[i]), i);
    if (!inserted) {
      ++report.duplicates;
      report.pairs.emplace_back(it->second, i);
    }
  }
  return report;
}

std::string format_list_header(const EnumerationOptions& o) {
  std::ostringstream s;
  s << "# otterbench machine list n=" << o.states << " m=" << o.symbols
    << " mode=" << to_string(o.mode) << " max_hops=" << o.max_hops << " max_cells=" << o.max_cells
    << " version=" << OTTERBENCH_VERSION;
  return s.str();
}

std::vector<Machine> read_machine_list(std::istream& in, MachineListHeader* header) {
  std::vector<Machine> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    if (line[begin] == '#') {
      if (header) {
        std::istringstream fields(line.substr(begin + 1));
        std::string field;
        while (fields >> field) {
          const auto eq = field.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
          if (key == "n") header->states = std::stoi(value);
          else if (key == "m") header->symbols = std::stoi(value);
          else if (key == "mode") header->mode = value;
          else if (key == "max_hops") header->max_hops = std::stoull(value);
          else if (key == "max_cells") header->max_cells = std::stoull(value);
          else if (key == "version") header->version = value;
        }
      }
      continue;
    }
    try {
      out.push_back(parse_machine(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Machine> read_machine_list_file(const std::string& path, MachineListHeader* header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open machine list: " + path);
  return read_machine_list(in, header);
}

bool StreamSink::machine(std::uint64_t, const Machine& machine) {
  list_ << format_machine(machine) << '\n';
  return static_cast<bool>(list_);
}

bool StreamSink::exclusion(const ExclusionRecord& record) {
  if (!exclusions_) return true;
  *exclusions_ << to_json_line(record) << '\n';
  return static_cast<bool>(*exclusions_);
}

}  // namespace otterbench
