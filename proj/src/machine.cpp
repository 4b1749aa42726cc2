#include "otterbench/machine.h"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace otterbench {

Machine::Machine(int states, int symbols)
    : states_(states), symbols_(symbols),
      table_(static_cast<std::size_t>(states) * symbols) {
  if (states < 1 || states > kMaxStates) {
    throw std::invalid_argument("state count out of range: " + std::to_string(states));
  }
  if (symbols < 2 || symbols > kMaxSymbols) {
    throw std::invalid_argument("symbol count out of range: " + std::to_string(symbols));
  }
}

void Machine::set(State s, Symbol sym, std::optional<Transition> t) {
  if (s < 0 || s >= states_ || sym >= symbols_) {
    throw std::out_of_range("slot out of range");
  }
  if (t) {
    if (t->output >= symbols_) throw std::invalid_argument("output symbol out of range");
    if (t->next != kHalt && (t->next < 0 || t->next >= states_)) {
      throw std::invalid_argument("next state out of range");
    }
  }
  table_[slot(s, sym)] = t;
}

int Machine::halt_count() const {
  return static_cast<int>(std::count_if(table_.begin(), table_.end(),
                                        [](const auto& t) { return t && t->halts(); }));
}

int Machine::undefined_count() const {
  return static_cast<int>(std::count(table_.begin(), table_.end(), std::nullopt));
}

char state_letter(State s) { return s == kHalt ? 'Z' : static_cast<char>('a' + s); }

namespace {

[[noreturn]] void slot_error(int state, int symbol, const std::string& what) {
  throw ParseError("slot (" + std::string(1, static_cast<char>('a' + state)) + "," +
                   std::to_string(symbol) + "): " + what);
}

}  // namespace

Machine parse_machine(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  if (text.empty()) throw ParseError("empty machine line");

  std::vector<std::string_view> groups;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find('_', pos);
    groups.push_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }

  const std::size_t width = groups[0].size();
  if (width == 0 || width % 3 != 0) {
    throw ParseError("group 'a' has length " + std::to_string(width) +
                     ", expected a multiple of 3");
  }
  for (std::size_t g = 1; g < groups.size(); ++g) {
    if (groups[g].size() != width) {
      throw ParseError("group '" + std::string(1, static_cast<char>('a' + g)) +
                       "' has length " + std::to_string(groups[g].size()) + ", expected " +
                       std::to_string(width));
    }
  }
  const int states = static_cast<int>(groups.size());
  int symbols = static_cast<int>(width / 3);
  const bool compact = (states == 1 && symbols == 1);
  if (compact) symbols = 2;
  if (states > kMaxStates) throw ParseError("too many states");
  if (symbols > kMaxSymbols) throw ParseError("too many symbols");

  Machine machine(states, symbols);
  for (int s = 0; s < states; ++s) {
    for (std::size_t sym = 0; sym * 3 < width; ++sym) {
      std::string_view cell = groups[s].substr(sym * 3, 3);
      if (cell == "---") continue;
      const char out = cell[0];
      const char dir = static_cast<char>(std::toupper(static_cast<unsigned char>(cell[1])));
      const char nxt = static_cast<char>(std::tolower(static_cast<unsigned char>(cell[2])));
      if (!std::isdigit(static_cast<unsigned char>(out))) {
        slot_error(s, static_cast<int>(sym), "output '" + std::string(1, out) + "' is not a digit");
      }
      Transition t;
      t.output = static_cast<Symbol>(out - '0');
      if (t.output >= symbols) {
        slot_error(s, static_cast<int>(sym), "output symbol " + std::string(1, out) +
                                                 " >= symbol count " + std::to_string(symbols));
      }
      if (dir == 'L') {
        t.dir = Dir::kLeft;
      } else if (dir == 'R') {
        t.dir = Dir::kRight;
      } else {
        slot_error(s, static_cast<int>(sym), "direction '" + std::string(1, cell[1]) + "'");
      }
      if (nxt == 'z') {
        t.next = kHalt;
      } else if (nxt >= 'a' && nxt - 'a' < states) {
        t.next = static_cast<State>(nxt - 'a');
      } else {
        slot_error(s, static_cast<int>(sym),
                   "next state '" + std::string(1, cell[2]) + "' not in a.." +
                       std::string(1, static_cast<char>('a' + states - 1)) + " or Z");
      }
      machine.set(static_cast<State>(s), static_cast<Symbol>(sym), t);
    }
  }
  return machine;
}

std::string format_machine(const Machine& machine) {
  auto cell = [](const std::optional<Transition>& t) -> std::string {
    if (!t) return "---";
    std::string out(3, ' ');
    out[0] = static_cast<char>('0' + t->output);
    out[1] = t->dir == Dir::kLeft ? 'L' : 'R';
    out[2] = t->halts() ? 'Z' : static_cast<char>('A' + t->next);
    return out;
  };
  if (machine.states() == 1 && machine.symbols() == 2 && !machine.at(0, 1)) {
    return cell(machine.at(0, 0));
  }
  std::string out;
  out.reserve(static_cast<std::size_t>(machine.dimension()) * 3 + machine.states());
  for (State s = 0; s < machine.states(); ++s) {
    if (s > 0) out.push_back('_');
    for (int sym = 0; sym < machine.symbols(); ++sym) {
      out += cell(machine.at(s, static_cast<Symbol>(sym)));
    }
  }
  return out;
}

bool has_first_use_ordering(const Machine& machine, std::uint64_t max_hops) {
  std::unordered_map<long, Symbol> tape;
  long head = 0;
  State state = 0;
  int states_seen = 1;  // the start state is 'a'
  int symbols_seen = 1;  // the blank
  for (std::uint64_t hop = 0; hop < max_hops; ++hop) {
    auto it = tape.find(head);
    const Symbol read = it == tape.end() ? Symbol{0} : it->second;
    const auto& t = machine.at(state, read);
    if (!t) return true;
    if (t->output >= symbols_seen) {
      if (t->output != symbols_seen) return false;
      ++symbols_seen;
    }
    if (t->halts()) return true;
    if (t->next >= states_seen) {
      if (t->next != states_seen) return false;
      ++states_seen;
    }
    tape[head] = t->output;
    head += t->dir == Dir::kRight ? 1 : -1;
    state = t->next;
  }
  return true;
}

MachineDiagnostics diagnose(const Machine& machine) {
  MachineDiagnostics d;
  d.halt_transition_count = machine.halt_count();
  d.undefined_count = machine.undefined_count();
  const int standard = machine.dimension() - d.halt_transition_count - d.undefined_count;
  d.is_exhaustive = d.halt_transition_count == 1 && standard == machine.dimension() - 1;

  const auto& first = machine.at(0, 0);
  bool canonical = first.has_value() && first->output == 1 && first->dir == Dir::kRight;
  if (canonical) {
    canonical = machine.states() == 1 ? first->halts() : first->next == 1;
  }
  if (canonical && machine.states() >= 2) {
    if (const auto& second = machine.at(1, 0)) {
      const bool back_left = second->dir == Dir::kLeft && (second->next == 0 || second->next == 1);
      canonical = !second->halts() && (back_left || second->next == 2);
    }
  }
  d.is_tnf_canonical = canonical && has_first_use_ordering(machine);
  return d;
}

}  // namespace otterbench
