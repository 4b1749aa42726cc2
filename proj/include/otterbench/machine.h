#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otterbench {

using State = std::int8_t;
using Symbol = std::uint8_t;

inline constexpr State kHalt = -1;
inline constexpr int kMaxStates = 23;   // letters a..w
inline constexpr int kMaxSymbols = 10;  // digits 0..9

enum class Dir : std::uint8_t { kLeft = 0, kRight = 1 };

inline constexpr Dir opposite(Dir d) { return d == Dir::kLeft ? Dir::kRight : Dir::kLeft; }

struct Transition {
  Symbol output = 0;
  Dir dir = Dir::kRight;
  State next = kHalt;

  bool halts() const { return next == kHalt; }
  friend bool operator==(const Transition&, const Transition&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quintuple machine with `states` states (0 = start state) and `symbols`
// symbols (0 = blank). Slots may be undefined; executing an undefined slot
// halts the machine and is reported separately from an explicit halt.
class Machine {
 public:
  Machine(int states, int symbols);

  int states() const { return states_; }
  int symbols() const { return symbols_; }
  int dimension() const { return states_ * symbols_; }

  const std::optional<Transition>& at(State s, Symbol sym) const {
    return table_[slot(s, sym)];
  }
  void set(State s, Symbol sym, std::optional<Transition> t);

  int halt_count() const;
  int undefined_count() const;
  // True when no defined slot is a halting transition (enumerator-internal).
  bool partial() const { return halt_count() == 0; }

  friend bool operator==(const Machine&, const Machine&) = default;

 private:
  std::size_t slot(State s, Symbol sym) const {
    return static_cast<std::size_t>(s) * symbols_ + sym;
  }

  int states_;
  int symbols_;
  std::vector<std::optional<Transition>> table_;
};

// Machine-line text form: state groups joined by '_', three characters per
// slot (`1RB`, `0LZ`, `---`). A one-state line holding a single slot ("1RZ")
// is the compact spelling of a 1x2 machine whose (a,1) slot is undefined.
Machine parse_machine(std::string_view text);
std::string format_machine(const Machine& machine);

char state_letter(State s);

struct MachineDiagnostics {
  bool is_exhaustive = false;
  bool is_tnf_canonical = false;
  int halt_transition_count = 0;
  int undefined_count = 0;
};

MachineDiagnostics diagnose(const Machine& machine);

// First-use ordering along the blank-input run: states numbered in order of
// first entry, non-blank symbols in order of first print. Checked for at most
// `max_hops` transitions.
bool has_first_use_ordering(const Machine& machine, std::uint64_t max_hops = 10'000);

}  // namespace otterbench
