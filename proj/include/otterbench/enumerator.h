#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "otterbench/machine.h"

namespace otterbench {

enum class GenerationMode { kAll, kFree, kTnf };

const char* to_string(GenerationMode mode);
// Accepts "all", "free", "tnf" (any case); throws std::invalid_argument.
GenerationMode parse_generation_mode(std::string_view text);

// Largest dimension (states * symbols) each mode accepts.
int max_dimension(GenerationMode mode);

enum class ExclusionRule {
  kFirstTransitionFixed,
  kSecondTransitionSet,
  kSelfLoopOnBlank,
  kRightRunaway,
  kInnerLoopFamily,
  kBudgetHoldoutFamily,
};

const char* to_string(ExclusionRule rule);

struct ExclusionRecord {
  std::string partial;  // machine-line of the partial machine
  ExclusionRule rule = ExclusionRule::kInnerLoopFamily;
  std::string subtree_note;
};

std::string to_json_line(const ExclusionRecord& record);

struct EnumerationOptions {
  int states = 2;
  int symbols = 2;
  GenerationMode mode = GenerationMode::kTnf;
  std::uint64_t max_hops = 10'000;   // per-branch budget while generating (TNF)
  std::uint64_t max_cells = 1'000;
  std::uint64_t resume_from = 0;     // first machine index to emit
  bool allow_oversize = false;       // lift the dimension guard
};

// Receives the enumeration stream. Returning false aborts the run; the
// summary cursor then names the first index that was not delivered.
class EnumerationSink {
 public:
  virtual ~EnumerationSink() = default;
  virtual bool machine(std::uint64_t index, const Machine& machine) = 0;
  virtual bool exclusion(const ExclusionRecord&) { return true; }
};

struct EnumerationSummary {
  std::uint64_t emitted = 0;  // machines delivered in this call
  std::uint64_t total = 0;    // machines in the full order (when completed)
  std::map<ExclusionRule, std::uint64_t> exclusions;
  bool completed = false;
  std::uint64_t cursor = 0;   // next index to emit on resume
};

// Throws std::invalid_argument when the options violate the mode guards.
void validate(const EnumerationOptions& options);

EnumerationSummary enumerate(const EnumerationOptions& options, EnumerationSink& sink);

// Collects everything in memory.
struct CollectedEnumeration {
  std::vector<Machine> machines;
  std::vector<ExclusionRecord> exclusions;
  EnumerationSummary summary;
};
CollectedEnumeration enumerate_to_vector(const EnumerationOptions& options);

// TNF candidates for the undefined slot (state, symbol) of `partial`.
// Candidates removed by a pruning rule are appended to `excluded` when given.
std::vector<Transition> choice_set(
    const Machine& partial, State state, Symbol symbol,
    std::vector<std::pair<Transition, ExclusionRule>>* excluded = nullptr);

// Smallest machine-line over all renamings of states b.. and symbols 1..
std::string canonical_form(const Machine& machine);

struct DuplicateReport {
  std::size_t duplicates = 0;
  // (earlier index, later index) pairs
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

DuplicateReport dedupe_check(const std::vector<Machine>& machines);

// Machine-list file.
struct MachineListHeader {
  int states = 0;
  int symbols = 0;
  std::string mode;
  std::uint64_t max_hops = 0;
  std::uint64_t max_cells = 0;
  std::string version;
};

std::string format_list_header(const EnumerationOptions& options);
// Skips blank lines and '#' lines; the header, if present, fills `header`.
std::vector<Machine> read_machine_list(std::istream& in, MachineListHeader* header = nullptr);
std::vector<Machine> read_machine_list_file(const std::string& path,
                                            MachineListHeader* header = nullptr);

// Writes machines to a list stream and exclusions as JSONL.
class StreamSink : public EnumerationSink {
 public:
  StreamSink(std::ostream& list, std::ostream* exclusions) : list_(list), exclusions_(exclusions) {}
  bool machine(std::uint64_t index, const Machine& machine) override;
  bool exclusion(const ExclusionRecord& record) override;

 private:
  std::ostream& list_;
  std::ostream* exclusions_;
};

}  // namespace otterbench
