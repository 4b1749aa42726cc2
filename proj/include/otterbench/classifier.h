#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <deque>
#include <vector>

#include "otterbench/bigint.h"
#include "otterbench/engine.h"
#include "otterbench/machine.h"

namespace otterbench {

// Non-termination detectors run as an engine observer. InnerLoop is reported
// by the engine itself.
class NonTermDetector : public RunObserver {
 public:
  explicit NonTermDetector(std::size_t memory = 10'000, std::uint64_t max_cells = 1'000)
      : memory_(memory), max_cells_(max_cells) {}

  std::optional<RunStatus> observe(const MacroConfig& config, const BigInt& hops,
                                   std::uint64_t steps, StepKind kind) override;
  std::string witness() const override { return witness_; }
  void reset() override;

 private:
  // Head at the edge of the written tape facing blank cells.
  struct EdgeVisit {
    BigInt hops;
    std::uint64_t behind_cells = 0;  // cells on the non-blank side
    std::uint64_t min_behind = 0;    // fewest untouched cells on that side since
    std::vector<Symbol> near;        // behind side, nearest cell first
  };

  std::optional<RunStatus> check_repeat(const MacroConfig& config, const BigInt& hops);
  std::optional<RunStatus> check_runaway(const MacroConfig& config, const BigInt& hops);

  std::size_t memory_;
  std::uint64_t max_cells_;
  std::unordered_set<std::string> seen_;
  std::deque<std::string> order_;
  // Last edge visit per (facing, state).
  std::map<std::pair<int, int>, EdgeVisit> visits_;
  std::string witness_;
};

enum class EvidenceStatus { kHalted, kNonTerminating, kHoldout };

const char* to_string(EvidenceStatus status);

struct EvidenceRecord {
  std::uint64_t machine_index = 0;
  std::string machine;
  EvidenceStatus status = EvidenceStatus::kHoldout;
  // halted: explicit|undefined; nonterminating: InnerLoop|ExactConfigRepeat|BlankRunaway;
  // holdout: budget or "fault: ..."
  std::string reason;
  BigInt ones;
  BigInt hops;
  std::optional<BigInt> contiguous_ones;  // halted only
  std::uint64_t steps = 0;
  std::uint64_t otters = 0;
  BigInt otter_hops;
  int k = 1;
  int window = 0;  // 0 when the otter is off
  bool verified = false;
  double wall_seconds = 0.0;
  // Final configuration for halted records, the witness otherwise; long
  // renderings are replaced by a digest.
  std::string final_config;
};

// Renderings longer than this are stored as a digest.
inline constexpr std::size_t kMaxRenderedConfig = 4096;

std::string digest_text(std::string_view text);

std::string to_json_line(const EvidenceRecord& record, bool with_wall_seconds = true);
// Throws std::invalid_argument on malformed input.
EvidenceRecord parse_evidence_line(std::string_view line);
std::vector<EvidenceRecord> read_evidence(std::istream& in);
std::vector<EvidenceRecord> read_evidence_file(const std::string& path);

// Digest of the evidence stream with wall_seconds removed.
std::string canonical_digest(const std::vector<EvidenceRecord>& records);

struct ClassifyOptions {
  int block_size = 1;  // 0 = automatic
  bool otter = false;
  int window = 150;
  bool verify = false;
  std::uint64_t max_steps = 10'000'000;
  std::optional<BigInt> max_hops;
  unsigned threads = 1;
  std::uint64_t resume_from = 0;  // first index to classify
};

// Runs one machine through the engine and detectors; engine faults become holdouts.
EvidenceRecord classify_machine(std::uint64_t index, const Machine& machine,
                                const ClassifyOptions& options);

struct ClassifySummary {
  std::uint64_t halted = 0;
  std::uint64_t nonterminating = 0;
  std::uint64_t holdouts = 0;
  std::uint64_t faults = 0;
  std::uint64_t total() const { return halted + nonterminating + holdouts; }
};

// Classifies machines[resume_from..] and writes JSONL records ordered by index.
ClassifySummary classify_batch(const std::vector<Machine>& machines, const ClassifyOptions& options,
                               std::ostream& out);

// In-memory variant.
std::vector<EvidenceRecord> classify_all(const std::vector<Machine>& machines,
                                         const ClassifyOptions& options);

struct DimensionResults {
  int states = 0;
  int symbols = 0;
  std::uint64_t records = 0;
  std::uint64_t halted = 0;
  std::uint64_t nonterminating = 0;
  std::uint64_t holdouts = 0;
  BigInt bb;
  BigInt ff;
  BigInt max_contiguous;
  std::vector<const EvidenceRecord*> bb_champions;
  std::vector<const EvidenceRecord*> ff_champions;
  std::map<BigInt, std::uint64_t> histogram;  // ones -> halted machines
  std::vector<const EvidenceRecord*> wastrels;
  double bb_square_ratio = 0.0;  // hops / ones^2 of the first bb champion
};

struct ResultsDB {
  std::vector<EvidenceRecord> records;
  std::map<std::pair<int, int>, DimensionResults> dimensions;
  bool empty = true;

  const DimensionResults* find(int states, int symbols) const;
};

// Takes ownership of the records; pointers in the result refer into `records`.
ResultsDB aggregate(std::vector<EvidenceRecord> records);

// ones^2 < hops / 100
bool is_wastrel(const BigInt& ones, const BigInt& hops);

struct PpEntry {
  std::uint64_t k = 0;
  std::optional<int> states;  // empty: not reached with the evidence at hand
  std::string text;           // "3" or ">= 5"
};

// pp(k, m) for k = 1..k_max using halted records with `symbols` symbols.
std::vector<PpEntry> pp_table(const ResultsDB& db, int symbols, std::uint64_t k_max);

// Report rows in the column order No., Dim., Ones, Hops, Steps, Otters,
// OtterSteps, OtterPct, Time.
std::string report_header();
std::string report_row(const EvidenceRecord& record, std::uint64_t number);
std::string otter_percent(const BigInt& otter_hops, const BigInt& hops);
std::string format_seconds(double seconds);

}  // namespace otterbench
