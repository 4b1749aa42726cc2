#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "otterbench/bigint.h"

namespace otterbench::cli {

// Exit codes shared by all commands.
inline constexpr int kExitHalted = 0;
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNonTerminating = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitMismatch = 4;

struct RunOptions {
  std::string machine;  // machine-line or path to a file holding one
  std::string engine = "macro";
  bool otter = false;
  bool verify = false;
  std::string k = "1";  // integer or "auto"
  int window = 150;
  std::uint64_t max_steps = 10'000'000;
  std::optional<std::string> max_hops;
  bool trace = false;
};

struct EnumerateOptions {
  int states = 2;
  int symbols = 2;
  std::string mode = "tnf";
  std::string out;         // empty: standard output
  std::string exclusions;  // empty: not written
  std::uint64_t max_hops = 10'000;
  std::uint64_t max_cells = 1'000;
};

struct ClassifyCliOptions {
  std::string in;
  std::string out;  // empty: standard output
  std::uint64_t max_steps = 10'000'000;
  std::optional<std::string> max_hops;
  bool otter = false;
  bool verify = false;
  std::string k = "1";
  int window = 150;
  unsigned parallel = 1;
  bool resume = false;
};

struct BenchOptions {
  std::string corpus;
  std::string out;  // empty: standard output
  std::vector<int> ids;  // empty: all entries
  std::uint64_t max_steps = 10'000'000;
  std::uint64_t baseline_steps = 5'000'000;
  int window = 150;
};

struct AggregateOptions {
  std::vector<std::string> evidence;
  bool pp = false;
  std::optional<std::uint64_t> pp_max;
  std::string out;  // JSON ResultsDB; empty: not written
};

// Each command writes results to `out` and diagnostics to `err`, returning
// the process exit code.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_enumerate(const EnumerateOptions& options, std::ostream& out, std::ostream& err);
int cmd_classify(const ClassifyCliOptions& options, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);
int cmd_aggregate(const AggregateOptions& options, std::ostream& out, std::ostream& err);

struct CorpusEntry {
  int id = 0;
  int states = 0;
  int symbols = 0;
  std::string machine;  // empty when the definition is pending
  std::optional<int> k;
  std::optional<BigInt> ones;
  std::optional<BigInt> hops;
  // Decimal digit counts, for results too long to pin in full.
  std::optional<int> ones_digits;
  std::optional<int> hops_digits;
  bool definition_pending = false;
  std::string note;
};

// TSV with a header row: id, states, symbols, machine, k, ones, hops,
// ones_digits, hops_digits, flags, note. Only the first four columns are
// required. Empty and "-" fields are absent values.
std::vector<CorpusEntry> read_corpus(std::istream& in);
std::vector<CorpusEntry> read_corpus_file(const std::string& path);

// Parses "auto" (0) or a block size 1..14.
int parse_block_size(const std::string& text);

}  // namespace otterbench::cli
