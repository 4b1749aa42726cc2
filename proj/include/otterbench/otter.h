#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "otterbench/bigint.h"
#include "otterbench/engine.h"
#include "otterbench/rle_tape.h"

namespace otterbench {

struct HistoryEntry {
  BigInt hop;
  Shape shape;
  std::uint64_t shape_hash = 0;
  std::vector<BigInt> exponents;
};

// Bounded FIFO of recent configurations, oldest evicted first.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(std::size_t capacity = 150) : capacity_(capacity) {}

  // Hops must be strictly increasing.
  void record(const BigInt& hop, ShapedConfig shaped);
  void clear() { entries_.clear(); }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  // 0 = oldest.
  const HistoryEntry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::size_t capacity_;
  std::deque<HistoryEntry> entries_;
};

struct OtterMatch {
  BigInt h3, h2, h1;
  std::size_t regressor_index = 0;
  BigInt a;
  // Per-position growth per occurrence; 0 at constant positions and at the regressor.
  std::vector<BigInt> deltas;
  BigInt m;
  BigInt predicted_hop;
  std::vector<BigInt> predicted_exponents;
  // Exponents at H1, kept for verification.
  std::vector<BigInt> current_exponents;
};

struct MatchScan {
  std::optional<OtterMatch> match;
  std::uint64_t multi_regressor_skips = 0;
};

// Looks for two earlier same-shape entries forming a single-regressor pattern
// with the current configuration. Pairs are scanned newest first.
MatchScan find_match(const HistoryBuffer& history, const BigInt& hop, const ShapedConfig& current);

// Further occurrences after H1 that keep the regressor exponent >= 1.
BigInt occurrences_after(const BigInt& y1, const BigInt& a);

// Hop of the occurrence m steps after H1, from the quadratic fit through
// (H3, H2, H1). Empty when the second difference is negative.
std::optional<BigInt> predict_hop(const BigInt& h3, const BigInt& h2, const BigInt& h1,
                                  const BigInt& m);

// Predicted exponents `occurrences` steps after H1.
std::vector<BigInt> extrapolate_exponents(const OtterMatch& match, const BigInt& occurrences);

// Jumps `config` (shape-equal to the match) to the predicted final occurrence.
// Throws std::logic_error when an exponent would drop below 1.
MacroConfig apply_jump(const MacroConfig& config, const OtterMatch& match);

// Runs plain macro steps from `config` (at hop H1) until the shape recurs and
// checks hop and exponents against the predicted next occurrence.
bool verify_jump(RuleCache& cache, const MacroConfig& config, const OtterMatch& match,
                 std::uint64_t budget = 100'000);

}  // namespace otterbench
