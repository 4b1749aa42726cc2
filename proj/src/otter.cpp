#include "otterbench/otter.h"

#include <stdexcept>

namespace otterbench {

void HistoryBuffer::record(const BigInt& hop, ShapedConfig shaped) {
  if (!entries_.empty() && hop <= entries_.back().hop) {
    throw std::logic_error("history hops must be strictly increasing");
  }
  if (entries_.size() == capacity_) entries_.pop_front();
  HistoryEntry e;
  e.hop = hop;
  e.shape_hash = shaped.shape.hash();
  e.shape = std::move(shaped.shape);
  e.exponents = std::move(shaped.exponents);
  entries_.push_back(std::move(e));
}

BigInt occurrences_after(const BigInt& y1, const BigInt& a) {
  if (y1 < 1 || a < 1) throw std::invalid_argument("occurrences_after needs y1 >= 1 and a >= 1");
  BigInt q = y1 / a;
  if (y1 % a == 0) q -= 1;
  return q;
}

std::optional<BigInt> predict_hop(const BigInt& h3, const BigInt& h2, const BigInt& h1,
                                  const BigInt& m) {
  const BigInt first = h2 - h3;
  const BigInt second = (h1 - h2) - first;
  if (second < 0) return std::nullopt;
  const BigInt n = m + 2;
  // n(n-1) is always even.
  return h3 + first * n + second * (n * (n - 1) / 2);
}

std::vector<BigInt> extrapolate_exponents(const OtterMatch& match, const BigInt& occurrences) {
  std::vector<BigInt> out = match.current_exponents;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == match.regressor_index) {
      out[i] -= occurrences * match.a;
    } else if (match.deltas[i] != 0) {
      out[i] += occurrences * match.deltas[i];
    }
  }
  return out;
}

namespace {

enum class TripleVerdict { kNoMatch, kMatch, kMultiRegressor };

// x1 is the present, x3 the oldest occurrence.
TripleVerdict classify_triple(const std::vector<BigInt>& x1, const std::vector<BigInt>& x2,
                              const std::vector<BigInt>& x3, OtterMatch& match) {
  std::size_t regressors = 0;
  match.deltas.assign(x1.size(), BigInt(0));
  BigInt d12, d23;
  for (std::size_t i = 0; i < x1.size(); ++i) {
    if (x1[i] == x2[i] && x2[i] == x3[i]) continue;
    d12 = x2[i] - x1[i];
    d23 = x3[i] - x2[i];
    if (d12 != d23) return TripleVerdict::kNoMatch;
    if (sgn(d12) > 0) {
      ++regressors;
      match.regressor_index = i;
      match.a = d12;
    } else {
      // strictly increasing toward the present
      match.deltas[i] = -d12;
    }
  }
  if (regressors == 0) return TripleVerdict::kNoMatch;
  if (regressors > 1) return TripleVerdict::kMultiRegressor;
  return TripleVerdict::kMatch;
}

}  // namespace

MatchScan find_match(const HistoryBuffer& history, const BigInt& hop, const ShapedConfig& current) {
  MatchScan scan;
  const std::uint64_t hash = current.shape.hash();
  std::vector<std::size_t> same;
  for (std::size_t i = history.size(); i-- > 0;) {
    const HistoryEntry& e = history[i];
    if (e.shape_hash == hash && e.shape == current.shape) same.push_back(i);
  }
  for (std::size_t i2 = 0; i2 < same.size(); ++i2) {
    const HistoryEntry& h2 = history[same[i2]];
    for (std::size_t i3 = i2 + 1; i3 < same.size(); ++i3) {
      const HistoryEntry& h3 = history[same[i3]];
      OtterMatch match;
      switch (classify_triple(current.exponents, h2.exponents, h3.exponents, match)) {
        case TripleVerdict::kNoMatch:
          continue;
        case TripleVerdict::kMultiRegressor:
          ++scan.multi_regressor_skips;
          continue;
        case TripleVerdict::kMatch:
          break;
      }
      match.h1 = hop;
      match.h2 = h2.hop;
      match.h3 = h3.hop;
      match.m = occurrences_after(current.exponents[match.regressor_index], match.a);
      auto predicted = predict_hop(match.h3, match.h2, match.h1, match.m);
      if (!predicted) continue;
      match.predicted_hop = std::move(*predicted);
      match.current_exponents = current.exponents;
      match.predicted_exponents = extrapolate_exponents(match, match.m);
      scan.match = std::move(match);
      return scan;
    }
  }
  return scan;
}

MacroConfig apply_jump(const MacroConfig& config, const OtterMatch& match) {
  ShapedConfig shaped = shape_of(config);
  if (shaped.exponents != match.current_exponents) {
    throw std::logic_error("apply_jump: configuration does not match the pattern");
  }
  for (const BigInt& x : match.predicted_exponents) {
    if (x < 1) throw std::logic_error("apply_jump: predicted exponent below 1");
  }
  return from_shape(shaped.shape, match.predicted_exponents, config.block_size);
}

bool verify_jump(RuleCache& cache, const MacroConfig& config, const OtterMatch& match,
                 std::uint64_t budget) {
  const Shape target = shape_of(config).shape;
  auto expected_hop = predict_hop(match.h3, match.h2, match.h1, BigInt(1));
  if (!expected_hop) return false;
  const std::vector<BigInt> expected = extrapolate_exponents(match, BigInt(1));
  MacroConfig c = config;
  BigInt hop = match.h1;
  for (std::uint64_t i = 0; i < budget; ++i) {
    StepOutcome step = plain_step(c, cache);
    if (step.inner_loop || c.terminal) return false;
    hop += step.hops_delta;
    if (hop > *expected_hop) return false;
    ShapedConfig now = shape_of(c);
    if (now.shape == target) return hop == *expected_hop && now.exponents == expected;
  }
  return false;
}

}  // namespace otterbench
