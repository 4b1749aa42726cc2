#include "otterbench/rle_tape.h"

#include <stdexcept>

namespace otterbench {

Block::Block(std::initializer_list<Symbol> cells) : size_(static_cast<std::uint8_t>(cells.size())) {
  if (cells.size() > kMaxBlockSize) throw std::invalid_argument("block too long");
  int i = 0;
  for (Symbol c : cells) cells_[i++] = c;
}

Block Block::from_string(const std::string& digits) {
  if (digits.empty() || digits.size() > kMaxBlockSize) {
    throw std::invalid_argument("bad block length: " + digits);
  }
  Block b(static_cast<int>(digits.size()));
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < '0' || digits[i] > '9') throw std::invalid_argument("bad block: " + digits);
    b.cells_[i] = static_cast<Symbol>(digits[i] - '0');
  }
  return b;
}

bool Block::is_blank() const {
  for (int i = 0; i < size_; ++i) {
    if (cells_[i] != 0) return false;
  }
  return true;
}

int Block::non_blank_count() const {
  int n = 0;
  for (int i = 0; i < size_; ++i) n += cells_[i] != 0;
  return n;
}

std::uint64_t Block::packed() const {
  std::uint64_t v = 0;
  for (int i = 0; i < size_; ++i) v = (v << 4) | cells_[i];
  return v;
}

std::string Block::to_string() const {
  std::string s(size_, '0');
  for (int i = 0; i < size_; ++i) s[i] = static_cast<char>('0' + cells_[i]);
  return s;
}

void SegmentStack::push(const Block& block, const BigInt& exponent) {
  if (!segs_.empty() && segs_.back().block == block) {
    segs_.back().exponent += exponent;
    return;
  }
  if (segs_.empty() && block.is_blank()) return;
  segs_.push_back(Segment{block, exponent});
}

void SegmentStack::push(const Block& block, unsigned long exponent) {
  if (!segs_.empty() && segs_.back().block == block) {
    segs_.back().exponent += exponent;
    return;
  }
  if (segs_.empty() && block.is_blank()) return;
  segs_.push_back(Segment{block, BigInt(exponent)});
}

Block SegmentStack::decouple(int block_size) {
  if (segs_.empty()) return Block::blank(block_size);
  Segment& top = segs_.back();
  Block b = top.block;
  if (top.exponent == 1) {
    segs_.pop_back();
  } else {
    top.exponent -= 1;
  }
  return b;
}

Segment SegmentStack::pop() {
  Segment s = std::move(segs_.back());
  segs_.pop_back();
  return s;
}

namespace {

template <typename Fn>
void for_each_in_tape_order(const MacroConfig& config, Fn&& fn) {
  for (std::size_t i = 0; i < config.left.size(); ++i) fn(config.left.outermost(i));
  for (std::size_t i = 0; i < config.right.size(); ++i) fn(config.right.nearest(i));
}

}  // namespace

BigInt ones_count(const MacroConfig& config) {
  BigInt total = 0;
  for_each_in_tape_order(config, [&](const Segment& seg) {
    const int nb = seg.block.non_blank_count();
    if (nb != 0) total += seg.exponent * nb;
  });
  return total;
}

BigInt cell_count(const MacroConfig& config) {
  BigInt total = 0;
  for_each_in_tape_order(config, [&](const Segment& seg) { total += seg.exponent; });
  return total * config.block_size;
}

BigInt contiguous_ones(const MacroConfig& config) {
  BigInt best = 0;
  BigInt run = 0;
  for_each_in_tape_order(config, [&](const Segment& seg) {
    const Block& b = seg.block;
    const int k = b.size();
    int prefix = 0;
    while (prefix < k && b[prefix] != 0) ++prefix;
    if (prefix == k) {
      run += seg.exponent * k;
      return;
    }
    int suffix = 0;
    while (suffix < k && b[k - 1 - suffix] != 0) ++suffix;
    int inner = 0;
    for (int i = 0, cur = 0; i < k; ++i) {
      cur = b[i] != 0 ? cur + 1 : 0;
      inner = std::max(inner, cur);
    }
    run += prefix;
    if (run > best) best = run;
    if (inner > best) best = inner;
    if (seg.exponent >= 2 && suffix + prefix > best) best = suffix + prefix;
    run = suffix;
  });
  if (run > best) best = run;
  return best;
}

namespace {

void render_segment(std::string& out, const Segment& seg) {
  if (seg.exponent == 1) {
    out += seg.block.to_string();
  } else {
    out += '(';
    out += seg.block.to_string();
    out += ")^";
    out += to_decimal(seg.exponent);
  }
}

}  // namespace

std::string render(const MacroConfig& config) {
  std::string out;
  for (std::size_t i = 0; i < config.left.size(); ++i) {
    render_segment(out, config.left.outermost(i));
    out += ' ';
  }
  if (config.terminal) {
    out += "{Z}";
  } else {
    out += '{';
    out += state_letter(config.state);
    out += config.facing == Side::kRight ? "} {l}" : "} {r}";
  }
  for (std::size_t i = 0; i < config.right.size(); ++i) {
    out += ' ';
    render_segment(out, config.right.nearest(i));
  }
  return out;
}

ExpandedTape expand(const MacroConfig& config, std::size_t max_cells) {
  if (cell_count(config) > max_cells) {
    throw std::length_error("configuration too large to expand");
  }
  ExpandedTape tape;
  auto emit = [&](const Segment& seg) {
    const unsigned long e = seg.exponent.get_ui();
    for (unsigned long r = 0; r < e; ++r) {
      for (int i = 0; i < seg.block.size(); ++i) tape.cells.push_back(seg.block[i]);
    }
  };
  for (std::size_t i = 0; i < config.left.size(); ++i) emit(config.left.outermost(i));
  tape.boundary = tape.cells.size();
  for (std::size_t i = 0; i < config.right.size(); ++i) emit(config.right.nearest(i));
  return tape;
}

MacroConfig compress(const std::vector<Symbol>& cells, std::size_t boundary, int block_size,
                     State state, Side facing) {
  MacroConfig c = MacroConfig::blank(block_size);
  c.state = state;
  c.facing = facing;
  const std::size_t k = static_cast<std::size_t>(block_size);
  // Left side: blocks end at the boundary, padded with blanks on the far left.
  const std::size_t left_blocks = (boundary + k - 1) / k;
  const std::size_t left_pad = left_blocks * k - boundary;
  for (std::size_t b = 0; b < left_blocks; ++b) {
    Block blk(block_size);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pos = b * k + i;
      blk[static_cast<int>(i)] = pos < left_pad ? 0 : cells[pos - left_pad];
    }
    c.left.push(blk);
  }
  // Right side: blocks start at the boundary, padded on the far right.
  const std::size_t right_len = cells.size() - boundary;
  const std::size_t right_blocks = (right_len + k - 1) / k;
  for (std::size_t b = right_blocks; b-- > 0;) {
    Block blk(block_size);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pos = boundary + b * k + i;
      blk[static_cast<int>(i)] = pos < cells.size() ? cells[pos] : 0;
    }
    c.right.push(blk);
  }
  return c;
}

std::uint64_t Shape::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(state + 1));
  mix(static_cast<std::uint64_t>(facing));
  mix(left.size());
  for (const Block& b : left) mix(b.packed());
  mix(right.size());
  for (const Block& b : right) mix(b.packed());
  return h;
}

ShapedConfig shape_of(const MacroConfig& config) {
  ShapedConfig out;
  out.shape.state = config.state;
  out.shape.facing = config.facing;
  out.shape.left.reserve(config.left.size());
  out.shape.right.reserve(config.right.size());
  out.exponents.reserve(config.left.size() + config.right.size());
  for (std::size_t i = 0; i < config.left.size(); ++i) {
    out.shape.left.push_back(config.left.outermost(i).block);
    out.exponents.push_back(config.left.outermost(i).exponent);
  }
  for (std::size_t i = 0; i < config.right.size(); ++i) {
    out.shape.right.push_back(config.right.nearest(i).block);
    out.exponents.push_back(config.right.nearest(i).exponent);
  }
  return out;
}

MacroConfig from_shape(const Shape& shape, const std::vector<BigInt>& exponents, int block_size) {
  if (exponents.size() != shape.left.size() + shape.right.size()) {
    throw std::invalid_argument("exponent vector does not match shape");
  }
  MacroConfig c = MacroConfig::blank(block_size);
  c.state = shape.state;
  c.facing = shape.facing;
  std::size_t e = 0;
  for (const Block& b : shape.left) {
    if (exponents[e] < 1) throw std::logic_error("non-positive exponent");
    c.left.push(b, exponents[e++]);
  }
  for (std::size_t i = shape.right.size(); i-- > 0;) {
    const BigInt& x = exponents[shape.left.size() + i];
    if (x < 1) throw std::logic_error("non-positive exponent");
    c.right.push(shape.right[i], x);
  }
  return c;
}

std::string render_shape(const Shape& shape) {
  std::string out;
  for (const Block& b : shape.left) out += "(" + b.to_string() + ")^* ";
  out += '{';
  out += state_letter(shape.state);
  out += shape.facing == Side::kRight ? "} {l}" : "} {r}";
  for (const Block& b : shape.right) out += " (" + b.to_string() + ")^*";
  return out;
}

}  // namespace otterbench
