#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "otterbench/bigint.h"
#include "otterbench/machine.h"

namespace otterbench {

inline constexpr int kMaxBlockSize = 14;  // 4 bits per cell packs into 56 bits

// Fixed-length run of k tape cells.
class Block {
 public:
  Block() = default;
  explicit Block(int size) : size_(static_cast<std::uint8_t>(size)) {}
  Block(std::initializer_list<Symbol> cells);
  static Block blank(int size) { return Block(size); }
  // "001" -> {0,0,1}
  static Block from_string(const std::string& digits);

  int size() const { return size_; }
  Symbol operator[](int i) const { return cells_[i]; }
  Symbol& operator[](int i) { return cells_[i]; }

  bool is_blank() const;
  int non_blank_count() const;
  // 4 bits per cell; equal blocks of equal size pack equally.
  std::uint64_t packed() const;
  std::string to_string() const;

  friend bool operator==(const Block& a, const Block& b) {
    return a.size_ == b.size_ && std::memcmp(a.cells_.data(), b.cells_.data(), a.size_) == 0;
  }

 private:
  std::array<Symbol, kMaxBlockSize> cells_{};
  std::uint8_t size_ = 0;
};

struct Segment {
  Block block;
  BigInt exponent;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// One side of the tape, stored with the segment nearest the head at the back.
// Beyond the outermost segment the tape is blank forever.
class SegmentStack {
 public:
  bool empty() const { return segs_.empty(); }
  std::size_t size() const { return segs_.size(); }

  // Nearest-to-head segment.
  const Segment& top() const { return segs_.back(); }
  Segment& top() { return segs_.back(); }

  // i = 0 is the nearest segment.
  const Segment& nearest(std::size_t i) const { return segs_[segs_.size() - 1 - i]; }
  // i = 0 is the outermost segment.
  const Segment& outermost(std::size_t i) const { return segs_[i]; }
  Segment& outermost(std::size_t i) { return segs_[i]; }

  // Merges with an identical nearest block; drops blank segments pushed onto
  // an empty stack. Exponent must be >= 1.
  void push(const Block& block, const BigInt& exponent);
  void push(const Block& block, unsigned long exponent = 1);
  // Removes one copy of the nearest block; an empty stack yields a blank block.
  Block decouple(int block_size);
  // Removes the whole nearest segment.
  Segment pop();

  friend bool operator==(const SegmentStack&, const SegmentStack&) = default;

 private:
  std::vector<Segment> segs_;
};

enum class Side : std::uint8_t { kLeft = 0, kRight = 1 };

inline constexpr Side other(Side s) { return s == Side::kLeft ? Side::kRight : Side::kLeft; }

// Two-stack run-length configuration. The head sits on the boundary between
// the stacks and is about to enter the nearest segment of `facing`.
struct MacroConfig {
  int block_size = 1;
  SegmentStack left;
  SegmentStack right;
  State state = 0;
  Side facing = Side::kRight;
  // Set once the machine has halted; `state` is then kHalt and the head
  // position is no longer meaningful.
  bool terminal = false;

  SegmentStack& side(Side s) { return s == Side::kLeft ? left : right; }
  const SegmentStack& side(Side s) const { return s == Side::kLeft ? left : right; }

  static MacroConfig blank(int block_size) {
    MacroConfig c;
    c.block_size = block_size;
    return c;
  }

  friend bool operator==(const MacroConfig&, const MacroConfig&) = default;
};

BigInt ones_count(const MacroConfig& config);
BigInt contiguous_ones(const MacroConfig& config);
// Sum over segments of k * exponent.
BigInt cell_count(const MacroConfig& config);

// Renders `<left segments> {<state>} {<l|r>} <right segments>`; `{l}` means the
// head is at the left end of the next block on the right. Terminal configs
// render as `<segments> {Z} <segments>`.
std::string render(const MacroConfig& config);

// Cell-by-cell expansion in tape order (left to right) together with the head
// boundary index. Throws std::length_error beyond `max_cells`.
struct ExpandedTape {
  std::vector<Symbol> cells;
  std::size_t boundary = 0;  // number of cells belonging to the left side
};
ExpandedTape expand(const MacroConfig& config, std::size_t max_cells = 10'000);

// Inverse of expand for the given block size: trailing blank padding on either
// side is trimmed to whole blocks and the boundary must be block aligned from
// the boundary outwards.
MacroConfig compress(const std::vector<Symbol>& cells, std::size_t boundary, int block_size,
                     State state, Side facing);

// Block sequences (tape order) plus state and facing; exponents separated out.
struct Shape {
  std::vector<Block> left;   // outermost first
  std::vector<Block> right;  // nearest first
  State state = 0;
  Side facing = Side::kRight;

  std::uint64_t hash() const;
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct ShapedConfig {
  Shape shape;
  // Tape order: left side outermost-to-nearest, then right side nearest-to-outermost.
  std::vector<BigInt> exponents;
};

ShapedConfig shape_of(const MacroConfig& config);
// Rebuilds a configuration; every exponent must be >= 1.
MacroConfig from_shape(const Shape& shape, const std::vector<BigInt>& exponents, int block_size);

std::string render_shape(const Shape& shape);

}  // namespace otterbench
