#include <random>

#include "doctest.h"
#include "otterbench/rle_tape.h"

using namespace otterbench;

namespace {

Block blk(const char* digits) { return Block::from_string(digits); }

// Brute-force longest non-blank run over the expanded tape.
BigInt scan_contiguous(const MacroConfig& c) {
  const ExpandedTape t = expand(c, 1'000'000);
  std::uint64_t best = 0, run = 0;
  for (Symbol s : t.cells) {
    run = s != 0 ? run + 1 : 0;
    best = std::max(best, run);
  }
  return from_u64(best);
}

MacroConfig random_config(std::mt19937_64& rng, int k, int symbols) {
  MacroConfig c = MacroConfig::blank(k);
  for (Side side : {Side::kLeft, Side::kRight}) {
    const int segs = static_cast<int>(rng() % 5);
    for (int i = 0; i < segs; ++i) {
      Block b(k);
      for (int j = 0; j < k; ++j) b[j] = static_cast<Symbol>(rng() % symbols);
      c.side(side).push(b, 1 + rng() % 6);
    }
  }
  c.state = static_cast<State>(rng() % 3);
  c.facing = rng() % 2 ? Side::kRight : Side::kLeft;
  return c;
}

}  // namespace

TEST_SUITE("rle_tape") {

TEST_CASE("push merges identical nearest blocks") {
  SegmentStack s;
  s.push(blk("001"), 3);
  s.push(blk("001"), 2);
  REQUIRE(s.size() == 1);
  CHECK(s.top().exponent == 5);

  s.push(blk("011"), 1);
  CHECK(s.size() == 2);
  CHECK(s.top().block == blk("011"));
}

TEST_CASE("blank blocks vanish at the open end") {
  SegmentStack s;
  s.push(blk("000"), 7);
  CHECK(s.empty());
  s.push(blk("001"), 1);
  s.push(blk("000"), 2);
  CHECK(s.size() == 2);
}

TEST_CASE("push accepts huge exponents") {
  SegmentStack s;
  const BigInt big("100000000000000000000000000000000000000000");
  s.push(blk("11"), big);
  s.push(blk("11"), big);
  CHECK(s.top().exponent == 2 * big);
}

TEST_CASE("decouple") {
  SegmentStack s;
  s.push(blk("001"), 12);
  CHECK(s.decouple(3) == blk("001"));
  CHECK(s.top().exponent == 11);

  SegmentStack t;
  t.push(blk("110"), 2);
  t.push(blk("001"), 1);
  CHECK(t.decouple(3) == blk("001"));
  REQUIRE(t.size() == 1);
  CHECK(t.top().block == blk("110"));
  CHECK(t.top().exponent == 2);

  SegmentStack e;
  CHECK(e.decouple(2) == blk("00"));
  CHECK(e.empty());
}

TEST_CASE("decouple then push restores the stack") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const MacroConfig c = random_config(rng, 1 + static_cast<int>(rng() % 3), 3);
    SegmentStack s = c.right;
    if (s.empty()) continue;
    const SegmentStack before = s;
    const Block b = s.decouple(c.block_size);
    s.push(b, 1);
    CHECK(s == before);
  }
}

TEST_CASE("ones count") {
  CHECK(ones_count(MacroConfig::blank(3)) == 0);

  // 1 (110110)^10 11 with the head in the middle of the left side's run
  MacroConfig c = MacroConfig::blank(1);
  c.left.push(blk("1"), 1);
  for (int i = 0; i < 10; ++i) {
    c.left.push(blk("1"), 2);
    c.left.push(blk("0"), 1);
    c.left.push(blk("1"), 2);
    c.left.push(blk("0"), 1);
  }
  c.right.push(blk("1"), 2);
  CHECK(ones_count(c) == 43);

  MacroConfig d = MacroConfig::blank(6);
  d.left.push(blk("000001"), 1);
  d.left.push(blk("110110"), 10);
  d.right.push(blk("000011"), 1);
  CHECK(ones_count(d) == 43);
}

TEST_CASE("contiguous ones") {
  MacroConfig c = MacroConfig::blank(1);
  c.right.push(blk("1"), 2);
  c.right.push(blk("0"), 1);
  c.right.push(blk("1"), 1);  // tape 1 0 1 1 read left to right
  CHECK(contiguous_ones(c) == 2);

  MacroConfig d = MacroConfig::blank(2);
  d.left.push(blk("11"), 5);
  CHECK(contiguous_ones(d) == 10);

  // runs joining across the head boundary and across blocks
  MacroConfig e = MacroConfig::blank(3);
  e.left.push(blk("100"), 1);
  e.left.push(blk("011"), 4);
  e.right.push(blk("011"), 1);
  e.right.push(blk("110"), 2);
  CHECK(contiguous_ones(e) == scan_contiguous(e));

  MacroConfig huge = MacroConfig::blank(2);
  huge.left.push(blk("11"), BigInt("1000000000000000000000"));
  CHECK(contiguous_ones(huge) == BigInt("2000000000000000000000"));
}

TEST_CASE("contiguous ones agrees with expansion on random configs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const MacroConfig c = random_config(rng, 1 + static_cast<int>(rng() % 4), 2 + rng() % 2);
    CHECK(contiguous_ones(c) == scan_contiguous(c));
  }
}

TEST_CASE("ones count agrees with expansion") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const MacroConfig c = random_config(rng, 1 + static_cast<int>(rng() % 4), 3);
    const ExpandedTape t = expand(c);
    std::uint64_t ones = 0;
    for (Symbol s : t.cells) ones += s != 0;
    CHECK(ones_count(c) == from_u64(ones));
    CHECK(cell_count(c) == from_u64(t.cells.size()));
  }
}

TEST_CASE("compress inverts expand") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const MacroConfig c = random_config(rng, 1 + static_cast<int>(rng() % 4), 3);
    const ExpandedTape t = expand(c);
    const MacroConfig back = compress(t.cells, t.boundary, c.block_size, c.state, c.facing);
    CHECK(render(back) == render(c));
    CHECK(back == c);
  }
}

TEST_CASE("expansion is capped") {
  MacroConfig c = MacroConfig::blank(1);
  c.left.push(blk("1"), 20'000);
  CHECK_THROWS_AS(expand(c), std::length_error);
}

TEST_CASE("rendering") {
  MacroConfig c = MacroConfig::blank(3);
  c.left.push(blk("001"), 1);
  c.left.push(blk("111"), 6);
  c.right.push(blk("100"), 1);
  c.right.push(blk("001"), 63);
  c.state = 1;
  c.facing = Side::kRight;
  CHECK(render(c) == "001 (111)^6 {b} {l} (001)^63 100");
  c.facing = Side::kLeft;
  CHECK(render(c) == "001 (111)^6 {b} {r} (001)^63 100");
}

TEST_CASE("shapes separate exponents") {
  auto make = [](unsigned long x, unsigned long y, State state, Side facing) {
    MacroConfig c = MacroConfig::blank(3);
    c.left.push(blk("001"), 1);
    c.left.push(blk("111"), x);
    c.right.push(blk("100"), 1);
    c.right.push(blk("001"), y);
    c.state = state;
    c.facing = facing;
    return c;
  };
  const ShapedConfig a = shape_of(make(1, 66, 1, Side::kRight));
  const ShapedConfig b = shape_of(make(6, 63, 1, Side::kRight));
  CHECK(a.shape == b.shape);
  CHECK(a.shape.hash() == b.shape.hash());
  REQUIRE(a.exponents.size() == 4);
  CHECK(a.exponents[1] == 1);
  CHECK(a.exponents[2] == 66);
  CHECK(b.exponents[1] == 6);
  CHECK(b.exponents[2] == 63);

  CHECK_FALSE(shape_of(make(1, 66, 2, Side::kRight)).shape == a.shape);
  CHECK_FALSE(shape_of(make(1, 66, 1, Side::kLeft)).shape == a.shape);

  const MacroConfig rebuilt = from_shape(b.shape, b.exponents, 3);
  CHECK(rebuilt == make(6, 63, 1, Side::kRight));
}

}  // TEST_SUITE
