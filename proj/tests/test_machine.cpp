#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "otterbench/cli.h"
#include "otterbench/machine.h"

using namespace otterbench;

namespace {

Machine random_machine(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ns(1, 6), ms(2, 6);
  const int n = ns(rng);
  const int m = ms(rng);
  Machine machine(n, m);
  for (int s = 0; s < n; ++s) {
    for (int y = 0; y < m; ++y) {
      const int roll = static_cast<int>(rng() % 10);
      if (roll == 0) continue;  // undefined
      Transition t;
      t.output = static_cast<Symbol>(rng() % m);
      t.dir = rng() % 2 ? Dir::kRight : Dir::kLeft;
      t.next = roll == 1 ? kHalt : static_cast<State>(rng() % n);
      machine.set(static_cast<State>(s), static_cast<Symbol>(y), t);
    }
  }
  return machine;
}

}  // namespace

TEST_SUITE("machine_core") {

TEST_CASE("smallest machine") {
  const Machine m = parse_machine("1RZ");
  CHECK(m.states() == 1);
  CHECK(m.symbols() == 2);
  REQUIRE(m.at(0, 0).has_value());
  CHECK(m.at(0, 0)->output == 1);
  CHECK(m.at(0, 0)->dir == Dir::kRight);
  CHECK(m.at(0, 0)->halts());
  CHECK_FALSE(m.at(0, 1).has_value());
  CHECK(format_machine(m) == "1RZ");

  const MachineDiagnostics d = diagnose(m);
  CHECK(d.halt_transition_count == 1);
  CHECK(d.undefined_count == 1);
  CHECK_FALSE(d.is_exhaustive);
}

TEST_CASE("partial machine with undefined slot") {
  const Machine m = parse_machine("1RB1LA_0LA---");
  CHECK(m.states() == 2);
  CHECK_FALSE(m.at(1, 1).has_value());
  CHECK(m.partial());
  CHECK(diagnose(m).halt_transition_count == 0);
  CHECK(format_machine(m) == "1RB1LA_0LA---");
}

TEST_CASE("input is case-insensitive") {
  CHECK(format_machine(parse_machine("1rb1lb_1la1rz")) == "1RB1LB_1LA1RZ");
}

TEST_CASE("parse errors name the slot") {
  CHECK_THROWS_AS(parse_machine(""), ParseError);
  CHECK_THROWS_AS(parse_machine("1RB1L"), ParseError);
  CHECK_THROWS_AS(parse_machine("1RB1LB_1LA"), ParseError);
  CHECK_THROWS_WITH_AS(parse_machine("1RB2LB_1LA1RZ"), doctest::Contains("(a,1)"), ParseError);
  CHECK_THROWS_WITH_AS(parse_machine("1RC1LB_1LA1RZ"), doctest::Contains("(a,0)"), ParseError);
  CHECK_THROWS_AS(parse_machine("1XB1LB_1LA1RZ"), ParseError);
}

TEST_CASE("round trip over random machines") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    const Machine m = random_machine(rng);
    const std::string text = format_machine(m);
    const Machine back = parse_machine(text);
    CHECK(back == m);
    CHECK(format_machine(back) == text);
  }
}

TEST_CASE("round trip over the shipped corpus") {
  const auto corpus = cli::read_corpus_file(OTTERBENCH_SOURCE_DIR "/corpus/dragons.tsv");
  CHECK(corpus.size() == 100);
  int defined = 0;
  for (const auto& e : corpus) {
    if (e.machine.empty()) continue;
    ++defined;
    CHECK(format_machine(parse_machine(e.machine)) == e.machine);
  }
  CHECK(defined >= 8);
}

TEST_CASE("exhaustive machines") {
  const Machine champion = parse_machine("1RB1LC_1RC1RB_1RD0LE_1LA1LD_1RZ0LA");
  const MachineDiagnostics d = diagnose(champion);
  CHECK(d.is_exhaustive);
  CHECK(d.halt_transition_count == 1);
  CHECK(d.undefined_count == 0);

  CHECK_FALSE(diagnose(parse_machine("1RB1RZ_1LB1RZ")).is_exhaustive);
  CHECK_FALSE(diagnose(parse_machine("1RB---_1LB1RZ")).is_exhaustive);
}

TEST_CASE("tree normal form checks") {
  CHECK(diagnose(parse_machine("1RB1LB_1LA1RZ")).is_tnf_canonical);
  CHECK(diagnose(parse_machine("1RB1LC_1RC1RB_1RD0LE_1LA1LD_1RZ0LA")).is_tnf_canonical);
  // first move to the left
  CHECK_FALSE(diagnose(parse_machine("1LB1LB_1LA1RZ")).is_tnf_canonical);
  // blank first output
  CHECK_FALSE(diagnose(parse_machine("0RB1LB_1LA1RZ")).is_tnf_canonical);
  // (b,0) moving right back to a
  CHECK_FALSE(diagnose(parse_machine("1RB1LB_1RA1RZ")).is_tnf_canonical);
  // first transition enters c
  CHECK_FALSE(diagnose(parse_machine("1RC1LB_1LA1RZ_1LB1LA")).is_tnf_canonical);
}

TEST_CASE("first-use ordering of symbols") {
  // symbol 2 printed before symbol 1
  CHECK_FALSE(has_first_use_ordering(parse_machine("2RB1RZ0RA_2LA1LB1LA")));
  CHECK(has_first_use_ordering(parse_machine("1RB2LB1RZ_2LA2RB1LB")));
}

TEST_CASE("state letters") {
  CHECK(state_letter(0) == 'a');
  CHECK(state_letter(4) == 'e');
  CHECK(state_letter(kHalt) == 'Z');
}

}  // TEST_SUITE
