// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "otterbench/classifier.h"
#include "otterbench/cli.h"
#include "otterbench/engine.h"
#include "otterbench/enumerator.h"
#include "otterbench/otter.h"

using namespace otterbench;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << std::endl;
  if (!ok) ++failures;
}

unsigned threads() {
  if (const char* env = std::getenv("OTTERBENCH_THREADS")) {
    if (std::atoi(env) > 0) return static_cast<unsigned>(std::atoi(env));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Dimension {
  CollectedEnumeration enumeration;
  std::vector<EvidenceRecord> evidence;
};

Dimension enumerate_and_classify(int n, int m, const ClassifyOptions& options) {
  EnumerationOptions o;
  o.states = n;
  o.symbols = m;
  Dimension d;
  d.enumeration = enumerate_to_vector(o);
  d.evidence = classify_all(d.enumeration.machines, options);
  return d;
}

std::string exclusion_counts(const EnumerationSummary& s) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [rule, count] : s.exclusions) {
    out << (first ? "" : ",") << to_string(rule) << "=" << count;
    first = false;
  }
  return out.str();
}

Block blk(const char* digits) { return Block::from_string(digits); }

MacroConfig worked_config(unsigned long x, unsigned long y) {
  MacroConfig c = MacroConfig::blank(3);
  c.left.push(blk("001"), 1);
  c.left.push(blk("111"), x);
  c.right.push(blk("100"), 1);
  c.right.push(blk("001"), y);
  c.state = 1;
  c.facing = Side::kRight;
  return c;
}

BigInt random_big(std::mt19937_64& rng, int max_digits) {
  const int digits = 1 + static_cast<int>(rng() % max_digits);
  std::string s;
  for (int i = 0; i < digits; ++i) s += static_cast<char>('0' + rng() % 10);
  return BigInt(s, 10);
}

}  // namespace

int main() {
  ClassifyOptions classify;
  classify.threads = threads();

  // 1: blue bilby dimensions
  std::vector<EvidenceRecord> pp_evidence;
  {
    const auto start = Clock::now();
    const Dimension one = enumerate_and_classify(1, 2, classify);
    const Dimension d22 = enumerate_and_classify(2, 2, classify);
    const Dimension d32 = enumerate_and_classify(3, 2, classify);
    const Dimension d23 = enumerate_and_classify(2, 3, classify);
    const double seconds = since(start);

    std::vector<EvidenceRecord> all;
    for (const Dimension* d : {&one, &d22, &d32, &d23}) {
      all.insert(all.end(), d->evidence.begin(), d->evidence.end());
    }
    for (const Dimension* d : {&one, &d22, &d32}) {
      pp_evidence.insert(pp_evidence.end(), d->evidence.begin(), d->evidence.end());
    }
    const ResultsDB db = aggregate(all);
    bool ok = seconds < 120.0;
    std::ostringstream what;
    what << "blue bilby";
    const std::tuple<int, int, long, long, const Dimension*> expect[] = {
        {2, 2, 4, 6, &d22}, {3, 2, 6, 21, &d32}, {2, 3, 9, 38, &d23}};
    for (const auto& [n, m, bb, ff, dim] : expect) {
      const DimensionResults* r = db.find(n, m);
      ok = ok && r && r->holdouts == 0 && r->bb == bb && r->ff == ff;
      what << " " << n << "x" << m << ": machines=" << dim->enumeration.machines.size();
      if (r) {
        what << " holdouts=" << r->holdouts << " bb=" << to_decimal(r->bb)
             << " ff=" << to_decimal(r->ff);
      }
      what << " [enumeration exclusions " << exclusion_counts(dim->enumeration.summary) << "]";
      what << ";";
    }
    const DimensionResults* r32 = db.find(3, 2);
    bool differ = r32 && !r32->bb_champions.empty() && !r32->ff_champions.empty();
    if (differ) {
      for (const auto* b : r32->bb_champions) {
        for (const auto* f : r32->ff_champions) differ = differ && b->machine != f->machine;
      }
      what << " 3x2 bb champion " << r32->bb_champions.front()->machine << " vs ff champion "
           << r32->ff_champions.front()->machine << ";";
    }
    ok = ok && differ;
    char t[64];
    std::snprintf(t, sizeof t, " %.1f s (limit 120 s)", seconds);
    report(1, ok, what.str() + t);
  }

  // 2: ebony elephant at 4x2 with a 10^4-hop budget
  {
    const auto start = Clock::now();
    ClassifyOptions budget = classify;
    budget.max_hops = BigInt(10'000);
    const Dimension d42 = enumerate_and_classify(4, 2, budget);
    const double seconds = since(start);
    const ResultsDB db = aggregate(d42.evidence);
    const DimensionResults* r = db.find(4, 2);
    bool ok = r && r->bb == 13 && r->ff == 107 && seconds < 1800.0;
    bool champion_pair = false;
    if (r) {
      for (const auto* c : r->bb_champions) champion_pair |= c->hops == 107;
    }
    ok = ok && champion_pair;
    // a non-termination verdict on a machine that halts would hide a candidate
    std::size_t wrong_verdicts = 0;
    for (const EvidenceRecord& e : d42.evidence) {
      if (e.status != EvidenceStatus::kNonTerminating) continue;
      if (naive_run(parse_machine(e.machine), BigInt(100'000)).status == RunStatus::kHalted) {
        ++wrong_verdicts;
      }
    }
    ok = ok && wrong_verdicts == 0;
    std::ostringstream what;
    what << "4x2 tree normal form: machines=" << d42.enumeration.machines.size()
         << " (reference count 603712 under other conventions, not asserted)";
    if (r) {
      what << " halted=" << r->halted << " nonterminating=" << r->nonterminating
           << " holdouts=" << r->holdouts << " bb=" << to_decimal(r->bb)
           << " ff=" << to_decimal(r->ff) << " 13-ones/107-hops machine "
           << (champion_pair ? "found" : "missing");
    }
    what << " non-termination verdicts refuted by naive run=" << wrong_verdicts;
    what << " [enumeration exclusions " << exclusion_counts(d42.enumeration.summary) << "]";
    char t[64];
    std::snprintf(t, sizeof t, " %.1f s (limit 1800 s)", seconds);
    report(2, ok, what.str() + t);
    pp_evidence.insert(pp_evidence.end(), d42.evidence.begin(), d42.evidence.end());
  }

  // 3: placid platypus from the evidence above
  {
    const auto pp = pp_table(aggregate(pp_evidence), 2, 14);
    const char* expected[] = {"1", "2", "2", "2", "3", "3", "4", "4", "4", "4", "4", "4", "4",
                              "\xE2\x89\xA5 5"};
    bool ok = pp.size() == 14;
    std::ostringstream what;
    what << "pp(k,2) k=1..14:";
    for (std::size_t i = 0; i < pp.size(); ++i) {
      what << " " << pp[i].text;
      ok = ok && pp[i].text == expected[i];
    }
    report(3, ok, what.str());
  }

  // 4: otter worked example
  {
    HistoryBuffer history;
    history.record(BigInt(12393), shape_of(worked_config(1, 66)));
    history.record(BigInt(12480), shape_of(worked_config(6, 63)));
    const MacroConfig current = worked_config(11, 60);
    const MatchScan scan = find_match(history, BigInt(12657), shape_of(current));
    bool ok = scan.match.has_value();
    std::ostringstream what;
    what << "otter worked example:";
    if (ok) {
      const OtterMatch& m = *scan.match;
      const ShapedConfig after = shape_of(apply_jump(current, m));
      ok = m.m == 19 && m.predicted_hop == 33120 && after.exponents.size() == 4 &&
           after.exponents[1] == 106 && after.exponents[2] == 3;
      what << " m=" << to_decimal(m.m) << " hop=" << to_decimal(m.predicted_hop)
           << " exponents=(" << to_decimal(after.exponents[1]) << ","
           << to_decimal(after.exponents[2]) << ")";
    } else {
      what << " no match";
    }
    report(4, ok, what.str());
  }

  // 5: the 5x2 champion
  {
    const Machine champion = parse_machine("1RB1LC_1RC1RB_1RD0LE_1LA1LD_1RZ0LA");
    EngineParams p;
    p.block_size = 3;
    p.otter = true;
    p.window = 150;
    auto start = Clock::now();
    const RunResult on = run(champion, p);
    const double t_on = since(start);
    p.otter = false;
    start = Clock::now();
    const RunResult off = run(champion, p);
    const double t_off = since(start);
    const std::string pct = otter_percent(on.otter_hops, on.hops);
    const bool ok = on.status == RunStatus::kHalted && on.ones == 4098 && on.hops == 47176870 &&
                    on.steps <= 10'000 && std::stod(pct) >= 99.0 &&
                    off.status == RunStatus::kHalted && off.ones == on.ones &&
                    off.hops == on.hops && t_on < 10.0 && t_off < 10.0;
    std::ostringstream what;
    char t[128];
    std::snprintf(t, sizeof t, " time %.2f s / %.2f s (limit 10 s each)", t_on, t_off);
    what << "5x2 champion k=3 W=150: ones=" << to_decimal(on.ones) << " hops=" << to_decimal(on.hops)
         << " steps=" << on.steps << " otters=" << on.otters << " OtterPct=" << pct
         << "; otter off: ones=" << to_decimal(off.ones) << " hops=" << to_decimal(off.hops)
         << " steps=" << off.steps << t;
    report(5, ok, what.str());
  }

  // 6: oracle equivalence over every halting 2x2 and 2x3 machine
  {
    const auto start = Clock::now();
    std::size_t compared = 0, mismatches = 0;
    for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}}) {
      EnumerationOptions o;
      o.states = n;
      o.symbols = m;
      for (const Machine& machine : enumerate_to_vector(o).machines) {
        const RunResult ref = naive_run(machine, BigInt(10'000));
        if (ref.status != RunStatus::kHalted) continue;
        ++compared;
        for (int k = 1; k <= 3; ++k) {
          for (bool otter : {false, true}) {
            EngineParams p;
            p.block_size = k;
            p.otter = otter;
            p.verify = otter;
            const RunResult r = run(machine, p);
            if (r.status != RunStatus::kHalted || r.ones != ref.ones || r.hops != ref.hops) {
              ++mismatches;
              std::cerr << "mismatch " << format_machine(machine) << " k=" << k
                        << " otter=" << otter << '\n';
            }
          }
        }
      }
    }
    const double seconds = since(start);
    std::ostringstream what;
    char t[64];
    std::snprintf(t, sizeof t, " %.1f s (limit 600 s)", seconds);
    what << "oracle equivalence: " << compared << " halting machines x 6 engine settings, "
         << mismatches << " mismatches" << t;
    report(6, mismatches == 0 && compared > 0 && seconds < 600.0, what.str());
  }

  // 7: formula properties
  {
    std::mt19937_64 rng(0x0773);
    std::size_t linear_bad = 0, range_bad = 0;
    for (int i = 0; i < 10'000; ++i) {
      const BigInt h3 = random_big(rng, 50);
      const BigInt d = random_big(rng, 50) + 1;
      const BigInt m = random_big(rng, 50);
      const auto p = predict_hop(h3, h3 + d, h3 + 2 * d, m);
      if (!p || *p != h3 + 2 * d + m * d) ++linear_bad;

      const BigInt y1 = random_big(rng, 50) + 1;
      const BigInt a = random_big(rng, 1 + static_cast<int>(rng() % 50)) + 1;
      const BigInt last = y1 - occurrences_after(y1, a) * a;
      if (last < 1 || last > a) ++range_bad;
    }
    std::ostringstream what;
    what << "formula properties: linear reduction failures " << linear_bad
         << "/10000, regressor range failures " << range_bad << "/10000";
    report(7, linear_bad == 0 && range_bad == 0, what.str());
  }

  // 8: corpus pins in place of the unreproducible table columns
  {
    const auto corpus = cli::read_corpus_file(OTTERBENCH_SOURCE_DIR "/corpus/dragons.tsv");
    std::size_t pinned = 0, matched = 0, pending = 0;
    std::ostringstream detail;
    for (const auto& e : corpus) {
      if (e.definition_pending) {
        ++pending;
        continue;
      }
      if (!e.ones && !e.hops && !e.ones_digits && !e.hops_digits) continue;
      ++pinned;
      EngineParams p;
      p.block_size = e.k.value_or(0);
      p.otter = true;
      const auto start = Clock::now();
      const RunResult r = run(parse_machine(e.machine), p);
      const double seconds = since(start);
      bool ok = r.status == RunStatus::kHalted;
      if (e.ones) ok = ok && r.ones == *e.ones;
      if (e.hops) ok = ok && r.hops == *e.hops;
      if (e.ones_digits) ok = ok && static_cast<int>(decimal_digits(r.ones)) == *e.ones_digits;
      if (e.hops_digits) ok = ok && static_cast<int>(decimal_digits(r.hops)) == *e.hops_digits;
      matched += ok;
      char t[48];
      std::snprintf(t, sizeof t, "%.1fs", seconds);
      detail << " #" << e.id << (ok ? " ok" : " MISMATCH") << "(" << t << ")";
    }
    std::ostringstream what;
    what << "corpus pins: " << matched << "/" << pinned << " entries match exactly;" << detail.str()
         << "; " << pending
         << " entries definition-pending; Steps/Otters/Time columns and dimension-12 runs are "
            "reported, not asserted";
    report(8, pinned > 0 && matched == pinned, what.str());
  }

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
