#include "otterbench/classifier.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace otterbench {

using json = nlohmann::ordered_json;

// ------------------------------------------------------------------ detectors

void NonTermDetector::reset() {
  seen_.clear();
  order_.clear();
  visits_.clear();
  witness_.clear();
}

namespace {

// Exact serialization of a configuration; empty when it is too large to check.
std::string config_key(const MacroConfig& c, std::uint64_t max_cells) {
  std::uint64_t cells = 0;
  std::string key;
  key.push_back(static_cast<char>(c.state));
  key.push_back(static_cast<char>(c.facing));
  for (const SegmentStack* side : {&c.left, &c.right}) {
    key.push_back('|');
    for (std::size_t i = 0; i < side->size(); ++i) {
      const Segment& seg = side->outermost(i);
      if (!seg.exponent.fits_ulong_p()) return {};
      const unsigned long e = seg.exponent.get_ui();
      cells += static_cast<std::uint64_t>(e) * static_cast<std::uint64_t>(c.block_size);
      if (cells > max_cells) return {};
      const std::uint64_t packed = seg.block.packed();
      key.append(reinterpret_cast<const char*>(&packed), sizeof(packed));
      key.append(reinterpret_cast<const char*>(&e), sizeof(e));
    }
  }
  return key;
}

constexpr std::uint64_t kUncountable = UINT64_MAX;

std::uint64_t side_cells(const SegmentStack& side, int k) {
  std::uint64_t cells = 0;
  for (std::size_t i = 0; i < side.size(); ++i) {
    const BigInt& e = side.nearest(i).exponent;
    if (!e.fits_ulong_p() || e.get_ui() > (1ul << 40)) return kUncountable;
    cells += e.get_ui() * static_cast<std::uint64_t>(k);
  }
  return cells;
}

// Up to `limit` cells of one side, nearest to the head first.
std::vector<Symbol> near_cells(const SegmentStack& side, Side which, int k, std::size_t limit) {
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < side.size() && out.size() < limit; ++i) {
    const Segment& seg = side.nearest(i);
    const unsigned long reps = seg.exponent.fits_ulong_p() ? seg.exponent.get_ui() : ~0ul;
    for (unsigned long r = 0; r < reps && out.size() < limit; ++r) {
      for (int c = 0; c < k && out.size() < limit; ++c) {
        // The left side's nearest cell is the last cell of its block.
        out.push_back(seg.block[which == Side::kLeft ? k - 1 - c : c]);
      }
    }
  }
  return out;
}

}  // namespace

std::optional<RunStatus> NonTermDetector::check_repeat(const MacroConfig& config,
                                                       const BigInt& hops) {
  std::string key = config_key(config, max_cells_);
  if (key.empty()) return std::nullopt;
  if (seen_.count(key)) {
    witness_ = render(config) + " recurs at hop " + to_decimal(hops);
    return RunStatus::kRepeatNonTerm;
  }
  if (memory_ == 0) return std::nullopt;
  if (order_.size() == memory_) {
    seen_.erase(order_.front());
    order_.pop_front();
  }
  seen_.insert(key);
  order_.push_back(std::move(key));
  return std::nullopt;
}

// Between two visits to the blank edge in the same state, the head touched
// only the nearest D cells behind it. If those D cells are the same at both
// visits, the second visit replays the first one shifted along the tape.
// The shift must point away from the far end; a head drifting back toward
// older cells would read tape the first visit never saw.
std::optional<RunStatus> NonTermDetector::check_runaway(const MacroConfig& config,
                                                        const BigInt& hops) {
  const int k = config.block_size;
  const std::uint64_t cells[2] = {side_cells(config.left, k), side_cells(config.right, k)};
  if (cells[0] == kUncountable || cells[1] == kUncountable) {
    visits_.clear();
    return std::nullopt;
  }
  // Untouched cells per side: the block about to be read counts as touched.
  std::uint64_t untouched[2] = {cells[0], cells[1]};
  const int ahead = static_cast<int>(config.facing);
  untouched[ahead] = untouched[ahead] >= static_cast<std::uint64_t>(k) ? untouched[ahead] - k : 0;
  for (auto& [key, visit] : visits_) {
    const int behind = 1 - key.first;
    visit.min_behind = std::min(visit.min_behind, untouched[behind]);
  }
  if (!config.side(config.facing).empty()) return std::nullopt;

  const Side behind_side = other(config.facing);
  const int behind = static_cast<int>(behind_side);
  const auto key = std::make_pair(ahead, static_cast<int>(config.state));
  std::vector<Symbol> near = near_cells(config.side(behind_side), behind_side, k, max_cells_);
  auto it = visits_.find(key);
  if (it != visits_.end()) {
    const EdgeVisit& prev = it->second;
    const std::uint64_t depth = prev.behind_cells - prev.min_behind;
    // min_behind == 0: the head may have run off the far end into blank cells.
    if (prev.min_behind > 0 && cells[behind] >= prev.behind_cells && depth <= prev.near.size() && depth <= near.size() &&
        std::equal(prev.near.begin(), prev.near.begin() + static_cast<std::ptrdiff_t>(depth),
                   near.begin())) {
      witness_ = render(config) + " state " + state_letter(config.state) + " at the blank " +
                 (config.facing == Side::kRight ? "right" : "left") + " edge repeats hop " +
                 to_decimal(prev.hops) + " with the same " + std::to_string(depth) +
                 " cells behind";
      return RunStatus::kBlankRunawayNonTerm;
    }
  }
  EdgeVisit& v = visits_[key];
  v.hops = hops;
  v.behind_cells = cells[behind];
  v.min_behind = cells[behind];
  v.near = std::move(near);
  return std::nullopt;
}

std::optional<RunStatus> NonTermDetector::observe(const MacroConfig& config, const BigInt& hops,
                                                  std::uint64_t, StepKind kind) {
  if (kind == StepKind::kOtter) {
    // Jumps skip the cells in between; start over.
    visits_.clear();
  } else if (auto r = check_runaway(config, hops)) {
    return r;
  }
  return check_repeat(config, hops);
}

// ------------------------------------------------------------------- evidence

const char* to_string(EvidenceStatus status) {
  switch (status) {
    case EvidenceStatus::kHalted: return "halted";
    case EvidenceStatus::kNonTerminating: return "nonterminating";
    case EvidenceStatus::kHoldout: return "holdout";
  }
  return "?";
}

namespace {

EvidenceStatus parse_status(const std::string& s) {
  if (s == "halted") return EvidenceStatus::kHalted;
  if (s == "nonterminating") return EvidenceStatus::kNonTerminating;
  if (s == "holdout") return EvidenceStatus::kHoldout;
  throw std::invalid_argument("unknown evidence status: " + s);
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string clip(std::string text) {
  if (text.size() <= kMaxRenderedConfig) return text;
  return digest_text(text);
}

}  // namespace

std::string digest_text(std::string_view text) {
  return "digest:fnv1a64:" + hex64(fnv1a(text)) + ":chars=" + std::to_string(text.size());
}

std::string to_json_line(const EvidenceRecord& r, bool with_wall_seconds) {
  json j;
  j["machine_index"] = r.machine_index;
  j["machine"] = r.machine;
  j["status"] = to_string(r.status);
  j["reason"] = r.reason;
  j["ones"] = to_decimal(r.ones);
  j["hops"] = to_decimal(r.hops);
  j["contiguous_ones"] = r.contiguous_ones ? json(to_decimal(*r.contiguous_ones)) : json(nullptr);
  j["steps"] = r.steps;
  j["otters"] = r.otters;
  j["otter_hops"] = to_decimal(r.otter_hops);
  j["k"] = r.k;
  j["window"] = r.window;
  j["verified"] = r.verified;
  if (with_wall_seconds) j["wall_seconds"] = r.wall_seconds;
  j["final_config"] = r.final_config;
  return j.dump();
}

EvidenceRecord parse_evidence_line(std::string_view line) {
  EvidenceRecord r;
  try {
    const json j = json::parse(line);
    r.machine_index = j.at("machine_index").get<std::uint64_t>();
    r.machine = j.at("machine").get<std::string>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.reason = j.at("reason").get<std::string>();
    r.ones = parse_decimal(j.at("ones").get<std::string>());
    r.hops = parse_decimal(j.at("hops").get<std::string>());
    if (!j.at("contiguous_ones").is_null()) {
      r.contiguous_ones = parse_decimal(j.at("contiguous_ones").get<std::string>());
    }
    r.steps = j.at("steps").get<std::uint64_t>();
    r.otters = j.at("otters").get<std::uint64_t>();
    r.otter_hops = parse_decimal(j.at("otter_hops").get<std::string>());
    r.k = j.at("k").get<int>();
    r.window = j.at("window").get<int>();
    r.verified = j.at("verified").get<bool>();
    r.wall_seconds = j.value("wall_seconds", 0.0);
    r.final_config = j.at("final_config").get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed evidence record: ") + e.what());
  }
  return r;
}

std::vector<EvidenceRecord> read_evidence(std::istream& in) {
  std::vector<EvidenceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_evidence_line(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("evidence line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<EvidenceRecord> read_evidence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open evidence file: " + path);
  return read_evidence(in);
}

std::string canonical_digest(const std::vector<EvidenceRecord>& records) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& r : records) {
    h = fnv1a(to_json_line(r, false), h);
    h = fnv1a("\n", h);
  }
  return hex64(h);
}

// ------------------------------------------------------------- classification

EvidenceRecord classify_machine(std::uint64_t index, const Machine& machine,
                                const ClassifyOptions& options) {
  EvidenceRecord r;
  r.machine_index = index;
  r.machine = format_machine(machine);
  r.window = options.otter ? options.window : 0;
  r.verified = options.otter && options.verify;
  r.k = options.block_size;
  const auto start = std::chrono::steady_clock::now();
  try {
    EngineParams p;
    p.block_size = options.block_size;
    p.otter = options.otter;
    p.window = options.window;
    p.verify = options.verify;
    p.max_steps = options.max_steps;
    p.max_hops = options.max_hops;
    NonTermDetector detector;
    RunResult result = run(machine, p, &detector);
    r.k = result.params.block_size;
    r.ones = result.ones;
    r.hops = result.hops;
    r.steps = result.steps;
    r.otters = result.otters;
    r.otter_hops = result.otter_hops;
    switch (result.status) {
      case RunStatus::kHalted:
        r.status = EvidenceStatus::kHalted;
        r.reason = result.halted_via_undefined ? "undefined" : "explicit";
        r.contiguous_ones = contiguous_ones(result.final_config);
        r.final_config = clip(render(result.final_config));
        break;
      case RunStatus::kInnerLoopNonTerm:
      case RunStatus::kRepeatNonTerm:
      case RunStatus::kBlankRunawayNonTerm:
        r.status = EvidenceStatus::kNonTerminating;
        r.reason = result.status == RunStatus::kInnerLoopNonTerm ? "InnerLoop"
                   : result.status == RunStatus::kRepeatNonTerm  ? "ExactConfigRepeat"
                                                                 : "BlankRunaway";
        r.final_config = clip(result.witness);
        break;
      case RunStatus::kBudgetExceeded: {
        r.status = EvidenceStatus::kHoldout;
        std::string reason = "budget: max_steps=" + std::to_string(options.max_steps);
        if (options.max_hops) reason += " max_hops=" + to_decimal(*options.max_hops);
        r.reason = reason;
        r.final_config = clip(render(result.final_config));
        break;
      }
    }
  } catch (const std::exception& e) {
    r.status = EvidenceStatus::kHoldout;
    r.reason = std::string("fault: ") + e.what();
    r.final_config.clear();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

void tally(ClassifySummary& s, const EvidenceRecord& r) {
  switch (r.status) {
    case EvidenceStatus::kHalted: ++s.halted; break;
    case EvidenceStatus::kNonTerminating: ++s.nonterminating; break;
    case EvidenceStatus::kHoldout:
      ++s.holdouts;
      if (r.reason.rfind("fault:", 0) == 0) ++s.faults;
      break;
  }
}

// Runs `work(i)` for i in [begin, end) on worker threads and hands results to
// `emit` in index order on the calling thread.
template <class Work, class Emit>
void ordered_parallel(std::uint64_t begin, std::uint64_t end, unsigned threads, Work work,
                      Emit emit) {
  if (threads <= 1 || end - begin < 2) {
    for (std::uint64_t i = begin; i < end; ++i) emit(work(i));
    return;
  }
  // Workers may run at most this far ahead of the writer.
  const std::uint64_t lookahead = 4096;
  std::mutex mu;
  std::condition_variable ready, room;
  std::map<std::uint64_t, EvidenceRecord> done;
  std::atomic<std::uint64_t> next{begin};
  std::uint64_t written = begin;
  auto worker = [&] {
    while (true) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= end) return;
      {
        std::unique_lock lock(mu);
        room.wait(lock, [&] { return i < written + lookahead; });
      }
      EvidenceRecord r = work(i);
      std::lock_guard lock(mu);
      done.emplace(i, std::move(r));
      ready.notify_one();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  while (written < end) {
    EvidenceRecord r;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return done.count(written) != 0; });
      auto it = done.find(written);
      r = std::move(it->second);
      done.erase(it);
      ++written;
    }
    room.notify_all();
    emit(std::move(r));
  }
  for (auto& t : pool) t.join();
}

}  // namespace

ClassifySummary classify_batch(const std::vector<Machine>& machines, const ClassifyOptions& options,
                               std::ostream& out) {
  ClassifySummary summary;
  ordered_parallel(
      std::min<std::uint64_t>(options.resume_from, machines.size()), machines.size(),
      options.threads, [&](std::uint64_t i) { return classify_machine(i, machines[i], options); },
      [&](EvidenceRecord r) {
        tally(summary, r);
        out << to_json_line(r) << '\n';
      });
  out.flush();
  return summary;
}

std::vector<EvidenceRecord> classify_all(const std::vector<Machine>& machines,
                                         const ClassifyOptions& options) {
  std::vector<EvidenceRecord> out;
  out.reserve(machines.size());
  ordered_parallel(
      std::min<std::uint64_t>(options.resume_from, machines.size()), machines.size(),
      options.threads, [&](std::uint64_t i) { return classify_machine(i, machines[i], options); },
      [&](EvidenceRecord r) { out.push_back(std::move(r)); });
  return out;
}

// ---------------------------------------------------------------- aggregation

bool is_wastrel(const BigInt& ones, const BigInt& hops) {
  // ones^2 < hops / 100, kept in integers
  return BigInt(ones * ones * 100) < hops;
}

const DimensionResults* ResultsDB::find(int states, int symbols) const {
  auto it = dimensions.find({states, symbols});
  return it == dimensions.end() ? nullptr : &it->second;
}

ResultsDB aggregate(std::vector<EvidenceRecord> records) {
  ResultsDB db;
  db.records = std::move(records);
  db.empty = db.records.empty();
  for (const EvidenceRecord& r : db.records) {
    const Machine m = parse_machine(r.machine);
    DimensionResults& d = db.dimensions[{m.states(), m.symbols()}];
    d.states = m.states();
    d.symbols = m.symbols();
    ++d.records;
    if (r.status == EvidenceStatus::kNonTerminating) ++d.nonterminating;
    if (r.status == EvidenceStatus::kHoldout) ++d.holdouts;
    if (r.status != EvidenceStatus::kHalted) continue;
    ++d.halted;
    ++d.histogram[r.ones];
    if (d.bb_champions.empty() || r.ones > d.bb) {
      d.bb = r.ones;
      d.bb_champions.clear();
    }
    if (r.ones == d.bb) d.bb_champions.push_back(&r);
    if (d.ff_champions.empty() || r.hops > d.ff) {
      d.ff = r.hops;
      d.ff_champions.clear();
    }
    if (r.hops == d.ff) d.ff_champions.push_back(&r);
    if (r.contiguous_ones && *r.contiguous_ones > d.max_contiguous) d.max_contiguous = *r.contiguous_ones;
    if (is_wastrel(r.ones, r.hops)) d.wastrels.push_back(&r);
  }
  for (auto& [dim, d] : db.dimensions) {
    if (!d.bb_champions.empty() && d.bb > 0) {
      const EvidenceRecord& c = *d.bb_champions.front();
      d.bb_square_ratio = c.hops.get_d() / (c.ones.get_d() * c.ones.get_d());
    }
  }
  return db;
}

std::vector<PpEntry> pp_table(const ResultsDB& db, int symbols, std::uint64_t k_max) {
  int max_states = 0;
  std::map<std::uint64_t, int> best;
  for (const auto& [dim, d] : db.dimensions) {
    if (dim.second != symbols) continue;
    max_states = std::max(max_states, dim.first);
  }
  for (const EvidenceRecord& r : db.records) {
    if (r.status != EvidenceStatus::kHalted || !r.ones.fits_ulong_p()) continue;
    const std::uint64_t k = r.ones.get_ui();
    if (k < 1 || k > k_max) continue;
    const Machine m = parse_machine(r.machine);
    if (m.symbols() != symbols) continue;
    auto it = best.find(k);
    if (it == best.end() || m.states() < it->second) best[k] = m.states();
  }
  std::vector<PpEntry> out;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    PpEntry e;
    e.k = k;
    if (auto it = best.find(k); it != best.end()) {
      e.states = it->second;
      e.text = std::to_string(it->second);
    } else {
      e.text = "\xE2\x89\xA5 " + std::to_string(max_states + 1);  // "≥ N+1"
    }
    out.push_back(std::move(e));
  }
  return out;
}

// ------------------------------------------------------------------- reports

std::string format_seconds(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", seconds);
  return buf;
}

std::string otter_percent(const BigInt& otter_hops, const BigInt& hops) {
  if (hops <= 0) return "0.00";
  // rounded half up to two decimals
  const BigInt basis_points = (otter_hops * 20000 + hops) / (2 * hops);
  const BigInt whole = basis_points / 100, frac = basis_points % 100;
  std::string f = to_decimal(frac);
  if (f.size() < 2) f.insert(0, "0");
  return to_decimal(whole) + "." + f;
}

std::string report_header() {
  return "No.\tDim.\tOnes\tHops\tSteps\tOtters\tOtterSteps\tOtterPct\tTime";
}

std::string report_row(const EvidenceRecord& r, std::uint64_t number) {
  const Machine m = parse_machine(r.machine);
  std::ostringstream s;
  s << number << '\t' << m.states() << 'x' << m.symbols() << '\t' << to_decimal(r.ones) << '\t'
    << to_decimal(r.hops) << '\t' << r.steps << '\t' << r.otters << '\t'
    << to_decimal(r.otter_hops) << '\t' << otter_percent(r.otter_hops, r.hops) << '\t'
    << format_seconds(r.wall_seconds);
  return s.str();
}

}  // namespace otterbench
