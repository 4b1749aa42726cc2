#include "otterbench/cli.h"

#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "otterbench/classifier.h"
#include "otterbench/engine.h"
#include "otterbench/enumerator.h"
#include "otterbench/machine.h"

namespace otterbench::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// A machine-line, or a file whose first non-comment line is one.
Machine load_machine(const std::string& spec) {
  std::ifstream in(spec);
  if (in) {
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      return parse_machine(line);
    }
    throw ParseError("no machine in file " + spec);
  }
  return parse_machine(spec);
}

std::optional<BigInt> parse_optional_big(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  BigInt v = parse_decimal(*text);
  if (v < 0) throw std::invalid_argument("budget must be non-negative");
  return v;
}

int exit_code(RunStatus status) {
  if (status == RunStatus::kHalted) return kExitHalted;
  if (is_nonterminating(status)) return kExitNonTerminating;
  return kExitBudget;
}

void print_summary(std::ostream& out, const RunResult& r, double seconds) {
  out << "Status\t" << to_string(r.status) << '\n'
      << "Ones\t" << to_decimal(r.ones) << '\n'
      << "Hops\t" << to_decimal(r.hops) << '\n'
      << "Steps\t" << r.steps << '\n'
      << "Otters\t" << r.otters << '\n'
      << "OtterSteps\t" << to_decimal(r.otter_hops) << '\n'
      << "OtterPct\t" << otter_percent(r.otter_hops, r.hops) << '\n'
      << "Time\t" << format_seconds(seconds) << '\n'
      << "K\t" << r.params.block_size << '\n';
  if (!r.witness.empty()) out << "Witness\t" << r.witness << '\n';
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, '\t')) out.push_back(trim(field));
  return out;
}

bool absent(const std::string& s) { return s.empty() || s == "-"; }

}  // namespace

int parse_block_size(const std::string& text) {
  if (text == "auto") return 0;
  std::size_t used = 0;
  int k = 0;
  try {
    k = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || k < 1 || k > kMaxBlockSize) {
    throw std::invalid_argument("block size must be auto or 1.." + std::to_string(kMaxBlockSize) +
                                ": " + text);
  }
  return k;
}

// ------------------------------------------------------------------------ run

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const Machine machine = load_machine(o.machine);
    const std::optional<BigInt> max_hops = parse_optional_big(o.max_hops);
    const auto start = Clock::now();
    RunResult result;
    if (o.engine == "naive") {
      result = naive_run(machine, max_hops ? *max_hops : from_u64(o.max_steps));
    } else if (o.engine == "macro") {
      EngineParams p;
      p.block_size = parse_block_size(o.k);
      p.otter = o.otter || o.verify;
      p.verify = o.verify;
      p.window = o.window;
      p.max_steps = o.max_steps;
      p.max_hops = max_hops;
      TraceSink trace;
      if (o.trace) {
        trace = [&err](const BigInt& hop, StepKind kind, const MacroConfig& c) {
          err << to_decimal(hop) << ' ' << to_string(kind) << ' ' << render(c) << '\n';
        };
      }
      NonTermDetector detector;
      result = run(machine, p, &detector, trace);
    } else {
      err << "error: unknown engine " << o.engine << " (naive|macro)\n";
      return kExitError;
    }
    print_summary(out, result, seconds_since(start));
    return exit_code(result.status);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

// ------------------------------------------------------------------ enumerate

int cmd_enumerate(const EnumerateOptions& o, std::ostream& out, std::ostream& err) {
  try {
    EnumerationOptions e;
    e.states = o.states;
    e.symbols = o.symbols;
    e.mode = parse_generation_mode(o.mode);
    e.max_hops = o.max_hops;
    e.max_cells = o.max_cells;
    validate(e);

    std::ofstream list_file, excl_file;
    std::ostream* list = &out;
    if (!o.out.empty()) {
      list_file.open(o.out);
      if (!list_file) throw std::runtime_error("cannot write " + o.out);
      list = &list_file;
    }
    std::ostream* excl = nullptr;
    if (!o.exclusions.empty()) {
      excl_file.open(o.exclusions);
      if (!excl_file) throw std::runtime_error("cannot write " + o.exclusions);
      excl = &excl_file;
    }
    *list << format_list_header(e) << '\n';
    StreamSink sink(*list, excl);
    const EnumerationSummary s = enumerate(e, sink);
    std::ostream& report = o.out.empty() ? err : out;
    report << "machines\t" << s.emitted << '\n';
    for (const auto& [rule, count] : s.exclusions) report << to_string(rule) << '\t' << count << '\n';
    if (!s.completed) {
      err << "error: output failed; resume from index " << s.cursor << '\n';
      return kExitError;
    }
    return kExitOk;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitError;
  }
}

// ------------------------------------------------------------------- classify

int cmd_classify(const ClassifyCliOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<Machine> machines = read_machine_list_file(o.in);
    ClassifyOptions c;
    c.block_size = parse_block_size(o.k);
    c.otter = o.otter || o.verify;
    c.verify = o.verify;
    c.window = o.window;
    c.max_steps = o.max_steps;
    c.max_hops = parse_optional_big(o.max_hops);
    c.threads = std::max(1u, o.parallel);

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.out.empty()) {
      if (o.resume) {
        // Records already present are kept; continue after the last one.
        std::ifstream existing(o.out);
        if (existing) {
          const auto done = read_evidence(existing);
          if (!done.empty()) c.resume_from = done.back().machine_index + 1;
        }
        file.open(o.out, std::ios::app);
      } else {
        file.open(o.out);
      }
      if (!file) throw std::runtime_error("cannot write " + o.out);
      sink = &file;
    }
    const auto start = Clock::now();
    const ClassifySummary s = classify_batch(machines, c, *sink);
    std::ostream& report = o.out.empty() ? err : out;
    report << "machines\t" << machines.size() << '\n'
           << "classified\t" << s.total() << '\n'
           << "halted\t" << s.halted << '\n'
           << "nonterminating\t" << s.nonterminating << '\n'
           << "holdouts\t" << s.holdouts << '\n'
           << "faults\t" << s.faults << '\n'
           << "time\t" << format_seconds(seconds_since(start)) << '\n';
    if (!o.out.empty()) {
      file.close();
      report << "digest\t" << canonical_digest(read_evidence_file(o.out)) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

// ---------------------------------------------------------------------- bench

std::vector<CorpusEntry> read_corpus(std::istream& in) {
  std::vector<CorpusEntry> out;
  std::string line;
  std::map<std::string, std::size_t> col;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const auto f = split_tabs(line);
    if (col.empty()) {
      for (std::size_t i = 0; i < f.size(); ++i) col[f[i]] = i;
      for (const char* need : {"id", "states", "symbols", "machine"}) {
        if (!col.count(need)) throw std::invalid_argument(std::string("corpus header lacks ") + need);
      }
      continue;
    }
    auto get = [&](const char* name) -> std::string {
      auto it = col.find(name);
      return it == col.end() || it->second >= f.size() ? std::string() : f[it->second];
    };
    try {
      CorpusEntry e;
      e.id = std::stoi(get("id"));
      e.states = std::stoi(get("states"));
      e.symbols = std::stoi(get("symbols"));
      e.definition_pending = get("flags").find("definition-pending") != std::string::npos;
      if (!absent(get("machine"))) e.machine = get("machine");
      if (e.machine.empty()) e.definition_pending = true;
      if (!absent(get("k"))) e.k = parse_block_size(get("k"));
      if (!absent(get("ones"))) e.ones = parse_decimal(get("ones"));
      if (!absent(get("hops"))) e.hops = parse_decimal(get("hops"));
      if (!absent(get("ones_digits"))) e.ones_digits = std::stoi(get("ones_digits"));
      if (!absent(get("hops_digits"))) e.hops_digits = std::stoi(get("hops_digits"));
      e.note = get("note");
      if (!e.definition_pending) {
        const Machine m = parse_machine(e.machine);
        if (m.states() != e.states || m.symbols() != e.symbols) {
          throw std::invalid_argument("dimension does not match the machine");
        }
      }
      out.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw std::invalid_argument("corpus line " + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return out;
}

std::vector<CorpusEntry> read_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  return read_corpus(in);
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<CorpusEntry> corpus = read_corpus_file(o.corpus);
    std::ofstream file;
    std::ostream* table = &out;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) throw std::runtime_error("cannot write " + o.out);
      table = &file;
    }
    *table << "No.\tDim.\tK\tOnes\tHops1\tTime1\tSteps\tOtters\tOtterSteps\tOtterPct\tStatus1"
              "\tHops2\tTime2\tStatus2\tHops3\tTime3\tStatus3\tOvershoot3\tCheck\n";
    std::vector<std::string> failures;
    for (const CorpusEntry& e : corpus) {
      if (!o.ids.empty() && std::find(o.ids.begin(), o.ids.end(), e.id) == o.ids.end()) continue;
      if (e.definition_pending) {
        err << "warning: entry " << e.id << " skipped (definition pending)\n";
        continue;
      }
      const Machine machine = parse_machine(e.machine);
      EngineParams p;
      p.block_size = e.k.value_or(0);
      p.otter = true;
      p.window = o.window;
      p.max_steps = o.max_steps;

      auto start = Clock::now();
      const RunResult r1 = run(machine, p);
      const double t1 = seconds_since(start);

      EngineParams off = p;
      off.block_size = r1.params.block_size;
      off.otter = false;
      off.max_steps = o.baseline_steps;
      start = Clock::now();
      const RunResult r2 = run(machine, off);
      const double t2 = seconds_since(start);

      // Bounded leg: stops once the hop count is known to exceed the baseline.
      EngineParams bounded = p;
      bounded.block_size = r1.params.block_size;
      bounded.max_hops = r2.hops;
      start = Clock::now();
      const RunResult r3 = run(machine, bounded);
      const double t3 = seconds_since(start);
      const BigInt overshoot = r3.hops > r2.hops ? BigInt(r3.hops - r2.hops) : BigInt(0);

      std::string check = "report-only";
      if (e.ones || e.hops || e.ones_digits || e.hops_digits) {
        std::vector<std::string> problems;
        auto digits = [](const BigInt& v) { return static_cast<int>(to_decimal(v).size()); };
        if (r1.status != RunStatus::kHalted) problems.push_back("otter leg did not halt");
        if (e.ones && r1.ones != *e.ones) problems.push_back("ones " + to_decimal(r1.ones));
        if (e.hops && r1.hops != *e.hops) problems.push_back("hops " + to_decimal(r1.hops));
        if (e.ones_digits && digits(r1.ones) != *e.ones_digits) {
          problems.push_back("ones digits " + std::to_string(digits(r1.ones)));
        }
        if (e.hops_digits && digits(r1.hops) != *e.hops_digits) {
          problems.push_back("hops digits " + std::to_string(digits(r1.hops)));
        }
        if (r2.status == RunStatus::kHalted) {
          if (e.ones && r2.ones != *e.ones) problems.push_back("baseline ones " + to_decimal(r2.ones));
          if (e.hops && r2.hops != *e.hops) problems.push_back("baseline hops " + to_decimal(r2.hops));
        }
        if (problems.empty()) {
          check = "ok";
        } else {
          check = "MISMATCH";
          std::string msg = "entry " + std::to_string(e.id) + ":";
          for (const auto& pr : problems) msg += " " + pr;
          failures.push_back(msg);
        }
      }
      *table << e.id << '\t' << e.states << 'x' << e.symbols << '\t' << r1.params.block_size << '\t'
             << to_decimal(r1.ones) << '\t' << to_decimal(r1.hops) << '\t' << format_seconds(t1)
             << '\t' << r1.steps << '\t' << r1.otters << '\t' << to_decimal(r1.otter_hops) << '\t'
             << otter_percent(r1.otter_hops, r1.hops) << '\t' << to_string(r1.status) << '\t'
             << to_decimal(r2.hops) << '\t' << format_seconds(t2) << '\t' << to_string(r2.status)
             << '\t' << to_decimal(r3.hops) << '\t' << format_seconds(t3) << '\t'
             << to_string(r3.status) << '\t' << to_decimal(overshoot) << '\t' << check << '\n';
      err << "entry " << e.id << ": " << to_string(r1.status) << " ones " << to_decimal(r1.ones)
          << " (" << format_seconds(t1 + t2 + t3) << " s)\n";
    }
    for (const auto& f : failures) err << "mismatch: " << f << '\n';
    return failures.empty() ? kExitOk : kExitMismatch;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitError;
  }
}

// ------------------------------------------------------------------ aggregate

int cmd_aggregate(const AggregateOptions& o, std::ostream& out, std::ostream& err) {
  try {
    std::vector<EvidenceRecord> records;
    for (const auto& path : o.evidence) {
      auto part = read_evidence_file(path);
      records.insert(records.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
    }
    const ResultsDB db = aggregate(std::move(records));
    nlohmann::ordered_json j;
    j["empty"] = db.empty;
    j["dimensions"] = nlohmann::ordered_json::array();
    if (db.empty) {
      out << "empty\ttrue\n";
      err << "warning: no evidence records\n";
    } else {
      out << "Dim.\tRecords\tHalted\tNonTerm\tHoldouts\tbb\tff\tContig\tHopsPerOnes2"
             "\tWastrels\tbbChampion\tffChampion\n";
    }
    for (const auto& [dim, d] : db.dimensions) {
      const std::string bb_machine = d.bb_champions.empty() ? "-" : d.bb_champions.front()->machine;
      const std::string ff_machine = d.ff_champions.empty() ? "-" : d.ff_champions.front()->machine;
      char ratio[32];
      std::snprintf(ratio, sizeof ratio, "%.3f", d.bb_square_ratio);
      out << d.states << 'x' << d.symbols << '\t' << d.records << '\t' << d.halted << '\t'
          << d.nonterminating << '\t' << d.holdouts << '\t' << to_decimal(d.bb) << '\t'
          << to_decimal(d.ff) << '\t' << to_decimal(d.max_contiguous) << '\t' << ratio << '\t'
          << d.wastrels.size() << '\t' << bb_machine << '\t' << ff_machine << '\n';
      nlohmann::ordered_json dj;
      dj["states"] = d.states;
      dj["symbols"] = d.symbols;
      dj["records"] = d.records;
      dj["halted"] = d.halted;
      dj["nonterminating"] = d.nonterminating;
      dj["holdouts"] = d.holdouts;
      dj["bb"] = to_decimal(d.bb);
      dj["ff"] = to_decimal(d.ff);
      dj["max_contiguous_ones"] = to_decimal(d.max_contiguous);
      dj["hops_per_ones_squared"] = d.bb_square_ratio;
      auto list = [](const std::vector<const EvidenceRecord*>& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto* r : v) a.push_back({{"machine_index", r->machine_index}, {"machine", r->machine}});
        return a;
      };
      dj["bb_champions"] = list(d.bb_champions);
      dj["ff_champions"] = list(d.ff_champions);
      dj["wastrels"] = list(d.wastrels);
      nlohmann::ordered_json hist = nlohmann::ordered_json::object();
      for (const auto& [ones, count] : d.histogram) hist[to_decimal(ones)] = count;
      dj["histogram"] = hist;
      j["dimensions"].push_back(dj);
    }
    if (o.pp && !db.empty) {
      std::map<int, std::uint64_t> symbols;  // m -> highest halted productivity
      for (const auto& [dim, d] : db.dimensions) {
        std::uint64_t top = d.bb.fits_ulong_p() ? d.bb.get_ui() : 0;
        symbols[dim.second] = std::max(symbols[dim.second], top);
      }
      j["pp"] = nlohmann::ordered_json::object();
      for (const auto& [m, top] : symbols) {
        const std::uint64_t k_max = o.pp_max.value_or(top + 1);
        const auto table = pp_table(db, m, k_max);
        out << "pp(k," << m << ")";
        for (const auto& e : table) out << '\t' << e.text;
        out << '\n';
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (const auto& e : table) row.push_back(e.text);
        j["pp"][std::to_string(m)] = row;
      }
    }
    if (!o.out.empty()) {
      std::ofstream file(o.out);
      if (!file) throw std::runtime_error("cannot write " + o.out);
      file << j.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace otterbench::cli
