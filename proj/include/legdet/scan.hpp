#pragma once

// Batch driver over a prime range: one record per prime, written in
// ascending p whatever the number of workers, resumable from its own output.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "legdet/error.hpp"
#include "legdet/ntheory.hpp"
#include "legdet/verify.hpp"

namespace legdet::scan {

using json = nlohmann::ordered_json;
using verify::CheckId;

inline constexpr int kSchemaVersion = 1;

enum class Format { Jsonl, Csv };

struct CheckOutcome {
  CheckId id;
  bool passed = false;
  std::string note;  // compact witness, failures only
};

struct ScanRecord {
  std::uint64_t p = 0;
  PrimeInvariants invariants;
  std::vector<CheckOutcome> checks;  // catalog order
};

struct Failure {
  std::uint64_t p;
  CheckId id;
};

struct ScanSummary {
  std::uint64_t primes = 0;
  std::uint64_t resumed = 0;  // primes taken from an existing output file
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;  // (p, id) pairs outside the check's residue class
  std::vector<Failure> failures;

  bool only_conjecture_failures() const {
    for (const auto& f : failures)
      if (!verify::is_conjecture(f.id)) return false;
    return !failures.empty();
  }
};

struct ScanOptions {
  std::vector<CheckId> ids;
  std::uint64_t from = 3;
  std::uint64_t to = 3;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

class ResumeError : public std::runtime_error {
 public:
  ResumeError(std::size_t line, const std::string& why)
      : std::runtime_error("corrupt resume file at line " + std::to_string(line) + ": " + why), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// --- serialization ---------------------------------------------------------

inline json invariants_json(const PrimeInvariants& inv) {
  json j;
  j["c_p"] = inv.c_p ? json(*inv.c_p) : json(nullptr);
  j["d_p"] = inv.d_p;
  j["q_p_num"] = inv.q_p ? json(inv.q_p->get_num().get_str()) : json(nullptr);
  j["q_p_den"] = inv.q_p ? json(inv.q_p->get_den().get_str()) : json(nullptr);
  j["h_neg"] = inv.h_neg ? json(*inv.h_neg) : json(nullptr);
  j["sum_half"] = inv.sum_half;
  j["N"] = inv.pair_count;
  return j;
}

inline std::string to_jsonl(const ScanRecord& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["p"] = r.p;
  j["invariants"] = invariants_json(r.invariants);
  json checks = json::object();
  for (const auto& c : r.checks) {
    json entry{{"passed", c.passed}};
    if (!c.passed) entry["note"] = c.note;
    checks[std::string(verify::name(c.id))] = entry;
  }
  j["checks"] = checks;
  return j.dump();
}

inline constexpr const char* kCsvHeader = "p,check,passed,d_p";

inline std::string to_csv(const ScanRecord& r) {
  std::string out;
  for (const auto& c : r.checks) {
    out += std::to_string(r.p) + "," + std::string(verify::name(c.id)) + "," + (c.passed ? "true" : "false") +
           "," + std::to_string(r.invariants.d_p) + "\n";
  }
  return out;
}

// --- resume ----------------------------------------------------------------

/// What an existing output file already covers.
struct Existing {
  std::set<std::uint64_t> primes;
  std::vector<std::pair<std::uint64_t, CheckOutcome>> outcomes;
  bool has_header = false;  // csv
};

inline Existing read_jsonl(std::istream& in) {
  Existing ex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) throw ResumeError(lineno, "empty line");
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw ResumeError(lineno, "not valid JSON");
    }
    if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
      throw ResumeError(lineno, "missing or unsupported schema_version");
    if (!j.contains("p") || !j["p"].is_number_unsigned()) throw ResumeError(lineno, "missing p");
    if (!j.contains("checks") || !j["checks"].is_object()) throw ResumeError(lineno, "missing checks");
    const auto p = j["p"].get<std::uint64_t>();
    if (!ex.primes.empty() && p <= *ex.primes.rbegin()) throw ResumeError(lineno, "records not in ascending p");
    ex.primes.insert(p);
    for (const auto& [key, val] : j["checks"].items()) {
      const auto id = verify::parse_check_id(key);
      if (!id || !val.is_object() || !val.contains("passed") || !val["passed"].is_boolean())
        throw ResumeError(lineno, "bad check entry '" + key + "'");
      ex.outcomes.push_back({p, CheckOutcome{*id, val["passed"].get<bool>(), val.value("note", "")}});
    }
  }
  if (in.bad()) throw InternalError("read error on resume file");
  return ex;
}

inline Existing read_csv(std::istream& in) {
  Existing ex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kCsvHeader) throw ResumeError(lineno, "expected header '" + std::string(kCsvHeader) + "'");
      ex.has_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 4) throw ResumeError(lineno, "expected 4 fields");
    std::uint64_t p = 0;
    try {
      std::size_t used = 0;
      p = std::stoull(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument("p");
    } catch (const std::exception&) {
      throw ResumeError(lineno, "bad p");
    }
    const auto id = verify::parse_check_id(fields[1]);
    if (!id) throw ResumeError(lineno, "unknown check '" + fields[1] + "'");
    if (fields[2] != "true" && fields[2] != "false") throw ResumeError(lineno, "bad passed flag");
    if (!ex.primes.empty() && p < *ex.primes.rbegin()) throw ResumeError(lineno, "rows not in ascending p");
    ex.primes.insert(p);
    ex.outcomes.push_back({p, CheckOutcome{*id, fields[2] == "true", ""}});
  }
  if (in.bad()) throw InternalError("read error on resume file");
  return ex;
}

// --- driver ----------------------------------------------------------------

/// Seed for the random property checks when they run once per prime.
inline std::uint64_t per_prime_seed(std::uint64_t seed, std::uint64_t p) {
  return verify::detail::splitmix(seed ^ verify::detail::splitmix(p));
}

inline ScanRecord scan_prime(std::uint64_t p, const std::vector<CheckId>& ids, std::uint64_t seed) {
  ScanRecord rec;
  rec.p = p;
  rec.invariants = prime_invariants(p);
  for (CheckId id : ids) {
    if (!verify::applicable(id, p)) continue;
    const std::uint64_t s = verify::info(id).random ? per_prime_seed(seed, p) : seed;
    const verify::CheckResult r = verify::check(id, p, s);
    rec.checks.push_back({id, r.passed, r.passed ? std::string() : r.witness.dump()});
  }
  return rec;
}

inline std::vector<std::uint64_t> primes_in(std::uint64_t from, std::uint64_t to) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = std::max<std::uint64_t>(from, 3) | 1; q <= to; q += 2)
    if (is_prime(q)) out.push_back(q);
  return out;
}

inline void tally(ScanSummary& s, std::uint64_t p, const CheckOutcome& c) {
  if (c.passed) {
    ++s.passed;
  } else {
    ++s.failed;
    s.failures.push_back({p, c.id});
  }
}

/// Runs every applicable check in `opt.ids` for each prime in [from, to],
/// writing records to `out` in ascending p. Primes listed in `existing` are
/// not recomputed; their outcomes still count towards the summary.
inline ScanSummary run(const ScanOptions& opt, std::ostream& out, Format format, const Existing& existing = {}) {
  if (opt.from < 3 || opt.from > opt.to)
    throw UsageError("invalid range: need 3 <= from <= to, got " + std::to_string(opt.from) + ".." +
                     std::to_string(opt.to));
  if (opt.ids.empty()) throw UsageError("no checks selected");

  std::vector<CheckId> ids = opt.ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  const std::vector<std::uint64_t> all = primes_in(opt.from, opt.to);
  ScanSummary summary;
  summary.primes = all.size();

  std::vector<std::uint64_t> todo;
  for (std::uint64_t p : all) {
    if (existing.primes.count(p) != 0) {
      ++summary.resumed;
    } else {
      todo.push_back(p);
    }
  }
  if (!todo.empty() && !existing.primes.empty() && todo.front() < *existing.primes.rbegin())
    throw UsageError("resume would append p=" + std::to_string(todo.front()) + " after p=" +
                     std::to_string(*existing.primes.rbegin()) + "; records must stay in ascending p");
  // Outcomes of resumed primes in range, in file order (already ascending).
  for (const auto& [p, c] : existing.outcomes)
    if (p >= opt.from && p <= opt.to && std::find(ids.begin(), ids.end(), c.id) != ids.end()) tally(summary, p, c);
  for (std::uint64_t p : all)
    if (existing.primes.count(p) != 0)
      for (CheckId id : ids)
        if (!verify::applicable(id, p)) ++summary.skipped;

  if (format == Format::Csv && !existing.has_header) out << kCsvHeader << "\n";

  std::mutex mu;
  std::condition_variable ready;
  std::map<std::size_t, ScanRecord> done;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size() || abort.load()) return;
      try {
        ScanRecord rec = scan_prime(todo[i], ids, opt.seed);
        std::lock_guard lock(mu);
        done.emplace(i, std::move(rec));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        abort = true;
      }
      ready.notify_all();
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(todo.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);

  // Single writer: emit records strictly in index order.
  try {
    for (std::size_t i = 0; i < todo.size(); ++i) {
      ScanRecord rec;
      {
        std::unique_lock lock(mu);
        ready.wait(lock, [&] { return done.count(i) != 0 || abort.load(); });
        if (done.count(i) == 0) break;
        rec = std::move(done.at(i));
        done.erase(i);
      }
      out << (format == Format::Jsonl ? to_jsonl(rec) + "\n" : to_csv(rec));
      out.flush();
      if (!out) throw InternalError("write failed at p=" + std::to_string(rec.p) + "; rerun with --resume");
      for (CheckId id : ids)
        if (!verify::applicable(id, rec.p)) ++summary.skipped;
      for (const auto& c : rec.checks) tally(summary, rec.p, c);
    }
  } catch (...) {
    abort = true;
    for (auto& t : pool) t.join();
    throw;
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::sort(summary.failures.begin(), summary.failures.end(), [](const Failure& a, const Failure& b) {
    return a.p != b.p ? a.p < b.p : a.id < b.id;
  });
  return summary;
}

}  // namespace legdet::scan
