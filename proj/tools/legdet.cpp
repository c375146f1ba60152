// legdet: compute invariants, verify identities and run resumable scans.
//
// Exit codes: 0 ok, 1 a proved-statement check failed, 2 usage error,
// 3 internal error (including a corrupt resume file), 4 only conjecture
// checks failed.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "legdet/legdet.hpp"

namespace {

using json = nlohmann::ordered_json;
using legdet::verify::CheckId;

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kInternal = 3, kConjectureOnly = 4 };

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    for (std::string tok; std::getline(ss, tok, ',');)
      if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<CheckId> parse_suite(const std::vector<std::string>& raw, bool& explicit_ids) {
  const auto names = split_list(raw);
  explicit_ids = true;
  std::vector<CheckId> ids;
  for (const auto& s : names) {
    if (s == "all") {
      explicit_ids = false;
      for (const auto& c : legdet::verify::kCatalog) ids.push_back(c.id);
      continue;
    }
    const auto id = legdet::verify::parse_check_id(s);
    if (!id) throw legdet::UsageError("unknown check id '" + s + "'");
    ids.push_back(*id);
  }
  if (ids.empty()) throw legdet::UsageError("no checks selected");
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

// --- compute ---------------------------------------------------------------

const std::vector<std::string> kFields = {"dp",        "cp",         "qp",           "hneg",           "det-aplus",
                                          "det-aminus", "charpoly-aplus", "charpoly-aminus", "unit", "hreal"};

std::string unknown_field(const std::string& f) {
  std::string known;
  for (const auto& k : kFields) known += (known.empty() ? "" : ", ") + k;
  return "unknown field '" + f + "' (expected one of " + known + ")";
}

void need_3mod4(const std::string& field, std::uint64_t p, bool above3) {
  if (p % 4 != 3 || (above3 && p == 3))
    throw legdet::UsageError(field + " requires p ≡ 3 (mod 4)" + std::string(above3 ? " and p > 3" : "") +
                             "; got p=" + std::to_string(p));
}

void need_1mod4(const std::string& field, std::uint64_t p) {
  if (p % 4 != 1) throw legdet::UsageError(field + " requires p ≡ 1 (mod 4); got p=" + std::to_string(p));
}

json poly_json(const legdet::IntPoly& f) {
  json coeffs = json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(c.get_str());
  return json{{"text", f.to_string()}, {"coeffs_ascending", coeffs}};
}

// Returns {text, json} for one field.
std::pair<std::string, json> compute_field(const std::string& field, std::uint64_t p) {
  using namespace legdet;
  if (field == "dp") {
    const auto d = d_p(LegendreTable(p));
    return {std::to_string(d), d};
  }
  if (field == "cp") {
    need_3mod4(field, p, false);
    const auto c = *prime_invariants(p).c_p;
    return {std::to_string(c), c};
  }
  if (field == "qp") {
    need_3mod4(field, p, true);
    const mpq_class q = *prime_invariants(p).q_p;
    return {q.get_str(), q.get_str()};
  }
  if (field == "hneg") {
    need_3mod4(field, p, true);
    const auto h = class_number_neg(p);
    return {std::to_string(h), h};
  }
  if (field == "det-aplus" || field == "det-aminus") {
    const mpz_class v = field == "det-aplus" ? det(build(kind::APlus{}, p)) : det(build(kind::AMinus{}, p));
    return {v.get_str(), v.get_str()};
  }
  if (field == "charpoly-aplus" || field == "charpoly-aminus") {
    const IntPoly f = field == "charpoly-aplus" ? charpoly(build(kind::APlus{}, p)) : charpoly(build(kind::AMinus{}, p));
    return {f.to_string(), poly_json(f)};
  }
  if (field == "unit") {
    need_1mod4(field, p);
    const QuadElem e = fundamental_unit(p);
    return {e.to_string(), json{{"text", e.to_string()}, {"a", e.a().get_str()}, {"b", e.b().get_str()}}};
  }
  if (field == "hreal") {
    need_1mod4(field, p);
    const auto h = class_number_real(p);
    return {std::to_string(h), h};
  }
  throw UsageError(unknown_field(field));
}

int cmd_compute(std::uint64_t p, const std::vector<std::string>& raw, bool as_json) {
  legdet::require_odd_prime(p);
  const auto fields = split_list(raw);
  if (fields.empty()) throw legdet::UsageError("--what needs at least one field");
  for (const auto& f : fields)
    if (std::find(kFields.begin(), kFields.end(), f) == kFields.end()) throw legdet::UsageError(unknown_field(f));

  json out;
  out["p"] = p;
  std::vector<std::pair<std::string, std::string>> lines;
  for (const auto& f : fields) {
    auto [text, value] = compute_field(f, p);
    out[f] = value;
    lines.emplace_back(f, text);
  }
  if (as_json) {
    std::cout << out.dump() << "\n";
  } else if (lines.size() == 1) {
    std::cout << lines[0].second << "\n";
  } else {
    for (const auto& [f, text] : lines) std::cout << f << ": " << text << "\n";
  }
  return kOk;
}

// --- verify ----------------------------------------------------------------

struct Task {
  CheckId id;
  std::uint64_t p;
};

int exit_for(const std::vector<legdet::verify::CheckResult>& results) {
  bool proved_failed = false, conj_failed = false;
  for (const auto& r : results) {
    if (r.passed) continue;
    (legdet::verify::is_conjecture(r.id) ? conj_failed : proved_failed) = true;
  }
  if (proved_failed) return kCheckFailed;
  return conj_failed ? kConjectureOnly : kOk;
}

int cmd_verify(std::optional<std::uint64_t> prime, std::optional<std::uint64_t> from, std::optional<std::uint64_t> to,
               const std::vector<std::string>& suite, std::uint64_t seed, bool as_json, unsigned jobs) {
  namespace v = legdet::verify;
  bool explicit_ids = false;
  const std::vector<CheckId> ids = parse_suite(suite, explicit_ids);

  std::vector<std::uint64_t> primes;
  if (prime) {
    if (from || to) throw legdet::UsageError("use either --prime or --from/--to");
    legdet::require_odd_prime(*prime);
    primes.push_back(*prime);
  } else {
    if (!from || !to) throw legdet::UsageError("need --prime or both --from and --to");
    if (*from < 3 || *from > *to) throw legdet::UsageError("invalid range: need 3 <= from <= to");
    primes = legdet::scan::primes_in(*from, *to);
  }

  std::vector<Task> tasks;
  std::size_t skipped = 0;
  for (CheckId id : ids) {
    if (v::info(id).random) {
      tasks.push_back({id, primes.empty() ? 3 : primes.front()});  // runs once, independent of p
      continue;
    }
    for (std::uint64_t p : primes) {
      if (auto why = v::requirement_violation(id, p)) {
        // A check named explicitly for a single prime it cannot apply to is a usage error.
        if (explicit_ids && prime) throw legdet::UsageError(*why);
        ++skipped;
        continue;
      }
      tasks.push_back({id, p});
    }
  }
  std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) { return a.p < b.p; });

  std::vector<v::CheckResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        results[i] = v::check(tasks[i].id, tasks[i].p, seed);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t passed = 0, failed = 0;
  for (const auto& r : results) (r.passed ? passed : failed)++;
  const int code = exit_for(results);

  if (as_json) {
    json out;
    json arr = json::array();
    for (const auto& r : results) arr.push_back(v::to_json(r));
    out["results"] = arr;
    out["summary"] = json{{"passed", passed}, {"failed", failed}, {"skipped", skipped}, {"exit_code", code}};
    std::cout << out.dump() << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << v::name(r.id);
      if (r.p && !v::info(r.id).random) std::cout << " p=" << *r.p;
      std::cout << "\n";
      if (!r.passed) std::cout << "  " << r.witness.dump() << "\n";
    }
    std::cout << "passed " << passed << ", failed " << failed << ", skipped " << skipped << " (" << wall
              << " s)\n";
  }
  return code;
}

// --- scan ------------------------------------------------------------------

int cmd_scan(std::uint64_t from, std::uint64_t to, const std::vector<std::string>& raw_ids, const std::string& out_path,
             bool resume, unsigned jobs, std::uint64_t seed, const std::string& format_name) {
  namespace s = legdet::scan;
  bool explicit_ids = false;
  s::ScanOptions opt;
  opt.ids = parse_suite(raw_ids, explicit_ids);
  opt.from = from;
  opt.to = to;
  opt.seed = seed;
  opt.jobs = jobs;
  const s::Format format = format_name == "csv" ? s::Format::Csv : s::Format::Jsonl;
  if (opt.from < 3 || opt.from > opt.to) throw legdet::UsageError("invalid range: need 3 <= from <= to");

  s::Existing existing;
  const auto start = std::chrono::steady_clock::now();
  s::ScanSummary summary;
  if (out_path.empty() || out_path == "-") {
    if (resume) throw legdet::UsageError("--resume needs --out");
    summary = s::run(opt, std::cout, format);
  } else {
    if (resume && std::filesystem::exists(out_path)) {
      std::ifstream in(out_path);
      if (!in) throw legdet::InternalError("cannot read " + out_path);
      existing = format == s::Format::Csv ? s::read_csv(in) : s::read_jsonl(in);
    }
    std::ofstream out(out_path, resume ? std::ios::app : std::ios::trunc);
    if (!out) throw legdet::UsageError("cannot open " + out_path + " for writing");
    summary = s::run(opt, out, format, existing);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::ostream& log = out_path.empty() || out_path == "-" ? std::cerr : std::cout;
  for (const auto& f : summary.failures)
    log << "FAIL " << legdet::verify::name(f.id) << " p=" << f.p << "\n";
  log << "primes " << summary.primes << " (resumed " << summary.resumed << "), passed " << summary.passed
      << ", failed " << summary.failed << ", skipped " << summary.skipped << " (" << wall << " s)\n";
  if (summary.failures.empty()) return kOk;
  return summary.only_conjecture_failures() ? kConjectureOnly : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Legendre-symbol determinant toolkit"};
  app.require_subcommand(1);

  std::uint64_t prime = 0, from = 0, to = 0, seed = 0;
  std::vector<std::string> what, suite{"all"}, ids;
  bool as_json = false, resume = false;
  unsigned jobs = default_jobs();
  std::string out_path, format = "json", which = "both";

  auto* compute = app.add_subcommand("compute", "Print invariants and exact matrix data for one prime");
  compute->add_option("--prime", prime, "Odd prime p")->required();
  compute->add_option("--what", what, "Fields: dp cp qp hneg det-aplus det-aminus charpoly-aplus charpoly-aminus unit hreal")
      ->required()
      ->delimiter(',');
  compute->add_flag("--json", as_json, "Emit JSON");

  auto* charpoly = app.add_subcommand("charpoly", "Characteristic polynomials of A+ / A- (alias of compute)");
  charpoly->add_option("--prime", prime, "Odd prime p")->required();
  charpoly->add_option("--which", which, "aplus, aminus or both")->check(CLI::IsMember({"aplus", "aminus", "both"}));
  charpoly->add_flag("--json", as_json, "Emit JSON");

  auto* verify = app.add_subcommand("verify", "Run catalog checks at one prime or over a range");
  auto* prime_opt = verify->add_option("--prime", prime, "Odd prime p");
  auto* from_opt = verify->add_option("--from", from, "Range start");
  auto* to_opt = verify->add_option("--to", to, "Range end (inclusive)");
  verify->add_option("--suite", suite, "all, or check ids")->delimiter(',');
  verify->add_option("--seed", seed, "Seed for sampled checks");
  verify->add_flag("--json", as_json, "Emit JSON");
  verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* scan = app.add_subcommand("scan", "Resumable scan over a prime range");
  scan->add_option("--from", from, "Range start")->required();
  scan->add_option("--to", to, "Range end (inclusive)")->required();
  scan->add_option("--ids", ids, "all, or check ids")->required()->delimiter(',');
  scan->add_option("--out", out_path, "Output file (default stdout)");
  scan->add_flag("--resume", resume, "Skip primes already in --out");
  scan->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  scan->add_option("--seed", seed, "Seed for sampled checks");
  scan->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compute) return cmd_compute(prime, what, as_json);
    if (*charpoly) {
      std::vector<std::string> fields;
      if (which != "aminus") fields.push_back("charpoly-aplus");
      if (which != "aplus") fields.push_back("charpoly-aminus");
      return cmd_compute(prime, fields, as_json);
    }
    if (*verify) {
      auto opt = [](CLI::Option* o, std::uint64_t v) { return o->count() ? std::optional<std::uint64_t>(v) : std::nullopt; };
      return cmd_verify(opt(prime_opt, prime), opt(from_opt, from), opt(to_opt, to), suite, seed, as_json, jobs);
    }
    if (*scan) return cmd_scan(from, to, ids, out_path, resume, jobs, seed, format);
  } catch (const legdet::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const legdet::scan::ResumeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
