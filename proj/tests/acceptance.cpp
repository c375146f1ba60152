// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <streambuf>
#include <string>
#include <thread>
#include <vector>

#include "legdet/legdet.hpp"

using namespace legdet;
using verify::CheckId;

namespace {

using Clock = std::chrono::steady_clock;
using json = verify::json;

// Runtime limits in seconds, 0 when the criterion has none.
constexpr double kLimitDpTable = 1.0;
constexpr double kLimitT11OneMod4 = 120.0;
constexpr double kLimitT11ThreeMod4 = 60.0;
constexpr double kLimitT13Scan = 300.0;

constexpr std::uint64_t kT13ScanBelow = 100000;
constexpr std::uint64_t kConjScanBelow = 10000;
constexpr std::size_t kL21MinPrimes = 20;

class NullBuf : public std::streambuf {
 protected:
  int overflow(int c) override { return c == traits_type::eof() ? 0 : c; }
  std::streamsize xsputn(const char*, std::streamsize n) override { return n; }
};

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::vector<std::uint64_t> primes(std::uint64_t lo, std::uint64_t hi, int residue = 0) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p : scan::primes_in(lo, hi))
    if (residue == 0 || p % 4 == static_cast<std::uint64_t>(residue)) out.push_back(p);
  return out;
}

// Runs the given checks at every prime, stopping at the first failure.
Outcome run_checks(const std::vector<CheckId>& ids, const std::vector<std::uint64_t>& ps) {
  std::size_t runs = 0;
  for (std::uint64_t p : ps) {
    for (CheckId id : ids) {
      if (!verify::applicable(id, p)) continue;
      const auto r = verify::check(id, p);
      ++runs;
      if (!r.passed)
        return {false, std::string(verify::name(id)) + " failed at p=" + std::to_string(p) + ": " + r.witness.dump()};
    }
  }
  return {runs > 0, std::to_string(runs) + " checks over " + std::to_string(ps.size()) + " primes"};
}

Outcome scan_range(CheckId id, std::uint64_t below, std::uint64_t expected_primes, std::uint64_t expected_runs) {
  NullBuf buf;
  std::ostream sink(&buf);
  scan::ScanOptions opt;
  opt.ids = {id};
  opt.from = 3;
  opt.to = below - 1;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto s = scan::run(opt, sink, scan::Format::Jsonl);
  std::string detail = std::to_string(s.primes) + " primes, " + std::to_string(s.passed) + " passed, " +
                       std::to_string(s.failed) + " failed";
  for (const auto& f : s.failures) detail += "; failure at p=" + std::to_string(f.p);
  return {s.failed == 0 && s.primes == expected_primes && s.passed == expected_runs, detail};
}

Outcome dp_table() {
  // known d_p for the odd primes below 50
  const std::map<std::uint64_t, std::int64_t> table = {{3, -1},  {5, -2},   {7, 1},   {11, -5}, {13, -2},
                                                       {17, 0},  {19, -13}, {23, 5},  {29, -18}, {31, 5},
                                                       {37, -2}, {41, -8},  {43, -21}, {47, 13}};
  const auto ps = primes(3, 49);
  std::size_t matched = 0;
  for (std::uint64_t p : ps) {
    const auto it = table.find(p);
    if (it != table.end() && d_p(LegendreTable(p)) == it->second) ++matched;
  }
  return {matched == table.size() && ps.size() == table.size(), std::to_string(matched) + "/14 values match"};
}

Outcome t11_three_mod4() {
  Outcome o = run_checks({CheckId::T11_DET_3MOD4, CheckId::MORDELL}, primes(7, 199, 3));
  return o;
}

Outcome eq38() {
  const auto ps = primes(7, 199, 3);
  std::size_t integral = 0;
  for (std::uint64_t p : ps) {
    const auto r = verify::check(CheckId::EQ_38II_QP, p);
    if (!r.passed) return {false, "EQ_38II_QP failed at p=" + std::to_string(p) + ": " + r.witness.dump()};
    if (r.witness.value("q_p_integral", false)) ++integral;
  }
  return {true, std::to_string(ps.size()) + " primes; finding: q_p integral at " + std::to_string(integral) + "/" +
                    std::to_string(ps.size())};
}

Outcome lemma_suite() {
  const auto ps = primes(3, 199);
  std::size_t l21_primes = 0;
  for (std::uint64_t p : ps)
    if (verify::applicable(CheckId::L21_QUADSUM, p)) ++l21_primes;
  Outcome o = run_checks({CheckId::L21_QUADSUM, CheckId::L22_GRAM, CheckId::L23_EIGVECS, CheckId::L24_EIGSPACE,
                          CheckId::ATHETA, CheckId::EQ_DP_U1AU0, CheckId::L41_SUMS, CheckId::EQ_DCOUNT},
                         ps);
  o.passed = o.passed && l21_primes >= kL21MinPrimes;
  o.detail += "; L21 at " + std::to_string(l21_primes) + " primes x " + std::to_string(verify::kQuadSumSamples) +
              " (b,c)";
  return o;
}

Outcome lemma25() {
  double worst = 0;
  for (std::uint64_t p : primes(7, 199, 3)) {
    for (CheckId id : {CheckId::L25_AP_NEG, CheckId::L25_EIGS}) {
      const auto r = verify::check(id, p);
      if (!r.passed) return {false, std::string(verify::name(id)) + " failed at p=" + std::to_string(p)};
      if (id == CheckId::L25_EIGS) {
        if (r.witness["lambda_n"] != -1) return {false, "lambda_n != -1 at p=" + std::to_string(p)};
        if (p <= verify::kEigenProductMaxP) {
          if (!r.witness.contains("relative_error")) return {false, "no eigen product at p=" + std::to_string(p)};
          worst = std::max(worst, r.witness["relative_error"].get<double>());
        }
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max relative error %.3g (tolerance %.0e, p <= 59)", worst,
                verify::kEigenProductTolerance);
  return {worst < verify::kEigenProductTolerance, buf};
}

Outcome random_suites() {
  for (CheckId id : {CheckId::T31_RANDOM, CheckId::MDL_RANDOM}) {
    const auto r = verify::check(id, 3, 0);
    if (!r.passed) return {false, std::string(verify::name(id)) + ": " + r.witness.dump()};
    if (r.witness.value("instances", 0) != verify::kRandomInstances)
      return {false, std::string(verify::name(id)) + " ran " + r.witness.value("instances", json()).dump() +
                         " instances"};
  }
  return {true, std::to_string(verify::kRandomInstances) + " instances each"};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string title;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "d_p table for odd p < 50", kLimitDpTable, dp_table},
      {2, "charpoly and det of A+/A- for p = 1 (mod 4), 5..197", kLimitT11OneMod4,
       [] { return run_checks({CheckId::T11_CHARPOLY_1MOD4, CheckId::T11_DET_1MOD4}, primes(5, 197, 1)); }},
      {3, "|A+| = |A-| and Mordell parity for p = 3 (mod 4), 7..199", kLimitT11ThreeMod4, t11_three_mod4},
      {4, "two-layer parametric determinants for p <= 101", 0,
       [] { return run_checks({CheckId::T12_I, CheckId::T12_II, CheckId::COR_AFTER_T12}, primes(5, 101)); }},
      {5, "q_p identity with z = 0 for p = 3 (mod 4), 7..199", 0, eq38},
      {6, "d_p = -(p-1)/2 (mod 4) for odd p < 1e5", kLimitT13Scan,
       [] { return scan_range(CheckId::T13_DPMOD4, kT13ScanBelow, 9591, 9591); }},
      {7, "three-branch d_p congruence for odd p < 1e4", 0,
       [] { return scan_range(CheckId::CONJ11_DP, kConjScanBelow, 1228, 1227); }},
      {8, "lemma suite for p <= 199", 0, lemma_suite},
      {9, "|A_p| < 0, lambda_n = -1, eigenvalue product", 0, lemma25},
      {10, "random adjugate and matrix determinant lemma suites", 0, random_suites},
      {11, "half-range determinant variants for 5 <= p <= 61", 0,
       [] { return run_checks({CheckId::SUN_C31_I, CheckId::SUN_C31_II}, primes(5, 61)); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.limit > 0 && secs >= c.limit) {
      o.passed = false;
      o.detail += "; over time limit";
    }
    char timing[64];
    if (c.limit > 0)
      std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, c.limit);
    else
      std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("%s %2d %s: %s (%s)\n", o.passed ? "PASS" : "FAIL", c.number, c.title.c_str(), o.detail.c_str(),
                timing);
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%s: %zu criteria, %d failed\n", failed ? "FAIL" : "PASS", criteria.size(), failed);
  return failed ? 1 : 0;
}
