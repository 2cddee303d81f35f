#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace drspher {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;  // measured value against its limit
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool pass() const;
};

struct SelftestOptions {
  std::filesystem::path cache_dir;  // empty: build the kernel tensor in memory
  bool rebuild = false;
};

/// Acceptance criteria 1-11 on the default space (2,1) and, for 11, on (4,3).
/// Criterion 12 (byte-identical reports across runs) is a property of the
/// report text itself and is checked by running the suite twice. Reports
/// contain no timings; runtime budgets appear as pass/fail only.
class Selftest {
 public:
  explicit Selftest(SelftestOptions options = {});
  ~Selftest();
  Selftest(const Selftest&) = delete;
  Selftest& operator=(const Selftest&) = delete;

  static constexpr int kFirst = 1;
  static constexpr int kLast = 11;

  /// Throws DomainError for ids outside [kFirst, kLast].
  CriterionResult run(int id);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::string criterion_title(int id);

/// Text report: header, one block per criterion, summary line.
std::string format_report(const std::vector<CriterionResult>& results);

/// `criterion N: PASS|FAIL title`.
std::string format_line(const CriterionResult& result);

}  // namespace drspher
