// Acceptance suite: one pass/fail line per criterion. Criteria 1-11 run
// in-process; 12 runs `drspher selftest` twice and compares the reports.
//
//   drspher_acceptance [--criterion N]... [--drspher PATH] [--cache-dir DIR] [--work-dir DIR]

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "drspher/selftest.hpp"

namespace fs = std::filesystem;

namespace {

struct Args {
  std::vector<int> criteria;
  std::string drspher;
  std::string cache_dir;
  std::string work_dir;
  bool verbose = true;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

bool determinism(const Args& a) {
  if (a.drspher.empty()) {
    std::cout << "  [FAIL] no drspher executable given (--drspher)\n";
    return false;
  }
  const fs::path dir = a.work_dir.empty() ? fs::temp_directory_path() / "drspher-acceptance" : fs::path(a.work_dir);
  fs::create_directories(dir);
  // a fresh cache: the first run builds the kernel tensor, the second loads it
  const fs::path cache = dir / "determinism-cache";
  fs::remove_all(cache);
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("selftest-" + std::to_string(run) + ".txt");
    fs::remove(out);
    const std::string cmd = quote(a.drspher) + " selftest --cache-dir " + quote(cache.string()) + " --output " +
                            quote(out.string()) + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !fs::exists(out)) {
      std::cout << "  [FAIL] run " << run + 1 << " produced no report\n";
      return false;
    }
    reports[run] = slurp(out);
  }
  const bool same = !reports[0].empty() && reports[0] == reports[1];
  std::cout << "  [" << (same ? "ok" : "FAIL") << "] reports byte-identical (" << reports[0].size() << " bytes)\n";
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  for (int i = 1; i < argc; ++i) {
    const std::string s = argv[i];
    const auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << s << " needs a value\n";
        std::exit(64);
      }
      return argv[++i];
    };
    if (s == "--criterion") a.criteria.push_back(std::stoi(next()));
    else if (s == "--drspher") a.drspher = next();
    else if (s == "--cache-dir") a.cache_dir = next();
    else if (s == "--work-dir") a.work_dir = next();
    else if (s == "--quiet") a.verbose = false;
    else {
      std::cerr << "unknown argument " << s << '\n';
      return 64;
    }
  }
  if (a.criteria.empty())
    for (int i = 1; i <= 12; ++i) a.criteria.push_back(i);

  drspher::SelftestOptions opt;
  opt.cache_dir = a.cache_dir;
  drspher::Selftest suite(opt);
  bool all = true;
  for (int id : a.criteria) {
    if (id == 12) {
      const bool ok = determinism(a);
      std::cout << "criterion 12: " << (ok ? "PASS" : "FAIL") << ' ' << drspher::criterion_title(12) << '\n';
      all = all && ok;
      continue;
    }
    try {
      const auto r = suite.run(id);
      if (a.verbose)
        for (const auto& c : r.checks)
          std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << (c.detail.empty() ? "" : ": ")
                    << c.detail << '\n';
      std::cout << drspher::format_line(r) << '\n';
      all = all && r.pass();
    } catch (const std::exception& e) {
      std::cout << "  [FAIL] " << e.what() << '\n';
      std::cout << "criterion " << id << ": FAIL " << drspher::criterion_title(id) << '\n';
      all = false;
    }
  }
  return all ? 0 : 1;
}
