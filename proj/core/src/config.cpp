#include "drspher/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "drspher/error.hpp"
#include "drspher/params.hpp"

namespace drspher {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_grid(const UniformGrid& g, const char* what) {
  if (g.count < 8) throw DomainError(std::string(what) + ": count must be >= 8");
  if (!(g.max > g.min)) throw DomainError(std::string(what) + ": max must exceed min");
  if (!std::isfinite(g.min) || !std::isfinite(g.max)) throw DomainError(std::string(what) + ": bounds must be finite");
}

}  // namespace

void RunConfig::validate() const {
  derive_params(m, k);
  check_grid(lambda_grid, "lambda grid");
  check_grid(r_grid, "r grid");
  check_grid(t_grid, "t grid");
  if (r_grid.min < 0.0) throw DomainError("r grid: radii must be >= 0");
  if (t_grid.min <= 0.0) throw DomainError("t grid: times must be > 0");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw DomainError("tolerance must be > 0");
}

OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw DomainError("unknown output format '" + s + "'");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

RunConfig parse_run_config(const std::string& text, RunConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto bad = [&] { return FormatError("config line " + std::to_string(lineno) + ": bad value for " + key); };
    const auto as_int = [&] {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(value, &used);
      } catch (const std::logic_error&) {
        throw bad();
      }
      if (used != value.size()) throw bad();
      return v;
    };
    const auto as_double = [&] {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::logic_error&) {
        throw bad();
      }
      if (used != value.size()) throw bad();
      return v;
    };
    if (key == "m") cfg.m = as_int();
    else if (key == "k") cfg.k = as_int();
    else if (key == "density_scale") continue;  // calibrated at run time
    else if (key == "lambda_min") cfg.lambda_grid.min = as_double();
    else if (key == "lambda_max") cfg.lambda_grid.max = as_double();
    else if (key == "lambda_count") cfg.lambda_grid.count = as_int();
    else if (key == "r_min") cfg.r_grid.min = as_double();
    else if (key == "r_max") cfg.r_grid.max = as_double();
    else if (key == "r_count") cfg.r_grid.count = as_int();
    else if (key == "t_min") cfg.t_grid.min = as_double();
    else if (key == "t_max") cfg.t_grid.max = as_double();
    else if (key == "t_count") cfg.t_grid.count = as_int();
    else if (key == "tolerance") cfg.tolerance = as_double();
    else if (key == "cache_dir") cfg.cache_dir = value;
    else if (key == "format") {
      try {
        cfg.format = parse_output_format(value);
      } catch (const DomainError&) {
        throw bad();
      }
    } else {
      throw FormatError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), std::move(base));
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("DRSPHER_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "drspher";
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "drspher";
  return ".drspher-cache";
}

}  // namespace drspher
