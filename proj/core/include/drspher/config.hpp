#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "drspher/quadrature.hpp"

namespace drspher {

enum class OutputFormat { csv, json };

/// Settings shared by the command-line front end. A config file uses the
/// key=value format of params (keys below); command-line flags override it.
struct RunConfig {
  int m = 2;
  int k = 1;
  UniformGrid lambda_grid = UniformGrid::symmetric(8.0, 129);  // lambda_min, lambda_max, lambda_count
  UniformGrid r_grid{0.0, 10.0, 201};                          // r_min, r_max, r_count
  UniformGrid t_grid{0.5, 2.0, 8};                             // t_min, t_max, t_count
  double tolerance = 1e-7;                                     // tolerance
  std::filesystem::path cache_dir;                             // cache_dir
  std::optional<OutputFormat> format;                          // format = csv | json; unset: per command

  /// Throws DomainError unless grid counts are >= 8, max > min, the
  /// tolerance is positive and (m, k) is admissible.
  void validate() const;
};

/// Applies the keys present in `text` on top of `base`; unknown keys are a
/// FormatError.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});

OutputFormat parse_output_format(const std::string& s);
const char* to_string(OutputFormat f);

/// $DRSPHER_CACHE, else $XDG_CACHE_HOME/drspher, else $HOME/.cache/drspher,
/// else ./.drspher-cache.
std::filesystem::path default_cache_dir();

}  // namespace drspher
