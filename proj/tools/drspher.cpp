// drspher: batch front end for spherical analysis on Damek-Ricci spaces.
//
// Exit status: 0 success, 1 selftest criteria failed, 2 domain error,
// 3 numerical failure, 64 usage (unknown flags), 65 malformed CSV/config,
// 66 unreadable input file.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "drspher/bochner.hpp"
#include "drspher/config.hpp"
#include "drspher/csv.hpp"
#include "drspher/error.hpp"
#include "drspher/heat.hpp"
#include "drspher/hypergroup.hpp"
#include "drspher/selftest.hpp"

namespace {

using namespace drspher;
using json = nlohmann::ordered_json;

constexpr int kExitCriteria = 1;
constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;
constexpr int kExitFormat = 65;
constexpr int kExitNoInput = 66;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every subcommand; unset ones leave the config file value.
struct Common {
  std::string config_file;
  std::optional<int> m, k;
  std::optional<double> lambda_min, lambda_max, r_min, r_max, tolerance;
  std::optional<int> lambda_count, r_count;
  std::optional<std::string> format;
  std::string output;
  std::optional<std::string> cache_dir;
  bool no_cache = false;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--m", m, "dim p (even, >= 2)");
    sub->add_option("--k", k, "dim z (>= 1)");
    sub->add_option("--lambda-min", lambda_min);
    sub->add_option("--lambda-max", lambda_max);
    sub->add_option("--lambda-count", lambda_count);
    sub->add_option("--r-min", r_min);
    sub->add_option("--r-max", r_max);
    sub->add_option("--r-count", r_count);
    sub->add_option("--tolerance", tolerance);
    sub->add_option("--format", format, "csv or json");
    sub->add_option("-o,--output", output, "output file (default stdout)");
    sub->add_option("--cache-dir", cache_dir, "kernel cache directory");
    sub->add_flag("--no-cache", no_cache, "rebuild the kernel tensor");
  }

  RunConfig resolve() const {
    RunConfig cfg = config_file.empty() ? RunConfig{} : load_run_config(config_file);
    if (m) cfg.m = *m;
    if (k) cfg.k = *k;
    if (lambda_min) cfg.lambda_grid.min = *lambda_min;
    if (lambda_max) cfg.lambda_grid.max = *lambda_max;
    if (lambda_count) cfg.lambda_grid.count = *lambda_count;
    if (r_min) cfg.r_grid.min = *r_min;
    if (r_max) cfg.r_grid.max = *r_max;
    if (r_count) cfg.r_grid.count = *r_count;
    if (tolerance) cfg.tolerance = *tolerance;
    if (format) cfg.format = parse_output_format(*format);
    // flag > DRSPHER_CACHE > config file > user cache directory
    if (cache_dir) {
      cfg.cache_dir = *cache_dir;
    } else if (const char* env = std::getenv("DRSPHER_CACHE"); env && *env) {
      cfg.cache_dir = env;
    } else if (cfg.cache_dir.empty()) {
      cfg.cache_dir = default_cache_dir();
    }
    cfg.validate();
    return cfg;
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw InputError("cannot write " + path);
  os << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json grid_json(const UniformGrid& g) { return {{"min", g.min}, {"max", g.max}, {"count", g.count}}; }

KernelTensor load_kernel(const Space& space, const RunConfig& cfg, bool rebuild, bool* hit,
                         std::filesystem::path* file) {
  *file = KernelTensor::cache_file(cfg.cache_dir, space.params(), cfg.lambda_grid);
  try {
    return KernelTensor::cached(space, cfg.lambda_grid, cfg.cache_dir, rebuild, hit);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "drspher: kernel cache unavailable (" << e.what() << "); building in memory\n";
  } catch (const NumericalError& e) {
    if (std::string(e.what()).rfind("kernel cache", 0) != 0) throw;
    std::cerr << "drspher: " << e.what() << "; building in memory\n";
  }
  *hit = false;
  file->clear();
  return KernelTensor::build(space, cfg.lambda_grid);
}

// ---------------------------------------------------------------- subcommands

std::string cmd_eval_phi(const RunConfig& cfg, double lre, double lim, double rmax, int points) {
  if (!(rmax > 0.0)) throw DomainError("--rmax must be > 0");
  if (points < 2) throw DomainError("--points must be >= 2");
  const Space space = calibrated_space(cfg.m, cfg.k);
  std::vector<double> rs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) rs[static_cast<std::size_t>(i)] = rmax * i / (points - 1);
  const std::complex<double> lambda(lre, lim);
  const auto vals = space.spherical().eval_many(lambda, rs);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json) {
    json j{{"lambda_re", lre}, {"lambda_im", lim}, {"r", rs}, {"phi_re", json::array()}, {"phi_im", json::array()}};
    for (const auto& v : vals) {
      j["phi_re"].push_back(v.real());
      j["phi_im"].push_back(v.imag());
    }
    return dump(j);
  }
  std::ostringstream os;
  write_phi_csv(os, lambda, rs, vals);
  return os.str();
}

std::string cmd_transform(const RunConfig& cfg, const std::string& input) {
  auto in = open_input(input);
  const RadialProfile f = read_profile(in);
  const Space space = calibrated_space(cfg.m, cfg.k);
  const auto res = spherical_transform(space, f, cfg.lambda_grid);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json)
    return dump({{"lambda", res.spectrum.lambdas()},
                 {"value", res.spectrum.values},
                 {"error_estimate", res.error_estimate},
                 {"cutoff", res.cutoff}});
  std::ostringstream os;
  write_spectrum(os, res.spectrum);
  return os.str();
}

std::string cmd_inverse(const RunConfig& cfg, const std::string& input) {
  auto in = open_input(input);
  const SpectralFunction F = read_spectrum(in);
  const Space space = calibrated_space(cfg.m, cfg.k);
  const auto rs = cfg.r_grid.points();
  const auto f = inverse_transform(space, F, rs);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json) return dump({{"r", rs}, {"value", f.values}});
  std::ostringstream os;
  write_profile(os, rs, f.values);
  return os.str();
}

std::string cmd_heat(const RunConfig& cfg, double t) {
  if (!(t > 0.0)) throw DomainError("--t must be > 0");
  const Space space = calibrated_space(cfg.m, cfg.k);
  const auto rs = cfg.r_grid.points();
  const auto hk = heat_kernel(space, t, rs);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json) {
    json tails = json::array();
    for (int n : {5, 10, 20, 40}) tails.push_back({{"n", n}, {"beta", 1.0}, {"mass", gamma_tail(space, n, 1.0)}});
    return dump({{"t", t}, {"r", rs}, {"p_t", hk.profile.values}, {"tail_decay", tails}});
  }
  std::ostringstream os;
  write_profile(os, rs, hk.profile.values, "p_t");
  return os.str();
}

std::string cmd_kernel(RunConfig cfg, bool rebuild, double nu) {
  const Space space = calibrated_space(cfg.m, cfg.k);
  if (!cfg.lambda_grid.is_symmetric() || cfg.lambda_grid.count % 2 == 0)
    throw DomainError("kernel grid must be symmetric with an odd count");
  bool hit = false;
  std::filesystem::path file;
  const KernelTensor K = load_kernel(space, cfg, rebuild, &hit, &file);
  const auto ls = K.grid().points();
  int l = 0;
  for (int i = 1; i < K.grid().count; ++i)
    if (std::abs(ls[static_cast<std::size_t>(i)] - nu) < std::abs(ls[static_cast<std::size_t>(l)] - nu)) l = i;
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json) {
    char key[20];
    std::snprintf(key, sizeof key, "%016llx",
                  static_cast<unsigned long long>(KernelTensor::cache_key(space.params(), K.grid())));
    return dump({{"m", K.m()},
                 {"k", K.k()},
                 {"grid", grid_json(K.grid())},
                 {"key", key},
                 {"cache_file", file.string()},
                 {"cache_hit", hit},
                 {"max_error", K.max_error()},
                 {"slice_nu", ls[static_cast<std::size_t>(l)]}});
  }
  CsvTable t;
  t.header = {"lambda", "mu", "nu", "K"};
  for (int i = 0; i < K.grid().count; ++i)
    for (int j = 0; j < K.grid().count; ++j)
      t.rows.push_back({ls[static_cast<std::size_t>(i)], ls[static_cast<std::size_t>(j)], ls[static_cast<std::size_t>(l)],
                        K(i, j, l)});
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

SpectralFunction read_on_grid(const std::string& path, const UniformGrid& grid) {
  auto in = open_input(path);
  const SpectralFunction f = read_spectrum(in);
  if (f.grid == grid) return f;
  return CandidateH(f).on_grid(grid).h;
}

std::string cmd_odot(const RunConfig& cfg, bool rebuild, const std::string& a, const std::string& b) {
  const Space space = calibrated_space(cfg.m, cfg.k);
  const SpectralFunction A = read_on_grid(a, cfg.lambda_grid);
  const SpectralFunction B = read_on_grid(b, cfg.lambda_grid);
  bool hit = false;
  std::filesystem::path file;
  const KernelTensor K = load_kernel(space, cfg, rebuild, &hit, &file);
  const auto C = odot(space, K, A, B);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json)
    return dump({{"lambda", C.lambdas()}, {"value", C.values}, {"kernel_max_error", K.max_error()}});
  std::ostringstream os;
  write_spectrum(os, C);
  return os.str();
}

json witness_json(const Witness& w) {
  return {{"label", w.label}, {"value", w.value}, {"normalized", w.normalized}};
}

std::string cmd_certify(const RunConfig& cfg, bool rebuild, const std::string& hpath) {
  const Space space = calibrated_space(cfg.m, cfg.k);
  auto in = open_input(hpath);
  const CandidateH h(read_spectrum(in));
  bool hit = false;
  std::filesystem::path file;
  const KernelTensor K = load_kernel(space, cfg, rebuild, &hit, &file);
  const TestFamily family = default_test_family(space, K.grid());
  CertifyOptions opt;
  opt.tolerance = cfg.tolerance;
  const auto rep = certify(space, K, h, family, opt);
  if (cfg.format.value_or(OutputFormat::json) == OutputFormat::csv) {
    std::ostringstream os;
    os << "label,value,normalized\n";
    for (const auto& w : rep.values)
      os << '"' << w.label << "\"," << format_double(w.value) << ',' << format_double(w.normalized) << '\n';
    return os.str();
  }
  json values = json::array(), witnesses = json::array();
  for (const auto& w : rep.values) values.push_back(witness_json(w));
  for (const auto& w : rep.witnesses) witnesses.push_back(witness_json(w));
  return dump({{"verdict", to_string(rep.verdict)},
               {"min_value", rep.min_value},
               {"min_label", rep.min_label},
               {"tolerance", rep.tolerance},
               {"max_error", rep.max_error},
               {"family", rep.family},
               {"witnesses", witnesses},
               {"values", values}});
}

std::string cmd_recover(const RunConfig& cfg, const std::string& hpath) {
  const Space space = calibrated_space(cfg.m, cfg.k);
  auto in = open_input(hpath);
  const CandidateH h(read_spectrum(in));
  const auto rs = cfg.r_grid.points();
  const auto rec = recover_measure(space, h, rs);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json)
    return dump({{"r", rec.measure.rs},
                 {"weight", rec.measure.weights},
                 {"residual", rec.residual},
                 {"phi0_mass", rec.phi0_mass},
                 {"h0", h.at(0.0)},
                 {"representable", rec.representable},
                 {"mass_rescaled", rec.mass_rescaled}});
  std::ostringstream os;
  write_measure(os, rec.measure);
  return os.str();
}

std::string cmd_krein_fit(const RunConfig& cfg, const std::string& fpath) {
  const Space space = calibrated_space(cfg.m, cfg.k);
  auto in = open_input(fpath);
  const RadialProfile f = read_profile(in);
  KreinOptions opt;
  opt.r_grid = UniformGrid{cfg.r_grid.min, std::min(cfg.r_grid.max, f.rs.back()), cfg.r_grid.count};
  const auto fit = krein_fit(space, f, opt);
  if (cfg.format.value_or(OutputFormat::csv) == OutputFormat::json)
    return dump({{"real_lambdas", fit.real_lambdas},
                 {"mu1", fit.mu1},
                 {"imaginary_lambdas", fit.imaginary_lambdas},
                 {"mu2", fit.mu2},
                 {"residual", fit.residual},
                 {"f0", fit.f0},
                 {"mu1_total", fit.mu1_total},
                 {"mass_ok", fit.mass_ok},
                 {"positive_definite", fit.positive_definite}});
  CsvTable t;
  t.header = {"lambda_re", "lambda_im", "weight"};
  for (std::size_t i = 0; i < fit.mu1.size(); ++i) t.rows.push_back({fit.real_lambdas[i], 0.0, fit.mu1[i]});
  for (std::size_t i = 0; i < fit.mu2.size(); ++i) t.rows.push_back({0.0, fit.imaginary_lambdas[i], fit.mu2[i]});
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

std::string cmd_pd_check(const RunConfig& cfg, const std::string& hpath, double spacing, int size) {
  auto in = open_input(hpath);
  const CandidateH h(read_spectrum(in));
  const auto rep = pd_check(h, spacing, size);
  if (cfg.format.value_or(OutputFormat::json) == OutputFormat::csv) {
    CsvTable t;
    t.header = {"lag", "value"};
    for (int j = 0; j < size; ++j) t.rows.push_back({j * spacing, h.at(j * spacing)});
    std::ostringstream os;
    write_csv(os, t);
    return os.str();
  }
  return dump({{"psd", rep.psd},
               {"min_eigenvalue", rep.min_eigenvalue},
               {"threshold", rep.threshold},
               {"interpolation_error", rep.interpolation_error},
               {"size", rep.size},
               {"spacing", rep.spacing}});
}

int cmd_selftest(const RunConfig& cfg, bool rebuild, const std::vector<int>& only, const std::string& output) {
  SelftestOptions opt;
  opt.cache_dir = cfg.cache_dir;
  opt.rebuild = rebuild;
  Selftest st(opt);
  std::vector<int> ids = only;
  if (ids.empty())
    for (int i = Selftest::kFirst; i <= Selftest::kLast; ++i) ids.push_back(i);
  std::vector<CriterionResult> results;
  for (int id : ids) results.push_back(st.run(id));
  emit(output, format_report(results));
  for (const auto& r : results)
    if (!r.pass()) return kExitCriteria;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drspher: spherical analysis on Damek-Ricci spaces"};
  app.set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  app.require_subcommand(1);
  Common common;

  double lambda_re = 0.0, lambda_im = 0.0, rmax = 10.0, t = 1.0, nu = 0.0, spacing = 0.5;
  int points = 101, size = 12;
  std::string input, hpath, fpath, apath, bpath, grid_spec;
  std::vector<int> criteria;

  auto* eval = app.add_subcommand("eval-phi", "spherical function phi_lambda on [0, rmax]");
  eval->add_option("--lambda", lambda_re, "real part of lambda")->required();
  eval->add_option("--lambda-im", lambda_im, "imaginary part of lambda");
  eval->add_option("--rmax", rmax);
  eval->add_option("--points", points);

  auto* tr = app.add_subcommand("transform", "spherical transform of a profile CSV (r,value)");
  tr->add_option("--input", input)->required();

  auto* inv = app.add_subcommand("inverse", "inverse transform of a spectrum CSV (lambda,value)");
  inv->add_option("--input", input)->required();

  auto* heat = app.add_subcommand("heat", "heat kernel p_t on the r grid");
  heat->add_option("--t", t)->required();

  auto* kern = app.add_subcommand("kernel", "build or load the triple-product kernel tensor");
  kern->add_option("--grid", grid_spec, "lambda grid min,max,count");
  kern->add_option("--nu", nu, "slice exported as CSV");

  auto* od = app.add_subcommand("odot", "dual convolution of two spectra");
  od->add_option("--a", apath)->required();
  od->add_option("--b", bpath)->required();

  auto* cert = app.add_subcommand("certify", "screen a candidate h for positive definiteness");
  cert->add_option("--h", hpath)->required();

  auto* rec = app.add_subcommand("recover", "nonnegative radial measure whose transform fits h");
  rec->add_option("--h", hpath)->required();

  auto* kf = app.add_subcommand("krein-fit", "Krein decomposition of a profile");
  kf->add_option("--f", fpath)->required();

  auto* pd = app.add_subcommand("pd-check", "Toeplitz positivity of h at lags j * spacing");
  pd->add_option("--h", hpath)->required();
  pd->add_option("--spacing", spacing);
  pd->add_option("--size", size);

  auto* self = app.add_subcommand("selftest", "run the acceptance suite");
  self->add_option("--criterion", criteria, "criterion ids (default: all)");

  for (auto* sub : app.get_subcommands({})) common.attach(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig cfg = common.resolve();
    if (!grid_spec.empty()) {
      UniformGrid g;
      char c1 = 0, c2 = 0;
      std::istringstream gs(grid_spec);
      if (!(gs >> g.min >> c1 >> g.max >> c2 >> g.count) || c1 != ',' || c2 != ',' || !gs.eof())
        throw DomainError("--grid expects min,max,count");
      cfg.lambda_grid = g;
      cfg.validate();
    }
    const bool rebuild = common.no_cache;
    std::string out;
    if (*eval) out = cmd_eval_phi(cfg, lambda_re, lambda_im, rmax, points);
    else if (*tr) out = cmd_transform(cfg, input);
    else if (*inv) out = cmd_inverse(cfg, input);
    else if (*heat) out = cmd_heat(cfg, t);
    else if (*kern) out = cmd_kernel(cfg, rebuild, nu);
    else if (*od) out = cmd_odot(cfg, rebuild, apath, bpath);
    else if (*cert) out = cmd_certify(cfg, rebuild, hpath);
    else if (*rec) out = cmd_recover(cfg, hpath);
    else if (*kf) out = cmd_krein_fit(cfg, fpath);
    else if (*pd) out = cmd_pd_check(cfg, hpath, spacing, size);
    else if (*self) return cmd_selftest(cfg, rebuild, criteria, common.output);
    emit(common.output, out);
    return 0;
  } catch (const FormatError& e) {
    std::cerr << "drspher: malformed input: " << e.what() << '\n';
    return kExitFormat;
  } catch (const InputError& e) {
    std::cerr << "drspher: " << e.what() << '\n';
    return kExitNoInput;
  } catch (const DomainError& e) {
    std::cerr << "drspher: domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    std::cerr << "drspher: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "drspher: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
