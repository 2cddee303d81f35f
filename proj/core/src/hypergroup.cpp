#include "drspher/hypergroup.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "drspher/error.hpp"

namespace drspher {

namespace {

constexpr char kMagic[4] = {'D', 'R', 'S', 'K'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw FormatError("kernel cache: truncated header");
  return v;
}

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ull;
  template <class T>
  void add(T v) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
};

// Trapezoid weight times Plancherel density per grid point.
std::vector<double> spectral_weights(const Space& space, const UniformGrid& grid) {
  const auto w = trapezoid_weights(grid);
  const auto ls = grid.points();
  std::vector<double> out(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) out[i] = w[i] * space.spectral_density(ls[i]);
  return out;
}

void check_on_grid(const SpectralFunction& A, const UniformGrid& grid, const char* what) {
  A.validate();
  if (!(A.grid == grid))
    throw DomainError(std::string(what) + ": spectral function is not sampled on the kernel grid");
}

void check_tail(const std::vector<double>& a, double tol, const char* what) {
  double total = 0.0;
  for (double x : a) total += std::abs(x);
  const std::size_t n = a.size();
  if (n < 4 || total == 0.0) return;
  const double edge = std::abs(a[0]) + std::abs(a[1]) + std::abs(a[n - 2]) + std::abs(a[n - 1]);
  if (edge > tol * total)
    throw TruncationError(std::string(what) + ": weighted mass at the grid edge is " + std::to_string(edge / total) +
                          " of the total");
}

}  // namespace

double kernel_cutoff(const Space& space, const KernelOptions& options) {
  const double rho = space.rho();
  double R = 1.0;
  while ((1.0 + R) * (1.0 + R) * (1.0 + R) * std::exp(-rho * R) / rho > options.tail) R += 0.25;
  return R;
}

QuadResult kernel_K(const Space& space, double lambda, double mu, double nu, const KernelOptions& options) {
  const double R = kernel_cutoff(space, options);
  const PanelRule rule = PanelRule::with_width(0.0, R, options.panel_width);
  const auto& ev = space.spherical();
  const auto a = ev.real_row(std::abs(lambda), rule.nodes);
  const auto b = ev.real_row(std::abs(mu), rule.nodes);
  const auto c = ev.real_row(std::abs(nu), rule.nodes);
  std::vector<double> f(rule.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = a[i] * b[i] * c[i] * space.volume(rule.nodes[i]);
  return drspher::apply(rule, f);
}

KernelTensor KernelTensor::build(const Space& space, const UniformGrid& grid, const KernelOptions& options) {
  grid.validate("kernel grid");
  const double R = kernel_cutoff(space, options);
  const PanelRule rule = PanelRule::with_width(0.0, R, options.panel_width);
  const std::size_t nodes = rule.size();

  // Distinct |lambda| values and the map from grid index to them.
  const auto ls = grid.points();
  std::map<double, int> distinct;
  for (double l : ls) distinct.emplace(std::abs(l), 0);
  std::vector<double> abs_vals;
  for (auto& [v, idx] : distinct) {
    idx = static_cast<int>(abs_vals.size());
    abs_vals.push_back(v);
  }
  std::vector<int> slot(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) slot[i] = distinct.at(std::abs(ls[i]));

  const std::size_t D = abs_vals.size();
  std::vector<std::vector<double>> rows(D);
  std::vector<double> wk(nodes), wg(nodes);
  for (std::size_t q = 0; q < nodes; ++q) {
    const double A = space.volume(rule.nodes[q]);
    wk[q] = rule.kronrod[q] * A;
    wg[q] = rule.gauss[q] * A;
  }
  for (std::size_t d = 0; d < D; ++d) rows[d] = space.spherical().real_row(abs_vals[d], rule.nodes);

  // Per-panel error needs panel sums; accumulate them panel by panel.
  const int P = rule.panels;
  constexpr int W = PanelRule::kPerPanel;
  std::vector<double> reduced(D * D * D, 0.0);
  double max_err = 0.0;
  std::vector<double> ab(nodes);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = a; b < D; ++b) {
      for (std::size_t q = 0; q < nodes; ++q) ab[q] = rows[a][q] * rows[b][q];
      for (std::size_t c = b; c < D; ++c) {
        const auto& rc = rows[c];
        double total = 0.0, err = 0.0;
        for (int p = 0; p < P; ++p) {
          double sk = 0.0, sg = 0.0;
          for (int q = p * W; q < (p + 1) * W; ++q) {
            const double f = ab[q] * rc[q];
            sk += wk[q] * f;
            sg += wg[q] * f;
          }
          total += sk;
          err += std::abs(sk - sg);
        }
        max_err = std::max(max_err, err);
        const std::size_t perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
        for (const auto& pm : perms) reduced[(pm[0] * D + pm[1]) * D + pm[2]] = total;
      }
    }

  KernelTensor T;
  T.grid_ = grid;
  T.m_ = space.params().m;
  T.k_ = space.params().k;
  T.density_scale_ = space.params().density_scale;
  T.max_error_ = max_err;
  const std::size_t N = ls.size();
  T.values_.resize(N * N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t l = 0; l < N; ++l)
        T.values_[(i * N + j) * N + l] =
            reduced[(static_cast<std::size_t>(slot[i]) * D + static_cast<std::size_t>(slot[j])) * D +
                    static_cast<std::size_t>(slot[l])];
  return T;
}

std::uint64_t KernelTensor::cache_key(const SpaceParams& params, const UniformGrid& grid) {
  Fnv1a h;
  h.add(static_cast<std::int32_t>(params.m));
  h.add(static_cast<std::int32_t>(params.k));
  h.add(grid.min);
  h.add(grid.max);
  h.add(static_cast<std::int32_t>(grid.count));
  h.add(params.density_scale);
  return h.h;
}

std::filesystem::path KernelTensor::cache_file(const std::filesystem::path& dir, const SpaceParams& params,
                                               const UniformGrid& grid) {
  std::ostringstream name;
  name << "kernel_" << std::hex << std::setw(16) << std::setfill('0') << cache_key(params, grid) << ".drsk";
  return dir / name.str();
}

void KernelTensor::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // unique per writer so concurrent builders never share a temporary
  std::random_device rd;
  const auto tmp = path.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw NumericalError("kernel cache: cannot write " + tmp);
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::int32_t>(os, m_);
    put<std::int32_t>(os, k_);
    put<double>(os, grid_.min);
    put<double>(os, grid_.max);
    put<std::int32_t>(os, grid_.count);
    put<double>(os, density_scale_);
    put<double>(os, max_error_);
    os.write(reinterpret_cast<const char*>(values_.data()),
             static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!os) throw NumericalError("kernel cache: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

KernelTensor KernelTensor::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("kernel cache: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw FormatError("kernel cache: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw FormatError("kernel cache: unsupported version");
  KernelTensor T;
  T.m_ = get<std::int32_t>(is);
  T.k_ = get<std::int32_t>(is);
  T.grid_.min = get<double>(is);
  T.grid_.max = get<double>(is);
  T.grid_.count = get<std::int32_t>(is);
  T.density_scale_ = get<double>(is);
  T.max_error_ = get<double>(is);
  if (T.grid_.count < 2 || T.grid_.count > 2048) throw FormatError("kernel cache: implausible grid size");
  const std::size_t N = static_cast<std::size_t>(T.grid_.count);
  T.values_.resize(N * N * N);
  if (!is.read(reinterpret_cast<char*>(T.values_.data()), static_cast<std::streamsize>(T.values_.size() * sizeof(double))))
    throw FormatError("kernel cache: truncated tensor");
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("kernel cache: trailing bytes");
  return T;
}

KernelTensor KernelTensor::cached(const Space& space, const UniformGrid& grid, const std::filesystem::path& dir,
                                  bool rebuild, bool* hit) {
  const auto file = cache_file(dir, space.params(), grid);
  if (!rebuild && std::filesystem::exists(file)) {
    try {
      KernelTensor T = load(file);
      T.check_space(space.params());
      if (T.grid() == grid) {
        if (hit) *hit = true;
        return T;
      }
    } catch (const std::exception&) {
      // stale or damaged entry: rebuild below
    }
  }
  KernelTensor T = build(space, grid);
  T.save(file);
  if (hit) *hit = false;
  return T;
}

void KernelTensor::check_space(const SpaceParams& params) const {
  if (params.m != m_ || params.k != k_ || params.density_scale != density_scale_)
    throw DomainError("kernel tensor belongs to a different space");
}

SpectralFunction odot(const Space& space, const KernelTensor& K, const SpectralFunction& A, const SpectralFunction& B,
                      double tail_tolerance) {
  K.check_space(space.params());
  check_on_grid(A, K.grid(), "odot");
  check_on_grid(B, K.grid(), "odot");
  const auto sw = spectral_weights(space, K.grid());
  const std::size_t N = sw.size();
  std::vector<double> a(N), b(N);
  for (std::size_t i = 0; i < N; ++i) {
    a[i] = A.values[i] * sw[i];
    b[i] = B.values[i] * sw[i];
  }
  check_tail(a, tail_tolerance, "odot");
  check_tail(b, tail_tolerance, "odot");

  const double c0sq = space.c0() * space.c0();
  const auto vals = K.values();
  std::vector<double> out(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < N; ++j) {
      const double ab = a[i] * b[j];
      if (ab == 0.0) continue;
      const double* row = vals.data() + (i * N + j) * N;
      for (std::size_t l = 0; l < N; ++l) out[l] += ab * row[l];
    }
  }
  SpectralFunction res;
  res.grid = K.grid();
  res.even = true;
  res.values.resize(N);
  for (std::size_t l = 0; l < N; ++l) res.values[l] = c0sq * out[l];
  // exact evenness (mirrored sums differ only by rounding order)
  for (std::size_t l = 0; l < N / 2; ++l) {
    const double v = 0.5 * (res.values[l] + res.values[N - 1 - l]);
    res.values[l] = res.values[N - 1 - l] = v;
  }
  return res;
}

SpectralFunction odot_star(const Space& space, const KernelTensor& K, const SpectralFunction& re,
                           const SpectralFunction* im) {
  auto out = odot(space, K, re, re);
  if (im) {
    const auto extra = odot(space, K, *im, *im);
    for (std::size_t l = 0; l < out.values.size(); ++l) out.values[l] += extra.values[l];
  }
  return out;
}

double pairing(const Space& space, const SpectralFunction& h, const SpectralFunction& A) {
  h.grid.validate("pairing grid");
  if (!(h.grid == A.grid)) throw DomainError("pairing: grids differ");
  if (h.values.size() != A.values.size()) throw DomainError("pairing: value counts differ");
  const auto sw = spectral_weights(space, h.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < sw.size(); ++i) s += h.values[i] * A.values[i] * sw[i];
  return s;
}

double l1_norm(const Space& space, const SpectralFunction& A) {
  A.grid.validate("l1 grid");
  const auto sw = spectral_weights(space, A.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < sw.size(); ++i) s += std::abs(A.values[i]) * sw[i];
  return s;
}

}  // namespace drspher
