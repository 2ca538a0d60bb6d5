#include "mmt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mmt/resonance.hpp"

namespace mmt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t draw) {
  const std::uint64_t k = splitmix64(splitmix64(seed) ^ (sample * 0xD1B54A32D192ED03ULL)) + draw * 0x8CB92BA72F3D8DD7ULL;
  return static_cast<double>(splitmix64(k) >> 11) * 0x1.0p-53;
}

namespace {

constexpr std::uint64_t kBlock = 4096;

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
};

Moments merge(const Moments& a, const Moments& b) {
  if (a.n == 0.0) return b;
  if (b.n == 0.0) return a;
  Moments r;
  r.n = a.n + b.n;
  const double d = b.mean - a.mean;
  r.mean = a.mean + d * (b.n / r.n);
  r.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / r.n);
  return r;
}

// Fixed-shape pairwise tree over the block results.
Moments tree_reduce(const std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return merge(tree_reduce(v, lo, mid), tree_reduce(v, mid, hi));
}

struct Interval {
  double a, b;
};

// Roots of a x^2 + b x + c = 0, cancellation-free.
int quadratic_roots(double a, double b, double c, double r[2]) {
  if (a == 0.0) {
    if (b == 0.0) return 0;
    r[0] = -c / b;
    return 1;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) {
    r[0] = 0.0;
    return 1;
  }
  r[0] = q / a;
  r[1] = c / q;
  return 2;
}

// {x in [lo, hi] : |a x^2 + b x + c| < delta}, as at most three intervals.
int slab(double a, double b, double c, double delta, double lo, double hi, Interval out[3]) {
  double pts[6];
  int m = 0;
  pts[m++] = lo;
  double r[2];
  for (double shift : {delta, -delta}) {
    const int k = quadratic_roots(a, b, c - shift, r);
    for (int i = 0; i < k; ++i)
      if (r[i] > lo && r[i] < hi) pts[m++] = r[i];
  }
  pts[m++] = hi;
  std::sort(pts, pts + m);
  int count = 0;
  for (int i = 0; i + 1 < m; ++i) {
    const double x0 = pts[i], x1 = pts[i + 1];
    if (!(x1 > x0)) continue;
    const double xm = 0.5 * (x0 + x1);
    if (std::abs((a * xm + b) * xm + c) < delta) {
      if (count > 0 && out[count - 1].b == x0)
        out[count - 1].b = x1;
      else if (count < 3)
        out[count++] = {x0, x1};
    }
  }
  return count;
}

struct Setup {
  double omega, beta, delta;
  double B;       // upper end of the w1, w2 range
  double log_lo;  // log-uniform stratum starts here
  double log_span;
  double near_lo;  // |w1 - w| stratum: log-uniform on [near_lo, w]
  double near_span;
};

Setup make_setup(const AnalyticSpectrum& n, double omega, const ModelParams& params, double delta,
                 std::uint64_t samples, const OracleOptions& opt) {
  if (!(omega > 0.0)) throw std::domain_error("oracle: omega must be positive");
  if (!(delta > 0.0)) throw std::domain_error("oracle: delta must be positive");
  if (samples < 10000) throw std::domain_error("oracle: at least 10^4 samples are required");
  const auto window = opt.window ? opt.window : n.support();
  if (!window || !(window->second > window->first) || !(window->first >= 0.0))
    throw std::domain_error("oracle: effective support is empty (give an explicit sampling window)");
  Setup s{omega, params.beta, delta, window->second + omega, 0.0, 0.0, 0.0, 0.0};
  const double lo = std::max(window->first, 1e-6 * s.B);
  s.log_lo = std::log(lo);
  s.log_span = std::log(s.B) - s.log_lo;
  s.near_lo = std::log(1e-9 * omega);
  s.near_span = std::log(omega) - s.near_lo;
  return s;
}

double sample_value(const AnalyticSpectrum& n, const Setup& s, const std::vector<SignFamily>& families,
                    std::uint64_t seed, std::uint64_t i) {
  // three strata in turn: uniform on [0, B], log-uniform on [lo, B], and
  // |w1 - w| log-uniform on [near_lo, w], which resolves the slab near w1 = w
  const double w = s.omega;
  const double r = counter_uniform(seed, i, 0);
  double w1;
  switch (i % 3) {
    case 0: w1 = r * s.B; break;
    case 1: w1 = std::exp(s.log_lo + r * s.log_span); break;
    default: {
      const double side = counter_uniform(seed, i, 100) < 0.5 ? -1.0 : 1.0;
      w1 = w + side * std::exp(s.near_lo + r * s.near_span);
    }
  }
  if (!(w1 > 0.0 && w1 <= s.B)) return 0.0;
  double density = 1.0 / s.B;
  if (w1 >= std::exp(s.log_lo)) density += 1.0 / (w1 * s.log_span);
  const double dist = std::abs(w1 - w);
  if (dist > 0.0 && dist >= std::exp(s.near_lo) && dist <= w) density += 0.5 / (dist * s.near_span);
  density /= 3.0;

  const double nw = n(w), n1 = n(w1);
  const double pref = std::pow(w, s.beta);
  double acc = 0.0;
  std::uint64_t draw = 1;
  for (const SignFamily& e : families) {
    const double d = w1 - w;
    const double a = e[1] + e[2];
    const double b = 2.0 * e[2] * d;
    const double c = e[2] * d * d + e[0] * w1 * w1 - w * w;
    Interval iv[3];
    const int k = slab(a, b, c, s.delta, std::max(0.0, w - w1), s.B, iv);
    for (int j = 0; j < 3; ++j, ++draw) {
      if (j >= k) continue;
      const double len = iv[j].b - iv[j].a;
      const double w2 = iv[j].a + counter_uniform(seed, i, draw) * len;
      const double w3 = w1 + w2 - w;
      if (!(w2 > 0.0 && w3 > 0.0)) continue;
      const double n2 = n(w2), n3 = n(w3);
      const double I = n1 * n2 * n3 + n1 * n2 * nw - n1 * n3 * nw - n2 * n3 * nw;
      acc += len / (2.0 * s.delta) * pref * std::pow(w1 * w2 * w3, s.beta + 1.0) * I;
    }
  }
  return acc / density;
}

OracleEstimate run(const AnalyticSpectrum& n, double omega, const ModelParams& params, double delta,
                   std::uint64_t samples, std::uint64_t seed, const OracleOptions& opt, Execution exec) {
  params.validate();
  const Setup s = make_setup(n, omega, params, delta, samples, opt);
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<Moments> part(blocks);
  auto block = [&](long bi) {
    const auto b = static_cast<std::uint64_t>(bi);
    Moments m;
    const std::uint64_t end = std::min(samples, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) m.add(sample_value(n, s, opt.families, seed, i));
    part[b] = m;
  };
  const long nb = static_cast<long>(blocks);
  if (exec == Execution::serial) {
    for (long b = 0; b < nb; ++b) block(b);
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_workers())
    for (long b = 0; b < nb; ++b) block(b);
  }
  const Moments total = tree_reduce(part, 0, part.size());
  OracleEstimate est;
  est.mean = total.mean;
  est.std_error = std::sqrt(total.m2 / (total.n - 1.0)) / std::sqrt(total.n);
  est.samples = samples;
  est.delta_reg = delta;
  return est;
}

}  // namespace

OracleEstimate mc_collision(const AnalyticSpectrum& n, double omega, const ModelParams& params, double delta_reg,
                            std::uint64_t samples, std::uint64_t seed, const OracleOptions& options) {
  return run(n, omega, params, delta_reg, samples, seed, options, options.exec);
}

OracleEstimate mc_collision_serial(const AnalyticSpectrum& n, double omega, const ModelParams& params,
                                   double delta_reg, std::uint64_t samples, std::uint64_t seed,
                                   const OracleOptions& options) {
  return run(n, omega, params, delta_reg, samples, seed, options, Execution::serial);
}

double delta_bias(const AnalyticSpectrum& n, double omega, const ModelParams& params, double delta_reg,
                  std::uint64_t samples, std::uint64_t seed, const OracleOptions& options) {
  // same seed at both widths, so the difference is mostly regularization, not noise
  const OracleEstimate a = mc_collision(n, omega, params, delta_reg, samples, seed, options);
  const OracleEstimate b = mc_collision(n, omega, params, 2.0 * delta_reg, samples, seed, options);
  return std::abs(a.mean - b.mean);
}

std::vector<OracleEstimate> trivial_resonance_probe(const AnalyticSpectrum& n, double omega,
                                                    const ModelParams& params, const std::vector<double>& deltas,
                                                    std::uint64_t samples, std::uint64_t seed, SignFamily family) {
  OracleOptions opt;
  opt.families = {family};
  std::vector<OracleEstimate> out;
  for (double d : deltas) {
    // (-,-,-) has no solution with positive frequencies: the slab is empty for small delta
    out.push_back(mc_collision(n, omega, params, d, samples, seed, opt));
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace {

// u in (0, 1] with u_i(u) * omega = target, for the monotone scaling u_i of `family`.
std::optional<double> crossing(int family, int i, double omega, double target) {
  auto f = [&](double u) { return family_nodes(family, u)[static_cast<std::size_t>(i)] * omega - target; };
  double a = 1e-14, b = 1.0;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb) || fa * fb > 0.0) return std::nullopt;
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double lemma2_collision(const LemmaTwoData& data, double omega, const ModelParams& params, int order) {
  const AnalyticSpectrum f(data);
  const double e2 = data.eps * data.eps;
  const double bumps[3][2] = {{1.0 / 3.0, e2}, {2.0 / 3.0, data.eps}, {1.0, e2}};
  const GaussLegendre gl = gauss_legendre(order);
  const double fw = f(omega);
  double total = 0.0;
  for (int fam = 1; fam <= 4; ++fam) {
    std::vector<double> cuts;
    for (int k = 0; k <= 12; ++k) cuts.push_back(std::pow(10.0, -k));
    for (int i = 0; i < 3; ++i)
      for (const auto& bump : bumps)
        for (double off : {-1.0, -0.5, 0.5, 1.0}) {
          const auto u = crossing(fam, i, omega, bump[0] + off * bump[1]);
          if (u) cuts.push_back(*u);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t g = 0; g < gl.x.size(); ++g) {
        const double u = mid + half * gl.x[g];
        const auto s = family_nodes(fam, u);
        const double f1 = f(s[0] * omega), f2 = f(s[1] * omega), f3 = f(s[2] * omega);
        const double comb = f1 * f2 * f3 + f1 * f2 * fw - f1 * fw * f3 - fw * f2 * f3;
        if (comb != 0.0) total += half * gl.w[g] * family_kernel(fam, u, params.beta) * comb;
      }
    }
  }
  return std::pow(omega, params.collision_degree()) * total;
}

std::vector<LemmaTwoPoint> lemma2_harness(double p, const std::vector<double>& eps_list, const ModelParams& params,
                                          const LemmaTwoOptions& options) {
  if (!(p >= 1.0 && p < 3.0)) throw std::domain_error("lemma2: p must lie in [1, 3)");
  std::vector<LemmaTwoPoint> out;
  for (double eps : eps_list) {
    if (!(eps > 0.0) || !(eps * eps + eps < 1.0 / 3.0))
      throw std::domain_error("lemma2: eps = " + std::to_string(eps) + " does not separate the three bumps");
    const double spacing = eps * eps / options.nodes_per_width;
    const auto nodes = static_cast<std::size_t>(std::ceil(1.0 / spacing)) + 1;
    if (nodes > options.max_omega_nodes)
      throw std::runtime_error("lemma2: resolving width eps^2 = " + std::to_string(eps * eps) + " needs " +
                               std::to_string(nodes) + " frequency nodes (limit " +
                               std::to_string(options.max_omega_nodes) + ")");
    const LemmaTwoData data{eps, p};
    const double h = 1.0 / static_cast<double>(nodes - 1);
    std::vector<double> c(nodes);
    const long nl = static_cast<long>(nodes);
#pragma omp parallel for schedule(dynamic, 16) num_threads(max_workers())
    for (long j = 0; j < nl; ++j) {
      const double w = 0.5 + static_cast<double>(j) * h;
      // the open interval excludes the end points; they carry trapezoid weight h/2 anyway
      c[static_cast<std::size_t>(j)] = lemma2_collision(data, w, params, options.order);
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) acc += (j == 0 || j + 1 == nodes ? 0.5 : 1.0) * h * std::pow(std::abs(c[j]), p);

    // data norm over the whole support on the same spacing
    const AnalyticSpectrum f(data);
    const double lo = 1.0 / 3.0 - eps * eps, hi = 1.0 + eps * eps;
    const auto dn = static_cast<std::size_t>(std::ceil((hi - lo) / spacing)) + 1;
    const double dh = (hi - lo) / static_cast<double>(dn - 1);
    double facc = 0.0;
    for (std::size_t j = 0; j < dn; ++j)
      facc += (j == 0 || j + 1 == dn ? 0.5 : 1.0) * dh * std::pow(f(lo + static_cast<double>(j) * dh), p);

    out.push_back({eps, std::pow(acc, 1.0 / p), std::pow(facc, 1.0 / p), nodes});
  }
  return out;
}

}  // namespace mmt
