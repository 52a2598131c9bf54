// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "raf/raf.hpp"

namespace fs = std::filesystem;
using raf::cplx;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

cplx disk_point(raf::Engine& eng, double r) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::polar(r * std::sqrt(unit(eng)), 2.0 * std::numbers::pi * unit(eng));
}

const unsigned kWorkers = raf::resolve_workers();

// 1. Q(Phi z, Phi w) = Delta(z) conj(Delta(w)) Q(z, w) on 10^4 triples per curvature.
Outcome covariance_identity() {
  double worst = 0.0;
  for (const double k : {0.0, -0.25, -1.0}) {
    const raf::Curvature kappa(k);
    const double r = kappa.is_flat() ? 2.0 : 0.95 * kappa.radius();
    raf::Engine eng = raf::make_engine(raf::derive_seed(101, static_cast<std::uint64_t>(-k * 100)));
    for (int i = 0; i < 10000; ++i) {
      const cplx z = disk_point(eng, r), w = disk_point(eng, r);
      const raf::DiskPoint u(disk_point(eng, r), kappa);
      worst = std::max(worst, raf::covariance_identity_relative_residual(z, w, u));
    }
  }
  return {worst < 1e-10, "max relative residual " + fmt(worst) + " (< 1e-10)"};
}

// 2. sum |alpha_n(u)|^2 equals the kernel quadratic form, for every u.
Outcome variance_identity() {
  const raf::Curvature kappa(-1.0);
  double worst_ratio = 0.0, worst_spread = 0.0;
  raf::Engine eng = raf::make_engine(202);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int cfg = 0; cfg < 100; ++cfg) {
    const std::size_t m = 1 + static_cast<std::size_t>(eng() % 4);
    std::vector<cplx> lambdas(m), zs(m);
    for (std::size_t k = 0; k < m; ++k) {
      lambdas[k] = {normal(eng), normal(eng)};
      zs[k] = disk_point(eng, 0.5);
    }
    const double angle = 2.0 * std::numbers::pi * std::uniform_real_distribution<double>(0.0, 1.0)(eng);
    const double q = raf::kernel_quadratic_form(lambdas, zs, kappa);
    double scale = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        scale += std::abs(lambdas[j]) * std::abs(lambdas[k]) * std::abs(raf::covariance(zs[j], zs[k], kappa));
    double lo = raf::kInfinity, hi = -raf::kInfinity, bound_max = 0.0;
    for (const double au : {0.0, 0.5, 0.9}) {
      const raf::DiskPoint u(std::polar(au, angle), kappa);
      double r = 1e-3, weight = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        r = std::max(r, std::abs(raf::mobius(zs[k], u)));
        weight += std::abs(lambdas[k]) / std::abs(raf::delta(zs[k], u));
      }
      const std::size_t n = raf::truncation_degree(kappa, r, 1e-6);
      double s = 0.0;
      for (const auto& a : raf::alpha_coefficients(u, lambdas, zs, n)) s += std::norm(a);
      // Truncated tail by the triangle inequality, plus the rounding floor of both sums.
      const double bound = weight * weight * raf::series_tail(kappa, n, r) +
                           8.0 * static_cast<double>(m * m + n + 1) * DBL_EPSILON * scale;
      worst_ratio = std::max(worst_ratio, std::abs(s - q) / bound);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      bound_max = std::max(bound_max, bound);
    }
    worst_spread = std::max(worst_spread, (hi - lo) / (2.0 * bound_max));
  }
  return {worst_ratio < 1.0 && worst_spread < 1.0,
          "max error/bound " + fmt(worst_ratio) + ", max u-spread/(2 bound) " + fmt(worst_spread)};
}

// 3. Winding counts against Aberth, and localization against winding.
Outcome oracle_agreement() {
  int mismatches = 0, redraws = 0;
  raf::Engine eng = raf::make_engine(303);
  for (int i = 0; i < 200; ++i) {
    const std::size_t deg = 1 + eng() % 50;
    std::vector<cplx> c(deg + 1);
    for (auto& x : c) x = (eng() & 1) ? 1.0 : -1.0;
    const raf::Polynomial p(c);
    const auto roots = raf::aberth_root_list(p);
    // Radii with a root within 1e-4 of the circle are redrawn: the count there is ill-posed.
    double r = 0.0;
    for (;;) {
      r = std::uniform_real_distribution<double>(0.6, 1.4)(eng);
      bool clear = true;
      for (const auto& z : roots) clear = clear && std::abs(std::abs(z) - r) > 1e-4;
      if (clear) break;
      ++redraws;
    }
    int inside = 0;
    for (const auto& z : roots) inside += std::abs(z) < r;
    mismatches += raf::winding_count(p, 0.0, r) != inside;
  }
  int local_mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto s = raf::sample_raf(raf::Ensemble::complex_gaussian(), raf::Curvature(-1.0), 200, seed);
    const auto zs = raf::localize_zeros(s.poly, 0.0, 0.6);
    local_mismatches += !zs.resolved() || zs.total_multiplicity() != raf::winding_count(s.poly, 0.0, zs.radius);
  }
  return {mismatches == 0 && local_mismatches == 0,
          "winding/Aberth mismatches " + std::to_string(mismatches) + "/200 (" + std::to_string(redraws) +
              " radii redrawn), localize/winding mismatches " + std::to_string(local_mismatches) + "/100"};
}

raf::ExperimentConfig experiment(const raf::Ensemble& ens, double abs_u, std::uint64_t seed) {
  raf::ExperimentConfig cfg;
  cfg.ensemble = ens;
  cfg.kappa = raf::Curvature(-1.0);
  cfg.u = abs_u;
  cfg.phi = raf::TestFunction::bump(0.5);
  cfg.n_samples = 2000;
  cfg.master_seed = seed;
  cfg.workers = kWorkers;
  return cfg;
}

// 4. The GAF statistic does not depend on u.
Outcome gaf_stationarity() {
  const auto ens = raf::Ensemble::complex_gaussian();
  const auto a = raf::run_experiment(experiment(ens, 0.0, raf::derive_seed(42, 0)));
  const auto b = raf::run_experiment(experiment(ens, 0.9, raf::derive_seed(42, 1)));
  const double d = raf::ks_distance(a, b);
  return {d < 0.065, "KS(0, 0.9) = " + fmt(d) + " (< 0.065; 5% threshold " + fmt(raf::ks_threshold(2000, 2000)) + ")"};
}

// 5. Non-Gaussian coefficients approach the Gaussian limit as |u| grows.
Outcome convergence() {
  std::string detail;
  bool pass = true;
  for (const auto& [ens, ref] : {std::pair{raf::Ensemble::quaternary(), raf::Ensemble::complex_gaussian()},
                                 std::pair{raf::Ensemble::rademacher(), raf::Ensemble::real_gaussian()}}) {
    const auto reference = raf::run_experiment(experiment(ref, 0.0, raf::derive_seed(42, 0)));
    std::vector<double> ks;
    const std::vector<double> us{0.3, 0.7, 0.95};
    for (std::size_t k = 0; k < us.size(); ++k)
      ks.push_back(raf::ks_distance(raf::run_experiment(experiment(ens, us[k], raf::derive_seed(42, k + 1))), reference));
    const bool ok = ks[0] > ks[1] && ks[1] > ks[2] && ks[2] < 0.08;
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + ens.name() + " KS " + fmt(ks[0]) + " > " + fmt(ks[1]) + " > " + fmt(ks[2]) +
              " (last < 0.08)";
  }
  return {pass, detail};
}

// 6. Littlewood root sets.
Outcome littlewood() {
  raf::EnumerateOptions opt;
  opt.workers = kWorkers;
  const auto z13 = raf::enumerate_roots(13, raf::Alphabet::PlusMinusOne, opt);
  const auto z7 = raf::enumerate_roots(7, raf::Alphabet::PlusMinusOne, opt);
  const bool sym = raf::closed_under(z13.roots, [](cplx z) { return std::conj(z); }) &&
                   raf::closed_under(z13.roots, [](cplx z) { return -z; }) &&
                   raf::closed_under(z13.roots, [](cplx z) { return 1.0 / z; });
  const double h13 = raf::hole_radius(z13, 1.0), h7 = raf::hole_radius(z7, 1.0);
  const auto w8 = raf::enumerate_roots(8, raf::Alphabet::Quaternary, opt);
  const bool rot = raf::closed_under(w8.roots, [](cplx z) { return cplx(0.0, 1.0) * z; });
  const bool pass = z13.roots.size() == 212992 && sym && h13 < h7 && w8.roots.size() == 2097152 && rot;
  return {pass, "|Z13| = " + std::to_string(z13.roots.size()) + ", symmetric " + (sym ? "yes" : "no") + ", hole(1) " +
                    fmt(h13) + " < " + fmt(h7) + ", |W8| = " + std::to_string(w8.roots.size()) + ", i-rotation " +
                    (rot ? "yes" : "no")};
}

// 7. Fractal value sets.
Outcome fractal() {
  using raf::Alphabet;
  const auto c16 = raf::iterate_value_set(1.0 / 3.0, Alphabet::PlusMinusOne, 16, kWorkers);
  const double d16 = raf::box_dimension(c16, kWorkers).estimate;
  const auto b8 = raf::iterate_value_set(0.5, Alphabet::Quaternary, 8, kWorkers);
  const double h8 = raf::hausdorff_distance_to_rect(b8, {-2, 2, -2, 2}, kWorkers);
  const double h8_max = std::numbers::sqrt2 * std::ldexp(1.0, -8) * 1.05;
  const cplx zi(0.0, std::numbers::sqrt2 / 2);
  const auto c12 = raf::iterate_value_set(zi, Alphabet::PlusMinusOne, 12, kWorkers);
  const double h12 = raf::hausdorff_distance_to_rect(c12, {-2, 2, -std::numbers::sqrt2, std::numbers::sqrt2}, kWorkers);
  const double h12_max = std::ldexp(1.0, -6) / (1.0 - std::sqrt(0.5)) * 1.05;

  bool bounded = raf::bound_check(1.0 / 3.0, Alphabet::PlusMinusOne, d16) &&
                 raf::bound_check(0.5, Alphabet::Quaternary, raf::box_dimension(b8, kWorkers).estimate);
  double worst_excess = -raf::kInfinity;
  for (const auto a : {Alphabet::PlusMinusOne, Alphabet::Quaternary})
    for (const double r : {0.3, 0.45, 0.6, 0.707})
      for (const double arg : {0.0, 0.7, std::numbers::pi / 2}) {
        const cplx z = std::polar(r, arg);
        const auto vs = raf::iterate_value_set(z, a, a == Alphabet::PlusMinusOne ? 18 : 9, kWorkers);
        const double est = raf::box_dimension(vs, kWorkers).estimate;
        worst_excess = std::max(worst_excess, est - raf::dimension_bound(z, a));
        bounded = bounded && raf::bound_check(z, a, est);
      }
  const bool pass = d16 >= 0.58 && d16 <= 0.68 && h8 <= h8_max && h12 <= h12_max && bounded;
  return {pass, "dim C16(1/3) " + fmt(d16) + ", d_H(B8, square) " + fmt(h8) + " <= " + fmt(h8_max) +
                    ", d_H(C12(i/sqrt2), rect) " + fmt(h12) + " <= " + fmt(h12_max) + ", max estimate - bound " +
                    fmt(worst_excess) + " (<= 0.1)"};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RAF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = raf::io::read_file(e.path());
  return out;
}

// 8. Byte-identical outputs across worker counts.
Outcome reproducibility() {
  const fs::path root = fs::temp_directory_path() / "raf_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path points = root / "boxdim_src";
  if (run_cli("fractal --z 0.333333 --depth 14 --workers 2 --out " + points.string()) != 0)
    return {false, "could not produce the boxdim input"};
  const std::vector<std::pair<std::string, std::string>> runs{
      {"kernel", "kernel-check --seed 8"},
      {"sample", "sample-zeros --kappa -1 --abs-u 0.9 --samples 500 --seed 8 --raster 65"},
      {"converge", "converge-test --kappa -1 --ensemble quaternary --samples 300 --seed 8"},
      {"littlewood", "littlewood --n 11 --symmetry --raster 257 --holes 1,-1"},
      {"fractal", "fractal --z 0.3+0.6i --alphabet quaternary --depth 8 --boxdim --raster 256 --rect -2,2,-2,2"},
      {"boxdim", "boxdim --input " + (points / "points.bin").string()}};
  std::string differing;
  std::size_t files = 0;
  for (const auto& [name, args] : runs) {
    const fs::path a = root / (name + "_1"), b = root / (name + "_4");
    if (run_cli(args + " --workers 1 --out " + a.string()) != 0 || run_cli(args + " --workers 4 --out " + b.string()) != 0) {
      differing += " " + name + "(exit)";
      continue;
    }
    const auto ca = dir_contents(a), cb = dir_contents(b);
    files += ca.size();
    if (ca != cb) differing += " " + name;
  }
  return {differing.empty(), std::to_string(runs.size()) + " subcommands, " + std::to_string(files) +
                                 " files compared" + (differing.empty() ? "" : "; differing:" + differing)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"covariance identity", covariance_identity}, {"variance identity", variance_identity},
      {"oracle agreement", oracle_agreement},       {"GAF stationarity", gaf_stationarity},
      {"convergence to the GAF", convergence},      {"Littlewood enumeration", littlewood},
      {"fractal special cases", fractal},           {"reproducibility", reproducibility}};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
