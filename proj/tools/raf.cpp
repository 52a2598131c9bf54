// raf: command-line front end.
//
//   raf kernel-check  | sample-zeros | converge-test | littlewood | fractal | boxdim
//
// Every run writes <out>/manifest.json echoing the resolved configuration, so
// `raf <subcommand> --config <out>/manifest.json --out <dir>` reproduces it.
// Exit status: 0 success, 1 invalid input, 2 numerical failure.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "raf/raf.hpp"

#ifndef RAF_VERSION
#define RAF_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using raf::cplx;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

/// Raised by a subcommand after writing its outputs when a check did not hold.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw raf::DomainError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw raf::DomainError("not a number: '" + s + "'");
  return v;
}

/// Accepts "x", "yi", "x+yi", "x-yi", "i", "-i".
cplx parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw raf::DomainError("empty complex number");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_list(s)) out.push_back(parse_real(t));
  return out;
}

raf::Window parse_window(const std::string& s) {
  const auto v = parse_reals(s);
  if (v.size() != 4) throw raf::DomainError("window must be xmin,xmax,ymin,ymax");
  const raf::Window w{v[0], v[1], v[2], v[3]};
  if (!w.valid()) throw raf::DomainError("window must have xmin < xmax and ymin < ymax");
  return w;
}

/// Shortest decimal that round-trips, for file-name tags.
std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

raf::TestFunction make_phi(const std::string& kind, double radius, double amplitude) {
  raf::TestFunction phi;
  if (kind == "bump")
    phi.kind = raf::TestFunctionKind::Bump;
  else if (kind == "smoothed-indicator" || kind == "indicator")
    phi.kind = raf::TestFunctionKind::SmoothedIndicator;
  else
    throw raf::DomainError("unknown test function '" + kind + "' (bump or smoothed-indicator)");
  if (!(radius > 0.0)) throw raf::DomainError("test function radius must be positive");
  phi.support_radius = radius;
  phi.amplitude = amplitude;
  return phi;
}

void write_sample(const fs::path& out, const std::string& stem, const raf::EmpiricalSample& s) {
  raf::io::atomic_write(out / (stem + ".csv"), raf::io::sample_csv(s));
  raf::io::atomic_write_json(out / (stem + ".json"), raf::io::sample_json(s));
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

constexpr double kMaxRejectionRate = 1e-3;

// ---------------------------------------------------------------- kernel-check

struct KernelCheckArgs {
  std::string kappas = "0,-0.25,-1";
  std::size_t triples = 10000;
  double variance_kappa = -1.0;
  std::size_t configs = 100;
  std::string abs_u = "0,0.5,0.9";
  double eps = 1e-6;
  std::uint64_t seed = 1;
};

/// Uniform point in |z| <= r.
cplx disk_point(raf::Engine& eng, double r) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rho = r * std::sqrt(unit(eng));
  return std::polar(rho, 2.0 * std::numbers::pi * unit(eng));
}

json run_kernel_check(const KernelCheckArgs& a, unsigned workers, bool& pass) {
  const auto kappas = parse_reals(a.kappas);
  const auto us = parse_reals(a.abs_u);
  for (const double k : kappas) (void)raf::Curvature(k);
  const raf::Curvature vk(a.variance_kappa);
  for (const double u : us) raf::require_in_domain(u, vk, "|u|");
  const double zmax = 0.5;
  if (!(zmax < vk.radius())) throw raf::DomainError("variance check points must lie in the disk");

  json cov = json::array();
  pass = true;
  for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
    const raf::Curvature kappa(kappas[ki]);
    const double r = kappa.is_flat() ? 2.0 : 0.95 * kappa.radius();
    std::vector<double> abs_res(a.triples), rel_res(a.triples);
    raf::parallel_for(a.triples, workers, [&](std::size_t i) {
      raf::Engine eng = raf::make_engine(raf::derive_seed(raf::derive_seed(a.seed, ki), i));
      const cplx z = disk_point(eng, r);
      const cplx w = disk_point(eng, r);
      const raf::DiskPoint u(disk_point(eng, r), kappa);
      abs_res[i] = raf::covariance_identity_residual(z, w, u);
      rel_res[i] = raf::covariance_identity_relative_residual(z, w, u);
    });
    const double max_abs = abs_res.empty() ? 0.0 : *std::max_element(abs_res.begin(), abs_res.end());
    const double max_rel = rel_res.empty() ? 0.0 : *std::max_element(rel_res.begin(), rel_res.end());
    const bool ok = max_rel < 1e-10;
    pass = pass && ok;
    cov.push_back({{"kappa", kappa.value()},
                   {"point_modulus", r},
                   {"triples", a.triples},
                   {"max_abs_residual", max_abs},
                   {"max_rel_residual", max_rel},
                   {"pass", ok}});
  }

  // Variance identity: sum_n |alpha_n(u)|^2 = sum lambda_j Q(z_j, z_k) conj(lambda_k).
  std::vector<double> worst_ratio(a.configs, 0.0), worst_spread(a.configs, 0.0);
  raf::parallel_for(a.configs, workers, [&](std::size_t i) {
    raf::Engine eng = raf::make_engine(raf::derive_seed(raf::derive_seed(a.seed, 1000), i));
    const std::size_t m = 1 + static_cast<std::size_t>(eng() % 4);
    std::vector<cplx> lambdas(m), zs(m);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t k = 0; k < m; ++k) {
      lambdas[k] = {normal(eng), normal(eng)};
      zs[k] = disk_point(eng, zmax);
    }
    const double angle = 2.0 * std::numbers::pi * std::uniform_real_distribution<double>(0.0, 1.0)(eng);
    const double q = raf::kernel_quadratic_form(lambdas, zs, vk);
    // Rounding scale of both sides: sum |lambda_j| |lambda_k| |Q(z_j, z_k)|.
    double scale = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        scale += std::abs(lambdas[j]) * std::abs(lambdas[k]) * std::abs(raf::covariance(zs[j], zs[k], vk));
    double lo = raf::kInfinity, hi = -raf::kInfinity, bound_max = 0.0;
    for (const double au : us) {
      const raf::DiskPoint u(std::polar(au, angle), vk);
      double r = 0.0, weight = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        r = std::max(r, std::abs(raf::mobius(zs[k], u)));
        weight += std::abs(lambdas[k]) / std::abs(raf::delta(zs[k], u));
      }
      r = std::max(r, 1e-3);
      const std::size_t n = raf::truncation_degree(vk, r, a.eps);
      const auto alpha = raf::alpha_coefficients(u, lambdas, zs, n);
      double s = 0.0;
      for (const auto& x : alpha) s += std::norm(x);
      const double floor = 8.0 * static_cast<double>(m * m + n + 1) * DBL_EPSILON * scale;
      const double bound = weight * weight * raf::series_tail(vk, n, r) + floor;
      worst_ratio[i] = std::max(worst_ratio[i], std::abs(s - q) / bound);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      bound_max = std::max(bound_max, bound);
    }
    worst_spread[i] = (hi - lo) / (2.0 * bound_max);
  });
  const double max_ratio = a.configs ? *std::max_element(worst_ratio.begin(), worst_ratio.end()) : 0.0;
  const double max_spread = a.configs ? *std::max_element(worst_spread.begin(), worst_spread.end()) : 0.0;
  const bool var_ok = max_ratio < 1.0 && max_spread < 1.0;
  pass = pass && var_ok;
  return {{"covariance_identity", cov},
          {"variance_identity",
           {{"kappa", vk.value()},
            {"configs", a.configs},
            {"abs_u", us},
            {"eps", a.eps},
            {"max_error_over_bound", max_ratio},
            {"max_u_spread_over_twice_bound", max_spread},
            {"pass", var_ok}}},
          {"pass", pass}};
}

// ---------------------------------------------------------------- sample-zeros / converge-test

struct ExperimentArgs {
  double kappa = -1.0;
  std::string ensemble = "gaussian";
  std::string phi = "bump";
  double phi_radius = 0.5;
  double phi_amplitude = 1.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double eps = 1e-6;
};

raf::ExperimentConfig experiment_config(const ExperimentArgs& a, const raf::Ensemble& ens, cplx u, std::uint64_t seed,
                                        unsigned workers) {
  raf::ExperimentConfig cfg;
  cfg.ensemble = ens;
  cfg.kappa = raf::Curvature(a.kappa);
  cfg.u = u;
  cfg.phi = make_phi(a.phi, a.phi_radius, a.phi_amplitude);
  cfg.n_samples = a.samples;
  cfg.master_seed = seed;
  cfg.truncation_eps = a.eps;
  cfg.workers = workers;
  // Validate the geometry now, before any sampling.
  (void)raf::search_disk(raf::DiskPoint(u, cfg.kappa), cfg.phi);
  if (!(a.eps > 0.0)) throw raf::DomainError("--eps must be positive");
  return cfg;
}

struct SampleZerosArgs {
  ExperimentArgs e;
  double abs_u = 0.0;
  double arg_u = 0.0;
  std::size_t raster = 0;
};

json run_sample_zeros(const SampleZerosArgs& a, const fs::path& out, unsigned workers, bool& pass) {
  const raf::Ensemble ens = raf::Ensemble::from_name(a.e.ensemble);
  const cplx u = std::polar(a.abs_u, a.arg_u);
  auto cfg = experiment_config(a.e, ens, u, a.e.seed, workers);
  if (a.raster > raf::kMaxRasterSide) throw raf::DomainError("--raster exceeds 2^14");
  cfg.retain_zeros = a.raster > 0;
  const auto sample = raf::run_experiment(cfg);
  write_sample(out, "samples_zeros", sample);
  if (a.raster > 0) {
    const auto win = raf::Window::centered({}, a.e.phi_radius);
    const auto grid = raf::intensity_raster(sample, win, a.raster, a.raster);
    raf::io::write_raster(out, "raster_intensity", grid, raf::PgmScaling::Linear,
                          {{"quantity", "mean zero count per pixel, mapped coordinates"}});
  }
  pass = sample.rejection_rate() < kMaxRejectionRate;
  return {{"metadata", raf::io::metadata_json(sample.meta)},
          {"mean", mean_of(sample.values)},
          {"stddev", stddev_of(sample.values)},
          {"rejection_rate", sample.rejection_rate()},
          {"pass", pass}};
}

struct ConvergeArgs {
  ExperimentArgs e;
  std::string reference = "auto";
  std::string abs_u = "0.3,0.7,0.95";
  double alpha = 0.05;
};

json run_converge(const ConvergeArgs& a, const fs::path& out, unsigned workers, bool& pass) {
  const raf::Ensemble ens = raf::Ensemble::from_name(a.e.ensemble);
  std::string ref_name = a.reference;
  if (ref_name == "auto") ref_name = ens.is_real() ? "real-gaussian" : "gaussian";
  const raf::Ensemble ref = raf::Ensemble::from_name(ref_name);
  const auto us = parse_reals(a.abs_u);
  if (us.empty()) throw raf::DomainError("--abs-u needs at least one value");
  if (!(a.alpha > 0.0 && a.alpha < 1.0)) throw raf::DomainError("--alpha must lie in (0, 1)");
  std::vector<raf::ExperimentConfig> cfgs;
  cfgs.push_back(experiment_config(a.e, ref, 0.0, raf::derive_seed(a.e.seed, 0), workers));
  for (std::size_t k = 0; k < us.size(); ++k)
    cfgs.push_back(experiment_config(a.e, ens, us[k], raf::derive_seed(a.e.seed, k + 1), workers));
  if (a.e.samples == 0) throw raf::DomainError("--samples must be positive for a KS comparison");

  const auto reference = raf::run_experiment(cfgs[0]);
  write_sample(out, "samples_reference", reference);
  std::ostringstream csv;
  csv.precision(17);
  csv << "abs_u,ks,threshold,rejections\n";
  json rows = json::array();
  std::vector<double> ks;
  double worst_rejection = reference.rejection_rate();
  const double threshold = raf::ks_threshold(a.e.samples, a.e.samples, a.alpha);
  for (std::size_t k = 0; k < us.size(); ++k) {
    const auto s = raf::run_experiment(cfgs[k + 1]);
    write_sample(out, "samples_u" + tag(us[k]), s);
    const double d = raf::ks_distance(s, reference);
    ks.push_back(d);
    worst_rejection = std::max(worst_rejection, s.rejection_rate());
    csv << tag(us[k]) << "," << d << "," << threshold << "," << s.meta.rejections << "\n";
    rows.push_back({{"abs_u", us[k]}, {"ks", d}, {"rejections", s.meta.rejections}, {"mean", mean_of(s.values)}});
  }
  raf::io::atomic_write(out / "report_converge.csv", csv.str());
  bool decreasing = true;
  for (std::size_t k = 1; k < ks.size(); ++k) decreasing = decreasing && ks[k] < ks[k - 1];
  pass = worst_rejection < kMaxRejectionRate;
  return {{"ensemble", ens.name()},
          {"reference", ref.name()},
          {"kappa", a.e.kappa},
          {"samples", a.e.samples},
          {"ks_threshold", threshold},
          {"alpha", a.alpha},
          {"reference_mean", mean_of(reference.values)},
          {"results", rows},
          {"ks_decreasing", decreasing},
          {"max_rejection_rate", worst_rejection},
          {"pass", pass}};
}

// ---------------------------------------------------------------- littlewood

struct LittlewoodArgs {
  std::size_t n = 13;
  std::string alphabet = "pm1";
  bool quotient = false;
  bool symmetry = false;
  std::size_t raster = 0;
  std::string window = "-2.2,2.2,-2.2,2.2";
  std::string holes = "1,-1,i";
  double exclusion_tol = 1e-6;
  double budget = 1e7;
};

json run_littlewood(const LittlewoodArgs& a, const fs::path& out, unsigned workers, bool& pass) {
  const raf::Alphabet alphabet = raf::parse_alphabet(a.alphabet);
  const raf::Window win = parse_window(a.window);
  if (a.raster > raf::kMaxRasterSide) throw raf::DomainError("--raster exceeds 2^14");
  std::vector<cplx> centers;
  for (const auto& t : split_list(a.holes)) centers.push_back(parse_complex(t));
  if (!(a.budget >= 1.0)) throw raf::DomainError("--budget must be positive");

  raf::EnumerateOptions opt;
  opt.budget = static_cast<std::uint64_t>(a.budget);
  opt.quotient = a.quotient;
  opt.workers = workers;
  const auto atlas = raf::enumerate_roots(a.n, alphabet, opt);

  json side = {{"format", "little-endian float64 (re, im) pairs"},
               {"n", a.n},
               {"alphabet", raf::alphabet_name(alphabet)},
               {"count", atlas.roots.size()},
               {"order", "sorted by (re, im)"}};
  pass = atlas.roots.size() == a.n * raf::sequence_count(a.n, alphabet);
  if (a.symmetry) {
    json sym = {{"tolerance", 1e-9},
                {"conjugation", raf::closed_under(atlas.roots, [](cplx z) { return std::conj(z); })},
                {"negation", raf::closed_under(atlas.roots, [](cplx z) { return -z; })},
                {"inversion", raf::closed_under(atlas.roots, [](cplx z) { return 1.0 / z; })}};
    if (alphabet == raf::Alphabet::Quaternary)
      sym["i_rotation"] = raf::closed_under(atlas.roots, [](cplx z) { return cplx{0.0, 1.0} * z; });
    for (auto it = sym.begin(); it != sym.end(); ++it)
      if (it.value().is_boolean()) pass = pass && it.value().get<bool>();
    side["symmetries_verified"] = sym;
  }
  raf::io::atomic_write(out / "roots.bin", raf::io::encode_points(atlas.roots));
  raf::io::atomic_write_json(out / "roots.json", side);

  if (a.raster > 0) {
    const auto grid = raf::raster_accumulate(atlas.roots, win, a.raster, a.raster);
    raf::io::write_raster(out, "raster_roots", grid, raf::PgmScaling::Log,
                          {{"n", a.n}, {"alphabet", raf::alphabet_name(alphabet)}});
  }
  json holes = json::array();
  for (const auto& c : centers) {
    const double h = raf::hole_radius(atlas, c, a.exclusion_tol);
    holes.push_back({{"center", complex_json(c)}, {"hole_radius", std::isfinite(h) ? json(h) : json(nullptr)}});
  }
  return {{"n", a.n},
          {"alphabet", raf::alphabet_name(alphabet)},
          {"count", atlas.roots.size()},
          {"exclusion_tol", a.exclusion_tol},
          {"holes", holes},
          {"pass", pass}};
}

// ---------------------------------------------------------------- fractal / boxdim

struct FractalArgs {
  std::string z;
  std::string alphabet = "pm1";
  std::size_t depth = 12;
  bool boxdim = false;
  std::size_t raster = 0;
  std::string window;
  std::string rect;
  double budget = 1e7;
};

json run_fractal(const FractalArgs& a, const fs::path& out, unsigned workers, bool& pass) {
  const cplx z = parse_complex(a.z);
  const raf::Alphabet alphabet = raf::parse_alphabet(a.alphabet);
  if (a.raster > raf::kMaxRasterSide) throw raf::DomainError("--raster exceeds 2^14");
  std::optional<raf::Window> win;
  if (!a.window.empty()) win = parse_window(a.window);
  std::optional<raf::Rect> rect;
  if (!a.rect.empty()) {
    const auto w = parse_window(a.rect);
    rect = raf::Rect{w.xmin, w.xmax, w.ymin, w.ymax};
  }
  if (a.boxdim && !(std::abs(z) < 1.0)) throw raf::DomainError("--boxdim needs |z| < 1");
  if (rect && !(std::abs(z) < 1.0)) throw raf::DomainError("--rect needs |z| < 1");
  if (!(a.budget >= 1.0)) throw raf::DomainError("--budget must be positive");

  const auto vs = raf::iterate_value_set(z, alphabet, a.depth, workers, static_cast<std::uint64_t>(a.budget));
  raf::io::atomic_write(out / "points.bin", raf::io::encode_points(vs.points));
  raf::io::atomic_write_json(out / "points.json", {{"format", "little-endian float64 (re, im) pairs"},
                                                   {"z", complex_json(z)},
                                                   {"alphabet", raf::alphabet_name(alphabet)},
                                                   {"depth", a.depth},
                                                   {"count", vs.points.size()},
                                                   {"tail_radius", vs.tail_radius}});
  json report = {{"z", complex_json(z)},
                 {"alphabet", raf::alphabet_name(alphabet)},
                 {"depth", a.depth},
                 {"points", vs.points.size()},
                 {"tail_radius", vs.tail_radius}};
  pass = true;
  if (a.boxdim) {
    const auto bd = raf::box_dimension(vs, workers);
    report["boxdim"] = raf::io::dimension_report(vs, bd);
    pass = pass && raf::bound_check(z, alphabet, bd.estimate);
  }
  if (rect) {
    const double d = raf::hausdorff_distance_to_rect(vs, *rect, workers);
    report["hausdorff"] = {{"rect", {rect->xmin, rect->xmax, rect->ymin, rect->ymax}},
                           {"grid_spacing", vs.tail_radius / 4.0},
                           {"distance", d},
                           {"tail_radius", vs.tail_radius}};
  }
  if (a.raster > 0) {
    raf::Window w;
    if (win) {
      w = *win;
    } else {
      double xmin = raf::kInfinity, xmax = -raf::kInfinity, ymin = raf::kInfinity, ymax = -raf::kInfinity;
      for (const auto& p : vs.points) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
      }
      const double half = 0.55 * std::max({xmax - xmin, ymax - ymin, 1e-9});
      w = raf::Window::centered({0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}, half);
    }
    const auto grid = raf::raster_accumulate(vs.points, w, a.raster, a.raster);
    raf::io::write_raster(out, "raster_fractal", grid, raf::PgmScaling::Log);
  }
  report["pass"] = pass;
  return report;
}

struct BoxdimArgs {
  std::string input;
  double delta_min = 0.0;
  double delta_max = 0.0;
  std::size_t scales = 8;
};

json run_boxdim(const BoxdimArgs& a, unsigned workers, bool& pass) {
  const auto points = raf::io::decode_points(raf::io::read_file(a.input));
  if (points.empty()) throw raf::DomainError("input point file is empty");
  if (a.scales == 0) throw raf::DomainError("--scales must be positive");
  double dmax = a.delta_max;
  double dmin = a.delta_min;
  if (dmax <= 0.0) {
    double xmin = raf::kInfinity, xmax = -raf::kInfinity, ymin = raf::kInfinity, ymax = -raf::kInfinity;
    for (const auto& p : points) {
      xmin = std::min(xmin, p.real());
      xmax = std::max(xmax, p.real());
      ymin = std::min(ymin, p.imag());
      ymax = std::max(ymax, p.imag());
    }
    dmax = std::hypot(xmax - xmin, ymax - ymin) / 4.0;
  }
  if (dmin <= 0.0) dmin = std::ldexp(dmax, -static_cast<int>(a.scales - 1));
  const auto bd = raf::box_dimension(points, dmin, dmax, a.scales, workers);
  pass = !bd.degenerate;
  return {{"input", fs::path(a.input).filename().string()},
          {"points", points.size()},
          {"scales", bd.scales},
          {"counts", bd.counts},
          {"estimate", bd.estimate},
          {"r_squared", bd.r_squared},
          {"degenerate_fit", bd.degenerate}};
}

// ---------------------------------------------------------------- configuration plumbing

bool option_given(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

/// Flags from a JSON config (flat, or a manifest with a "config" object) that
/// the command line does not already set.
std::vector<std::string> config_tokens(const fs::path& path, const std::vector<std::string>& args) {
  json j;
  try {
    j = json::parse(raf::io::read_file(path));
  } catch (const json::exception& e) {
    throw raf::DomainError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (j.contains("config") && j["config"].is_object()) j = j["config"];
  if (!j.is_object()) throw raf::DomainError("config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = it.key();
    if (key == "config" || key == "workers" || option_given(args, key)) continue;
    const auto& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    if (v.is_string() && v.get<std::string>().empty()) continue;
    std::string value;
    if (v.is_string()) {
      value = v.get<std::string>();
    } else if (v.is_array()) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) value += ",";
        value += v[k].is_string() ? v[k].get<std::string>() : v[k].dump();
      }
    } else {
      value = v.dump();
    }
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

json typed_value(const std::string& s) {
  if (s.empty()) return s;
  if (s == "true" || s == "false") return s == "true";
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) {
      // Integral values without a decimal point stay integers, so "1e+07" can feed an integer flag.
      if (s.find('.') == std::string::npos && v == std::trunc(v) && std::abs(v) < 0x1p53)
        return static_cast<std::int64_t>(v);
      return v;
    }
  } catch (const std::exception&) {
  }
  return s;
}

/// The resolved option values of a subcommand, minus run-local plumbing.
json resolved_config(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out" || name == "workers") continue;
    if (opt->get_type_size() == 0) {
      cfg[name] = opt->count() > 0;
      continue;
    }
    const std::string value = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    cfg[name] = typed_value(value);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random analytic functions: kernels, zero statistics, Littlewood root sets, fractal value sets"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(RAF_VERSION));

  std::string config_path;
  std::string out_dir = "raf_out";
  int workers_flag = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config or manifest; flags override its values");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--workers", workers_flag, "Worker threads (default: RAF_WORKERS, else all cores)");
  };
  auto add_experiment = [](CLI::App* sub, ExperimentArgs& e) {
    sub->add_option("--kappa", e.kappa, "Curvature parameter (<= 0)");
    sub->add_option("--ensemble", e.ensemble, "gaussian | real-gaussian | rademacher | quaternary");
    sub->add_option("--phi", e.phi, "Test function: bump | smoothed-indicator");
    sub->add_option("--phi-radius", e.phi_radius, "Test function support radius");
    sub->add_option("--phi-amplitude", e.phi_amplitude, "Test function amplitude");
    sub->add_option("--samples", e.samples, "Monte Carlo samples");
    sub->add_option("--seed", e.seed, "Master seed");
    sub->add_option("--eps", e.eps, "Truncation tail tolerance (standard deviation)");
  };

  KernelCheckArgs kc;
  auto* kernel = app.add_subcommand("kernel-check", "Covariance and variance identities on random sweeps");
  add_common(kernel);
  kernel->add_option("--kappa", kc.kappas, "Comma-separated curvatures for the covariance sweep");
  kernel->add_option("--triples", kc.triples, "Random (z, w, u) triples per curvature");
  kernel->add_option("--variance-kappa", kc.variance_kappa, "Curvature for the variance identity");
  kernel->add_option("--configs", kc.configs, "Random (lambda, z) configurations");
  kernel->add_option("--abs-u", kc.abs_u, "Comma-separated |u| values");
  kernel->add_option("--eps", kc.eps, "Truncation tolerance for alpha sums");
  kernel->add_option("--seed", kc.seed, "Master seed");

  SampleZerosArgs sz;
  auto* sample = app.add_subcommand("sample-zeros", "Linear statistics of RAF zeros seen from u");
  add_common(sample);
  add_experiment(sample, sz.e);
  sample->add_option("--abs-u", sz.abs_u, "|u|");
  sample->add_option("--arg-u", sz.arg_u, "arg u (radians)");
  sample->add_option("--raster", sz.raster, "Side of the mapped-zero intensity raster (0: none)");

  ConvergeArgs cv;
  cv.e.samples = 2000;
  cv.e.seed = 42;
  cv.e.ensemble = "quaternary";
  auto* converge = app.add_subcommand("converge-test", "KS distance to the Gaussian reference as |u| grows");
  add_common(converge);
  add_experiment(converge, cv.e);
  converge->add_option("--reference", cv.reference, "Reference ensemble at u = 0 (auto: matching Gaussian)");
  converge->add_option("--abs-u", cv.abs_u, "Comma-separated |u| values (u on the positive real axis)");
  converge->add_option("--alpha", cv.alpha, "KS significance level for the reported threshold");

  LittlewoodArgs lw;
  auto* littlewood = app.add_subcommand("littlewood", "All roots of degree-n polynomials over a finite alphabet");
  add_common(littlewood);
  littlewood->add_option("--n", lw.n, "Degree");
  littlewood->add_option("--alphabet", lw.alphabet, "pm1 | quaternary");
  littlewood->add_flag("--quotient", lw.quotient, "Solve one polynomial per unit-scaling orbit");
  littlewood->add_flag("--symmetry", lw.symmetry, "Verify conjugation/negation/inversion(/i-rotation) closure");
  littlewood->add_option("--raster", lw.raster, "Raster side in pixels (0: none)");
  littlewood->add_option("--window", lw.window, "Raster window xmin,xmax,ymin,ymax");
  littlewood->add_option("--holes", lw.holes, "Comma-separated hole centers");
  littlewood->add_option("--exclusion-tol", lw.exclusion_tol, "Roots this close to a hole center are ignored");
  littlewood->add_option("--budget", lw.budget, "Maximum number of roots");

  FractalArgs fr;
  auto* fractal = app.add_subcommand("fractal", "Value set of the +-1 or quaternary recurrence at z");
  add_common(fractal);
  fractal->add_option("--z", fr.z, "Complex parameter, e.g. 0.5, 0.3+0.4i, 0.7071i")->required();
  fractal->add_option("--alphabet", fr.alphabet, "pm1 | quaternary");
  fractal->add_option("--depth", fr.depth, "Recurrence depth n (|A|^(n+1) points)");
  fractal->add_flag("--boxdim", fr.boxdim, "Estimate the box-counting dimension");
  fractal->add_option("--raster", fr.raster, "Raster side in pixels (0: none)");
  fractal->add_option("--window", fr.window, "Raster window xmin,xmax,ymin,ymax (default: fitted)");
  fractal->add_option("--rect", fr.rect, "Rectangle xmin,xmax,ymin,ymax for the Hausdorff distance");
  fractal->add_option("--budget", fr.budget, "Maximum number of points");

  BoxdimArgs bx;
  auto* boxdim = app.add_subcommand("boxdim", "Box-counting dimension of a stored point cloud");
  add_common(boxdim);
  boxdim->add_option("--input", bx.input, "Point file (little-endian float64 pairs)")->required();
  boxdim->add_option("--delta-min", bx.delta_min, "Smallest box side (default: delta_max / 2^(scales-1))");
  boxdim->add_option("--delta-max", bx.delta_max, "Largest box side (default: diameter / 4)");
  boxdim->add_option("--scales", bx.scales, "Number of geometric scales");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // Config-file values only fill flags the command line leaves unset.
    auto cfg_it = std::find_if(args.begin(), args.end(),
                               [](const std::string& s) { return s == "--config" || s.rfind("--config=", 0) == 0; });
    if (cfg_it != args.end()) {
      std::string path;
      if (*cfg_it == "--config") {
        if (cfg_it + 1 == args.end()) throw raf::DomainError("--config needs a file");
        path = *(cfg_it + 1);
        args.erase(cfg_it, cfg_it + 2);
      } else {
        path = cfg_it->substr(9);
        args.erase(cfg_it);
      }
      const auto extra = config_tokens(path, args);
      args.insert(args.end(), extra.begin(), extra.end());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  CLI::App* sub = app.get_subcommands().front();
  const unsigned workers = raf::resolve_workers(workers_flag);
  const fs::path out(out_dir);
  json manifest = {{"artifact", "raf"},
                   {"version", RAF_VERSION},
                   {"subcommand", sub->get_name()},
                   {"config", resolved_config(sub)}};

  try {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw raf::DomainError("cannot create output directory " + out.string());
    raf::io::atomic_write_json(out / "manifest.json", manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    bool pass = true;
    json report;
    std::string stem;
    if (sub == kernel) {
      report = run_kernel_check(kc, workers, pass);
      stem = "report_kernel";
    } else if (sub == sample) {
      report = run_sample_zeros(sz, out, workers, pass);
      stem = "report_sample";
    } else if (sub == converge) {
      report = run_converge(cv, out, workers, pass);
      stem = "report_converge";
    } else if (sub == littlewood) {
      report = run_littlewood(lw, out, workers, pass);
      stem = "report_littlewood";
    } else if (sub == fractal) {
      report = run_fractal(fr, out, workers, pass);
      stem = "report_fractal";
    } else {
      report = run_boxdim(bx, workers, pass);
      stem = "report_boxdim";
    }
    raf::io::atomic_write_json(out / (stem + ".json"), report);
    std::cout << report.dump(2) << "\n";
    if (!pass) throw NumericalFailure("checks did not pass; see " + (out / (stem + ".json")).string());
  } catch (const raf::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const raf::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
