#include "fhlab/experiment.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>

#include "fhlab/field.hpp"
#include "fhlab/kernel.hpp"
#include "fhlab/logsum.hpp"
#include "fhlab/moments.hpp"
#include "fhlab/rng.hpp"
#include "fhlab/sampler.hpp"
#include "fhlab/stats.hpp"

namespace fhlab {

namespace fs = std::filesystem;
using cplx = std::complex<double>;

namespace {

const std::set<std::string> kCommon = {"experiment", "potential", "n",     "samples", "seed",
                                       "threads",    "kappa",     "alpha", "sampler", "mala"};

const std::map<std::string, std::set<std::string>>& extra_keys() {
  static const std::map<std::string, std::set<std::string>> m = {
      {"moments", {"singularities", "test_fn", "tolerance"}},
      {"ward", {"h"}},
      {"isotropy", {"g", "tau", "delta"}},
      {"clt", {"zetas"}},
      {"field", {"grid", "centering", "csv_limit"}},
      {"gmc", {"grid", "gamma", "square", "reference", "csv_limit"}},
      {"kernel", {"z", "radii"}},
      {"harmonic", {"droplet", "walkers", "start_radius", "step", "bins", "energy_points"}},
      {"freezing", {"grid", "gammas"}},
      {"thickpoints", {"grid", "gamma"}},
      {"max", {"grid"}},
  };
  return m;
}

template <class T>
T get_or(const json& j, const char* key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

cplx parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("points are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

GridGeometry parse_grid(const json& j) {
  GridGeometry g;
  if (j.is_null()) return g;
  require_keys(j, {"x0", "x1", "y0", "y1", "resolution"}, "grid");
  g.region = {get_or(j, "x0", -0.5), get_or(j, "x1", 0.5), get_or(j, "y0", -0.5), get_or(j, "y1", 0.5)};
  g.resolution = get_or(j, "resolution", 64);
  if (g.resolution < 1) throw ConfigError("grid resolution must be positive");
  return g;
}

Rect parse_rect(const json& j, Rect def) {
  if (j.is_null()) return def;
  require_keys(j, {"x0", "x1", "y0", "y1"}, "square");
  return {get_or(j, "x0", def.x0), get_or(j, "x1", def.x1), get_or(j, "y0", def.y0),
          get_or(j, "y1", def.y1)};
}

json derived_scales(int n, double kappa, double alpha) {
  const double dn = n;
  return {{"n", n},
          {"delta", std::pow(dn, -0.5 + kappa)},
          {"Delta", std::pow(dn, -0.5 - alpha)},
          {"delta_N", std::pow(std::log(dn), 2) / std::sqrt(dn)}};
}

json check(const std::string& name, bool passed, double value, double tolerance) {
  return {{"name", name}, {"passed", passed}, {"value", value}, {"tolerance", tolerance}};
}

struct Runner {
  const ExperimentConfig& cfg;
  std::string out;
  std::string version = version_string();
  std::string hash;
  json records = json::array();
  json checks = json::array();

  std::string path(const std::string& f) const { return (fs::path(out) / f).string(); }

  SamplerMethod method() const {
    const std::string def = cfg.potential.kind == PotentialKind::Ginibre ? "dense" : "radial_dpp";
    const SamplerMethod m = method_from_name(get_or<std::string>(cfg.raw, "sampler", def));
    const bool gin = cfg.potential.kind == PotentialKind::Ginibre;
    if (!gin && (m == SamplerMethod::GinibreDense || m == SamplerMethod::GinibreHessenberg ||
                 m == SamplerMethod::KostlanModuli))
      throw ConfigError("sampler '" + method_name(m) + "' exists only for the Ginibre potential");
    if (m == SamplerMethod::RadialDPP && !cfg.potential.radial())
      throw ConfigError("radial_dpp needs a radial potential");
    return m;
  }

  std::vector<Spectrum> draw(int n, std::uint64_t stream) const {
    BatchRequest r;
    r.method = method();
    r.potential = cfg.potential;
    r.n = n;
    r.count = cfg.samples;
    r.seed = derive_seed(cfg.seed, stream);
    if (r.method == SamplerMethod::MALA) {
      const json m = cfg.raw.value("mala", json::object());
      require_keys(m, {"steps", "step_size", "burn_in"}, "mala");
      r.mala.burn_in = get_or<long>(m, "burn_in", 50000);
      r.mala_steps = get_or<long>(m, "steps", r.mala.burn_in + 1000);
      r.mala_step_size = get_or(m, "step_size", 0.5 / std::sqrt(double(n)));
    }
    return sample_batch(r, cfg.threads);
  }

  int single_n() const {
    if (cfg.n_list.size() != 1) throw ConfigError("experiment '" + cfg.experiment + "' takes a single n");
    return cfg.n_list.front();
  }

  void moments() {
    MomentQuery q;
    q.kappa = cfg.kappa;
    for (const auto& s : cfg.raw.value("singularities", json::array())) {
      require_keys(s, {"re", "im", "gamma"}, "singularity");
      q.singularities.push_back({{get_or(s, "re", 0.0), get_or(s, "im", 0.0)}, get_or(s, "gamma", 0.0)});
    }
    if (cfg.raw.contains("test_fn")) q.test_fn = parse_test_fn(cfg.raw["test_fn"]);
    const double tol = get_or(cfg.raw, "tolerance", 0.15);
    const bool gin = cfg.potential.kind == PotentialKind::Ginibre;
    std::uint64_t stream = 0;
    for (int n : cfg.n_list) {
      q.n = n;
      // The right-hand side validates the query, so evaluate it before sampling.
      const double rhs = (gin ? fh_rhs_ginibre(q) : fh_rhs_general(cfg.potential, q)).log_magnitude;
      const auto batch = draw(n, stream++);
      const MCEstimate e = mc_moment(batch, q, cfg.threads);
      const double ratio = std::exp(e.log_mean - rhs);
      json rec = {{"sweep_id", hash},        {"n", n},
                  {"samples", e.samples},    {"seed", cfg.seed},
                  {"log_rhs", rhs},          {"log_mc", e.log_mean},
                  {"rel_stderr", e.rel_stderr}, {"ess", e.ess},
                  {"ratio", ratio},          {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}};
      bool origin = gin && q.test_fn.is_zero();
      double gsum = 0;
      for (const auto& s : q.singularities) {
        origin = origin && s.zeta == cplx(0, 0);
        gsum += s.gamma;
      }
      if (origin && q.singularities.size() <= 1) rec["log_exact"] = origin_moment_exact(n, gsum).log_magnitude;
      records.push_back(rec);
      checks.push_back(check("ratio_within_tolerance_n" + std::to_string(n), std::abs(ratio - 1) <= tol,
                             ratio, tol));
    }
  }

  void ward() {
    const int n = single_n();
    const TestFn h = cfg.raw.contains("h") ? parse_test_fn(cfg.raw["h"]) : TestFn::monomial(1, 1.0);
    const auto batch = draw(n, 0);
    std::vector<double> re, im;
    CsvWriter w(path("ward.csv"), {"sample", "re", "im"}, version, hash);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const cplx x = ward_statistic(batch[i], h, cfg.potential);
      re.push_back(x.real());
      im.push_back(x.imag());
      w.row({double(i), x.real(), x.imag()});
    }
    const double mr = mean(re), mi = mean(im);
    const double se = batch.size() > 1 ? std::sqrt((variance(re) + variance(im)) / batch.size()) : 0.0;
    const double z = se > 0 ? std::hypot(mr, mi) / se : 0.0;
    records.push_back({{"n", n}, {"samples", batch.size()}, {"h", h.describe()}, {"mean_re", mr},
                       {"mean_im", mi}, {"stderr", se}, {"z_score", z},
                       {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}});
    checks.push_back(check("abs_z_score_le_3", z <= 3, z, 3));
  }

  void isotropy() {
    const int n = single_n();
    const double tau = get_or(cfg.raw, "tau", 0.3);
    const double delta = get_or(cfg.raw, "delta", std::pow(double(n), -0.5 + cfg.kappa));
    const TestFn g = cfg.raw.contains("g") ? parse_test_fn(cfg.raw["g"]) : TestFn::compact_bump(0.0, tau, 1.0);
    const double bound = tau * tau * std::pow(double(n), 1 - cfg.kappa);
    const auto batch = draw(n, 0);
    CsvWriter w(path("isotropy.csv"), {"sample", "re", "im", "abs"}, version, hash);
    long inside = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const cplx x = isotropy_statistic(batch[i], g, delta);
      inside += std::abs(x) <= bound;
      w.row({double(i), x.real(), x.imag(), std::abs(x)});
    }
    const double frac = double(inside) / batch.size();
    records.push_back({{"n", n}, {"samples", batch.size()}, {"bound", bound}, {"delta", delta},
                       {"fraction_within_bound", frac},
                       {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}});
    checks.push_back(check("fraction_within_bound_ge_0.95", frac >= 0.95, frac, 0.95));
  }

  void clt() {
    const int n = single_n();
    std::vector<cplx> zetas;
    for (const auto& p : cfg.raw.value("zetas", json::array({json::array({0.0, 0.0})})))
      zetas.push_back(parse_point(p));
    const auto batch = draw(n, 0);
    const CltCovariance c = clt_covariance(batch, zetas, cfg.kappa);
    CsvWriter w(path("clt.csv"), {"j", "k", "empirical", "predicted"}, version, hash);
    double worst = 0;
    for (int j = 0; j < c.empirical.rows(); ++j)
      for (int k = 0; k < c.empirical.cols(); ++k) {
        w.row({double(j), double(k), c.empirical(j, k), c.predicted(j, k)});
        worst = std::max(worst, std::abs(c.empirical(j, k) - c.predicted(j, k)));
      }
    records.push_back({{"n", n}, {"samples", batch.size()}, {"max_abs_deviation", worst},
                       {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}});
    checks.push_back(check("max_abs_deviation_le_0.08", worst <= 0.08, worst, 0.08));
  }

  std::vector<FieldGrid> fields(int n, std::uint64_t stream, const GridGeometry& g, Centering mode) {
    const auto batch = draw(n, stream);
    std::vector<double> emp;
    if (mode == Centering::EmpiricalMean) emp = empirical_centering(batch, g, cfg.threads);
    std::vector<FieldGrid> out;
    for (const auto& s : batch)
      out.push_back(eval_field(s, g, cfg.potential, mode, mode == Centering::EmpiricalMean ? &emp : nullptr));
    for (std::size_t i = 0; i < batch.size(); ++i) out[i].n = n;
    seeds.clear();
    for (const auto& s : batch) seeds.push_back(s.seed);
    return out;
  }
  std::vector<std::uint64_t> seeds;

  void field() {
    const int n = single_n();
    const GridGeometry g = parse_grid(cfg.raw.value("grid", json()));
    const std::string c = get_or<std::string>(cfg.raw, "centering", "analytic");
    if (c != "analytic" && c != "empirical") throw ConfigError("centering is 'analytic' or 'empirical'");
    const auto fs = fields(n, 0, g, c == "analytic" ? Centering::AnalyticAsymptotic : Centering::EmpiricalMean);
    const long limit = get_or<long>(cfg.raw, "csv_limit", 1);
    std::vector<double> means, maxes;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      means.push_back(mean(fs[i].values));
      maxes.push_back(field_max_stat(fs[i]));
      if (static_cast<long>(i) < limit) {
        CsvWriter w(path("field_" + std::to_string(seeds[i]) + ".csv"), {"x", "y", "value"}, version, hash);
        for (int k = 0; k < g.size(); ++k) w.row({g.node(k).real(), g.node(k).imag(), fs[i].values[k]});
      }
    }
    records.push_back({{"n", n}, {"samples", fs.size()}, {"mean_field", mean(means)},
                       {"median_max_over_log_n", median(maxes)},
                       {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}});
  }

  void gmc() {
    const int n = single_n();
    const GridGeometry g = parse_grid(cfg.raw.value("grid", json()));
    const double gamma = get_or(cfg.raw, "gamma", 1.0);
    const Rect a = parse_rect(cfg.raw.value("square", json()), g.region);
    const auto fs = fields(n, 0, g, Centering::AnalyticAsymptotic);
    const long limit = get_or<long>(cfg.raw, "csv_limit", 1);
    std::vector<double> masses;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const GmcSample s = matrix_gmc_measure(fs[i], gamma, cfg.potential);
      masses.push_back(s.mass(a));
      if (static_cast<long>(i) < limit) {
        CsvWriter w(path("gmc_" + std::to_string(seeds[i]) + ".csv"), {"x", "y", "weight"}, version, hash);
        for (int k = 0; k < g.size(); ++k) w.row({g.node(k).real(), g.node(k).imag(), s.weights[k]});
      }
    }
    const double area = (a.x1 - a.x0) * (a.y1 - a.y0);
    const double m = mean(masses);
    const double se = masses.size() > 1 ? std_error(masses) : 0.0;
    records.push_back({{"n", n}, {"samples", masses.size()}, {"gamma", gamma}, {"area", area},
                       {"mean_mass", m}, {"stderr", se},
                       {"variance", masses.size() > 1 ? variance(masses) : 0.0},
                       {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}});
    checks.push_back(check("mean_mass_within_3_stderr", std::abs(m - area) <= 3 * se, m, area));
    if (cfg.raw.contains("reference")) {
      const json r = cfg.raw["reference"];
      require_keys(r, {"gamma_prime", "epsilon", "capacity_log", "samples"}, "reference");
      ReferenceGmc ref(g, get_or(r, "gamma_prime", gamma / std::numbers::sqrt2),
                       get_or(r, "capacity_log", 0.0), get_or(r, "epsilon", 0.04));
      const long ns = get_or<long>(r, "samples", cfg.samples);
      std::vector<double> rm;
      for (long i = 0; i < ns; ++i) rm.push_back(ref.sample(derive_seed(cfg.seed, 1u << 20 | i)).mass(a));
      const double rmean = mean(rm), rse = ns > 1 ? std_error(rm) : 0.0;
      records.push_back({{"reference_samples", ns}, {"reference_mean_mass", rmean},
                         {"reference_stderr", rse}, {"reference_variance", ns > 1 ? variance(rm) : 0.0}});
      checks.push_back(check("reference_mean_mass_within_3_stderr", std::abs(rmean - area) <= 3 * rse, rmean, area));
    }
  }

  void kernel() {
    const int n = single_n();
    if (!cfg.potential.radial()) throw ConfigError("kernel experiment needs a radial potential");
    const PlanarKernel k = build_kernel(cfg.potential, n);
    write_kernel_norms_csv(path("kernel_norms.csv"), k, version, hash);
    const cplx z = cfg.raw.contains("z") ? parse_point(cfg.raw["z"]) : cplx(0, 0);
    std::vector<double> radii = get_or(cfg.raw, "radii", std::vector<double>{});
    if (radii.empty())
      for (int i = 1; i <= 40; ++i) radii.push_back(i * 4.0 / (40 * std::sqrt(double(n))));
    const auto prof = decay_profile(k, z, radii);
    CsvWriter w(path("decay.csv"), {"distance", "log_abs_kernel"}, version, hash);
    std::vector<double> x, y;
    for (const auto& [d, l] : prof) {
      w.row({d, l});
      x.push_back(std::sqrt(double(n)) * d);
      y.push_back(-l);
    }
    const LinearFit fit = linear_fit(x, y);
    const double diag = kernel_eval(k, z, z, true).real();
    records.push_back({{"n", n}, {"z", {z.real(), z.imag()}}, {"decay_slope", fit.slope},
                       {"decay_r2", fit.r2}, {"diagonal", diag}, {"diagonal_over_n", diag / n},
                       {"derived_scales", derived_scales(n, cfg.kappa, cfg.alpha)}});
    checks.push_back(check("decay_slope_positive", fit.slope > 0, fit.slope, 0));
  }

  void harmonic() {
    const Droplet d = parse_droplet(cfg.raw.value("droplet", json{{"shape", "disk"}, {"radius", 1.0}}));
    const double diam = d.diameter();
    const long walkers = get_or<long>(cfg.raw, "walkers", 10000);
    const double start = get_or(cfg.raw, "start_radius", 3.5 * diam);
    const double step = get_or(cfg.raw, "step", 1e-2 * diam);
    const int bins = get_or(cfg.raw, "bins", 64);
    const HittingHistogram h = brownian_hitting_estimate(d, walkers, start, step, cfg.seed, cfg.threads, bins);
    const double ks = ks_one_sample(h.hits, [](double t) { return t / (2 * std::numbers::pi); });
    CsvWriter w(path("histogram.csv"), {"bin", "theta_lo", "theta_hi", "count"}, version, hash);
    for (int b = 0; b < bins; ++b)
      w.row({double(b), 2 * std::numbers::pi * b / bins, 2 * std::numbers::pi * (b + 1) / bins,
             double(h.counts[b])});
    const double cap_e = capacity_energy(d, get_or(cfg.raw, "energy_points", 256));
    records.push_back({{"droplet", to_json(d)}, {"walkers", walkers}, {"ks_distance", ks},
                       {"total_steps", h.total_steps}, {"capacity_log", capacity(d)},
                       {"capacity_log_energy", cap_e}});
    checks.push_back(check("ks_distance_le_0.02", ks <= 0.02, ks, 0.02));
    checks.push_back(check("capacity_methods_agree_1e-3", std::abs(cap_e - capacity(d)) <= 1e-3,
                           std::abs(cap_e - capacity(d)), 1e-3));
  }

  void freezing() {
    const int n = single_n();
    const GridGeometry g = parse_grid(cfg.raw.value("grid", json()));
    const std::vector<double> gammas = get_or(cfg.raw, "gammas", std::vector<double>{1.0, 4.0});
    const auto fs = fields(n, 0, g, Centering::AnalyticAsymptotic);
    CsvWriter w(path("freezing.csv"), {"sample", "gamma", "statistic"}, version, hash);
    for (double gm : gammas) {
      std::vector<double> st;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        st.push_back(free_energy_stat(fs[i], gm));
        w.row({double(i), gm, st.back()});
      }
      const double target = gm < 2 * std::numbers::sqrt2 ? 1 / gm + gm / 8 : 1 / std::numbers::sqrt2;
      const double med = median(st);
      records.push_back({{"n", n}, {"gamma", gm}, {"median", med}, {"target", target}, {"samples", st.size()}});
      checks.push_back(check("median_within_0.1_gamma_" + format_double(gm), std::abs(med - target) <= 0.1, med, 0.1));
    }
  }

  void thickpoints() {
    const GridGeometry g = parse_grid(cfg.raw.value("grid", json()));
    const double gamma = get_or(cfg.raw, "gamma", 0.4);
    CsvWriter w(path("thick.csv"), {"n", "sample", "area"}, version, hash);
    std::vector<double> ln_n, ln_area;
    std::uint64_t stream = 0;
    for (int n : cfg.n_list) {
      const auto fs = fields(n, stream++, g, Centering::AnalyticAsymptotic);
      std::vector<double> areas;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        areas.push_back(thick_points(fs[i], gamma));
        w.row({double(n), double(i), areas.back()});
      }
      const double m = mean(areas);
      records.push_back({{"n", n}, {"mean_area", m}, {"samples", areas.size()}});
      if (m > 0) {
        ln_n.push_back(std::log(double(n)));
        ln_area.push_back(std::log(m));
      }
    }
    if (ln_n.size() >= 2) {
      const LinearFit fit = linear_fit(ln_n, ln_area);
      const double target = -2 * gamma * gamma;
      records.push_back({{"slope", fit.slope}, {"target", target}});
      checks.push_back(check("slope_within_50pct", std::abs(fit.slope - target) <= 0.5 * std::abs(target),
                             fit.slope, 0.5 * std::abs(target)));
    }
  }

  void max() {
    const int n = single_n();
    const GridGeometry g = parse_grid(cfg.raw.value("grid", json()));
    const auto fs = fields(n, 0, g, Centering::AnalyticAsymptotic);
    CsvWriter w(path("max.csv"), {"sample", "max_over_log_n"}, version, hash);
    std::vector<double> st;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      st.push_back(field_max_stat(fs[i]));
      w.row({double(i), st.back()});
    }
    const double med = median(st);
    records.push_back({{"n", n}, {"median", med}, {"target", 1 / std::numbers::sqrt2}, {"samples", st.size()}});
    checks.push_back(check("median_in_[0.55,0.85]", med >= 0.55 && med <= 0.85, med, 0.15));
  }
};

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> v = {"moments", "ward",     "isotropy",    "clt",
                                             "field",   "gmc",      "kernel",      "harmonic",
                                             "freezing", "thickpoints", "max"};
  return v;
}

PotentialSpec parse_potential(const json& j) {
  if (j.is_null()) return PotentialSpec::ginibre();
  require_keys(j, {"kind", "coefficients"}, "potential");
  const std::string kind = get_or<std::string>(j, "kind", "ginibre");
  if (kind == "ginibre") return PotentialSpec::ginibre();
  if (kind == "radial_even") return PotentialSpec::radial_even(get_or(j, "coefficients", std::vector<double>{}));
  throw ConfigError("unknown potential kind '" + kind + "'");
}

TestFn parse_test_fn(const json& j) {
  require_keys(j, {"kind", "k", "amplitude", "center", "tau", "offset"}, "test function");
  const std::string kind = get_or<std::string>(j, "kind", "zero");
  const cplx c = j.contains("center") ? parse_point(j["center"]) : cplx(0, 0);
  TestFn f;
  if (kind == "zero") f = TestFn::zero();
  else if (kind == "harmonic_re") f = TestFn::harmonic_re(get_or(j, "k", 1), get_or(j, "amplitude", 1.0));
  else if (kind == "gaussian_bump") f = TestFn::gaussian_bump(c, get_or(j, "tau", 0.3), get_or(j, "amplitude", 1.0));
  else if (kind == "compact_bump") f = TestFn::compact_bump(c, get_or(j, "tau", 0.3), get_or(j, "amplitude", 1.0));
  else if (kind == "monomial") {
    cplx a = 1.0;
    if (j.contains("amplitude")) a = j["amplitude"].is_array() ? parse_point(j["amplitude"]) : cplx(j["amplitude"].get<double>(), 0);
    f = TestFn::monomial(get_or(j, "k", 1), a);
  } else {
    throw ConfigError("unknown test function kind '" + kind + "'");
  }
  f.offset = get_or(j, "offset", 0.0);
  return f;
}

Droplet parse_droplet(const json& j) {
  require_keys(j, {"shape", "radius", "a", "b", "coefficients"}, "droplet");
  const std::string shape = get_or<std::string>(j, "shape", "disk");
  if (shape == "disk") return Droplet::disk(get_or(j, "radius", 1.0));
  if (shape == "ellipse") return Droplet::ellipse(get_or(j, "a", 2.0), get_or(j, "b", 1.0));
  if (shape == "exterior_map") {
    std::vector<cplx> c;
    for (const auto& p : j.at("coefficients")) c.push_back(p.is_array() ? parse_point(p) : cplx(p.get<double>(), 0));
    return Droplet::exterior_map(c);
  }
  throw ConfigError("unknown droplet shape '" + shape + "'");
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.experiment = get_or<std::string>(j, "experiment", "");
  const auto it = extra_keys().find(c.experiment);
  if (it == extra_keys().end()) throw ConfigError("unknown experiment '" + c.experiment + "'");
  std::set<std::string> allowed = kCommon;
  allowed.insert(it->second.begin(), it->second.end());
  require_keys(j, allowed, "config");
  c.raw = j;
  c.potential = parse_potential(j.value("potential", json()));
  if (j.contains("n")) {
    if (j["n"].is_array()) c.n_list = j["n"].get<std::vector<int>>();
    else c.n_list = {j["n"].get<int>()};
  } else if (c.experiment != "harmonic") {
    throw ConfigError("missing required key 'n'");
  }
  for (int n : c.n_list)
    if (n < 1) throw ConfigError("n must be positive");
  c.samples = get_or<long>(j, "samples", 1);
  if (c.samples < 1) throw ConfigError("samples must be positive");
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.threads = get_or<unsigned>(j, "threads", 1);
  c.kappa = get_or(j, "kappa", 0.05);
  c.alpha = get_or(j, "alpha", 0.05);
  return c;
}

json run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  Runner r{cfg, out_dir};
  // Thread count does not change any numeric output, so it stays out of the hash.
  json echoed = cfg.raw;
  echoed.erase("threads");
  r.hash = config_hash(echoed);
  const auto t0 = std::chrono::steady_clock::now();
  const std::string& e = cfg.experiment;
  if (e == "moments") r.moments();
  else if (e == "ward") r.ward();
  else if (e == "isotropy") r.isotropy();
  else if (e == "clt") r.clt();
  else if (e == "field") r.field();
  else if (e == "gmc") r.gmc();
  else if (e == "kernel") r.kernel();
  else if (e == "harmonic") r.harmonic();
  else if (e == "freezing") r.freezing();
  else if (e == "thickpoints") r.thickpoints();
  else if (e == "max") r.max();
  else throw ConfigError("unknown experiment '" + e + "'");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool all = true;
  for (const auto& c : r.checks) all = all && c["passed"].get<bool>();
  json res = {{"schema_version", "1"},
              {"version", r.version},
              {"config_hash", r.hash},
              {"experiment", e},
              {"config", echoed},
              {"potential", to_json(cfg.potential)},
              {"records", r.records},
              {"checks", r.checks},
              {"all_checks_passed", all},
              {"runtime", {{"threads", cfg.threads}, {"wall_clock_seconds", secs}}}};
  std::ofstream(fs::path(out_dir) / "results.json") << res.dump(2) << "\n";
  return res;
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const HypothesisViolation&) {
    return 4;
  } catch (const PhaseError&) {
    return 2;
  } catch (const DomainError&) {
    return 2;
  } catch (const json::exception&) {
    return 2;
  } catch (const NumericError&) {
    return 3;
  } catch (...) {
    return 1;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on random normal matrices"};
  std::string experiment, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  app.add_option("experiment", experiment, "experiment name")->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--out", out_dir, "output directory (default $RESULT_DIR or ./results)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config " + config_path);
    json j = json::parse(in);
    if (j.is_object() && !j.contains("experiment")) j["experiment"] = experiment;
    if (j.value("experiment", experiment) != experiment)
      throw ConfigError("experiment on the command line does not match the config");
    if (seed) j["seed"] = *seed;
    if (threads) j["threads"] = *threads;
    if (out_dir.empty()) {
      const char* env = std::getenv("RESULT_DIR");
      out_dir = env ? env : "results";
    }
    const ExperimentConfig cfg = parse_config(j);
    const json res = run_experiment(cfg, out_dir);
    std::cout << (res["all_checks_passed"].get<bool>() ? "checks passed" : "checks failed") << ": "
              << (fs::path(out_dir) / "results.json").string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    const int rc = exit_code_for_current_exception();
    std::cerr << "error: " << e.what() << "\n";
    return rc;
  }
}

}  // namespace fhlab
