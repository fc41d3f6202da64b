#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fhlab/errors.hpp"
#include "fhlab/experiment.hpp"
#include "fhlab/field.hpp"
#include "fhlab/kernel.hpp"
#include "fhlab/moments.hpp"
#include "fhlab/sampler.hpp"
#include "fhlab/specfun.hpp"

namespace py = pybind11;
using namespace fhlab;
using cplx = std::complex<double>;

namespace {

py::array_t<cplx> points_array(const Spectrum& s) {
  py::array_t<cplx> a(s.points.size());
  std::copy(s.points.begin(), s.points.end(), a.mutable_data());
  return a;
}

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

PotentialSpec potential_arg(const py::object& o) {
  return o.is_none() ? PotentialSpec::ginibre() : parse_potential(from_py(o));
}

MomentQuery query_arg(int n, const std::vector<std::tuple<cplx, double>>& sing, const py::object& f,
                      double kappa) {
  MomentQuery q;
  q.n = n;
  q.kappa = kappa;
  for (const auto& [z, g] : sing) q.singularities.push_back({z, g});
  if (!f.is_none()) q.test_fn = parse_test_fn(from_py(f));
  return q;
}

}  // namespace

PYBIND11_MODULE(_fhlab, m) {
  m.doc() = "Characteristic polynomial moments, log-correlated fields and chaos measures of random normal matrices";

  auto base = py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<HypothesisViolation>(m, "HypothesisViolation", PyExc_ValueError);
  py::register_exception<PhaseError>(m, "PhaseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegenerateEstimate>(m, "DegenerateEstimate", base.ptr());

  m.def("version", &version_string);

  m.def("log_gamma", &log_gamma);
  m.def("trigamma", &trigamma);
  m.def("log_barnes_g", &log_barnes_g);
  m.def("origin_moment_exact", [](int n, double g) { return origin_moment_exact(n, g).log_magnitude; });
  m.def("origin_moment_asymptotic", [](int n, double g) { return origin_moment_asymptotic(n, g).log_magnitude; });

  m.def("sample_ginibre", [](int n, std::uint64_t seed) { return points_array(sample_ginibre_spectrum(n, seed)); },
        py::arg("n"), py::arg("seed"));
  m.def("sample_ginibre_hessenberg",
        [](int n, std::uint64_t seed) { return points_array(sample_ginibre_hessenberg(n, seed)); },
        py::arg("n"), py::arg("seed"));
  m.def("sample_kostlan_moduli",
        [](int n, std::uint64_t seed) {
          const Spectrum s = sample_kostlan_moduli(n, seed);
          std::vector<double> r;
          for (const auto& p : s.points) r.push_back(p.real());
          return py::array_t<double>(r.size(), r.data());
        },
        py::arg("n"), py::arg("seed"));
  m.def("sample_radial_dpp",
        [](const py::object& v, int n, std::uint64_t seed) { return points_array(sample_radial_dpp(potential_arg(v), n, seed)); },
        py::arg("potential"), py::arg("n"), py::arg("seed"));
  m.def("sample_coulomb_mala",
        [](const py::object& v, int n, long steps, double step, std::uint64_t seed, long burn_in) {
          MalaOptions o;
          o.burn_in = burn_in;
          return points_array(sample_coulomb_mala(potential_arg(v), n, steps, step, seed, o));
        },
        py::arg("potential"), py::arg("n"), py::arg("steps"), py::arg("step_size"), py::arg("seed"),
        py::arg("burn_in") = 50000);

  m.def("equilibrium_radius", [](const py::object& v) { return equilibrium_droplet(potential_arg(v)).first.radius; });
  m.def("capacity", [](const py::object& d) { return capacity(parse_droplet(from_py(d))); });
  m.def("capacity_energy", [](const py::object& d, int points) { return capacity_energy(parse_droplet(from_py(d)), points); },
        py::arg("droplet"), py::arg("points") = 256);
  m.def("mollified_log", [](double eps, cplx z) { return mollified_log({eps}, z); });

  m.def("fh_rhs",
        [](const py::object& v, int n, const std::vector<std::tuple<cplx, double>>& sing, const py::object& f,
           double kappa) {
          const PotentialSpec p = potential_arg(v);
          const MomentQuery q = query_arg(n, sing, f, kappa);
          return (p.kind == PotentialKind::Ginibre ? fh_rhs_ginibre(q) : fh_rhs_general(p, q)).log_magnitude;
        },
        py::arg("potential"), py::arg("n"), py::arg("singularities"), py::arg("test_fn") = py::none(),
        py::arg("kappa") = 0.05);
  m.def("log_mean_exp", [](const std::vector<double>& w) {
    const MCEstimate e = log_mean_exp(w);
    return py::make_tuple(e.log_mean, e.rel_stderr, e.ess);
  });

  m.def("kernel_eval",
        [](const py::object& v, int n, cplx z, cplx w, bool weighted) {
          return kernel_eval(build_kernel(potential_arg(v), n), z, w, weighted);
        },
        py::arg("potential"), py::arg("n"), py::arg("z"), py::arg("w"), py::arg("weighted") = true);

  m.def("field_on_grid",
        [](py::array_t<cplx> pts, int resolution, std::array<double, 4> region, const py::object& v) {
          Spectrum s;
          s.points.assign(pts.data(), pts.data() + pts.size());
          s.n = static_cast<int>(s.points.size());
          s.potential = potential_arg(v);
          GridGeometry g;
          g.region = {region[0], region[1], region[2], region[3]};
          g.resolution = resolution;
          const FieldGrid f = eval_field(s, g, s.potential);
          py::array_t<double> out({resolution, resolution});
          std::copy(f.values.begin(), f.values.end(), out.mutable_data());
          return out;
        },
        py::arg("points"), py::arg("resolution"), py::arg("region") = std::array<double, 4>{-0.5, 0.5, -0.5, 0.5},
        py::arg("potential") = py::none());

  m.def("run_experiment",
        [](const py::object& config, const std::string& out_dir) {
          return to_py(run_experiment(parse_config(from_py(config)), out_dir));
        },
        py::arg("config"), py::arg("out_dir"));
}
