#include "hh/cli.hpp"
#include "hh/errors.hpp"
#include "hh/geometry.hpp"
#include "hh/hardy.hpp"
#include "hh/special.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_list(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

py::dict weights(double r, int n) {
  const auto s = hh::special::eval_weights(r, n);
  py::dict d;
  d["r"] = s.r;
  d["n"] = s.n;
  d["phi"] = s.phi;
  d["mu"] = s.mu;
  d["v"] = s.v;
  d["w"] = s.w;
  d["rv"] = s.rv;
  d["rw"] = s.rw;
  d["gamma"] = s.gamma;
  d["eta"] = s.eta;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heisenberg group polar coordinates and Hardy-inequality checks";
  py::register_exception<hh::domain_error>(m, "DomainError", PyExc_ValueError);
  py::register_exception<hh::numerical_error>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("phi", &hh::special::phi, py::arg("r"));
  m.def("invert_phi", &hh::special::invert_phi, py::arg("a"));
  m.def("mu", &hh::special::mu, py::arg("r"), py::arg("n") = 1);
  m.def("eval_weights", &weights, py::arg("r"), py::arg("n") = 1);

  m.def(
      "from_polar",
      [](double t, const std::vector<double>& varpi, double r) {
        const auto p = hh::geometry::from_polar({t, to_eigen(varpi), r}, static_cast<int>(varpi.size() / 2));
        return py::make_tuple(to_list(p.xi), p.z);
      },
      py::arg("t"), py::arg("varpi"), py::arg("r"));
  m.def(
      "to_polar",
      [](const std::vector<double>& xi, double z) {
        const auto c = hh::geometry::to_polar(hh::geometry::make_point(to_eigen(xi), z));
        return py::make_tuple(c.t, to_list(c.varpi), c.r);
      },
      py::arg("xi"), py::arg("z"));
  m.def(
      "cc_distance",
      [](const std::vector<double>& xi, double z) { return hh::geometry::cc_distance(hh::geometry::make_point(to_eigen(xi), z)); },
      py::arg("xi"), py::arg("z"));
  m.def(
      "koranyi",
      [](const std::vector<double>& xi, double z) { return hh::geometry::koranyi(hh::geometry::make_point(to_eigen(xi), z)); },
      py::arg("xi"), py::arg("z"));

  m.def("koranyi_upper_bound", [](int n) { return hh::hardy::koranyi_upper_bound(n); }, py::arg("n"));
  m.def("radial_sequence_quotient", [](double k) { return hh::hardy::radial_sequence_quotient(k); }, py::arg("k"));
  m.def(
      "sharpness",
      [](int n, double rho, const std::vector<double>& gammas) {
        std::vector<double> out;
        for (const auto& p : hh::hardy::sharpness_sweep(hh::hardy::ConeSpec::from_rho(n, rho), gammas)) out.push_back(p.value);
        return out;
      },
      py::arg("n"), py::arg("rho"), py::arg("gammas"));
  m.def(
      "sl_perp_estimate",
      [](int n, double rho, int grid, bool weighted) {
        return hh::hardy::sl_perp_estimate(hh::hardy::ConeSpec::from_rho(n, rho), grid, weighted).lambda_min;
      },
      py::arg("n"), py::arg("rho"), py::arg("grid") = 1024, py::arg("weighted") = true);
  m.def(
      "cone_bounds",
      [](int n, double alpha) {
        const auto b = hh::hardy::cone_bounds(hh::hardy::ConeSpec::from_alpha(n, alpha));
        py::dict d;
        d["rho"] = b.rho;
        d["lower_dir"] = b.lower_dir;
        d["upper_dir"] = b.upper_dir;
        d["santalo"] = b.santalo;
        d["koranyi_upper"] = b.koranyi_upper;
        return d;
      },
      py::arg("n"), py::arg("alpha"));
  m.def("euclid_quotient", [](int d, double a, double g) { return hh::hardy::euclid_quotient(d, a, g); }, py::arg("d"),
        py::arg("a"), py::arg("gamma"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "hh");
        std::ostringstream out, err;
        const int code = hh::cli::dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line in-process; returns (exit code, stdout, stderr).");
}
