#include "hh/cli.hpp"

#include "hh/errors.hpp"
#include "hh/geometry.hpp"
#include "hh/hardy.hpp"
#include "hh/parallel.hpp"
#include "hh/random.hpp"
#include "hh/special.hpp"
#include "hh/sphere.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace hh::cli {

using json = nlohmann::ordered_json;
using special::kPi;
using special::kTwoPi;

// ---------------------------------------------------------------- output

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(key).dump() + ": ";
        write_json(value, out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += "\n" + pad;
        write_json(e, out, indent + 2);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "\"" + format_number(v) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& cells) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, cells);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), cells);
  } else if (j.is_number_float()) {
    cells.emplace_back(prefix, format_number(j.get<double>()));
  } else if (j.is_string()) {
    cells.emplace_back(prefix, j.get<std::string>());
  } else {
    cells.emplace_back(prefix, j.dump());
  }
}

}  // namespace

void Report::check(const std::string& name, double value, double threshold, bool pass) {
  json entry;
  entry["value"] = value;
  entry["threshold"] = threshold;
  entry["pass"] = pass;
  residuals[name] = entry;
  if (!pass) failed = true;
}

std::string to_json_text(const json& j) {
  std::string out;
  write_json(j, out, 0);
  return out;
}

std::string report_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  json outputs = r.outputs;
  if (!r.columns.empty()) {
    json table;
    table["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(row);
    table["rows"] = rows;
    outputs["table"] = table;
  }
  j["outputs"] = outputs;
  j["tolerances"] = r.tolerances;
  j["residuals"] = r.residuals;
  return to_json_text(j) + "\n";
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  if (!r.columns.empty()) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_field(r.columns[i]);
    os << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
      os << "\n";
    }
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> cells;
  cells.emplace_back("command", r.command);
  flatten(r.outputs, "outputs", cells);
  flatten(r.residuals, "residuals", cells);
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i].first);
  os << "\n";
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i].second);
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------- commands

namespace {

struct Args {
  std::string fn;
  double r = 0.0;
  int n = 1;
  std::string a_text;
  std::vector<double> xi;
  double z = 0.0;
  double t = 0.0;
  std::vector<double> varpi;
  double pz = 0.0;
  int steps = 0;
  double tmax = 0.0;
  std::string check_kind;
  int samples = 0;
  double kmax = 4096.0;
  double rho = 0.0;
  bool weighted = false;
  int d = 3;
  double angle = 0.0;
  double gamma = 0.0;
};

numerics::QuadOptions quad(const CliConfig& cfg) {
  numerics::QuadOptions q = hardy::quad_defaults(cfg.tol);
  q.max_evals = cfg.max_evals;
  return q;
}

void base_tolerances(Report& rep, const CliConfig& cfg) {
  rep.tolerances["tol"] = cfg.tol;
  rep.tolerances["max_evals"] = cfg.max_evals;
}

double parse_extended(const std::string& text, const char* name) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw domain_error(std::string(name) + ": not a number: '" + text + "'");
  return v;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd random_unit(Sampler& s, int dim) {
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = s.normal();
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

geometry::Polar random_polar(Sampler& s, int n, double t_lo, double t_hi, double r_lo, double r_hi) {
  geometry::Polar c;
  c.t = s.uniform(t_lo, t_hi);
  const double a = s.uniform(r_lo, r_hi);
  c.r = s.uniform() < 0.5 ? -a : a;
  c.varpi = random_unit(s, 2 * n);
  return c;
}

Report cmd_eval(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "eval";
  rep.inputs["fn"] = a.fn;
  rep.inputs["r"] = a.r;
  rep.inputs["n"] = a.n;
  double value = 0.0;
  if (a.fn == "phi") value = special::phi(a.r);
  else if (a.fn == "mu") value = special::eval_weights(a.r, a.n).mu;
  else if (a.fn == "v") value = special::eval_v(a.r);
  else if (a.fn == "w") value = special::eval_w(a.r);
  else if (a.fn == "gamma") value = special::eval_weights(a.r, a.n).gamma;
  else if (a.fn == "eta") value = special::eval_weights(a.r, a.n).eta;
  else throw domain_error("eval: unknown function '" + a.fn + "'");
  rep.outputs["value"] = value;
  base_tolerances(rep, cfg);
  return rep;
}

Report cmd_invert_phi(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "invert-phi";
  const double value = parse_extended(a.a_text, "--a");
  rep.inputs["a"] = value;
  const double r = special::invert_phi(value);
  rep.outputs["r"] = r;
  base_tolerances(rep, cfg);
  if (std::isfinite(value) && value > 0.0) {
    const double scale = std::max(1.0, value);
    const double res = std::abs(special::phi(r) - value);
    rep.check("phi_residual", res, 1e-12 * scale, res <= 1e-12 * scale);
  }
  return rep;
}

geometry::Point point_from(const Args& a) {
  if (a.xi.empty() || a.xi.size() % 2 != 0) throw domain_error("--xi needs an even number (2n >= 2) of entries");
  return geometry::make_point(to_vector(a.xi), a.z);
}

Report cmd_dist(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "dist";
  const geometry::Point p = point_from(a);
  rep.inputs["xi"] = to_json(p.xi);
  rep.inputs["z"] = p.z;
  const geometry::Polar c = geometry::to_polar(p);
  rep.outputs["cc_distance"] = c.t;
  rep.outputs["koranyi"] = geometry::koranyi(p);
  rep.outputs["r"] = c.r;
  rep.outputs["varpi"] = to_json(c.varpi);
  base_tolerances(rep, cfg);
  return rep;
}

Report cmd_to_polar(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "to-polar";
  const geometry::Point p = point_from(a);
  rep.inputs["xi"] = to_json(p.xi);
  rep.inputs["z"] = p.z;
  const geometry::Polar c = geometry::to_polar(p);
  rep.outputs["t"] = c.t;
  rep.outputs["varpi"] = to_json(c.varpi);
  rep.outputs["r"] = c.r;
  base_tolerances(rep, cfg);
  const geometry::Point back = geometry::from_polar(c, p.n());
  const double res = std::max((back.xi - p.xi).cwiseAbs().maxCoeff(), std::abs(back.z - p.z));
  const double scale = std::max(1.0, std::max(p.xi.cwiseAbs().maxCoeff(), std::abs(p.z)));
  rep.check("round_trip", res, 1e-9 * scale, res <= 1e-9 * scale);
  return rep;
}

Report cmd_from_polar(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "from-polar";
  if (a.varpi.empty() || a.varpi.size() % 2 != 0) throw domain_error("--varpi needs an even number of entries");
  const geometry::Polar c{a.t, to_vector(a.varpi), a.r};
  rep.inputs["t"] = c.t;
  rep.inputs["varpi"] = to_json(c.varpi);
  rep.inputs["r"] = c.r;
  const geometry::Point p = geometry::from_polar(c, static_cast<int>(a.varpi.size() / 2));
  rep.outputs["xi"] = to_json(p.xi);
  rep.outputs["z"] = p.z;
  base_tolerances(rep, cfg);
  return rep;
}

Report cmd_geodesic(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "geodesic";
  const int n = a.varpi.empty() ? a.n : static_cast<int>(a.varpi.size() / 2);
  if (n < 1) throw domain_error("geodesic: n must be >= 1");
  Eigen::VectorXd varpi = a.varpi.empty() ? Eigen::VectorXd::Unit(2 * n, 0) : to_vector(a.varpi);
  if (a.steps < 1) throw domain_error("geodesic: --steps must be >= 1");
  if (!(a.tmax > 0.0)) throw domain_error("geodesic: --tmax must be positive");
  rep.inputs["pz"] = a.pz;
  rep.inputs["steps"] = a.steps;
  rep.inputs["tmax"] = a.tmax;
  rep.inputs["varpi"] = to_json(varpi);
  rep.columns.push_back("s");
  for (int i = 1; i <= n; ++i) {
    rep.columns.push_back("x" + std::to_string(i));
    rep.columns.push_back("y" + std::to_string(i));
  }
  rep.columns.push_back("z");
  rep.columns.push_back("delta");
  double max_dist = 0.0;
  for (int k = 0; k <= a.steps; ++k) {
    const double s = a.tmax * k / a.steps;
    const geometry::Point p = geometry::geodesic(varpi, a.pz, s);
    const double delta = geometry::cc_distance(p);
    std::vector<double> row{s};
    for (Eigen::Index i = 0; i < p.xi.size(); ++i) row.push_back(p.xi[i]);
    row.push_back(p.z);
    row.push_back(delta);
    rep.rows.push_back(row);
    max_dist = std::max(max_dist, std::abs(delta - s));
  }
  const double length = geometry::geodesic_length(varpi, a.pz, a.tmax);
  rep.outputs["length"] = length;
  base_tolerances(rep, cfg);
  rep.check("distance_equals_arclength", max_dist, 1e-9, max_dist <= 1e-9);
  rep.check("length_equals_arclength", std::abs(length - a.tmax), 1e-6, std::abs(length - a.tmax) <= 1e-6);
  return rep;
}

Report check_frame(const Args& a, const CliConfig& cfg) {
  Report rep;
  const int samples = a.samples > 0 ? a.samples : 1000;
  rep.inputs["samples"] = samples;
  Sampler s(cfg.seed);
  double gram = 0.0, horiz = 0.0, eikonal = 0.0, t_norm = 0.0, t_identity = 0.0;
  for (int i = 0; i < samples; ++i) {
    const geometry::Polar c = random_polar(s, a.n, 0.1, 10.0, 1e-6, kTwoPi - 1e-6);
    const geometry::FrameAtPoint f = geometry::frame(c, a.n);
    for (std::size_t p = 0; p < f.vectors.size(); ++p) {
      horiz = std::max(horiz, geometry::is_horizontal(f.vectors[p]));
      for (std::size_t q = 0; q < f.vectors.size(); ++q) {
        const double g = geometry::sr_inner(f.vectors[p], f.vectors[q]);
        gram = std::max(gram, std::abs(g - (p == q ? 1.0 : 0.0)));
      }
    }
    const geometry::TangentVec grad = geometry::grad_delta(f.vectors[0].base);
    eikonal = std::max(eikonal, std::abs(grad.v_prime.norm() - 1.0));
    const double tt = f.t_field.v_prime.squaredNorm();
    const double inv_eta = 1.0 / special::eta(c.r);
    t_norm = std::max(t_norm, std::abs(tt - inv_eta) / inv_eta);
    const geometry::Point& base = f.vectors[0].base;
    const double gauge = geometry::koranyi(base);
    const double ratio = gauge * gauge / hardy::koranyi_horizontal_gradient(base).squaredNorm();
    t_identity = std::max(t_identity, std::abs(tt * c.t * c.t - ratio) / ratio);
  }
  rep.check("gram_minus_identity", gram, 1e-9, gram <= 1e-9);
  rep.check("horizontality", horiz, 1e-9, horiz <= 1e-9);
  rep.check("eikonal", eikonal, 1e-9, eikonal <= 1e-9);
  rep.check("t_field_norm", t_norm, 1e-9, t_norm <= 1e-9);
  rep.check("t_delta_garofalo_identity", t_identity, 1e-9, t_identity <= 1e-9);
  return rep;
}

Report check_jacobian(const Args& a, const CliConfig& cfg) {
  Report rep;
  const int samples = a.samples > 0 ? a.samples : 100;
  rep.inputs["samples"] = samples;
  Sampler s(cfg.seed);
  double analytic = 0.0, fd = 0.0;
  for (int i = 0; i < samples; ++i) {
    const geometry::Polar c = random_polar(s, a.n, 0.1, 10.0, 1e-2, kTwoPi - 1e-2);
    const double ref = std::pow(c.t, 2 * a.n + 1) * special::mu(c.r, a.n);
    analytic = std::max(analytic, std::abs(std::abs(geometry::jacobian(c, a.n).det) - ref) / ref);
    fd = std::max(fd, std::abs(std::abs(geometry::jacobian_finite_difference(c, a.n).det) - ref) / ref);
  }
  rep.check("analytic_det_rel", analytic, 1e-6, analytic <= 1e-6);
  rep.check("finite_difference_det_rel", fd, 1e-6, fd <= 1e-6);
  return rep;
}

Report check_identities(const Args& a, const CliConfig& cfg) {
  Report rep;
  const int grid = std::max(16, cfg.grid);
  rep.inputs["grid"] = grid;
  const special::IdentityReport r = special::check_identities(a.n, grid);
  rep.outputs["gamma_argmin"] = r.gamma_argmin;
  rep.outputs["fd_step"] = r.fd_step;
  rep.check("flux_derivative", r.max_flux_residual, 1e-6, r.max_flux_residual < 1e-6);
  rep.check("garofalo_identity", r.max_garofalo_residual, 1e-10, r.max_garofalo_residual < 1e-10);
  rep.check("parity", r.max_parity_residual, 1e-14, r.max_parity_residual <= 1e-14);
  rep.check("gamma_lower_bound", r.min_gamma_margin, -1e-12, r.min_gamma_margin >= -1e-12);
  rep.check("eta_monotone", r.max_eta_increase, 1e-14, r.max_eta_increase <= 1e-14);
  return rep;
}

Report check_divergence(const Args& a, const CliConfig& cfg) {
  Report rep;
  const int count = a.samples > 0 ? a.samples : 20;
  rep.inputs["samples"] = count;
  const hardy::DivergenceReport r = hardy::sphere_divergence_check(a.n, count, cfg.seed);
  rep.outputs["max_scale"] = r.max_scale;
  rep.check("max_abs_integral", r.max_abs_integral, 1e-12, r.max_abs_integral <= 1e-12);
  return rep;
}

Report check_annulus(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.inputs["R1"] = 1.0;
  rep.inputs["R2"] = 2.0;
  const auto q = quad(cfg);
  struct Case {
    const char* name;
    hardy::SeparableFn f;
  };
  std::vector<Case> cases;
  cases.push_back({"constant", {hardy::constant_profile(), hardy::constant_r(), std::nullopt}});
  cases.push_back({"t_squared", {hardy::power_profile(2.0), hardy::constant_r(), std::nullopt}});
  cases.push_back({"t_squared_times_h",
                   {hardy::power_profile(2.0),
                    hardy::from_functions([](double r) { return 2.0 + std::cos(0.5 * r); },
                                          [](double r) { return -0.5 * std::sin(0.5 * r); }),
                    std::nullopt}});
  for (const auto& c : cases) {
    const hardy::AnnulusReport r = hardy::annulus_identity_check(c.f, 1.0, 2.0, a.n, q);
    json o;
    o["lhs"] = r.lhs;
    o["rhs"] = r.rhs;
    rep.outputs[c.name] = o;
    rep.check(c.name, r.residual, 1e-6, r.residual < 1e-6);
  }
  return rep;
}

Report check_santalo(const Args& a, const CliConfig& cfg) {
  Report rep;
  const int samples = a.samples > 0 ? a.samples : 200;
  rep.inputs["samples"] = samples;
  const hardy::SantaloReport r = hardy::santalo_geometry_check(cfg.seed, samples);
  rep.outputs["argmax"] = r.argmax;
  rep.outputs["max_value"] = r.max_value;
  rep.check("argmax_minus_pi", std::abs(r.argmax - kPi), 1e-8, std::abs(r.argmax - kPi) <= 1e-8);
  const double dv = std::abs(r.max_value - r.expected_value);
  rep.check("max_minus_inverse_two_pi", dv, 1e-8, dv <= 1e-8);
  rep.check("diameter_ratio", r.max_diameter_ratio, 1.0, r.max_diameter_ratio <= 1.0 + 1e-12);
  rep.check("height_ratio", r.max_height_ratio, 1.0, r.max_height_ratio <= 1.0 + 1e-12);
  rep.check("membership_failures", r.membership_failures, 0.0, r.membership_failures == 0);
  return rep;
}

Report cmd_check(const Args& a, const CliConfig& cfg) {
  if (a.n < 1) throw domain_error("check: n must be >= 1");
  Report rep;
  if (a.check_kind == "frame") rep = check_frame(a, cfg);
  else if (a.check_kind == "jacobian") rep = check_jacobian(a, cfg);
  else if (a.check_kind == "identities") rep = check_identities(a, cfg);
  else if (a.check_kind == "divergence") rep = check_divergence(a, cfg);
  else if (a.check_kind == "annulus") rep = check_annulus(a, cfg);
  else if (a.check_kind == "santalo") rep = check_santalo(a, cfg);
  else throw domain_error("check: unknown kind '" + a.check_kind + "'");
  rep.command = "check " + a.check_kind;
  json inputs;
  inputs["kind"] = a.check_kind;
  inputs["n"] = a.n;
  inputs["seed"] = cfg.seed;
  for (const auto& [k, v] : rep.inputs.items()) inputs[k] = v;
  rep.inputs = inputs;
  base_tolerances(rep, cfg);
  return rep;
}

Report cmd_cone_bounds(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "cone-bounds";
  const double alpha = parse_extended(a.a_text, "--alpha");
  rep.inputs["n"] = a.n;
  rep.inputs["alpha"] = alpha;
  const hardy::BoundReport b = hardy::cone_bounds(hardy::ConeSpec::from_alpha(a.n, alpha));
  rep.outputs["rho"] = b.rho;
  rep.outputs["lower_dir"] = b.lower_dir;
  rep.outputs["upper_dir"] = b.upper_dir;
  rep.outputs["santalo"] = b.santalo;
  rep.outputs["koranyi_upper"] = b.koranyi_upper;
  base_tolerances(rep, cfg);
  rep.check("lower_minus_upper", b.lower_dir - b.upper_dir, 0.0, b.lower_dir <= b.upper_dir);
  const double n2 = static_cast<double>(a.n) * a.n;
  rep.check("koranyi_minus_n2", b.koranyi_upper - n2, 0.0, b.koranyi_upper < n2);
  return rep;
}

Report cmd_koranyi(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "koranyi-bound";
  rep.inputs["n"] = a.n;
  const double v = hardy::koranyi_upper_bound(a.n, quad(cfg));
  const double n2 = static_cast<double>(a.n) * a.n;
  rep.outputs["value"] = v;
  rep.outputs["ratio_to_n2"] = v / n2;
  base_tolerances(rep, cfg);
  rep.check("margin_below_n2", 1.0 - v / n2, 0.01, 1.0 - v / n2 >= 0.01);
  return rep;
}

Report cmd_radial(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "radial";
  rep.inputs["kmax"] = a.kmax;
  const auto ks = hardy::default_radial_schedule(a.kmax);
  if (ks.empty()) throw domain_error("radial: kmax must be >= 4");
  const auto q = quad(cfg);
  const auto values = parallel_map(ks, [&](double k) { return hardy::radial_sequence_quotient(k, q); });
  rep.columns = {"k", "quotient", "closed_form"};
  double worst_step = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double lk = std::log(ks[i]);
    rep.rows.push_back({ks[i], values[i], 3.0 / (lk * lk)});
    if (i > 0) worst_step = std::max(worst_step, values[i] - values[i - 1]);
  }
  rep.outputs["last"] = values.back();
  base_tolerances(rep, cfg);
  if (ks.size() > 1) rep.check("max_increment", worst_step, 0.0, worst_step < 0.0);
  return rep;
}

Report cmd_sharpness(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "sharpness";
  const int steps = a.steps > 0 ? a.steps : 12;
  rep.inputs["n"] = a.n;
  rep.inputs["rho"] = a.rho;
  rep.inputs["steps"] = steps;
  const hardy::ConeSpec cone = hardy::ConeSpec::from_rho(a.n, a.rho);
  const auto gammas = hardy::default_gamma_schedule(steps);
  const auto q = quad(cfg);
  const auto points = parallel_map(gammas, [&](double g) { return hardy::sharpness_sweep(cone, {g}, q).front(); });
  const double target = a.n * a.n / 4.0;
  rep.columns = {"gamma", "R", "R_over_target", "tail"};
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    rep.rows.push_back({p.gamma, p.value, p.value / target, p.tail});
    worst = std::min(worst, p.value / target);
  }
  rep.outputs["target"] = target;
  base_tolerances(rep, cfg);
  rep.check("min_ratio_to_target", worst, 1.0 - 1e-6, worst >= 1.0 - 1e-6);
  return rep;
}

Report cmd_sl(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "sl";
  rep.inputs["n"] = a.n;
  rep.inputs["rho"] = a.rho;
  rep.inputs["grid"] = cfg.grid;
  rep.inputs["weighted"] = a.weighted;
  const hardy::ConeSpec cone = hardy::ConeSpec::from_rho(a.n, a.rho);
  const numerics::EigResult e = hardy::sl_perp_estimate(cone, cfg.grid, a.weighted);
  const double n2 = static_cast<double>(a.n) * a.n;
  rep.outputs["lambda_min"] = e.lambda_min;
  rep.outputs["rayleigh_quotient"] = e.rayleigh_quotient;
  if (a.weighted) {
    rep.outputs["infimum"] = n2 / 4.0;
  } else {
    rep.outputs["lower_dir"] = n2 * a.rho * a.rho / 4.0;
    rep.outputs["upper_dir"] = kPi * kPi * n2;
  }
  base_tolerances(rep, cfg);
  const double rq = std::abs(e.rayleigh_quotient - e.lambda_min) / e.lambda_min;
  rep.check("rayleigh_consistency", rq, 1e-10, rq <= 1e-10);
  if (a.weighted) {
    rep.check("above_infimum", e.lambda_min - n2 / 4.0, -1e-6, e.lambda_min >= n2 / 4.0 - 1e-6);
  } else {
    const bool inside = e.lambda_min >= n2 * a.rho * a.rho / 4.0 - 1e-6 && e.lambda_min <= kPi * kPi * n2 + 1e-6;
    rep.check("upper_dir_minus_lambda", kPi * kPi * n2 - e.lambda_min, -1e-6, inside);
  }
  return rep;
}

Report cmd_euclid(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "euclid";
  rep.inputs["d"] = a.d;
  rep.inputs["a"] = a.angle;
  rep.inputs["gamma"] = a.gamma;
  const double v = hardy::euclid_quotient(a.d, a.angle, a.gamma, quad(cfg));
  rep.outputs["value"] = v;
  rep.outputs["expected"] = a.gamma * a.gamma;
  rep.outputs["cone_lower_bound"] = hardy::euclid_cone_lower_bound(a.d, a.angle);
  base_tolerances(rep, cfg);
  const double res = std::abs(v - a.gamma * a.gamma);
  rep.check("quotient_minus_gamma2", res, 1e-8, res <= 1e-8);
  return rep;
}

Report cmd_curves(const Args& a, const CliConfig& cfg) {
  Report rep;
  rep.command = "curves";
  rep.inputs["fn"] = a.fn;
  rep.inputs["grid"] = cfg.grid;
  rep.columns = {"r", "value"};
  // Cell midpoints of (-2 pi, 2 pi): never hits the pole at 0 or the ends.
  for (int i = 0; i < cfg.grid; ++i) {
    const double r = -kTwoPi + (i + 0.5) * (2.0 * kTwoPi / cfg.grid);
    const double v = a.fn == "v" ? special::eval_v(r) : special::eval_w(r);
    rep.rows.push_back({r, v});
  }
  base_tolerances(rep, cfg);
  return rep;
}

}  // namespace

// ---------------------------------------------------------------- dispatch

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heisenberg group polar coordinates and Hardy-inequality checks", "hh"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  Args a;
  app.add_option("--tol", cfg.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-evals", cfg.max_evals, "integrand evaluation budget")->check(CLI::PositiveNumber);
  app.add_option("--grid", cfg.grid, "grid size (Sturm-Liouville cells, curve samples)")->check(CLI::Range(32, 1 << 24));
  app.add_option("--seed", cfg.seed, "seed for sampled checks");
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output file (default: standard output)");

  auto* eval = app.add_subcommand("eval", "evaluate a special function");
  eval->add_option("--fn", a.fn)->required()->check(CLI::IsMember({"phi", "mu", "v", "w", "gamma", "eta"}));
  eval->add_option("--r", a.r)->required();
  eval->add_option("--n", a.n)->check(CLI::PositiveNumber);

  auto* inv = app.add_subcommand("invert-phi", "solve phi(r) = a");
  inv->add_option("--a", a.a_text)->required();

  auto* dist = app.add_subcommand("dist", "CC distance and Koranyi gauge of a point");
  dist->add_option("--xi", a.xi)->required()->expected(2, 1 << 16);
  dist->add_option("--z", a.z)->required();

  auto* to_polar = app.add_subcommand("to-polar", "polar coordinates of a point");
  to_polar->add_option("--xi", a.xi)->required()->expected(2, 1 << 16);
  to_polar->add_option("--z", a.z)->required();

  auto* from_polar = app.add_subcommand("from-polar", "point with given polar coordinates");
  from_polar->add_option("--t", a.t)->required();
  from_polar->add_option("--varpi", a.varpi)->required()->expected(2, 1 << 16);
  from_polar->add_option("--r", a.r)->required();

  auto* geo = app.add_subcommand("geodesic", "sample an arc-length geodesic");
  a.steps = 16;
  geo->add_option("--pz", a.pz)->required();
  geo->add_option("--steps", a.steps);
  geo->add_option("--tmax", a.tmax)->required();
  geo->add_option("--n", a.n)->check(CLI::PositiveNumber);
  geo->add_option("--varpi", a.varpi)->expected(2, 1 << 16);

  auto* check = app.add_subcommand("check", "run a sampled invariant check");
  check->add_option("kind", a.check_kind)
      ->required()
      ->check(CLI::IsMember({"frame", "jacobian", "identities", "divergence", "annulus", "santalo"}));
  check->add_option("--n", a.n)->check(CLI::PositiveNumber);
  check->add_option("--samples", a.samples)->check(CLI::PositiveNumber);

  auto* bounds = app.add_subcommand("cone-bounds", "bounds for the cone |xi|^2 < alpha z");
  bounds->add_option("--n", a.n)->check(CLI::PositiveNumber);
  bounds->add_option("--alpha", a.a_text)->required();

  auto* kor = app.add_subcommand("koranyi-bound", "Koranyi-gauge upper bound for the Hardy constant");
  kor->add_option("--n", a.n)->check(CLI::PositiveNumber);

  auto* radial = app.add_subcommand("radial", "radial minimising sequence");
  radial->add_option("--kmax", a.kmax);

  auto* sharp = app.add_subcommand("sharpness", "gamma sweep of the weighted quotient");
  sharp->add_option("--n", a.n)->check(CLI::PositiveNumber);
  sharp->add_option("--rho", a.rho)->required();
  sharp->add_option("--steps", a.steps);

  auto* sl = app.add_subcommand("sl", "Sturm-Liouville estimate of the perpendicular constant");
  sl->add_option("--n", a.n)->check(CLI::PositiveNumber);
  sl->add_option("--rho", a.rho)->required();
  sl->add_flag("--weighted", a.weighted);

  auto* euclid = app.add_subcommand("euclid", "Euclidean cone quotient");
  euclid->add_option("--d", a.d)->required();
  euclid->add_option("--a", a.angle)->required();
  euclid->add_option("--gamma", a.gamma)->required();

  auto* curves = app.add_subcommand("curves", "plot data for v or w");
  curves->add_option("--fn", a.fn)->required()->check(CLI::IsMember({"v", "w"}));

  std::vector<const char*> raw;
  raw.reserve(argv.size());
  for (const auto& s : argv) raw.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Report rep;
  std::string default_format = "json";
  try {
    if (eval->parsed()) rep = cmd_eval(a, cfg);
    else if (inv->parsed()) rep = cmd_invert_phi(a, cfg);
    else if (dist->parsed()) rep = cmd_dist(a, cfg);
    else if (to_polar->parsed()) rep = cmd_to_polar(a, cfg);
    else if (from_polar->parsed()) rep = cmd_from_polar(a, cfg);
    else if (geo->parsed()) rep = cmd_geodesic(a, cfg);
    else if (check->parsed()) rep = cmd_check(a, cfg);
    else if (bounds->parsed()) rep = cmd_cone_bounds(a, cfg);
    else if (kor->parsed()) rep = cmd_koranyi(a, cfg);
    else if (radial->parsed()) rep = cmd_radial(a, cfg);
    else if (sharp->parsed()) rep = cmd_sharpness(a, cfg);
    else if (sl->parsed()) rep = cmd_sl(a, cfg);
    else if (euclid->parsed()) rep = cmd_euclid(a, cfg);
    else if (curves->parsed()) {
      rep = cmd_curves(a, cfg);
      default_format = "csv";
    }
  } catch (const hh::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const hh::numerical_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }

  const std::string format = cfg.format.empty() ? default_format : cfg.format;
  const std::string text = format == "csv" ? report_csv(rep) : report_json(rep);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open '" << cfg.out << "' for writing\n";
      return 2;
    }
    file << text;
  }
  if (rep.failed) {
    err << "check failed: see residuals\n";
    return 3;
  }
  return 0;
}

}  // namespace hh::cli
