#include "nlspec/config.hpp"

#include <fstream>
#include <sstream>

#include "nlspec/errors.hpp"

namespace nlspec {

std::map<std::string, double> default_tolerances() {
  return {
      {"profile_residual", 1e-10},   {"profile_decay_r2", 0.999},  {"profile_window_agreement", 0.05},
      {"kernel_mass", 1e-10},        {"slice_zero", 1e-13},        {"zero_mode", 1e-6},
      {"zero_mode_order", 2.0},      {"whole_line_min", 1e-6},     {"mu0_lower", 1e-10},
      {"mu0_slope_rel", 0.3},        {"gap_stability", 0.2},       {"ls_slope_lo", 1.7},
      {"ls_slope_hi", 2.3},          {"psi_drift_slope", 0.8},     {"e9_slope", -0.3},
      {"fourier_upper", 0.5},        {"nu_stability", 0.2},        {"union_hausdorff", 1e-6},
      {"k0_reduction", 1e-10},       {"acal_slope", 1.7},          {"conjugacy", 1e-8},
      {"fullA_slope", 1.7},          {"vR_slope", 1.7},            {"energy_ratio", 2.0},
      {"hminus_slope", -0.3},        {"hminus_ratio", 2.0},        {"hminus_w_slope_dev", 0.3},
      {"symmetry", 1e-12},           {"decay_r2", 0.99},           {"decay_rate_rel", 0.3},
      {"remainder_slope", 1.7},      {"correction_slope", 1.7},    {"poisson_residual", 1e-9},
      {"green_identity", 1e-8},      {"sparse_dense", 1e-10},      {"inverse_iteration", 1e-8},
      {"bridge_slope", 1.7},         {"count_slack", 1.0},
  };
}

double ExperimentConfig::tolerance(const std::string& key) const {
  auto it = tol.find(key);
  if (it == tol.end()) throw std::logic_error("unknown tolerance key " + key);
  return it->second;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

using nlohmann::json;

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + where + key + "' is missing or has the wrong type");
  }
}

template <class T>
void opt(const json& j, const std::string& key, T& out, const std::string& where = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: field '" + where + key + "' has the wrong type");
  }
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ConfigError("config: unknown field '" + where + it.key() + "'");
  }
}

void positive_list(const std::vector<double>& v, const std::string& name, double hi) {
  if (v.empty()) throw ConfigError("config: '" + name + "' must not be empty");
  for (double x : v)
    if (!(x > 0) || !(x < hi)) {
      std::ostringstream os;
      os << "config: every entry of '" << name << "' must lie in (0, " << hi << "), got " << x;
      throw ConfigError(os.str());
    }
}

}  // namespace

RadialKernel make_kernel(const KernelSpec& k) {
  if (k.family == "quartic_bump") return make_default_kernel();
  if (k.family == "tabulated") return load_kernel_csv(k.path);
  throw ConfigError("config: unknown kernel family '" + k.family + "'");
}

ClosedCurve make_curve(const CurveSpec& c) {
  if (c.family == "ellipse") return make_ellipse(c.a, c.b);
  if (c.family == "circle") return make_circle(c.R);
  if (c.family == "spline") return load_curve_csv(c.path);
  throw ConfigError("config: unknown curve family '" + c.family + "'");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  only_keys(doc,
            {"beta", "kernel", "curve", "d0", "D0_factor", "lambda_list", "lambda_1d", "lambda_h", "h_small", "h_list",
             "union_lambda", "refinement_n", "s_samples", "geometry_samples", "bridge_samples", "profile",
             "correction", "grid", "tolerances", "criteria", "output_dir", "spectrum"},
            "");
  ExperimentConfig c;
  c.source = doc;
  c.hash = [&] {
    std::ostringstream os;
    os << std::hex << fnv1a(doc.dump());
    return os.str();
  }();
  c.beta = get<double>(doc, "beta", "");
  if (!(c.beta > 1.0)) throw ConfigError("config: no positive root of m = tanh(beta m); requires beta > 1");

  const json& kj = doc.contains("kernel") ? doc["kernel"] : json();
  if (!doc.contains("kernel")) throw ConfigError("config: field 'kernel' is missing");
  only_keys(kj, {"family", "path"}, "kernel.");
  c.kernel.family = get<std::string>(kj, "family", "kernel.");
  opt(kj, "path", c.kernel.path, "kernel.");

  if (!doc.contains("curve")) throw ConfigError("config: field 'curve' is missing");
  const json& cj = doc["curve"];
  only_keys(cj, {"family", "a", "b", "R", "path"}, "curve.");
  c.curve.family = get<std::string>(cj, "family", "curve.");
  opt(cj, "a", c.curve.a, "curve.");
  opt(cj, "b", c.curve.b, "curve.");
  opt(cj, "R", c.curve.R, "curve.");
  opt(cj, "path", c.curve.path, "curve.");

  c.d0 = get<double>(doc, "d0", "");
  if (!(c.d0 > 0)) throw ConfigError("config: d0 must be positive");
  opt(doc, "D0_factor", c.D0_factor);
  if (c.D0_factor < 3.0) throw ConfigError("config: D0_factor must be at least 3");
  c.lambda_list = get<std::vector<double>>(doc, "lambda_list", "");
  positive_list(c.lambda_list, "lambda_list", 1.0);
  opt(doc, "lambda_1d", c.lambda_1d);
  positive_list(c.lambda_1d, "lambda_1d", 1.0);
  opt(doc, "lambda_h", c.lambda_h);
  positive_list(c.lambda_h, "lambda_h", 1.0);
  opt(doc, "h_small", c.h_small);
  positive_list(c.h_small, "h_small", 1e6);
  opt(doc, "h_list", c.h_list);
  positive_list(c.h_list, "h_list", 1e6);
  opt(doc, "union_lambda", c.union_lambda);
  if (!c.union_lambda.empty()) positive_list(c.union_lambda, "union_lambda", 1.0);
  opt(doc, "refinement_n", c.refinement_n);
  if (c.refinement_n.size() < 2) throw ConfigError("config: refinement_n needs at least two grid sizes");
  opt(doc, "s_samples", c.s_samples);
  opt(doc, "geometry_samples", c.geometry_samples);
  opt(doc, "bridge_samples", c.bridge_samples);
  if (c.s_samples < 4 || c.geometry_samples < 1 || c.bridge_samples < 1)
    throw ConfigError("config: s_samples >= 4, geometry_samples >= 1 and bridge_samples >= 1 required");

  if (doc.contains("profile")) {
    const json& pj = doc["profile"];
    only_keys(pj, {"damping", "tol", "max_iters", "decay_floor"}, "profile.");
    opt(pj, "damping", c.profile_damping, "profile.");
    opt(pj, "tol", c.profile_tol, "profile.");
    opt(pj, "max_iters", c.profile_max_iters, "profile.");
    opt(pj, "decay_floor", c.decay_floor, "profile.");
    if (!(c.profile_damping > 0 && c.profile_damping <= 1)) throw ConfigError("config: profile.damping in (0, 1]");
  }
  if (doc.contains("correction")) {
    const json& q = doc["correction"];
    only_keys(q, {"h1_scale", "g_amplitude", "g_mode", "phi_amplitude", "phi_mode", "q_amplitude"}, "correction.");
    opt(q, "h1_scale", c.correction.h1_scale, "correction.");
    opt(q, "g_amplitude", c.correction.g_amplitude, "correction.");
    opt(q, "g_mode", c.correction.g_mode, "correction.");
    opt(q, "phi_amplitude", c.correction.phi_amplitude, "correction.");
    opt(q, "phi_mode", c.correction.phi_mode, "correction.");
    opt(q, "q_amplitude", c.correction.q_amplitude, "correction.");
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    only_keys(g, {"profile_n", "z_max", "h_1d", "per_lambda", "per_unit"}, "grid.");
    opt(g, "profile_n", c.grid.profile_n, "grid.");
    opt(g, "z_max", c.grid.z_max, "grid.");
    opt(g, "h_1d", c.grid.h_1d, "grid.");
    opt(g, "per_lambda", c.grid.per_lambda, "grid.");
    opt(g, "per_unit", c.grid.per_unit, "grid.");
    if (c.grid.profile_n < 3 || c.grid.profile_n % 2 == 0) throw ConfigError("config: grid.profile_n must be odd");
    if (c.grid.z_max < 10) throw ConfigError("config: grid.z_max must be >= 10");
    if (!(c.grid.h_1d > 0 && c.grid.h_1d <= 0.05)) throw ConfigError("config: grid.h_1d must lie in (0, 0.05]");
    if (!(c.grid.per_lambda > 1 && c.grid.per_unit > 1)) throw ConfigError("config: 2D resolutions must exceed 1");
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("config: 'tolerances' must be an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!c.tol.count(it.key())) throw ConfigError("config: unknown tolerance '" + it.key() + "'");
      if (!it.value().is_number()) throw ConfigError("config: tolerance '" + it.key() + "' must be a number");
      c.tol[it.key()] = it.value().get<double>();
    }
  }
  if (doc.contains("criteria")) {
    std::vector<int> v;
    opt(doc, "criteria", v);
    for (int x : v) {
      if (x < 1 || x > 13) throw ConfigError("config: criteria entries must lie in 1..13");
      c.criteria.insert(x);
    }
  }
  opt(doc, "output_dir", c.output_dir);
  if (doc.contains("spectrum")) {
    const json& s = doc["spectrum"];
    only_keys(s, {"which", "lambda", "h", "s", "count"}, "spectrum.");
    opt(s, "which", c.spectrum_which, "spectrum.");
    opt(s, "lambda", c.spectrum_lambda, "spectrum.");
    opt(s, "h", c.spectrum_h, "spectrum.");
    opt(s, "s", c.spectrum_s, "spectrum.");
    opt(s, "count", c.spectrum_count, "spectrum.");
    static const std::set<std::string> ok{"L0", "Ls", "Lh", "G", "Acal", "fullA"};
    if (!ok.count(c.spectrum_which)) throw ConfigError("config: spectrum.which must be L0|Ls|Lh|G|Acal|fullA");
  }

  // Geometric hypotheses are checked at load so no partial results are produced.
  const ClosedCurve curve = make_curve(c.curve);
  const double kmax = curve.max_abs_curvature();
  if (kmax * c.d0 > 0.5) {
    std::ostringstream os;
    os << "config: geometry violates sup|k| d0 <= 1/2 (sup|k| d0 = " << kmax * c.d0 << ")";
    throw ConfigError(os.str());
  }
  if (kmax * c.D0_factor * c.d0 >= 1.0) {
    std::ostringstream os;
    os << "config: strip half-width D0 = " << c.D0_factor * c.d0 << " exceeds the curve's normal reach";
    throw ConfigError(os.str());
  }
  make_kernel(c.kernel);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace nlspec
