#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "nlspec/geometry.hpp"
#include "nlspec/kernels.hpp"
#include "nlspec/profile.hpp"

namespace nlspec {

struct KernelSpec {
  std::string family = "quartic_bump";  // or "tabulated"
  std::string path;                     // two-column CSV (radius, value)
};

struct CurveSpec {
  std::string family = "ellipse";  // ellipse | circle | spline
  double a = 2.0, b = 1.0, R = 1.0;
  std::string path;  // CSV of (x, y) for spline
};

struct GridSpec {
  int profile_n = 1601;     // whole-line proxy grid
  double z_max = 20.0;
  double h_1d = 0.025;      // target spacing of the I_λ grids
  double per_lambda = 3.0;  // 2D tangential nodes per λ
  double per_unit = 6.0;    // 2D normal nodes per unit z
};

// Named thresholds used by the verification suite; every key has a default and may be overridden.
std::map<std::string, double> default_tolerances();

struct ExperimentConfig {
  double beta = 2.0;
  KernelSpec kernel;
  CurveSpec curve;
  double d0 = 0.15;
  double D0_factor = 3.0;
  std::vector<double> lambda_list;                           // 2D and 𝓛ˢ sweeps
  std::vector<double> lambda_1d{0.25, 0.2, 0.15, 0.1};       // 𝓛⁰ sweep
  std::vector<double> lambda_h{0.2, 0.1};                    // 𝓛ʰ sweep
  std::vector<double> h_small{0.05, 0.1, 0.2};
  std::vector<double> h_list{1, 2, 5, 20, 100};
  std::vector<double> union_lambda{0.2};                      // dense union-of-spectra check
  std::vector<int> refinement_n{801, 1601, 3201};
  int s_samples = 16;
  int geometry_samples = 8;
  int bridge_samples = 20;
  double profile_damping = 0.5;
  double profile_tol = 1e-12;
  int profile_max_iters = 500000;
  double decay_floor = 1e-10;
  ApproxSolutionParams correction;  // lambda field unused
  GridSpec grid;
  std::map<std::string, double> tol = default_tolerances();
  std::set<int> criteria;  // empty: all
  std::string output_dir = "out";

  // spectrum / decompose / hminus subcommand selections
  std::string spectrum_which = "L0";
  double spectrum_lambda = 0.1;
  double spectrum_h = 0.0;
  double spectrum_s = 0.0;
  int spectrum_count = 0;  // 0: all for dense operators, 8 for sparse

  nlohmann::json source;  // the document as read
  std::string hash;       // FNV-1a of the canonical dump

  double tolerance(const std::string& key) const;
  bool wants(int criterion) const { return criteria.empty() || criteria.count(criterion) > 0; }
};

// Throws ConfigError on schema violations or violated numeric hypotheses.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

RadialKernel make_kernel(const KernelSpec& k);
ClosedCurve make_curve(const CurveSpec& c);

std::uint64_t fnv1a(const std::string& s);

}  // namespace nlspec
