#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>

#include "nlspec/config.hpp"
#include "nlspec/csv.hpp"
#include "nlspec/errors.hpp"
#include "nlspec/report.hpp"
#include "nlspec/spectra.hpp"
#include "nlspec/verify.hpp"

namespace nlspec::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  int jobs = 1;
  unsigned seed = 12345;
  std::string which, lambda, h, s;  // spectrum overrides, empty when unset
};

// Output directory, the files written into it, and the outcomes recorded in the manifest.
class Run {
 public:
  Run(std::string subcommand, const ExperimentConfig& cfg, const Options& o) : name_(std::move(subcommand)), cfg_(cfg) {
    std::string dir = cfg.output_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) dir = env;
    if (!o.out.empty()) dir = o.out;
    dir_ = dir;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw ConfigError("cannot create output directory " + dir);
    seed_ = o.seed;
  }

  std::string path(const std::string& file) {
    artifacts_.insert(file);
    return (dir_ / file).string();
  }

  void write_text(const std::string& file, const std::string& text) {
    std::ofstream f(path(file), std::ios::binary);
    f << text;
    if (!f) throw NumericalError("cannot write " + file);
  }

  void record(const Report& r) {
    for (const auto& c : r.checks) outcomes_[c.name] = c.skipped ? "skipped" : (c.pass ? "pass" : "fail");
  }

  void write_report(const Report& r) {
    write_text("report.json", dump_json(to_json(r)) + "\n");
    write_text("report.txt", to_text(r));
    record(r);
  }

  void values(const std::string& key, const nlohmann::json& v) { extra_[key] = v; }

  int finish(int code) {
    nlohmann::json m;
    m["subcommand"] = name_;
    m["config_hash"] = cfg_.hash;
    m["seed"] = seed_;
    m["artifacts"] = std::vector<std::string>(artifacts_.begin(), artifacts_.end());
    m["outcomes"] = outcomes_;
    m["exit_code"] = code;
    if (!extra_.empty()) m["values"] = extra_;
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << dump_json(m) << "\n";
    return code;
  }

  const fs::path& dir() const { return dir_; }

 private:
  std::string name_;
  const ExperimentConfig& cfg_;
  fs::path dir_;
  unsigned seed_ = 0;
  std::set<std::string> artifacts_;
  std::map<std::string, std::string> outcomes_;
  nlohmann::json extra_ = nlohmann::json::object();
};

std::string tag(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

VerifyOptions verify_options(const Options& o) {
  VerifyOptions v;
  v.jobs = std::max(1, o.jobs);
  v.seed = o.seed;
  return v;
}

Report checks_of(int criterion, Workspace& ws, const Options& o) {
  Report r;
  r.config_hash = ws.config().hash;
  r.checks = run_criterion(criterion, ws, verify_options(o));
  return r;
}

int cmd_profile(const ExperimentConfig& cfg, const Options& o) {
  Run run("profile", cfg, o);
  Workspace ws(cfg);
  const FrontProfile& p = ws.whole_profile();
  write_profile_csv(run.path("profile.csv"), p);
  for (double lam : cfg.lambda_1d) write_profile_csv(run.path("profile_lambda_" + tag(lam) + ".csv"), ws.aligned_profile(lam));
  const DecayFit& f = ws.front_decay();
  run.values("residual", fixed_point_residual(p));
  run.values("alpha", f.alpha);
  run.values("c", f.c);
  run.values("r2", f.r2);
  run.values("m_beta", ws.thermo().m_beta);
  const Report r = checks_of(1, ws, o);
  run.write_report(r);
  return run.finish(r.all_pass() ? kPass : kVerificationFailure);
}

// Pairs every eigenvalue of 𝓖 with the Fourier frequency of the block that produced it.
std::vector<double> block_labels(const Setting2D& st, const Vector& g_values) {
  const double base = 2 * std::numbers::pi / st.grid.period;
  std::vector<std::pair<double, double>> all;
  std::map<int, Vector> cache;
  for (int n = -(st.grid.n_s - 1) / 2; n <= st.grid.n_s / 2; ++n) {
    const int a = std::abs(n);
    if (!cache.count(a)) cache[a] = full_spectrum(build_block(st, a * base).matrix, false).values;
    for (int i = 0; i < cache[a].size(); ++i) all.emplace_back(cache[a][i], n * base);
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.first < y.first || (x.first == y.first && std::abs(x.second) < std::abs(y.second));
  });
  if (static_cast<int>(all.size()) != g_values.size()) throw NumericalError("block spectra do not match the size of G");
  std::vector<double> k(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) k[i] = all[i].second;
  return k;
}

int cmd_spectrum(ExperimentConfig cfg, const Options& o) {
  try {
    if (!o.which.empty()) cfg.spectrum_which = o.which;
    if (!o.lambda.empty()) cfg.spectrum_lambda = std::stod(o.lambda);
    if (!o.h.empty()) cfg.spectrum_h = std::stod(o.h);
    if (!o.s.empty()) cfg.spectrum_s = std::stod(o.s);
  } catch (const std::logic_error&) {
    throw ConfigError("spectrum: --lambda, --freq and --arc take numbers");
  }
  static const std::set<std::string> known{"L0", "Ls", "Lh", "G", "Acal", "fullA"};
  const std::string w = cfg.spectrum_which;
  if (!known.count(w)) throw ConfigError("spectrum.which must be one of L0, Ls, Lh, G, Acal, fullA; got '" + w + "'");
  const double lam = cfg.spectrum_lambda;
  if (!(lam > 0 && lam < 1)) throw ConfigError("spectrum.lambda must lie in (0, 1)");
  if (cfg.spectrum_count < 0) throw ConfigError("spectrum.count must be nonnegative");
  Run run("spectrum", cfg, o);
  Workspace ws(cfg);
  const double L = ws.curve().length();
  std::string file = "spectrum_" + w + "_lambda_" + tag(lam);
  Vector values;
  std::vector<double> labels;
  auto head = [&](const Vector& v) {
    return cfg.spectrum_count > 0 && cfg.spectrum_count < v.size() ? Vector(v.head(cfg.spectrum_count)) : v;
  };
  auto sparse = [&](const SparseMatrix& m) {
    SparseEigenOptions so;
    so.nev = cfg.spectrum_count > 0 ? cfg.spectrum_count : 8;
    return lowest_eigenpairs(m, so).values;
  };
  if (w == "L0") {
    values = head(full_spectrum(build_L0(ws.aligned_profile(lam), lam, cfg.d0).matrix, false).values);
  } else if (w == "Ls") {
    file += "_s_" + tag(cfg.spectrum_s);
    values = head(full_spectrum(build_Ls(ws.aligned_profile(lam), ws.params(lam), L, cfg.spectrum_s, cfg.d0).matrix, false)
                      .values);
  } else if (w == "Lh") {
    file += "_h_" + tag(cfg.spectrum_h);
    values =
        head(full_spectrum(build_Lh(ws.aligned_profile(lam), ws.kernel(), cfg.spectrum_h, lam, cfg.d0).matrix, false).values);
  } else if (w == "G") {
    const Setting2D& st = ws.setting(lam);
    const Vector all = full_spectrum(Matrix(build_G_lambda(st).matrix), false).values;
    labels = block_labels(st, all);
    values = head(all);
    labels.resize(values.size());
  } else if (w == "Acal") {
    values = sparse(build_A_cal(ws.setting(lam)).matrix);
  } else {
    values = sparse(ws.full_A(lam).op.matrix);
  }
  write_spectrum_csv(run.path(file + ".csv"), values, labels.empty() ? nullptr : &labels);
  run.values("count", static_cast<int>(values.size()));
  run.values("lowest", values.size() ? values[0] : 0.0);
  return run.finish(kPass);
}

int cmd_verify(const ExperimentConfig& cfg, const Options& o) {
  Run run("verify", cfg, o);
  const Report r = verify_all(cfg, verify_options(o));
  run.write_report(r);
  for (const auto& c : r.checks)
    if (!c.pass && !c.skipped) std::cerr << "FAIL [" << c.criterion << "] " << c.name << "\n";
  return run.finish(r.all_pass() ? kPass : kVerificationFailure);
}

int cmd_decompose(const ExperimentConfig& cfg, const Options& o) {
  Run run("decompose", cfg, o);
  Workspace ws(cfg);
  std::vector<std::vector<double>> summary;
  for (double lam : cfg.lambda_list) {
    const Setting2D& st = ws.setting(lam);
    const DecompositionResult d = low_energy_decompose(st, build_block_table(st, ws.h0()), ws.a_cal(lam).phi);
    std::vector<double> s(st.grid.n_s);
    for (int i = 0; i < st.grid.n_s; ++i) s[i] = i * st.grid.ds();
    write_curve_csv(run.path("decompose_Z_lambda_" + tag(lam) + ".csv"), s, d.Z, "s", "Z");
    std::vector<std::vector<double>> rows;
    for (const auto& m : d.modal) rows.push_back({double(m.mode), m.k, m.alpha.real(), m.alpha.imag(), m.perp_norm2});
    write_csv(run.path("decompose_modes_lambda_" + tag(lam) + ".csv"), {"mode", "k", "alpha_re", "alpha_im", "perp_norm2"},
              rows);
    summary.push_back({lam, d.norm_Z2, d.norm_VR2, d.grad_Z2, d.high_norm2, d.reconstruction});
  }
  write_csv(run.path("decompose.csv"), {"lambda", "norm_Z2", "norm_VR2", "grad_Z2", "high_norm2", "reconstruction"},
            summary);
  const Report r = checks_of(10, ws, o);
  run.write_report(r);
  return run.finish(r.all_pass() ? kPass : kVerificationFailure);
}

int cmd_hminus(const ExperimentConfig& cfg, const Options& o) {
  Run run("hminus", cfg, o);
  Workspace ws(cfg);
  std::vector<std::vector<double>> rows;
  for (double lam : cfg.lambda_list) {
    const StripOperator& F = ws.full_A(lam);
    const PoissonSolver ps(F.chart);
    const HMinusResult h = hminus_rayleigh_floor(F.op.matrix, ps, lam);
    rows.push_back({lam, h.value, h.grad_w2, h.v_norm2, h.grad_w2 / (lam * h.v_norm2)});
  }
  write_csv(run.path("hminus.csv"), {"lambda", "floor", "grad_w2", "v_norm2", "grad_w2_over_lambda_v2"}, rows);
  const Report r = checks_of(11, ws, o);
  run.write_report(r);
  return run.finish(r.all_pass() ? kPass : kVerificationFailure);
}

int cmd_sweep(const ExperimentConfig& cfg, const Options& o) {
  Run run("sweep", cfg, o);
  Workspace ws(cfg);
  const double L = ws.curve().length();
  {
    std::vector<std::vector<double>> rows;
    for (double lam : cfg.lambda_1d) {
      const Principal p = principal_pair(build_L0(ws.aligned_profile(lam), lam, cfg.d0));
      rows.push_back({lam, p.value, p.second});
    }
    write_csv(run.path("sweep_L0.csv"), {"lambda", "mu0", "mu2"}, rows);
  }
  for (double lam : cfg.lambda_list) {
    const FrontProfile& p = ws.aligned_profile(lam);
    const ApproxSolutionParams a = ws.params(lam);
    const int S = cfg.s_samples;
    const auto pr = parallel_map<Principal>(S, std::max(1, o.jobs), [&](int m) {
      return principal_pair(build_Ls(p, a, L, m * L / S, cfg.d0));
    });
    std::vector<std::vector<double>> rows;
    for (int m = 0; m < S; ++m) rows.push_back({m * L / S, pr[m].value, pr[m].second});
    write_csv(run.path("sweep_Ls_lambda_" + tag(lam) + ".csv"), {"s", "mu1", "mu2"}, rows);
  }
  for (double lam : cfg.lambda_h) {
    std::set<double> hs(cfg.h_small.begin(), cfg.h_small.end());
    hs.insert(cfg.h_list.begin(), cfg.h_list.end());
    hs.insert(0.0);
    std::vector<std::vector<double>> rows;
    for (double h : hs) {
      const Principal pr = principal_pair(build_Lh(ws.aligned_profile(lam), ws.kernel(), h, lam, cfg.d0));
      rows.push_back({h, pr.value, pr.second});
    }
    write_csv(run.path("sweep_Lh_lambda_" + tag(lam) + ".csv"), {"h", "mu0", "mu2"}, rows);
  }
  {
    std::vector<std::vector<double>> rows;
    for (double lam : cfg.lambda_list) {
      const auto& ap = ws.a_cal(lam);
      rows.push_back({lam, ap.spectrum.values[0], ws.full_A_spectrum(lam).values[0], ws.full_A(lam).c_star});
    }
    write_csv(run.path("sweep_2d.csv"), {"lambda", "acal_mu0", "fullA_min", "c_star"}, rows);
  }
  return run.finish(kPass);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Spectral verification of nonlocal interface operators"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON experiment configuration")->required();
    sub->add_option("--out", o.out, "output directory (overrides the config and " + std::string(kOutDirEnv) + ")");
    sub->add_option("--jobs", o.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed of the random test vectors");
  };
  const std::vector<std::pair<std::string, std::string>> subs{
      {"profile", "front profile and its decay fit"},
      {"spectrum", "spectrum of one operator"},
      {"verify", "run the acceptance checks"},
      {"decompose", "low-energy decomposition of the principal eigenvector"},
      {"hminus", "H^-1 Rayleigh floor of the full operator"},
      {"sweep", "per-parameter eigenvalue tables"},
  };
  std::map<std::string, CLI::App*> by_name;
  for (const auto& [n, d] : subs) {
    CLI::App* sub = app.add_subcommand(n, d);
    common(sub);
    by_name[n] = sub;
  }
  CLI::App* sp = by_name["spectrum"];
  sp->add_option("--which", o.which, "L0 | Ls | Lh | G | Acal | fullA");
  sp->add_option("--lambda", o.lambda, "scale parameter");
  sp->add_option("--freq", o.h, "tangential frequency h for Lh");
  sp->add_option("--arc", o.s, "arclength s for Ls");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    const ExperimentConfig cfg = load_config(o.config);
    std::string name;
    for (const auto& [n, sub] : by_name)
      if (sub->parsed()) name = n;
    if (name == "profile") return cmd_profile(cfg, o);
    if (name == "spectrum") return cmd_spectrum(cfg, o);
    if (name == "verify") return cmd_verify(cfg, o);
    if (name == "decompose") return cmd_decompose(cfg, o);
    if (name == "hminus") return cmd_hminus(cfg, o);
    return cmd_sweep(cfg, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace nlspec::cli
