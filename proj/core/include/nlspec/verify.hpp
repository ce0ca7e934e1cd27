#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "nlspec/config.hpp"
#include "nlspec/operators1d.hpp"
#include "nlspec/operators2d.hpp"
#include "nlspec/report.hpp"
#include "nlspec/spectra.hpp"

namespace nlspec {

// Lazily built objects shared between checks and subcommands. Thread-safe.
class Workspace {
 public:
  explicit Workspace(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const Thermodynamics& thermo() const { return th_; }
  const RadialKernel& kernel() const { return kernel_; }
  const ClosedCurve& curve() const { return curve_; }

  FrontSolveOptions solve_options() const;
  // Whole-line proxy on profile_n points.
  const FrontProfile& whole_profile();
  FrontProfile whole_profile(int n) const;
  // Profile on the spacing aligned with I_λ.
  const FrontProfile& aligned_profile(double lambda);
  const DecayFit& front_decay();
  ApproxSolutionParams params(double lambda) const;

  // Gap D of 𝓛⁰ averaged over the 1D sweep and h₀ = ½√(D/3).
  double gap_D();
  double h0() { return 0.5 * std::sqrt(gap_D() / 3.0); }
  // C₀ of the Fourier family (min over the small-h sweep).
  double fourier_C0();

  const Setting2D& setting(double lambda);
  struct APrincipal {
    Spectrum spectrum;  // lowest pairs of 𝒜
    Vector phi;         // principal vector, oriented positive
  };
  const APrincipal& a_cal(double lambda);
  const StripOperator& full_A(double lambda);
  const Spectrum& full_A_spectrum(double lambda);

 private:
  ExperimentConfig cfg_;
  Thermodynamics th_;
  RadialKernel kernel_;
  ClosedCurve curve_;
  std::recursive_mutex mu_;
  std::unique_ptr<FrontProfile> whole_;
  std::unique_ptr<DecayFit> decay_;
  std::map<double, FrontProfile> aligned_;
  std::map<double, Setting2D> settings_;
  std::map<double, APrincipal> acal_;
  std::map<double, StripOperator> strips_;
  std::map<double, Spectrum> strip_spectra_;
  double gap_ = -1, c0_ = -1;
};

struct VerifyOptions {
  int jobs = 1;
  unsigned seed = 12345;
};

// Checks of one acceptance criterion.
std::vector<CheckResult> run_criterion(int criterion, Workspace& ws, const VerifyOptions& opt);
// Criteria 1–12 (those selected by the config); 13 is a property of repeated runs.
Report verify_all(const ExperimentConfig& cfg, const VerifyOptions& opt = {});

// Index-ordered results of f(0..n−1) on up to `jobs` threads.
template <class T>
std::vector<T> parallel_map(int n, int jobs, const std::function<T(int)>& f) {
  std::vector<T> out(n);
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lk(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const int t = std::max(1, std::min(jobs, n));
  std::vector<std::thread> pool;
  for (int k = 1; k < t; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

std::string criterion_title(int criterion);

}  // namespace nlspec
