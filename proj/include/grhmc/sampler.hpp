#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grhmc/boundary.hpp"
#include "grhmc/rk32.hpp"

namespace grhmc {

enum class LambdaMode { Fixed, Adaptive };

struct SamplerConfig {
  double t_burn = 0.0;
  double t_sample = 1000.0;
  long n_samples = 1000;
  LambdaMode lambda_mode = LambdaMode::Fixed;
  double lambda = 0.2;          // fixed rate / adaptive initial value
  double lambda_min = 0.05;
  KernelChoice kernel = KernelChoice::Randomized;
  IntegratorConfig integrator;
  std::uint64_t seed = 0;
  bool adapt_m_s = false;
  double s_floor = 1e-3;
  double adapt_spacing = 1.0;   // burn-in moment-observation spacing
  std::optional<Vec> qbar0;     // standardized initial position override

  double spacing() const { return t_sample / static_cast<double>(n_samples); }

  void validate() const {
    if (!(t_sample > 0.0) || n_samples < 1)
      throw ContractError("SamplerConfig: need t_sample > 0 and n_samples >= 1");
    if (t_burn < 0.0) throw ContractError("SamplerConfig: t_burn must be >= 0");
    if (!(lambda > 0.0)) throw ContractError("SamplerConfig: lambda must be > 0");
    integrator.validate();
  }
};

struct TrajectoryStats {
  long refreshes = 0;
  long uturn_events = 0;
  long gradient_switches = 0;
  long reflections = 0;     // density-jump reflections
  long refractions = 0;     // density-jump crossings
  long wall_reflections = 0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long emitted = 0;
  long degenerate_intervals = 0;
  double adapted_lambda = 0.0;
  Vec adapted_m, adapted_s;
  // frozen-adaptation checksum: values at burn-in end and at run end must agree
  double lambda_at_end = 0.0;
  Vec m_at_end, s_at_end;
  bool failed = false;
  std::string error;
};

struct SampleChain {
  Mat draws;  // n_samples x d, unstandardized
  std::uint64_t seed = 0;
  std::vector<TrajectoryStats> stats;  // one per contributing trajectory
  double wall_time_s = 0.0;
};

SampleChain simulate_trajectory(const TargetModel& model, const SamplerConfig& cfg, Rng& rng);

struct EnsembleResult {
  std::vector<SampleChain> chains;
  SampleChain merged;
  bool any_failed = false;
};

/// Runs n_traj independent trajectories (RNG stream i derived from (seed, i)),
/// optionally in parallel, and merges the successful chains in trajectory
/// order. jobs <= 0 picks the hardware concurrency.
EnsembleResult run_ensemble(const TargetModel& model, const SamplerConfig& cfg, int n_traj,
                            int jobs = 0);

}  // namespace grhmc
