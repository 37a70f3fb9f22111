#include "grhmc/sampler.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "grhmc/adapt.hpp"
#include "grhmc/events.hpp"

namespace grhmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec draw_initial_position(const TargetModel& model, const SamplerConfig& cfg, Rng& rng) {
  const Index d = model.dim();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vec qbar = (attempt == 0 && cfg.qbar0) ? *cfg.qbar0 : rng.normal_vec(d);
    // measure-zero start on a boundary: nudge along a fresh Gaussian direction
    for (int tries = 0; tries < 16; ++tries) {
      bool on_boundary = false;
      for (int k = 0; k < model.constraint_count(); ++k)
        if (std::abs(model.constraint_value(qbar, k)) < 1e-12) on_boundary = true;
      if (!on_boundary) break;
      Vec dir = rng.normal_vec(d);
      qbar += 1e-8 * dir / dir.norm();
    }
    // hard walls must start on the allowed side
    bool feasible = true;
    for (int k = 0; k < model.constraint_count(); ++k)
      if (model.boundary_type(k) == BoundaryType::HardWall &&
          model.constraint_value(qbar, k) < 0.0)
        feasible = false;
    if (feasible) return qbar;
    if (cfg.qbar0 && attempt == 0)
      throw ContractError("simulate_trajectory: initial override violates a hard wall");
  }
  throw IntegrationError("simulate_trajectory: could not draw a feasible start");
}

}  // namespace

SampleChain simulate_trajectory(const TargetModel& model, const SamplerConfig& cfg,
                                Rng& rng) {
  cfg.validate();
  const Index d = model.dim();
  const IntegratorConfig& icfg = cfg.integrator;
  Standardizer std_map = Standardizer::identity(d);

  Vec qbar = draw_initial_position(model, cfg, rng);
  {
    const Vec q0 = unstandardize(qbar, std_map);
    if (!std::isfinite(model.log_density(q0, model.classify(q0))))
      throw NonFiniteError("simulate_trajectory: initial point in zero-density region", q0);
  }
  RegionMask region = model.classify(unstandardize(qbar, std_map));
  Vec pbar = rng.normal_vec(d);

  bool in_burn = cfg.t_burn > 0.0;
  const double burn_end = cfg.t_burn;
  const double delta = cfg.spacing();
  const bool adapt_lambda = cfg.lambda_mode == LambdaMode::Adaptive && in_burn;
  const bool adapt_ms = cfg.adapt_m_s && in_burn;

  LambdaEstimator lam_est(cfg.lambda_min, cfg.lambda);
  double lambda = adapt_lambda ? lam_est.lambda() : cfg.lambda;
  UTurnTracker tracker;
  double t_reset = 0.0;
  MomentAccumulator moments(d);
  double next_moment_t = adapt_ms ? cfg.adapt_spacing : kInf;
  const std::array<double, 4> restd_at = {0.1 * burn_end, 0.2 * burn_end, 0.4 * burn_end,
                                          0.8 * burn_end};
  size_t restd_idx = adapt_ms ? 0 : restd_at.size();

  TrajectoryStats st;
  Mat draws(cfg.n_samples, d);
  long next_sample = 1;

  double t = 0.0;
  auto schedule_refresh = [&]() {
    double rt = t + rng.exponential(lambda);
    if (in_burn && rt > burn_end) rt = burn_end;
    return rt;
  };
  double refresh_t = schedule_refresh();
  if (adapt_lambda) tracker.reset(qbar);

  auto note_sampling_start = [&]() {
    st.adapted_lambda = lambda;
    st.adapted_m = std_map.center();
    st.adapted_s = std_map.scale();
  };
  if (!in_burn) note_sampling_start();

  Vec y(2 * d);
  y.head(d) = qbar;
  y.tail(d) = pbar;

  auto make_field = [&](RegionMask reg) -> DerivativeField {
    return [&, reg](double, const Vec& state) -> Vec {
      try {
        return phase_rhs(state.head(d), state.tail(d), reg, model, std_map);
      } catch (const NonFiniteError&) {
        return Vec::Constant(2 * d, std::numeric_limits<double>::quiet_NaN());
      }
    };
  };
  DerivativeField field = make_field(region);
  Vec f_cur = field(t, y);
  double h = icfg.h_init;
  std::vector<MaskedConstraint> masked;

  while (true) {
    // one accepted step
    StepRecord step;
    double h_next = h;
    for (;;) {
      step = rk_step(y, t, h, field, &f_cur);
      if (!step.finite()) {
        ++st.rejected_steps;
        h *= 0.5;
        if (h < icfg.h_min)
          throw IntegrationError("simulate_trajectory: non-finite stages at h_min");
        continue;
      }
      const double en = error_norm(step, icfg);
      const auto [accept, hn] = step_controller(en, h, icfg);
      if (!accept) {
        ++st.rejected_steps;
        h = hn;
        continue;
      }
      h_next = hn;
      break;
    }
    ++st.accepted_steps;

    // lift expired constraint masks
    if (!masked.empty()) {
      const Vec q_now = unstandardize(y.head(d), std_map);
      std::erase_if(masked, [&](const MaskedConstraint& mc) {
        return t >= mc.t_lift ||
               std::abs(model.constraint_value(q_now, mc.k)) > mc.lift_value;
      });
    }

    EventScan scan;
    scan.model = &model;
    scan.std_map = &std_map;
    scan.uturn = adapt_lambda ? &tracker : nullptr;
    scan.refresh_t = refresh_t;
    scan.sample_t =
        (!in_burn && next_sample <= cfg.n_samples) ? burn_end + next_sample * delta : kInf;
    scan.sample_index = next_sample;
    scan.masked = &masked;
    const auto ev = locate_first_event(step, region, scan);

    const double t_advance = ev ? ev->t : step.t0 + step.h;

    while (next_moment_t <= t_advance && next_moment_t <= burn_end) {
      const double sigma = (next_moment_t - step.t0) / step.h;
      moments.update(unstandardize(dense_eval(step, sigma).head(d), std_map));
      next_moment_t += cfg.adapt_spacing;
    }

    if (!ev) {
      y = step.y1;
      t = step.t0 + step.h;
      f_cur = step.f1;  // FSAL
      h = h_next;
    } else {
      t = ev->t;
      y.head(d) = ev->state.qbar;
      y.tail(d) = ev->state.pbar;
      switch (ev->kind.type) {
        case EventType::Boundary: {
          const int k = ev->kind.constraint;
          PhasePoint at{t, ev->state.qbar, ev->state.pbar, region};
          bool reflected = false;
          const PhasePoint post =
              apply_boundary(at, k, model, std_map, cfg.kernel, rng, &reflected);
          switch (model.boundary_type(k)) {
            case BoundaryType::GradientJump: ++st.gradient_switches; break;
            case BoundaryType::DensityJump:
              reflected ? ++st.reflections : ++st.refractions;
              break;
            case BoundaryType::HardWall: ++st.wall_reflections; break;
          }
          if (reflected && adapt_lambda && in_burn) {
            on_reflection_reset(lam_est, tracker, t - t_reset, post.qbar);
            t_reset = t;
            lambda = lam_est.lambda();
          }
          region = post.region;
          y.tail(d) = post.pbar;
          const double c_start =
              model.constraint_value(unstandardize(step.y0.head(d), std_map), k);
          masked.push_back(
              {k, 10.0 * scan.root_tol_base * (1.0 + std::abs(c_start)), t + 1e-8});
          field = make_field(region);
          f_cur = field(t, y);
          // the truncated step discarded the controller's error information
          h = std::min(h, 0.1 * icfg.h_max);
          break;
        }
        case EventType::Refresh: {
          ++st.refreshes;
          const bool at_burn_end = in_burn && t >= burn_end;
          if (adapt_lambda && in_burn) {
            if (tracker.active && t - t_reset >= 1e-12)
              lam_est.record_interval(t - t_reset, false);
            lambda = lam_est.lambda();
          }
          y.tail(d) = rng.normal_vec(d);
          if (at_burn_end) {
            in_burn = false;
            tracker.active = false;
            note_sampling_start();
          } else if (adapt_lambda && in_burn) {
            tracker.reset(y.head(d));
            t_reset = t;
          }
          refresh_t = schedule_refresh();
          f_cur = field(t, y);
          h = h_next;
          break;
        }
        case EventType::UTurn: {
          ++st.uturn_events;
          if (t - t_reset >= 1e-12) lam_est.record_interval(t - t_reset, true);
          lambda = lam_est.lambda();
          tracker.active = false;
          f_cur = field(t, y);
          h = h_next;
          break;
        }
        case EventType::SampleEmit: {
          const Vec qdraw = unstandardize(y.head(d), std_map);
          if (!qdraw.allFinite())
            throw NonFiniteError("simulate_trajectory: non-finite draw", qdraw);
          draws.row(ev->kind.sample_index - 1) = qdraw.transpose();
          ++st.emitted;
          ++next_sample;
          if (next_sample > cfg.n_samples) {
            st.lambda_at_end = lambda;
            st.m_at_end = std_map.center();
            st.s_at_end = std_map.scale();
            st.degenerate_intervals = lam_est.degenerate_intervals();
            SampleChain chain;
            chain.draws = std::move(draws);
            chain.seed = cfg.seed;
            chain.stats = {st};
            return chain;
          }
          f_cur = field(t, y);
          h = h_next;
          break;
        }
      }
    }

    // scheduled re-standardization checkpoints during burn-in
    if (in_burn && restd_idx < restd_at.size() && t >= restd_at[restd_idx]) {
      ++restd_idx;
      const Vec q_now = unstandardize(y.head(d), std_map);
      std_map = moments.read_standardizer(cfg.s_floor);
      y.head(d) = standardize(q_now, std_map);
      y.tail(d) = rng.normal_vec(d);  // refresh is the process's own kernel
      ++st.refreshes;
      if (adapt_lambda) {
        if (tracker.active && t - t_reset >= 1e-12)
          lam_est.record_interval(t - t_reset, false);
        lambda = lam_est.lambda();
        tracker.reset(y.head(d));
        t_reset = t;
      }
      refresh_t = schedule_refresh();
      field = make_field(region);
      f_cur = field(t, y);
      h = icfg.h_init;
    }
  }
}

EnsembleResult run_ensemble(const TargetModel& model, const SamplerConfig& cfg, int n_traj,
                            int jobs) {
  if (n_traj < 1) throw ContractError("run_ensemble: n_traj must be >= 1");
  cfg.validate();
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, n_traj));

  EnsembleResult result;
  result.chains.resize(n_traj);
  const auto t_start = std::chrono::steady_clock::now();

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_traj) return;
      const auto c0 = std::chrono::steady_clock::now();
      SampleChain& chain = result.chains[i];
      try {
        Rng rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(i));
        chain = simulate_trajectory(model, cfg, rng);
      } catch (const std::exception& e) {
        chain.seed = cfg.seed;
        chain.stats.resize(1);
        chain.stats[0].failed = true;
        chain.stats[0].error = e.what();
      }
      chain.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  long rows = 0;
  for (const auto& c : result.chains) {
    if (c.stats.size() == 1 && c.stats[0].failed) {
      result.any_failed = true;
      continue;
    }
    rows += c.draws.rows();
  }
  result.merged.seed = cfg.seed;
  result.merged.draws.resize(rows, model.dim());
  long at = 0;
  for (const auto& c : result.chains) {
    if (c.stats.size() == 1 && c.stats[0].failed) {
      result.merged.stats.push_back(c.stats[0]);
      continue;
    }
    result.merged.draws.middleRows(at, c.draws.rows()) = c.draws;
    at += c.draws.rows();
    result.merged.stats.push_back(c.stats.at(0));
  }
  result.merged.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

}  // namespace grhmc
