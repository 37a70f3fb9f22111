#pragma once

#include "grhmc/events.hpp"
#include "grhmc/standardizer.hpp"

namespace grhmc {

/// Censored-exponential MLE for the momentum refresh rate: intervals between
/// resets contribute their observed U-turn time (U=1) or the censoring time
/// (U=0); lambda = max(lambda_min, sum U / sum omega*).
class LambdaEstimator {
 public:
  explicit LambdaEstimator(double lambda_min = 0.05, double lambda_init = 0.2)
      : lambda_min_(lambda_min), lambda_(std::max(lambda_init, lambda_min)) {
    if (!(lambda_min > 0.0)) throw ContractError("LambdaEstimator: lambda_min must be > 0");
  }

  void record_interval(double omega_star, bool observed) {
    if (!(omega_star > 0.0)) {
      ++degenerate_;
      return;
    }
    sum_times_ += omega_star;
    sum_indicators_ += observed ? 1 : 0;
    lambda_ = sum_indicators_ > 0
                  ? std::max(lambda_min_, static_cast<double>(sum_indicators_) / sum_times_)
                  : lambda_min_;
  }

  double lambda() const { return lambda_; }
  double lambda_min() const { return lambda_min_; }
  long sum_indicators() const { return sum_indicators_; }
  double sum_times() const { return sum_times_; }
  long degenerate_intervals() const { return degenerate_; }

 private:
  double lambda_min_;
  double lambda_;
  long sum_indicators_ = 0;
  double sum_times_ = 0.0;
  long degenerate_ = 0;
};

/// Close the running interval as censored at a reflection and restart the
/// U-turn clock there. Intervals shorter than 1e-12 are skipped.
inline void on_reflection_reset(LambdaEstimator& est, UTurnTracker& tracker, double elapsed,
                                const Vec& qbar_now) {
  if (elapsed >= 1e-12) est.record_interval(elapsed, false);
  tracker.reset(qbar_now);
}

/// Single-pass (Welford) mean/variance accumulator for the standardizer.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(Index d) : mean_(Vec::Zero(d)), m2_(Vec::Zero(d)) {}

  void update(const Vec& q) {
    if (q.size() != mean_.size()) throw ContractError("MomentAccumulator: dimension mismatch");
    ++count_;
    const Vec delta = q - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(q - mean_);
  }

  long count() const { return count_; }
  const Vec& mean() const { return mean_; }

  Standardizer read_standardizer(double floor = 1e-3) const {
    const Index d = mean_.size();
    if (count_ < 2) return Standardizer::identity(d);
    Vec s(d);
    for (Index i = 0; i < d; ++i)
      s[i] = std::max(floor, std::sqrt(m2_[i] / static_cast<double>(count_ - 1)));
    return Standardizer(mean_, s);
  }

 private:
  long count_ = 0;
  Vec mean_, m2_;
};

}  // namespace grhmc
