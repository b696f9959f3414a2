#include "temsig/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "temsig/errors.hpp"
#include "temsig/parallel.hpp"
#include "temsig/rng.hpp"

namespace temsig::detect {

namespace {

constexpr std::uint64_t kStreamRun = 5ull << 32;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(const ProcedureConfig& config) {
  if (config.d < 1) fail(Errc::invalid_argument, "dimension must be >= 1");
  if (config.window < 1) fail(Errc::invalid_argument, "window must be >= 1");
  if (config.constraint.s <= 0.0) fail(Errc::invalid_argument, "l1 radius must be > 0");
  if (config.eta_mode == EtaMode::constant && config.eta <= 0.0)
    fail(Errc::invalid_argument, "eta must be > 0");
  if (config.procedure == Procedure::cusum &&
      config.cusum_mean.size() != static_cast<std::size_t>(config.d))
    fail(Errc::dimension_mismatch, "cusum_mean length must equal d");
}

}  // namespace

double gaussian_log_lr_increment(std::span<const double> theta, std::span<const double> x) {
  if (theta.size() != x.size()) fail(Errc::dimension_mismatch, "theta and x sizes differ");
  double dot = 0.0, norm2 = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    dot += theta[i] * x[i];
    norm2 += theta[i] * theta[i];
  }
  return dot - 0.5 * norm2;
}

void project_l1_ball_inplace(std::vector<double>& v, double s) {
  if (s <= 0.0) fail(Errc::invalid_argument, "l1 radius must be > 0");
  double l1 = 0.0;
  for (double x : v) l1 += std::abs(x);
  if (l1 <= s) return;

  thread_local std::vector<double> mags;
  mags.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  // largest rho with u_rho > (sum_{i<=rho} u_i - s) / rho
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cum += mags[j];
    const double candidate = (cum - s) / static_cast<double>(j + 1);
    if (mags[j] > candidate) tau = candidate;
  }
  for (double& x : v) {
    const double m = std::abs(x) - tau;
    x = m > 0.0 ? (x > 0.0 ? m : -m) : 0.0;
  }
}

std::vector<double> project_l1_ball(std::span<const double> v, double s) {
  std::vector<double> out(v.begin(), v.end());
  project_l1_ball_inplace(out, s);
  return out;
}

std::vector<double> omd_update(std::span<const double> theta, std::span<const double> x,
                               double eta, const SparseConstraint& constraint) {
  if (theta.size() != x.size()) fail(Errc::dimension_mismatch, "theta and x sizes differ");
  std::vector<double> next(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    next[i] = theta[i] - eta * (theta[i] - x[i]);
  project_l1_ball_inplace(next, constraint.s);
  return next;
}

DetectorState::DetectorState(const ProcedureConfig& config) : config_(config) {
  check_config(config_);
  // candidate k = 1 awaits the first sample with theta = theta_0 = 0
  window_.push_back({1, 0.0, std::vector<double>(config_.d, 0.0)});
}

void DetectorState::step(std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(config_.d))
    fail(Errc::dimension_mismatch, "sample dimension does not match the model");
  ++t_;

  const double s = config_.constraint.s;
  for (auto& cand : window_) {
    // increment with the pre-update estimate, then advance the estimate
    double dot = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      dot += cand.theta[i] * x[i];
      norm2 += cand.theta[i] * cand.theta[i];
    }
    cand.log_lr += dot - 0.5 * norm2;

    const double age = static_cast<double>(t_ - cand.k + 1);
    const double eta =
        config_.eta_mode == EtaMode::decay ? 1.0 / std::sqrt(age) : config_.eta;
    for (std::size_t i = 0; i < x.size(); ++i)
      cand.theta[i] -= eta * (cand.theta[i] - x[i]);
    project_l1_ball_inplace(cand.theta, s);
  }

  window_.push_back({t_ + 1, 0.0, std::vector<double>(config_.d, 0.0)});
  while (!window_.empty() && window_.front().k < t_ - config_.window)
    window_.pop_front();
}

double DetectorState::acm_statistic() const {
  double best = -kInf;
  for (const auto& cand : window_)
    if (cand.k <= t_) best = std::max(best, cand.log_lr);
  return best;
}

double DetectorState::asr_statistic() const {
  // log sum exp over the window, stabilized by the max
  const double m = acm_statistic();
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (const auto& cand : window_)
    if (cand.k <= t_) acc += std::exp(cand.log_lr - m);
  return m + std::log(acc);
}

long DetectorState::acm_arg_k() const {
  double best = -kInf;
  long arg = 0;
  for (const auto& cand : window_) {
    if (cand.k <= t_ && cand.log_lr > best) {
      best = cand.log_lr;
      arg = cand.k;
    }
  }
  return arg;
}

namespace {

StopResult run_adaptive(std::span<const std::vector<double>> stream,
                        const ProcedureConfig& config) {
  DetectorState state(config);
  StopResult result;
  for (const auto& x : stream) {
    state.step(x);
    const double stat = config.procedure == Procedure::acm ? state.acm_statistic()
                                                           : state.asr_statistic();
    result.final_statistic = stat;
    if (stat > config.threshold) {
      result.stopped = true;
      result.stop_time = state.t();
      const long arg = state.acm_arg_k();
      if (config.procedure == Procedure::acm) result.arg_k = arg;
      for (const auto& cand : state.candidates()) {
        if (cand.k == arg) {
          result.theta_estimate = cand.theta;
          break;
        }
      }
      return result;
    }
  }
  // stream ended without stopping; report the current best candidate
  if (state.t() > 0) {
    const long arg = state.acm_arg_k();
    for (const auto& cand : state.candidates()) {
      if (cand.k == arg) {
        result.theta_estimate = cand.theta;
        break;
      }
    }
  }
  return result;
}

}  // namespace

StopResult run_cusum(std::span<const std::vector<double>> stream,
                     const ProcedureConfig& config) {
  ProcedureConfig cfg = config;
  cfg.procedure = Procedure::cusum;
  check_config(cfg);
  StopResult result;
  result.theta_estimate = cfg.cusum_mean;
  double w = 0.0;
  long t = 0;
  for (const auto& x : stream) {
    ++t;
    w = std::max(0.0, w) + gaussian_log_lr_increment(cfg.cusum_mean, x);
    result.final_statistic = w;
    if (w > cfg.threshold) {
      result.stopped = true;
      result.stop_time = t;
      return result;
    }
  }
  return result;
}

StopResult run_glr(std::span<const std::vector<double>> stream, const ProcedureConfig& config) {
  ProcedureConfig cfg = config;
  cfg.procedure = Procedure::glr;
  check_config(cfg);
  const int d = cfg.d;

  StopResult result;
  // prefix sums S_j for j in [t - w - 1, t]; mean over [k, t] uses S_{k-1}
  std::deque<std::pair<long, std::vector<double>>> prefixes;
  prefixes.emplace_back(0, std::vector<double>(d, 0.0));
  long t = 0;
  for (const auto& x : stream) {
    if (x.size() != static_cast<std::size_t>(d))
      fail(Errc::dimension_mismatch, "sample dimension does not match the model");
    ++t;
    std::vector<double> s = prefixes.back().second;
    for (int i = 0; i < d; ++i) s[i] += x[i];
    prefixes.emplace_back(t, std::move(s));
    while (prefixes.front().first < t - cfg.window - 1) prefixes.pop_front();

    double best = -kInf;
    long best_k = 0;
    const auto& st = prefixes.back().second;
    for (const auto& [j, sj] : prefixes) {
      if (j == t) continue;  // k = j + 1 <= t
      const long k = j + 1;
      if (k < t - cfg.window) continue;
      const double n = static_cast<double>(t - k + 1);
      double norm2 = 0.0;
      for (int i = 0; i < d; ++i) {
        const double diff = st[i] - sj[i];
        norm2 += diff * diff;
      }
      const double stat = norm2 / (2.0 * n);
      if (stat > best) {
        best = stat;
        best_k = k;
      }
    }
    result.final_statistic = best;
    if (best > cfg.threshold) {
      result.stopped = true;
      result.stop_time = t;
      result.arg_k = best_k;
      result.theta_estimate.assign(d, 0.0);
      const auto& sj = prefixes[best_k - 1 - prefixes.front().first].second;
      const double n = static_cast<double>(t - best_k + 1);
      for (int i = 0; i < d; ++i) result.theta_estimate[i] = (st[i] - sj[i]) / n;
      return result;
    }
  }
  return result;
}

StopResult run(std::span<const std::vector<double>> stream, const ProcedureConfig& config) {
  check_config(config);
  switch (config.procedure) {
    case Procedure::acm:
    case Procedure::asr:
      return run_adaptive(stream, config);
    case Procedure::cusum:
      return run_cusum(stream, config);
    case Procedure::glr:
      return run_glr(stream, config);
  }
  fail(Errc::invalid_argument, "unknown procedure");
}

std::vector<double> statistic_trace(std::span<const std::vector<double>> stream,
                                    const ProcedureConfig& config) {
  check_config(config);
  std::vector<double> trace;
  trace.reserve(stream.size());
  switch (config.procedure) {
    case Procedure::acm:
    case Procedure::asr: {
      DetectorState state(config);
      for (const auto& x : stream) {
        state.step(x);
        trace.push_back(config.procedure == Procedure::acm ? state.acm_statistic()
                                                           : state.asr_statistic());
      }
      break;
    }
    case Procedure::cusum: {
      double w = 0.0;
      for (const auto& x : stream) {
        w = std::max(0.0, w) + gaussian_log_lr_increment(config.cusum_mean, x);
        trace.push_back(w);
      }
      break;
    }
    case Procedure::glr: {
      // run_glr with an unreachable threshold records the full trace
      ProcedureConfig cfg = config;
      cfg.threshold = kInf;
      std::deque<std::pair<long, std::vector<double>>> prefixes;
      prefixes.emplace_back(0, std::vector<double>(cfg.d, 0.0));
      long t = 0;
      for (const auto& x : stream) {
        ++t;
        std::vector<double> s = prefixes.back().second;
        for (int i = 0; i < cfg.d; ++i) s[i] += x[i];
        prefixes.emplace_back(t, std::move(s));
        while (prefixes.front().first < t - cfg.window - 1) prefixes.pop_front();
        double best = -kInf;
        const auto& st = prefixes.back().second;
        for (const auto& [j, sj] : prefixes) {
          if (j == t) continue;
          const long k = j + 1;
          if (k < t - cfg.window) continue;
          double norm2 = 0.0;
          for (int i = 0; i < cfg.d; ++i) {
            const double diff = st[i] - sj[i];
            norm2 += diff * diff;
          }
          best = std::max(best, norm2 / (2.0 * (t - k + 1)));
        }
        trace.push_back(best);
      }
      break;
    }
  }
  return trace;
}

namespace {

/// Running-max envelope of the statistic on one null stream: (statistic,
/// time) records at every new record value. Stop time for any threshold b is
/// then the first record with statistic > b.
struct Envelope {
  std::vector<std::pair<double, long>> records;
  long horizon = 0;

  long stop_time(double b, bool& censored) const {
    for (const auto& [stat, t] : records) {
      if (stat > b) {
        censored = false;
        return t;
      }
    }
    censored = true;
    return horizon;
  }
  double max_stat() const {
    return records.empty() ? -kInf : records.back().first;
  }
};

Envelope null_envelope(const ProcedureConfig& config, std::uint64_t seed, std::uint64_t run,
                       long max_len) {
  GaussianStream noise(seed, kStreamRun | run);
  Envelope env;
  env.horizon = max_len;
  double runmax = -kInf;
  std::vector<double> x(config.d);

  auto record = [&](double stat, long t) {
    if (stat > runmax) {
      runmax = stat;
      env.records.emplace_back(stat, t);
    }
  };

  switch (config.procedure) {
    case Procedure::acm:
    case Procedure::asr: {
      DetectorState state(config);
      for (long t = 1; t <= max_len; ++t) {
        for (int i = 0; i < config.d; ++i)
          x[i] = noise.normal(static_cast<std::uint64_t>(t - 1) * config.d + i);
        state.step(x);
        record(config.procedure == Procedure::acm ? state.acm_statistic()
                                                  : state.asr_statistic(),
               t);
      }
      break;
    }
    case Procedure::cusum: {
      double w = 0.0;
      for (long t = 1; t <= max_len; ++t) {
        for (int i = 0; i < config.d; ++i)
          x[i] = noise.normal(static_cast<std::uint64_t>(t - 1) * config.d + i);
        w = std::max(0.0, w) + gaussian_log_lr_increment(config.cusum_mean, x);
        record(w, t);
      }
      break;
    }
    case Procedure::glr: {
      std::deque<std::pair<long, std::vector<double>>> prefixes;
      prefixes.emplace_back(0, std::vector<double>(config.d, 0.0));
      for (long t = 1; t <= max_len; ++t) {
        for (int i = 0; i < config.d; ++i)
          x[i] = noise.normal(static_cast<std::uint64_t>(t - 1) * config.d + i);
        std::vector<double> s = prefixes.back().second;
        for (int i = 0; i < config.d; ++i) s[i] += x[i];
        prefixes.emplace_back(t, std::move(s));
        while (prefixes.front().first < t - config.window - 1) prefixes.pop_front();
        double best = -kInf;
        const auto& st = prefixes.back().second;
        for (const auto& [j, sj] : prefixes) {
          if (j == t) continue;
          const long k = j + 1;
          if (k < t - config.window) continue;
          double norm2 = 0.0;
          for (int i = 0; i < config.d; ++i) {
            const double diff = st[i] - sj[i];
            norm2 += diff * diff;
          }
          best = std::max(best, norm2 / (2.0 * (t - k + 1)));
        }
        record(best, t);
      }
      break;
    }
  }
  return env;
}

double mean_stop(const std::vector<Envelope>& envelopes, double b, double& censored_fraction) {
  double acc = 0.0;
  long censored = 0;
  for (const auto& env : envelopes) {
    bool c = false;
    acc += static_cast<double>(env.stop_time(b, c));
    if (c) ++censored;
  }
  censored_fraction = static_cast<double>(censored) / envelopes.size();
  return acc / envelopes.size();
}

}  // namespace

CalibrationResult calibrate_threshold(const ProcedureConfig& config, double target_arl,
                                      int runs, long max_len, std::uint64_t seed,
                                      double tolerance) {
  check_config(config);
  if (target_arl < 10.0) fail(Errc::invalid_argument, "target ARL must be >= 10");
  if (runs < 100) fail(Errc::invalid_argument, "calibration needs >= 100 runs");
  if (max_len < static_cast<long>(target_arl))
    fail(Errc::invalid_argument, "max_len must cover the target ARL");

  std::vector<Envelope> envelopes(runs);
  parallel_for(static_cast<std::size_t>(runs), [&](std::size_t r) {
    envelopes[r] = null_envelope(config, seed, r, max_len);
  });

  double lo = kInf, hi = -kInf;
  for (const auto& env : envelopes) {
    if (!env.records.empty()) lo = std::min(lo, env.records.front().first);
    hi = std::max(hi, env.max_stat());
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    fail(Errc::calibration_diverged, "statistics never move on null data");
  lo -= 1.0;  // everything stops at its first record
  double cf = 0.0;
  if (mean_stop(envelopes, hi, cf) < target_arl * (1.0 - tolerance))
    fail(Errc::calibration_diverged,
         "even an unreachable threshold cannot attain the target ARL at this max_len");
  if (mean_stop(envelopes, lo, cf) > target_arl * (1.0 + tolerance))
    fail(Errc::calibration_diverged, "immediate stopping already exceeds the target ARL");

  CalibrationResult result;
  double best_b = hi;
  double best_gap = kInf;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double arl = mean_stop(envelopes, mid, cf);
    const double gap = std::abs(arl - target_arl);
    if (gap < best_gap) {
      best_gap = gap;
      best_b = mid;
      result.empirical_arl = arl;
      result.censored_fraction = cf;
      result.bisection_steps = iter + 1;
    }
    if (gap <= tolerance * target_arl && iter >= 0) {
      result.threshold = mid;
      result.empirical_arl = arl;
      result.censored_fraction = cf;
      result.bisection_steps = iter + 1;
      if (cf > 0.05)
        warn("threshold calibration: " + std::to_string(cf * 100.0) +
             "% of null runs were censored at max_len");
      return result;
    }
    if (arl < target_arl)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) break;
  }
  if (best_gap <= tolerance * target_arl) {
    result.threshold = best_b;
    return result;
  }
  fail(Errc::calibration_diverged, "bisection did not reach the ARL tolerance");
}

double empirical_arl(const ProcedureConfig& config, int runs, long max_len,
                     std::uint64_t seed) {
  check_config(config);
  std::vector<Envelope> envelopes(runs);
  parallel_for(static_cast<std::size_t>(runs), [&](std::size_t r) {
    envelopes[r] = null_envelope(config, seed, r, max_len);
  });
  double cf = 0.0;
  const double arl = mean_stop(envelopes, config.threshold, cf);
  if (cf > 0.05)
    warn("empirical ARL: " + std::to_string(cf * 100.0) + "% of runs censored at max_len");
  return arl;
}

}  // namespace temsig::detect
