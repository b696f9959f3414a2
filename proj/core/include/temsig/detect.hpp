#ifndef TEMSIG_DETECT_HPP
#define TEMSIG_DETECT_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "temsig/types.hpp"

namespace temsig::detect {

/// Known pre-change state: N(0, I_d).
struct StreamModel {
  int d = 1;
};

/// l1 ball Gamma = { theta : |theta|_1 <= s }, the convex relaxation of the
/// sparse post-change mean set.
struct SparseConstraint {
  double s = 1.0;
};

enum class Procedure { acm, asr, cusum, glr };
enum class EtaMode { decay, constant };

struct ProcedureConfig {
  Procedure procedure = Procedure::acm;
  int d = 1;
  int window = 1;        // w >= 1
  double threshold = 0;  // b
  EtaMode eta_mode = EtaMode::decay;
  double eta = 1.0;      // step size for EtaMode::constant
  SparseConstraint constraint;
  std::vector<double> cusum_mean;  // theta_1, CUSUM baseline only
};

/// log f_theta(x) - log f_0(x) = theta . x - |theta|^2 / 2 for N(theta, I_d)
/// against N(0, I_d).
double gaussian_log_lr_increment(std::span<const double> theta, std::span<const double> x);

/// Euclidean projection onto the l1 ball of radius s (exact soft threshold
/// found by sorting absolute values).
std::vector<double> project_l1_ball(std::span<const double> v, double s);
void project_l1_ball_inplace(std::vector<double>& v, double s);

/// One-sample online mirror descent step on the loss -log f_theta(x)
/// (Euclidean mirror): theta' = proj(theta - eta * (theta - x)).
std::vector<double> omd_update(std::span<const double> theta, std::span<const double> x,
                               double eta, const SparseConstraint& constraint);

/// Per-candidate recursion state: running log likelihood ratio and current
/// OMD post-change mean estimate.
struct Candidate {
  long k = 0;  // hypothetical change time (1-indexed sample)
  double log_lr = 0.0;
  std::vector<double> theta;
};

/// Sliding window of candidates k in [t - w, t]; strictly sequential in t.
class DetectorState {
 public:
  DetectorState(const ProcedureConfig& config);

  void step(std::span<const double> x);

  long t() const { return t_; }
  const std::deque<Candidate>& candidates() const { return window_; }
  const ProcedureConfig& config() const { return config_; }

  /// ACM: max over candidates of log_lr. ASR: log sum exp of log_lr.
  double acm_statistic() const;
  double asr_statistic() const;
  long acm_arg_k() const;  // earliest maximizing candidate

 private:
  ProcedureConfig config_;
  std::deque<Candidate> window_;
  long t_ = 0;
};

struct StopResult {
  bool stopped = false;
  long stop_time = 0;               // t at the first threshold crossing
  std::optional<long> arg_k;        // maximizing candidate (ACM only)
  double final_statistic = 0.0;     // statistic at stop (or at stream end)
  std::vector<double> theta_estimate;
};

/// Runs the configured procedure over the stream, stopping at the first t
/// with statistic > b.
StopResult run(std::span<const std::vector<double>> stream, const ProcedureConfig& config);

/// Classical CUSUM with known post-change mean theta_1:
/// W_t = max(0, W_{t-1}) + log f_{theta_1}(x_t)/f_0(x_t).
StopResult run_cusum(std::span<const std::vector<double>> stream,
                     const ProcedureConfig& config);

/// Window-limited GLR with the exact unconstrained MLE (sample mean over
/// [k, t]); statistic = max_k (t - k + 1) |mean|^2 / 2.
StopResult run_glr(std::span<const std::vector<double>> stream, const ProcedureConfig& config);

/// Per-t statistic trace (for CSV export); does not stop early.
std::vector<double> statistic_trace(std::span<const std::vector<double>> stream,
                                    const ProcedureConfig& config);

struct CalibrationResult {
  double threshold = 0.0;
  double empirical_arl = 0.0;
  double censored_fraction = 0.0;
  int bisection_steps = 0;
};

/// Monte Carlo threshold calibration on null streams: bisection on b until
/// the empirical mean stop time lands within tolerance of target_arl.
/// Censored runs count at max_len (warned when censoring > 5%). Identical
/// (seed, config) give identical thresholds for any worker count.
CalibrationResult calibrate_threshold(const ProcedureConfig& config, double target_arl,
                                      int runs, long max_len, std::uint64_t seed,
                                      double tolerance = 0.10);

/// Mean stop time of the configured procedure on freshly seeded null streams.
double empirical_arl(const ProcedureConfig& config, int runs, long max_len,
                     std::uint64_t seed);

}  // namespace temsig::detect

#endif
