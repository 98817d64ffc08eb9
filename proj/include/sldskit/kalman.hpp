#ifndef SLDSKIT_KALMAN_HPP
#define SLDSKIT_KALMAN_HPP

#include <vector>

#include "sldskit/slds.hpp"

namespace sldskit {

// Filtered state estimate: mean x_{n|n} and covariance P_{n|n}.
struct GaussianBelief {
  Vec mean;
  Mat cov;
};

struct KalmanOptions {
  // Joseph-form covariance update (I-KH)P(I-KH)^T + KRK^T instead of the
  // standard (I-KH)P.
  bool joseph_update = false;
  // Weight hypothesis branches by transition/prior probabilities in
  // addition to the innovation likelihood. Disabled, branch scoring is a
  // pure likelihood ratio test.
  bool weight_with_transitions = true;
};

GaussianBelief time_update(const GaussianBelief& belief, const ModeParams& mode);

struct MeasurementUpdate {
  GaussianBelief belief;
  Vec innovation;
  double log_likelihood;
};

MeasurementUpdate measurement_update(const GaussianBelief& predicted, const Mat& H, const Mat& R,
                                     const Vec& y, const KalmanOptions& opts = {});

// Covariance-only step of the filter running `mode`: Riccati propagation of
// P_{n|n} plus the gain it implies. Shared by the filters and the
// mismatched-error recursion so both see identical arithmetic.
struct GainStep {
  Mat gain;        // K_n
  Mat posterior;   // P_{n|n}
  double log_det_innov;  // log det(H P_pred H^T + R)
};

GainStep riccati_step(const Mat& prior_cov, const ModeParams& mode, const Mat& H, const Mat& R,
                      const KalmanOptions& opts = {});

// Kalman filter along a fixed mode sequence, starting from (x0_mean, P0).
std::vector<GaussianBelief> kf_filter(const SldsModel& model, const std::vector<int>& mode_seq,
                                      const std::vector<Vec>& measurements,
                                      const KalmanOptions& opts = {});

struct SkfResult {
  std::vector<GaussianBelief> estimates;  // most probable branch per step
  std::vector<int> detected;              // argmax of mode_posteriors
  std::vector<Vec> mode_posteriors;       // per step, length r, sums to 1
  double log_likelihood;                  // log sum of final branch weights
};

// Finite-memory MAP switching Kalman filter.
//
// Hypotheses are mode-trajectory branches. Each step every branch is
// extended with all r modes and scored by transition log-probability plus
// innovation log-likelihood; branches are then pruned to the single best
// one per length-(memory_u - 1) suffix, so at most r^memory_u candidates
// are alive while scoring. memory_u = 1 is the committed MAP filter: one
// belief, re-detected each step. Weights are renormalized by max-log-weight
// subtraction, so underflow cannot fail.
SkfResult skf_map(const SldsModel& model, const std::vector<Vec>& measurements, int memory_u,
                  const KalmanOptions& opts = {});

}  // namespace sldskit

#endif  // SLDSKIT_KALMAN_HPP
