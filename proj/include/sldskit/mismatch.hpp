#ifndef SLDSKIT_MISMATCH_HPP
#define SLDSKIT_MISMATCH_HPP

#include <optional>
#include <vector>

#include "sldskit/kalman.hpp"
#include "sldskit/slds.hpp"

namespace sldskit {

// Joint first and second moments of the stacked vector (x_n, e_n) for one
// (true trajectory, used trajectory) pair, where e_n is the estimation
// error of a filter that runs the used trajectory while the true one
// generates the data. Conditional on the pair the recursion is linear
// Gaussian, so these moments are exact:
//
//   x_n = A^(i) x_{n-1} + v_n
//   e_n = (I - K H)(A^(i) - A^(j)) x_{n-1} + (I - K H) A^(j) e_{n-1}
//         + (I - K H) v_n - K w_n
//
// with K the gain the mismatched filter computes from its own covariance
// recursion under mode j. The same process noise v_n drives both rows,
// hence the cross-covariance block in the propagation.
struct PairTrajectoryStats {
  std::vector<int> true_suffix;  // l_n
  std::vector<int> used_suffix;  // q_n
  Vec joint_mean;                // 2z: stacked (E[x], E[e])
  Mat joint_second;              // 2z x 2z: E[(x;e)(x;e)^T]
  Mat filter_cov;                // z x z: the used filter's own P_{n|n}
  double weight = 1.0;           // probability of (true, used) pair
};

// Moments before the first measurement: the estimate is the prior mean, so
// E[e] = 0, E[e e^T] = E[x e^T] = P0.
PairTrajectoryStats initial_pair_stats(const SldsModel& model);

// Advance one step with mode `true_mode` generating the data and mode
// `used_mode` running the filter.
PairTrajectoryStats error_step(const PairTrajectoryStats& stats, int true_mode, int used_mode,
                               const SldsModel& model);

// mean of the error block
Vec error_mean(const PairTrajectoryStats& stats);
// second-moment matrix of the error block
Mat error_second_moment(const PairTrajectoryStats& stats);
// trace of the error second moment = E[e^T e] for this pair
double error_mse(const PairTrajectoryStats& stats);

struct EnumerateOptions {
  // hard cap on r_true^T0 * r_used^T0
  std::size_t pair_cap = 1'000'000;
};

// All live (true, used) trajectory pairs of length `horizon`, advanced by
// error_step, weighted by
//   pi_{l,q} = prior/transition chain of l  x  prod_n rho(q_n | l_n).
// Used trajectories range over `used_modes` when given (detection must then
// map every true mode into that set), otherwise over all modes. Pairs with
// zero probability are dropped.
std::vector<PairTrajectoryStats> enumerate_pairs(const SldsModel& model,
                                                 const DetectionModel& detection, int horizon,
                                                 const std::optional<std::vector<int>>& used_modes = {},
                                                 const EnumerateOptions& opts = {});

struct MseReport {
  Vec per_step_mse;               // eps_n = E[e_n^T e_n]
  std::vector<Vec> per_step_mean;  // E[e_n]
  std::vector<Mat> per_step_cov;   // C(e_n)
};

// Pair-weighted aggregation of the error statistics over the enumeration.
MseReport expected_mse(const SldsModel& model, const DetectionModel& detection, int horizon,
                       const std::optional<std::vector<int>>& used_modes = {},
                       const EnumerateOptions& opts = {});

// Error statistics of a single fully specified trajectory pair.
MseReport pair_mse(const SldsModel& model, const std::vector<int>& true_traj,
                   const std::vector<int>& used_traj);

}  // namespace sldskit

#endif  // SLDSKIT_MISMATCH_HPP
