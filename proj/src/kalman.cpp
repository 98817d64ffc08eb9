#include "sldskit/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sldskit {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

Mat joseph_or_standard_cov(const Mat& pred_cov, const Mat& gain, const Mat& H, const Mat& R,
                           bool joseph) {
  const Mat ikh = Mat::identity(pred_cov.rows()) - gain * H;
  if (!joseph) return symmetrized(ikh * pred_cov);
  return symmetrized(sandwich(ikh, pred_cov) + sandwich(gain, R));
}

struct Branch {
  std::vector<int> hist;  // recent committed modes, most recent last
  GaussianBelief belief;
  double log_weight;
};

struct Candidate {
  int parent;
  int mode;
  GaussianBelief belief;
  double log_weight;
};

}  // namespace

GaussianBelief time_update(const GaussianBelief& belief, const ModeParams& mode) {
  require(mode.A.cols() == static_cast<int>(belief.mean.size()), "time_update dimension mismatch");
  require(mode.Q.rows() == mode.A.rows(), "time_update Q dimension mismatch");
  return {mode.A * belief.mean, symmetrized(sandwich(mode.A, belief.cov) + mode.Q)};
}

MeasurementUpdate measurement_update(const GaussianBelief& predicted, const Mat& H, const Mat& R,
                                     const Vec& y, const KalmanOptions& opts) {
  require(H.cols() == static_cast<int>(predicted.mean.size()), "measurement_update dimension mismatch");
  require(static_cast<int>(y.size()) == H.rows(), "measurement size mismatch");
  const int m = H.rows();

  const Mat hp = H * predicted.cov;           // m x z
  const Mat innov_cov = symmetrized(multiply_nt(hp, H) + R);
  Cholesky chol(innov_cov, CholeskyMode::Strict);  // throws with pivot diagnostics when singular

  const Mat gain = transpose(chol.solve(hp));  // z x m

  Vec innovation = y - H * predicted.mean;
  const Vec whitened = chol.forward_solve(innovation);
  const double log_likelihood =
      -0.5 * (m * kLog2Pi + chol.log_det() + norm_sq(whitened));

  MeasurementUpdate out;
  out.belief.mean = predicted.mean + gain * innovation;
  out.belief.cov = joseph_or_standard_cov(predicted.cov, gain, H, R, opts.joseph_update);
  out.innovation = std::move(innovation);
  out.log_likelihood = log_likelihood;
  return out;
}

GainStep riccati_step(const Mat& prior_cov, const ModeParams& mode, const Mat& H, const Mat& R,
                      const KalmanOptions& opts) {
  const Mat pred = symmetrized(sandwich(mode.A, prior_cov) + mode.Q);
  const Mat hp = H * pred;
  const Mat innov_cov = symmetrized(multiply_nt(hp, H) + R);
  Cholesky chol(innov_cov, CholeskyMode::Strict);
  GainStep step;
  step.gain = transpose(chol.solve(hp));
  step.posterior = joseph_or_standard_cov(pred, step.gain, H, R, opts.joseph_update);
  step.log_det_innov = chol.log_det();
  return step;
}

std::vector<GaussianBelief> kf_filter(const SldsModel& model, const std::vector<int>& mode_seq,
                                      const std::vector<Vec>& measurements,
                                      const KalmanOptions& opts) {
  require(mode_seq.size() == measurements.size(), "mode sequence and measurements differ in length");
  const int r = model.num_modes();
  for (int idx : mode_seq) require(idx >= 0 && idx < r, "mode index out of range");

  std::vector<GaussianBelief> out;
  out.reserve(measurements.size());
  GaussianBelief belief{model.x0_mean, model.P0};
  for (std::size_t n = 0; n < measurements.size(); ++n) {
    belief = time_update(belief, model.modes[mode_seq[n]]);
    belief = measurement_update(belief, model.H, model.R, measurements[n], opts).belief;
    out.push_back(belief);
  }
  return out;
}

SkfResult skf_map(const SldsModel& model, const std::vector<Vec>& measurements, int memory_u,
                  const KalmanOptions& opts) {
  require(memory_u >= 1, "memory_u must be >= 1");
  const int r = model.num_modes();
  const int suffix_len = memory_u - 1;
  const std::size_t steps = measurements.size();

  SkfResult result;
  result.estimates.reserve(steps);
  result.detected.reserve(steps);
  result.mode_posteriors.reserve(steps);
  result.log_likelihood = 0.0;

  std::vector<Branch> branches;
  branches.push_back({{}, {model.x0_mean, model.P0}, 0.0});

  // log weights are shifted by the running maximum after each step to avoid
  // underflow; the shifts are accumulated here so the reported total
  // likelihood stays absolute
  double log_offset = 0.0;

  std::vector<Candidate> candidates;
  for (std::size_t n = 0; n < steps; ++n) {
    candidates.clear();
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const Branch& br = branches[b];
      for (int mode = 0; mode < r; ++mode) {
        GaussianBelief pred = time_update(br.belief, model.modes[mode]);
        MeasurementUpdate up = measurement_update(pred, model.H, model.R, measurements[n], opts);
        double lw = br.log_weight + up.log_likelihood;
        if (opts.weight_with_transitions) {
          const double p = br.hist.empty() ? model.priors[mode] : model.transitions(br.hist.back(), mode);
          lw += std::log(p);
        }
        candidates.push_back({static_cast<int>(b), mode, std::move(up.belief), lw});
      }
    }

    // posteriors over the current mode, from all candidates
    double max_lw = -std::numeric_limits<double>::infinity();
    for (const Candidate& c : candidates) max_lw = std::max(max_lw, c.log_weight);
    Vec posterior(r, 0.0);
    if (std::isfinite(max_lw)) {
      double total = 0.0;
      for (const Candidate& c : candidates) {
        const double w = std::exp(c.log_weight - max_lw);
        posterior[c.mode] += w;
        total += w;
      }
      for (double& p : posterior) p /= total;
    } else {
      posterior.assign(r, 1.0 / r);
    }

    int detected = 0;
    for (int i = 1; i < r; ++i)
      if (posterior[i] > posterior[detected]) detected = i;

    int best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
      if (candidates[c].log_weight > candidates[best].log_weight) best = static_cast<int>(c);

    result.estimates.push_back(candidates[best].belief);
    result.detected.push_back(detected);
    result.mode_posteriors.push_back(std::move(posterior));
    if (n + 1 == steps) {
      double lse = 0.0;
      for (const Candidate& c : candidates) lse += std::exp(c.log_weight - max_lw);
      result.log_likelihood = std::isfinite(max_lw)
                                  ? log_offset + max_lw + std::log(lse)
                                  : -std::numeric_limits<double>::infinity();
    }

    // prune: keep the best candidate per length-(memory_u - 1) suffix
    std::vector<Branch> next;
    std::vector<std::vector<int>> keys;
    for (const Candidate& c : candidates) {
      std::vector<int> key;
      if (suffix_len > 0) {
        const std::vector<int>& h = branches[c.parent].hist;
        const int take = std::min<int>(suffix_len - 1, static_cast<int>(h.size()));
        key.assign(h.end() - take, h.end());
        key.push_back(c.mode);
      }
      auto it = std::find(keys.begin(), keys.end(), key);
      if (it == keys.end()) {
        keys.push_back(key);
        std::vector<int> hist = branches[c.parent].hist;
        hist.push_back(c.mode);
        const int keep = std::max(suffix_len, 1);
        if (static_cast<int>(hist.size()) > keep)
          hist.erase(hist.begin(), hist.end() - keep);
        next.push_back({std::move(hist), c.belief, c.log_weight});
      } else {
        const std::size_t idx = static_cast<std::size_t>(it - keys.begin());
        if (c.log_weight > next[idx].log_weight) {
          std::vector<int> hist = branches[c.parent].hist;
          hist.push_back(c.mode);
          const int keep = std::max(suffix_len, 1);
          if (static_cast<int>(hist.size()) > keep)
            hist.erase(hist.begin(), hist.end() - keep);
          next[idx] = {std::move(hist), c.belief, c.log_weight};
        }
      }
    }

    // sort by suffix key, renormalize log weights
    std::vector<std::size_t> order(next.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return next[a].hist < next[b].hist;
    });
    branches.clear();
    double best_lw = -std::numeric_limits<double>::infinity();
    for (const Branch& br : next) best_lw = std::max(best_lw, br.log_weight);
    const bool shift = std::isfinite(best_lw);
    if (shift) log_offset += best_lw;
    for (std::size_t i : order) {
      Branch br = std::move(next[i]);
      if (shift) br.log_weight -= best_lw;
      branches.push_back(std::move(br));
    }
  }
  return result;
}

}  // namespace sldskit
