#ifndef SLDSKIT_SLDS_HPP
#define SLDSKIT_SLDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sldskit/mat.hpp"
#include "sldskit/rng.hpp"

namespace sldskit {

// One switching regime: state evolution matrix and process-noise covariance.
struct ModeParams {
  Mat A;  // z x z
  Mat Q;  // z x z, symmetric PSD
};

// Switching linear dynamic system with constant measurement model.
//
//   x_n = A^(s_n) x_{n-1} + v_n,   v_n ~ N(0, Q^(s_n))
//   y_n = H x_n + w_n,             w_n ~ N(0, R)
//
// s_1 ~ priors, s_n | s_{n-1} ~ transitions row s_{n-1}. Mode indices are
// 0-based in the API; file formats and CLI output use 1-based labels.
struct SldsModel {
  std::vector<ModeParams> modes;
  Mat H;            // m x z
  Mat R;            // m x m, symmetric PSD
  Vec priors;       // r, sums to 1
  Mat transitions;  // r x r, row-stochastic
  Vec x0_mean;      // z
  Mat P0;           // z x z, symmetric PSD

  int state_dim() const { return modes.empty() ? 0 : modes.front().A.rows(); }
  int meas_dim() const { return H.rows(); }
  int num_modes() const { return static_cast<int>(modes.size()); }
};

struct SimulationRun {
  std::vector<Vec> states;        // x_1..x_T
  std::vector<Vec> measurements;  // y_1..y_T
  std::vector<int> modes;         // s_1..s_T
};

enum class DetectionKind { Perfect, OracleCluster, Confusion };

// How detected modes relate to true modes. `confusion(i, j)` is the
// probability of detecting mode j when mode i is true. Perfect detection is
// the identity; oracle-cluster maps every mode to a fixed representative
// (see clustering.hpp for the factory that builds one from a partition).
struct DetectionModel {
  DetectionKind kind = DetectionKind::Perfect;
  Mat confusion;                    // r x r when kind != Perfect
  std::vector<int> mode_to_rep;     // kind == OracleCluster only

  static DetectionModel perfect() { return {}; }
  static DetectionModel from_confusion(Mat rho);
  static DetectionModel oracle_map(std::vector<int> mode_to_rep);

  Mat effective_confusion(int r) const;
};

// Every violated model invariant, human-readable; empty means valid.
std::vector<std::string> validate_model(const SldsModel& model);

// Caches the covariance factors of a model so repeated simulation runs skip
// refactorization. simulate() below is the one-shot convenience wrapper and
// draws from the exact same streams.
class ModelSampler {
 public:
  explicit ModelSampler(const SldsModel& model);
  SimulationRun simulate(int steps, std::uint64_t seed) const;
  // same dynamics with the mode sequence imposed instead of drawn
  SimulationRun simulate_forced(const std::vector<int>& mode_seq, std::uint64_t seed) const;

 private:
  SimulationRun run(int steps, const std::vector<int>* forced, std::uint64_t seed) const;

  const SldsModel& model_;
  Cholesky p0_factor_;
  Cholesky r_factor_;
  std::vector<Cholesky> q_factors_;
};

SimulationRun simulate(const SldsModel& model, int steps, std::uint64_t seed);

// Explicit finite-difference discretization of 1-D diffusion with zero-flux
// boundaries: A^(i) = I + alpha * eta_i * L with L the second-difference
// matrix. H = I, Q^(i) = q_var I, R = r_var I, uniform priors and
// transitions, step-function initial mean, P0 = q_var I.
SldsModel build_diffusion_slds(int z, const Vec& diffusivities, double alpha,
                               double q_var, double r_var, double step_amplitude);

// Amplitude of the half-domain step whose first-step SNR
// 10*log10(|x0|^2 / (m * r_var)) equals snr_db.
double diffusion_step_amplitude_for_snr(int z, double r_var, double snr_db);

// priors[t_1] * prod transitions[t_{k-1}][t_k]
double trajectory_prior(const SldsModel& model, const std::vector<int>& trajectory);

}  // namespace sldskit

#endif  // SLDSKIT_SLDS_HPP
