#include "sldskit/slds.hpp"

#include <cmath>
#include <sstream>

namespace sldskit {
namespace {

constexpr double kProbTol = 1e-12;

void check_psd(const Mat& m, const std::string& name, std::vector<std::string>& report) {
  if (m.rows() != m.cols()) {
    report.push_back(name + " is not square");
    return;
  }
  const double scale = std::max(max_abs(m), 1.0);
  if (asymmetry(m) > 1e-10 * scale) {
    report.push_back(name + " not symmetric");
    return;
  }
  const Vec ev = symmetric_eigenvalues(m);
  const double floor = -1e-10 * std::max(trace(m), 1.0);
  if (!ev.empty() && ev.front() < floor) {
    std::ostringstream os;
    os << name << " not PSD (min eigenvalue " << ev.front() << ")";
    report.push_back(os.str());
  }
}

std::string mode_label(int i) { return "modes[" + std::to_string(i) + "]"; }

}  // namespace

DetectionModel DetectionModel::from_confusion(Mat rho) {
  require(rho.rows() == rho.cols(), "confusion matrix must be square");
  for (int i = 0; i < rho.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < rho.cols(); ++j) {
      require(rho(i, j) >= 0.0, "confusion entries must be non-negative");
      sum += rho(i, j);
    }
    require(std::abs(sum - 1.0) <= kProbTol, "confusion row " + std::to_string(i + 1) + " must sum to 1");
  }
  DetectionModel d;
  d.kind = DetectionKind::Confusion;
  d.confusion = std::move(rho);
  return d;
}

DetectionModel DetectionModel::oracle_map(std::vector<int> mode_to_rep) {
  const int r = static_cast<int>(mode_to_rep.size());
  Mat rho(r, r);
  for (int i = 0; i < r; ++i) {
    require(mode_to_rep[i] >= 0 && mode_to_rep[i] < r, "representative index out of range");
    rho(i, mode_to_rep[i]) = 1.0;
  }
  DetectionModel d;
  d.kind = DetectionKind::OracleCluster;
  d.confusion = std::move(rho);
  d.mode_to_rep = std::move(mode_to_rep);
  return d;
}

Mat DetectionModel::effective_confusion(int r) const {
  if (kind == DetectionKind::Perfect) return Mat::identity(r);
  require(confusion.rows() == r, "confusion matrix size does not match mode count");
  return confusion;
}

std::vector<std::string> validate_model(const SldsModel& model) {
  std::vector<std::string> report;
  if (model.modes.empty()) {
    report.emplace_back("model has no modes");
    return report;
  }
  const int z = model.modes.front().A.rows();
  const int r = model.num_modes();

  for (int i = 0; i < r; ++i) {
    const ModeParams& mp = model.modes[i];
    if (mp.A.rows() != mp.A.cols())
      report.push_back(mode_label(i) + ".A is not square");
    if (mp.A.rows() != z)
      report.push_back(mode_label(i) + ".A dimension differs from modes[0]");
    if (mp.Q.rows() != z || mp.Q.cols() != z)
      report.push_back(mode_label(i) + ".Q dimension differs from A");
    else
      check_psd(mp.Q, mode_label(i) + ".Q", report);
  }

  if (model.H.cols() != z)
    report.push_back("H has " + std::to_string(model.H.cols()) + " columns, expected state dimension " +
                     std::to_string(z));
  const int m = model.H.rows();
  if (model.R.rows() != m || model.R.cols() != m)
    report.push_back("R dimension differs from measurement dimension");
  else
    check_psd(model.R, "R", report);

  if (static_cast<int>(model.priors.size()) != r) {
    report.push_back("priors length differs from mode count");
  } else {
    double sum = 0.0;
    for (double p : model.priors) {
      if (p < 0.0) report.push_back("priors has a negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTol) {
      std::ostringstream os;
      os << "priors sum != 1 (sum = " << sum << ")";
      report.push_back(os.str());
    }
  }

  if (model.transitions.rows() != r || model.transitions.cols() != r) {
    report.push_back("transitions must be " + std::to_string(r) + "x" + std::to_string(r));
  } else {
    for (int i = 0; i < r; ++i) {
      double sum = 0.0;
      bool negative = false;
      for (int j = 0; j < r; ++j) {
        if (model.transitions(i, j) < 0.0) negative = true;
        sum += model.transitions(i, j);
      }
      if (negative) report.push_back("transitions row " + std::to_string(i + 1) + " has a negative entry");
      if (std::abs(sum - 1.0) > kProbTol) {
        std::ostringstream os;
        os << "transitions row " << (i + 1) << " sum != 1 (sum = " << sum << ")";
        report.push_back(os.str());
      }
    }
  }

  if (static_cast<int>(model.x0_mean.size()) != z)
    report.push_back("x0_mean length differs from state dimension");
  if (model.P0.rows() != z || model.P0.cols() != z)
    report.push_back("P0 dimension differs from state dimension");
  else
    check_psd(model.P0, "P0", report);

  return report;
}

ModelSampler::ModelSampler(const SldsModel& model)
    : model_(model),
      p0_factor_(model.P0, CholeskyMode::AllowSingular),
      r_factor_(model.R, CholeskyMode::AllowSingular) {
  q_factors_.reserve(model.modes.size());
  for (const ModeParams& mp : model.modes) q_factors_.emplace_back(mp.Q, CholeskyMode::AllowSingular);
}

SimulationRun ModelSampler::run(int steps, const std::vector<int>* forced, std::uint64_t seed) const {
  require(steps >= 1, "simulation needs at least one step");
  const int z = model_.state_dim();
  const int m = model_.meas_dim();
  const int r = model_.num_modes();

  Rng root(seed);
  Rng init_stream = root.substream(Rng::kInitialState);
  Rng proc_stream = root.substream(Rng::kProcessNoise);
  Rng meas_stream = root.substream(Rng::kMeasurementNoise);
  Rng mode_stream = root.substream(Rng::kModeSequence);

  Vec zvec(z), mvec(m);
  init_stream.fill_normal(zvec);
  Vec x = model_.x0_mean + p0_factor_.lower_times(zvec);

  SimulationRun out;
  out.states.reserve(steps);
  out.measurements.reserve(steps);
  out.modes.reserve(steps);

  int mode = -1;
  for (int n = 0; n < steps; ++n) {
    if (forced != nullptr) {
      mode = (*forced)[n];
      require(mode >= 0 && mode < r, "forced mode index out of range");
    } else if (n == 0) {
      mode = mode_stream.categorical(model_.priors);
    } else {
      Vec row(r);
      for (int j = 0; j < r; ++j) row[j] = model_.transitions(mode, j);
      mode = mode_stream.categorical(row);
    }

    proc_stream.fill_normal(zvec);
    x = model_.modes[mode].A * x + q_factors_[mode].lower_times(zvec);

    meas_stream.fill_normal(mvec);
    Vec y = model_.H * x + r_factor_.lower_times(mvec);

    out.states.push_back(x);
    out.measurements.push_back(std::move(y));
    out.modes.push_back(mode);
  }
  return out;
}

SimulationRun ModelSampler::simulate(int steps, std::uint64_t seed) const {
  return run(steps, nullptr, seed);
}

SimulationRun ModelSampler::simulate_forced(const std::vector<int>& mode_seq, std::uint64_t seed) const {
  return run(static_cast<int>(mode_seq.size()), &mode_seq, seed);
}

SimulationRun simulate(const SldsModel& model, int steps, std::uint64_t seed) {
  return ModelSampler(model).simulate(steps, seed);
}

SldsModel build_diffusion_slds(int z, const Vec& diffusivities, double alpha,
                               double q_var, double r_var, double step_amplitude) {
  require(z >= 2, "diffusion grid needs z >= 2");
  require(!diffusivities.empty(), "at least one diffusivity required");
  require(alpha > 0.0, "diffusion number must be positive");
  require(q_var > 0.0 && r_var > 0.0, "noise variances must be positive");
  double eta_max = 0.0;
  for (double eta : diffusivities) {
    require(eta >= 0.0, "diffusivities must be non-negative");
    eta_max = std::max(eta_max, eta);
  }
  require(alpha * eta_max <= 0.5, "explicit scheme unstable: alpha * max(eta) must be <= 0.5");

  // second-difference matrix with zero-flux boundary rows
  Mat lap(z, z);
  for (int i = 0; i < z; ++i) {
    if (i > 0) lap(i, i - 1) = 1.0;
    if (i + 1 < z) lap(i, i + 1) = 1.0;
    lap(i, i) = (i == 0 || i == z - 1) ? -1.0 : -2.0;
  }

  const int r = static_cast<int>(diffusivities.size());
  SldsModel model;
  model.modes.reserve(r);
  for (double eta : diffusivities) {
    ModeParams mp;
    mp.A = Mat::identity(z) + (alpha * eta) * lap;
    mp.Q = Mat::scaled_identity(z, q_var);
    model.modes.push_back(std::move(mp));
  }
  model.H = Mat::identity(z);
  model.R = Mat::scaled_identity(z, r_var);
  model.priors.assign(r, 1.0 / r);
  model.transitions = Mat(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) model.transitions(i, j) = 1.0 / r;
  model.x0_mean.assign(z, 0.0);
  for (int i = 0; i < z / 2; ++i) model.x0_mean[i] = step_amplitude;
  model.P0 = Mat::scaled_identity(z, q_var);
  return model;
}

double diffusion_step_amplitude_for_snr(int z, double r_var, double snr_db) {
  require(z >= 2 && r_var > 0.0, "invalid SNR calibration inputs");
  // ||x0||^2 = floor(z/2) * a^2 and SNR = 10 log10(||x0||^2 / (z * r_var))
  const double target_energy = static_cast<double>(z) * r_var * std::pow(10.0, snr_db / 10.0);
  return std::sqrt(target_energy / static_cast<double>(z / 2));
}

double trajectory_prior(const SldsModel& model, const std::vector<int>& trajectory) {
  require(!trajectory.empty(), "trajectory must not be empty");
  const int r = model.num_modes();
  for (int idx : trajectory) require(idx >= 0 && idx < r, "trajectory index out of range");
  double p = model.priors[trajectory.front()];
  for (std::size_t k = 1; k < trajectory.size(); ++k)
    p *= model.transitions(trajectory[k - 1], trajectory[k]);
  return p;
}

}  // namespace sldskit
