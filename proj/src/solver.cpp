// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconv/solver.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qconv/dft.hpp"

namespace qconv {

namespace {

using Complex = std::complex<double>;

// Right-hand-side evaluator for d u_hat / dt = -c D1 u_hat + model(u)_hat.
class EffectiveRhs {
 public:
  EffectiveRhs(const SparseModel& model, const ProblemSpec& spec,
               const SolverConfig& cfg)
      : spec_(spec), cfg_(cfg) {
    const Eigen::Index n = spec.grid_points;
    const double base = 2.0 * std::numbers::pi / spec.length;
    const Complex unit(0.0, 1.0);

    int max_order = 1;  // advection always needs the first derivative
    for (int t : model.support())
      max_order = std::max(max_order, model.terms[static_cast<std::size_t>(t)]
                                           .max_order());
    multipliers_.assign(static_cast<std::size_t>(max_order) + 1,
                        Eigen::VectorXcd::Ones(n));
    for (int order = 1; order <= max_order; ++order) {
      Eigen::VectorXcd& d = multipliers_[static_cast<std::size_t>(order)];
      for (Eigen::Index j = 0; j < n; ++j) {
        const int k =
            index_to_wavenumber(static_cast<int>(j), static_cast<int>(n));
        // Synthesis kernel e^{-ikx}; odd derivatives drop the Nyquist mode.
        if (order % 2 == 1 && k == -static_cast<int>(n) / 2)
          d[j] = 0.0;
        else
          d[j] = std::pow(-unit * (base * k), order);
      }
    }

    cutoff_ = static_cast<int>(n) / 3;
    keep_ = Eigen::VectorXd::Ones(n);
    if (cfg.dealias)
      for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs(index_to_wavenumber(static_cast<int>(j),
                                         static_cast<int>(n))) > cutoff_)
          keep_[j] = 0.0;

    for (int t : model.support()) {
      const Term& term = model.terms[static_cast<std::size_t>(t)];
      const double c = model.coefficients[t];
      if (term.is_linear())
        linear_.push_back({term.first, c});
      else
        quadratic_.push_back({term.first, term.second, c});
    }
  }

  Eigen::VectorXcd operator()(const Eigen::VectorXcd& u_hat) const {
    const Eigen::Index n = u_hat.size();
    Eigen::VectorXcd rhs =
        (-spec_.speed) * multipliers_[1].cwiseProduct(u_hat);
    for (const auto& [order, c] : linear_)
      rhs += c * multipliers_[static_cast<std::size_t>(order)].cwiseProduct(u_hat);

    if (!quadratic_.empty()) {
      const Eigen::VectorXcd filtered =
          cfg_.dealias ? Eigen::VectorXcd(keep_.cast<Complex>().cwiseProduct(u_hat))
                       : u_hat;
      std::vector<Eigen::VectorXd> fields(multipliers_.size());
      std::vector<bool> have(multipliers_.size(), false);
      const auto field_of = [&](int order) -> const Eigen::VectorXd& {
        auto& slot = fields[static_cast<std::size_t>(order)];
        if (!have[static_cast<std::size_t>(order)]) {
          slot = inverse_dft(multipliers_[static_cast<std::size_t>(order)]
                                 .cwiseProduct(filtered))
                     .real();
          have[static_cast<std::size_t>(order)] = true;
        }
        return slot;
      };
      Eigen::VectorXd forcing = Eigen::VectorXd::Zero(n);
      for (const auto& [first, second, c] : quadratic_)
        forcing += c * field_of(first).cwiseProduct(field_of(second));
      Eigen::VectorXcd forcing_hat = forward_dft(forcing.cast<Complex>());
      if (cfg_.dealias)
        forcing_hat = keep_.cast<Complex>().cwiseProduct(forcing_hat);
      rhs += forcing_hat;
    }
    return rhs;
  }

 private:
  struct LinearTerm {
    int order;
    double coefficient;
  };
  struct QuadraticTerm {
    int first;
    int second;
    double coefficient;
  };

  ProblemSpec spec_;
  SolverConfig cfg_;
  std::vector<Eigen::VectorXcd> multipliers_;
  Eigen::VectorXd keep_;
  int cutoff_ = 0;
  std::vector<LinearTerm> linear_;
  std::vector<QuadraticTerm> quadratic_;
};

}  // namespace

SnapshotDataset solve_effective(const SparseModel& model, const GridField& ic,
                                double total_time, const SolverConfig& cfg) {
  ic.spec.validate();
  if (ic.values.size() != ic.spec.grid_points)
    throw std::invalid_argument("solve_effective: sample count does not match spec");
  if (cfg.substeps < 1)
    throw std::invalid_argument("solve_effective: substeps must be >= 1");
  if (!(cfg.blowup_factor > 1.0))
    throw std::invalid_argument("solve_effective: blowup_factor must exceed 1");
  if (!(total_time > 0.0))
    throw std::invalid_argument("solve_effective: total_time must be positive");
  const double steps_real = total_time / ic.spec.dt;
  const long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - double(steps)) > 1e-9)
    throw std::invalid_argument(
        "solve_effective: total_time must be a whole number of dt intervals");
  if (model.coefficients.size() != static_cast<Eigen::Index>(model.terms.size()))
    throw std::invalid_argument("solve_effective: malformed model");

  const EffectiveRhs rhs(model, ic.spec, cfg);
  const double h = ic.spec.dt / cfg.substeps;

  SnapshotDataset out;
  out.spec = ic.spec;
  out.t0 = ic.time;
  out.u.resize(ic.spec.grid_points, steps + 1);
  out.u.col(0) = ic.values;

  const double initial_max = ic.values.cwiseAbs().maxCoeff();
  const double bound =
      cfg.blowup_factor * std::max(initial_max, 1e-300);

  Eigen::VectorXcd u_hat = forward_dft(ic.values.cast<Complex>());
  for (long s = 1; s <= steps; ++s) {
    for (int sub = 0; sub < cfg.substeps; ++sub) {
      const Eigen::VectorXcd k1 = rhs(u_hat);
      const Eigen::VectorXcd k2 = rhs(u_hat + (h / 2.0) * k1);
      const Eigen::VectorXcd k3 = rhs(u_hat + (h / 2.0) * k2);
      const Eigen::VectorXcd k4 = rhs(u_hat + h * k3);
      u_hat += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const Eigen::VectorXd snapshot = inverse_dft(u_hat).real();
    const double peak = snapshot.cwiseAbs().maxCoeff();
    if (!std::isfinite(peak) || peak > bound)
      throw std::runtime_error(
          "solve_effective: run became unstable at t = " +
          std::to_string(ic.time + double(s) * ic.spec.dt) +
          " (max |u| grew past " + std::to_string(bound) +
          "); reduce dt or the model stiffness");
    out.u.col(s) = snapshot;
  }
  return out;
}

ErrorMap error_map(const SnapshotDataset& model_run, const SnapshotDataset& truth) {
  model_run.validate();
  truth.validate();
  if (!(model_run.spec == truth.spec))
    throw std::invalid_argument("error_map: runs use different problem specs");
  if (model_run.u.cols() != truth.u.cols())
    throw std::invalid_argument("error_map: snapshot counts differ");
  if (std::abs(model_run.t0 - truth.t0) > 1e-9)
    throw std::invalid_argument("error_map: runs start at different times");

  const double global_max = truth.u.cwiseAbs().maxCoeff();
  ErrorMap map;
  map.floor = 1e-3 * global_max;
  map.e.resize(truth.u.rows(), truth.u.cols());
  for (Eigen::Index m = 0; m < truth.u.cols(); ++m) {
    const double slice_max = truth.u.col(m).cwiseAbs().maxCoeff();
    // An identically zero truth has no scale; fall back to absolute error.
    const double normalizer = std::max(slice_max, map.floor);
    const double denom = normalizer > 0.0 ? normalizer : 1.0;
    map.e.col(m) = (model_run.u.col(m) - truth.u.col(m)) / denom;
  }
  return map;
}

double coverage_within(const ErrorMap& map, double tol) {
  if (!(tol >= 0.0))
    throw std::invalid_argument("coverage_within: tol must be >= 0");
  if (map.e.size() == 0)
    throw std::invalid_argument("coverage_within: empty error map");
  const auto within = (map.e.cwiseAbs().array() <= tol).count();
  return static_cast<double>(within) / static_cast<double>(map.e.size());
}

}  // namespace qconv
