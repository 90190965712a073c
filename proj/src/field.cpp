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

#include "qconv/field.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qconv/dft.hpp"

namespace qconv {

namespace {

constexpr int kRandomModes = 4;     // highest excited wavenumber
constexpr double kSphereRadius = 0.3;

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

// Uniform draw on the sphere of the given radius: normalize a Gaussian
// vector. A zero draw has probability zero but is redrawn defensively.
Eigen::VectorXd sphere_draw(std::mt19937_64& gen, int dim, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(gen);
    norm = v.norm();
  } while (norm == 0.0);
  return v * (radius / norm);
}

}  // namespace

int ProblemSpec::qubits() const {
  validate();
  return std::countr_zero(static_cast<unsigned>(grid_points));
}

void ProblemSpec::validate() const {
  if (!(length > 0.0))
    throw std::invalid_argument("ProblemSpec: length must be positive, got " +
                                std::to_string(length));
  if (!(dt > 0.0))
    throw std::invalid_argument("ProblemSpec: dt must be positive, got " +
                                std::to_string(dt));
  if (grid_points < 2 || !is_power_of_two(grid_points))
    throw std::invalid_argument(
        "ProblemSpec: grid_points must be a power of two >= 2, got " +
        std::to_string(grid_points));
  if (!std::isfinite(speed))
    throw std::invalid_argument("ProblemSpec: speed must be finite");
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  return a.length == b.length && a.speed == b.speed &&
         a.grid_points == b.grid_points && a.dt == b.dt;
}

std::complex<double> FourierSpectrum::at_wavenumber(int k) const {
  return coefficients[wavenumber_to_index(k, size())];
}

int index_to_wavenumber(int j, int n_points) {
  if (j < 0 || j >= n_points)
    throw std::invalid_argument("index_to_wavenumber: index out of range");
  return j < n_points / 2 ? j : j - n_points;
}

int wavenumber_to_index(int k, int n_points) {
  if (k < -n_points / 2 || k >= n_points / 2)
    throw std::invalid_argument("wavenumber_to_index: wavenumber out of range");
  return k >= 0 ? k : k + n_points;
}

Eigen::VectorXd make_grid(const ProblemSpec& spec) {
  spec.validate();
  const int n = spec.grid_points;
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x[j] = j * spec.length / n;
  return x;
}

double reference_profile(double x) {
  return (std::cos(x) + std::sin(2.0 * x) + 2.0 * std::cos(2.0 * x) +
          3.0 * std::cos(3.0 * x)) /
         10.0;
}

FourierSpectrum analyze(const GridField& field) {
  field.spec.validate();
  if (field.values.size() != field.spec.grid_points)
    throw std::invalid_argument("analyze: sample count does not match spec");
  return FourierSpectrum{forward_dft(field.values.cast<std::complex<double>>())};
}

GridField synthesize(const FourierSpectrum& spectrum, const ProblemSpec& spec,
                     double time, double* imag_residual) {
  spec.validate();
  if (spectrum.size() != spec.grid_points)
    throw std::invalid_argument("synthesize: coefficient count does not match spec");
  const Eigen::VectorXcd samples = inverse_dft(spectrum.coefficients);
  if (imag_residual) *imag_residual = samples.imag().cwiseAbs().maxCoeff();
  return GridField{samples.real(), time, spec};
}

GridField exact_solution(const GridField& f0, double t) {
  FourierSpectrum spectrum = analyze(f0);
  const int n = f0.spec.grid_points;
  const double phase_rate =
      f0.spec.speed * t * 2.0 * std::numbers::pi / f0.spec.length;
  for (int j = 0; j < n; ++j) {
    const int k = index_to_wavenumber(j, n);
    spectrum.coefficients[j] *= std::polar(1.0, phase_rate * k);
  }
  return synthesize(spectrum, f0.spec, f0.time + t);
}

GridField random_initial_condition(std::uint64_t seed, const ProblemSpec& spec) {
  spec.validate();
  if (spec.grid_points < 4 * kRandomModes)
    throw std::invalid_argument(
        "random_initial_condition: grid too coarse to resolve mode " +
        std::to_string(kRandomModes));
  std::mt19937_64 gen(seed);
  Eigen::VectorXd coeff = sphere_draw(gen, 2 * kRandomModes, kSphereRadius);
  coeff.head(3) += sphere_draw(gen, 3, kSphereRadius);

  const Eigen::VectorXd x = make_grid(spec);
  const double base = 2.0 * std::numbers::pi / spec.length;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(spec.grid_points);
  for (int k = 1; k <= kRandomModes; ++k) {
    const double a = coeff[2 * (k - 1)];
    const double b = coeff[2 * (k - 1) + 1];
    u += a * (base * k * x.array()).cos().matrix() +
         b * (base * k * x.array()).sin().matrix();
  }
  return GridField{u, 0.0, spec};
}

GridField make_initial_condition(const InitialConditionSpec& ic,
                                 const ProblemSpec& spec) {
  spec.validate();
  if (ic.kind == InitialConditionKind::RandomSphere)
    return random_initial_condition(ic.seed, spec);
  if (ic.name == "reference") {
    const Eigen::VectorXd x = make_grid(spec);
    Eigen::VectorXd u(spec.grid_points);
    for (int j = 0; j < spec.grid_points; ++j) u[j] = reference_profile(x[j]);
    return GridField{u, 0.0, spec};
  }
  if (ic.name == "zero")
    return GridField{Eigen::VectorXd::Zero(spec.grid_points), 0.0, spec};
  throw std::invalid_argument("make_initial_condition: unknown profile name '" +
                              ic.name + "'");
}

}  // namespace qconv
