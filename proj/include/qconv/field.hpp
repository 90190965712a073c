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

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>

namespace qconv {

// Discretization and transport parameters for the periodic scalar problem
//
//   u_t + c u_x = 0   on   x in [0, L),
//
// sampled on N uniform points. N must be a power of two so a sample vector
// can be amplitude-encoded on n = log2(N) qubits.
struct ProblemSpec {
  double length = 2.0 * std::numbers::pi;
  double speed = 1.0;
  int grid_points = 256;
  double dt = 0.02;

  int qubits() const;

  // Throws std::invalid_argument with an actionable message when any
  // parameter is out of contract (N not a power of two, dt <= 0, L <= 0).
  void validate() const;
};

bool operator==(const ProblemSpec& a, const ProblemSpec& b);

// Real samples u(x_j) on the grid of a ProblemSpec, tagged with model time.
struct GridField {
  Eigen::VectorXd values;
  double time = 0.0;
  ProblemSpec spec;
};

// Complex Fourier coefficients stored in DFT index order: slot j holds the
// signed wavenumber k = j for j < N/2 and k = j - N otherwise.
struct FourierSpectrum {
  Eigen::VectorXcd coefficients;

  int size() const { return static_cast<int>(coefficients.size()); }
  std::complex<double> at_wavenumber(int k) const;
};

// Signed wavenumber represented by DFT slot j on an N-point grid.
int index_to_wavenumber(int j, int n_points);
// DFT slot of signed wavenumber k in [-N/2, N/2 - 1].
int wavenumber_to_index(int k, int n_points);

enum class InitialConditionKind { Named, RandomSphere };

struct InitialConditionSpec {
  InitialConditionKind kind = InitialConditionKind::Named;
  std::string name = "reference";  // used when kind == Named
  std::uint64_t seed = 0;          // used when kind == RandomSphere
};

// Grid coordinates x_j = j L / N, j = 0..N-1.
Eigen::VectorXd make_grid(const ProblemSpec& spec);

// Built-in reference profile (cos x + sin 2x + 2 cos 2x + 3 cos 3x) / 10.
double reference_profile(double x);

// Analysis transform of the samples (see dft.hpp for the kernel convention).
FourierSpectrum analyze(const GridField& field);

// Adjoint of analyze. Sampled values are the real parts of the inverse
// transform; imag_residual, when non-null, receives max |Im| over samples.
GridField synthesize(const FourierSpectrum& spectrum, const ProblemSpec& spec,
                     double time, double* imag_residual = nullptr);

// Transport of f0 by distance c * t, computed spectrally. Exact for any
// band-limited field; Fourier coefficient magnitudes are unchanged.
GridField exact_solution(const GridField& f0, double t);

// Low-mode random field: coefficients (a_k, b_k) of sum_k a_k cos(2 pi k x/L)
// + b_k sin(2 pi k x/L) for k = 1..4, drawn uniformly on the 8D sphere of
// radius 0.3, plus a uniform 3D sphere draw of the same radius added to the
// first three components. Deterministic per seed.
GridField random_initial_condition(std::uint64_t seed, const ProblemSpec& spec);

// Materialize an initial condition description on the grid at t = 0.
// Known names: "reference", "zero".
GridField make_initial_condition(const InitialConditionSpec& ic,
                                 const ProblemSpec& spec);

}  // namespace qconv
