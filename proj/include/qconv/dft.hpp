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

#include <Eigen/Dense>

namespace qconv {

// Unitary discrete Fourier transform used throughout the project.
//
// forward_dft is the analysis direction, kernel e^{+2 pi i j k / N} / sqrt(N);
// inverse_dft is its adjoint, kernel e^{-2 pi i j k / N} / sqrt(N).
// Both are norm preserving and exact inverses of each other.
Eigen::VectorXcd forward_dft(const Eigen::VectorXcd& v);
Eigen::VectorXcd inverse_dft(const Eigen::VectorXcd& v);

}  // namespace qconv
