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

#include "qconv/dft.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace qconv {

namespace {

Eigen::FFT<double>& fft_engine() {
  // One engine per thread; plans are cached per transform size.
  static thread_local Eigen::FFT<double> fft;
  return fft;
}

}  // namespace

Eigen::VectorXcd forward_dft(const Eigen::VectorXcd& v) {
  if (v.size() == 0) throw std::invalid_argument("forward_dft: empty input");
  Eigen::VectorXcd out;
  fft_engine().inv(out, v);  // scaled by 1/N, kernel e^{+2 pi i j k / N}
  return out * std::sqrt(static_cast<double>(v.size()));
}

Eigen::VectorXcd inverse_dft(const Eigen::VectorXcd& v) {
  if (v.size() == 0) throw std::invalid_argument("inverse_dft: empty input");
  Eigen::VectorXcd out;
  fft_engine().fwd(out, v);  // unscaled, kernel e^{-2 pi i j k / N}
  return out / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace qconv
