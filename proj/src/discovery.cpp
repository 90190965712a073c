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

#include "qconv/discovery.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qconv/dft.hpp"

namespace qconv {

namespace {

constexpr int kMaxOrder = 4;

std::string factor_name(int order) {
  static const char* names[kMaxOrder + 1] = {"u", "u_x", "u_xx", "u_xxx",
                                             "u_xxxx"};
  return names[order];
}

std::string term_name(int first, int second) {
  if (second < 0) return factor_name(first);
  if (first == second) return factor_name(first) + "^2";
  return factor_name(first) + "*" + factor_name(second);
}

// Accumulated normal equations for the (scaled) stacked design matrix.
struct GramSystem {
  Eigen::MatrixXd ata;
  Eigen::VectorXd atb;
  double btb = 0.0;
  long rows = 0;
};

double term_value(const DerivativeFields& deriv, const Term& term,
                  Eigen::Index i, Eigen::Index m) {
  const double f = deriv.space[static_cast<std::size_t>(term.first)](i, m);
  if (term.is_linear()) return f;
  return f * deriv.space[static_cast<std::size_t>(term.second)](i, m);
}

void check_config(const RegressionConfig& cfg) {
  if (!(cfg.ridge >= 0.0))
    throw std::invalid_argument("RegressionConfig: ridge must be >= 0");
  if (!(cfg.threshold >= 0.0))
    throw std::invalid_argument("RegressionConfig: threshold must be >= 0");
  if (cfg.max_sweeps < 1)
    throw std::invalid_argument("RegressionConfig: max_sweeps must be >= 1");
  if (cfg.stride < 1)
    throw std::invalid_argument("RegressionConfig: stride must be >= 1");
}

std::vector<bool> initial_mask(const TermLibrary& library,
                               const RegressionConfig& cfg) {
  std::vector<bool> mask(static_cast<std::size_t>(library.size()),
                         cfg.restrict_terms.empty());
  for (const std::string& name : cfg.restrict_terms) {
    const int idx = library.index_of(name);
    if (idx < 0)
      throw std::invalid_argument("RegressionConfig: unknown term '" + name +
                                  "'; use canonical names like u, u_x, u^2");
    mask[static_cast<std::size_t>(idx)] = true;
  }
  return mask;
}

void accumulate_gram(GramSystem& gram, const SnapshotDataset& data,
                     const TermLibrary& library, const RegressionConfig& cfg) {
  const DerivativeFields deriv = differentiate(data);
  const Eigen::Index n_terms = library.size();
  const Eigen::Index n_points = data.u.rows();
  const Eigen::Index n_snaps = data.u.cols();
  const double c = data.spec.speed;

  Eigen::VectorXd row(n_terms);
  long flat = 0;
  for (Eigen::Index m = 1; m + 1 < n_snaps; ++m) {
    for (Eigen::Index i = 0; i < n_points; ++i, ++flat) {
      if (flat % cfg.stride != 0) continue;
      for (Eigen::Index t = 0; t < n_terms; ++t)
        row[t] = term_value(deriv, library.terms[static_cast<std::size_t>(t)], i, m);
      const double target = deriv.time(i, m) + c * deriv.space[1](i, m);
      gram.ata.selfadjointView<Eigen::Lower>().rankUpdate(row, 1.0);
      gram.atb += target * row;
      gram.btb += target * target;
      ++gram.rows;
    }
  }
}

SparseModel regress_gram(const GramSystem& gram, const TermLibrary& library,
                         const RegressionConfig& cfg) {
  const Eigen::Index n_terms = library.size();
  if (gram.rows < 1)
    throw std::invalid_argument("sparse_regress: no samples to regress on");
  const Eigen::MatrixXd ata =
      Eigen::MatrixXd(gram.ata.selfadjointView<Eigen::Lower>());
  const double inv_rows = 1.0 / static_cast<double>(gram.rows);

  // Column scales: RMS of each term over the samples. Dead columns cannot be
  // estimated and stay out of the support.
  Eigen::VectorXd scale(n_terms);
  std::vector<bool> active = initial_mask(library, cfg);
  for (Eigen::Index t = 0; t < n_terms; ++t) {
    scale[t] = std::sqrt(std::max(0.0, ata(t, t) * inv_rows));
    if (scale[t] <= 0.0) active[static_cast<std::size_t>(t)] = false;
  }

  const auto active_indices = [&] {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index t = 0; t < n_terms; ++t)
      if (active[static_cast<std::size_t>(t)]) idx.push_back(t);
    return idx;
  };

  // Solve the scaled normal equations on the active set. ridge == 0 requests
  // the unregularized refit, which also checks conditioning.
  const auto solve_active = [&](const std::vector<Eigen::Index>& idx,
                                double ridge) {
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd g(k, k);
    Eigen::VectorXd rhs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      rhs[a] = gram.atb[idx[a]] * inv_rows / scale[idx[a]];
      for (Eigen::Index b = 0; b < k; ++b)
        g(a, b) = ata(idx[a], idx[b]) * inv_rows / (scale[idx[a]] * scale[idx[b]]);
      g(a, a) += ridge;
    }
    if (ridge == 0.0) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      if (lu.rank() < k)
        throw std::runtime_error(
            "sparse_regress: active library columns are linearly dependent on "
            "the sampled data; drop redundant terms or restrict the library");
      Eigen::VectorXd scaled = lu.solve(rhs);
      return scaled;
    }
    return Eigen::VectorXd(g.ldlt().solve(rhs));
  };

  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n_terms);
  const auto write_coefficients = [&](const std::vector<Eigen::Index>& idx,
                                      const Eigen::VectorXd& scaled) {
    coeff.setZero();
    for (std::size_t a = 0; a < idx.size(); ++a)
      coeff[idx[a]] = scaled[static_cast<Eigen::Index>(a)] / scale[idx[a]];
  };

  // Thresholded ridge sweeps until the support stabilizes.
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const auto idx = active_indices();
    if (idx.empty()) break;
    write_coefficients(idx, solve_active(idx, cfg.ridge));
    bool changed = false;
    for (Eigen::Index t : idx)
      if (std::abs(coeff[t]) < cfg.threshold) {
        active[static_cast<std::size_t>(t)] = false;
        changed = true;
      }
    if (!changed) break;
  }

  // Unregularized refit; re-threshold if the refit moves a coefficient below
  // the cut so the emitted model always honors it.
  for (int sweep = 0; sweep <= cfg.max_sweeps; ++sweep) {
    const auto idx = active_indices();
    if (idx.empty()) {
      coeff.setZero();
      break;
    }
    write_coefficients(idx, solve_active(idx, 0.0));
    bool changed = false;
    for (Eigen::Index t : idx)
      if (std::abs(coeff[t]) < cfg.threshold) {
        active[static_cast<std::size_t>(t)] = false;
        changed = true;
      }
    if (!changed) break;
  }

  double residual = gram.btb;
  for (Eigen::Index t = 0; t < n_terms; ++t) {
    if (coeff[t] == 0.0) continue;
    residual -= 2.0 * coeff[t] * gram.atb[t];
    for (Eigen::Index s = 0; s < n_terms; ++s)
      if (coeff[s] != 0.0) residual += coeff[t] * ata(t, s) * coeff[s];
  }
  SparseModel model;
  model.terms = library.terms;
  model.coefficients = coeff;
  model.threshold = cfg.threshold;
  model.residual_rms = std::sqrt(std::max(0.0, residual * inv_rows));
  return model;
}

}  // namespace

void SnapshotDataset::validate() const {
  spec.validate();
  if (u.rows() != spec.grid_points)
    throw std::invalid_argument("SnapshotDataset: row count does not match spec");
  if (u.cols() < 1)
    throw std::invalid_argument("SnapshotDataset: need at least one snapshot");
}

TermLibrary TermLibrary::full() {
  TermLibrary lib;
  for (int o = 0; o <= kMaxOrder; ++o) lib.terms.push_back({o, -1, term_name(o, -1)});
  for (int first = 0; first <= kMaxOrder; ++first)
    for (int second = first; second <= kMaxOrder; ++second)
      lib.terms.push_back({first, second, term_name(first, second)});
  return lib;
}

int TermLibrary::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i].name == name) return static_cast<int>(i);
  return -1;
}

DerivativeFields differentiate(const SnapshotDataset& data) {
  data.validate();
  const Eigen::Index n_points = data.u.rows();
  const Eigen::Index n_snaps = data.u.cols();
  if (n_snaps < 3)
    throw std::invalid_argument(
        "differentiate: need at least three snapshots for second-order time "
        "derivatives");

  DerivativeFields out;
  out.space.assign(kMaxOrder + 1, Eigen::MatrixXd(n_points, n_snaps));
  out.space[0] = data.u;
  out.time.resize(n_points, n_snaps);

  const double base = 2.0 * std::numbers::pi / data.spec.length;
  const std::complex<double> unit(0.0, 1.0);
  for (Eigen::Index m = 0; m < n_snaps; ++m) {
    const Eigen::VectorXcd spectrum =
        forward_dft(data.u.col(m).cast<std::complex<double>>());
    for (int order = 1; order <= kMaxOrder; ++order) {
      Eigen::VectorXcd scaled(n_points);
      for (Eigen::Index j = 0; j < n_points; ++j) {
        const int k = index_to_wavenumber(static_cast<int>(j),
                                          static_cast<int>(n_points));
        // The Nyquist mode has no sign-consistent odd derivative; zero it.
        if (order % 2 == 1 && k == -static_cast<int>(n_points) / 2) {
          scaled[j] = 0.0;
          continue;
        }
        // Synthesis kernel is e^{-ikx}, so d/dx brings down -i k.
        scaled[j] = std::pow(-unit * (base * k), order) * spectrum[j];
      }
      out.space[static_cast<std::size_t>(order)].col(m) =
          inverse_dft(scaled).real();
    }
  }

  const double dt = data.spec.dt;
  for (Eigen::Index m = 0; m < n_snaps; ++m) {
    if (m == 0)
      out.time.col(m) =
          (-3.0 * data.u.col(0) + 4.0 * data.u.col(1) - data.u.col(2)) /
          (2.0 * dt);
    else if (m + 1 == n_snaps)
      out.time.col(m) = (3.0 * data.u.col(m) - 4.0 * data.u.col(m - 1) +
                         data.u.col(m - 2)) /
                        (2.0 * dt);
    else
      out.time.col(m) = (data.u.col(m + 1) - data.u.col(m - 1)) / (2.0 * dt);
  }
  return out;
}

DesignMatrix build_design(const SnapshotDataset& data, const TermLibrary& library,
                          const RegressionConfig& cfg) {
  check_config(cfg);
  const DerivativeFields deriv = differentiate(data);
  const Eigen::Index n_points = data.u.rows();
  const Eigen::Index n_snaps = data.u.cols();
  const Eigen::Index interior = (n_snaps - 2) * n_points;
  const Eigen::Index kept = (interior + cfg.stride - 1) / cfg.stride;
  const double c = data.spec.speed;

  DesignMatrix design;
  design.a.resize(kept, library.size());
  design.b.resize(kept);
  Eigen::Index row = 0;
  long flat = 0;
  for (Eigen::Index m = 1; m + 1 < n_snaps; ++m)
    for (Eigen::Index i = 0; i < n_points; ++i, ++flat) {
      if (flat % cfg.stride != 0) continue;
      for (int t = 0; t < library.size(); ++t)
        design.a(row, t) =
            term_value(deriv, library.terms[static_cast<std::size_t>(t)], i, m);
      design.b[row] = deriv.time(i, m) + c * deriv.space[1](i, m);
      ++row;
    }
  return design;
}

std::vector<int> SparseModel::support() const {
  std::vector<int> idx;
  for (Eigen::Index t = 0; t < coefficients.size(); ++t)
    if (coefficients[t] != 0.0) idx.push_back(static_cast<int>(t));
  return idx;
}

SparseModel sparse_regress(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           const TermLibrary& library, const RegressionConfig& cfg) {
  check_config(cfg);
  if (a.rows() != b.size())
    throw std::invalid_argument("sparse_regress: row counts of a and b differ");
  if (a.cols() != library.size())
    throw std::invalid_argument("sparse_regress: column count does not match library");
  GramSystem gram;
  gram.ata = Eigen::MatrixXd::Zero(library.size(), library.size());
  gram.atb = Eigen::VectorXd::Zero(library.size());
  gram.ata.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose(), 1.0);
  gram.atb = a.transpose() * b;
  gram.btb = b.squaredNorm();
  gram.rows = a.rows();
  return regress_gram(gram, library, cfg);
}

SparseModel discover(const std::vector<SnapshotDataset>& datasets,
                     const RegressionConfig& cfg) {
  check_config(cfg);
  if (datasets.empty())
    throw std::invalid_argument("discover: need at least one dataset");
  const TermLibrary library = TermLibrary::full();
  GramSystem gram;
  gram.ata = Eigen::MatrixXd::Zero(library.size(), library.size());
  gram.atb = Eigen::VectorXd::Zero(library.size());
  for (const SnapshotDataset& data : datasets)
    accumulate_gram(gram, data, library, cfg);
  return regress_gram(gram, library, cfg);
}

}  // namespace qconv
