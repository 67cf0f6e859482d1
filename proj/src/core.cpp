// Copyright 2026 The QRC Memory Authors
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

#include "qrc/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrc/error.hpp"

namespace qrc {

ComplexMatrix pauli(Axis axis) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  const Complex i{0.0, 1.0};
  switch (axis) {
    case Axis::kX:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::kY:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case Axis::kZ:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case Axis::kPlus:
      m(0, 1) = 1.0;
      break;
    case Axis::kMinus:
      m(1, 0) = 1.0;
      break;
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index p = b.rows();
  const Eigen::Index q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * p, j * q, p, q) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix pauli_site(Axis axis, std::size_t site, std::size_t n_qubits) {
  require(site < n_qubits, ErrorKind::kInvalidArgument,
          "pauli_site: site " + std::to_string(site) + " out of range for " +
              std::to_string(n_qubits) + " qubits");
  const auto left = Eigen::Index{1} << site;
  const auto right = Eigen::Index{1} << (n_qubits - site - 1);
  return kron(kron(ComplexMatrix::Identity(left, left), pauli(axis)),
              ComplexMatrix::Identity(right, right));
}

double norm1(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

double max_abs(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

namespace {

constexpr double kScaledNormTarget = 0.5;
constexpr int kMaxTaylorDegree = 30;

int taylor_degree(double theta, double tol) {
  if (theta == 0.0) return 0;
  double term = theta;  // theta^(m+1) / (m+1)! for m = 0
  for (int m = 1; m <= kMaxTaylorDegree; ++m) {
    term *= theta / (m + 1);
    const double remainder = term / (1.0 - theta / (m + 2));
    if (remainder <= 1e-3 * tol) return m;
  }
  return kMaxTaylorDegree;
}

ComplexMatrix taylor_paterson_stockmeyer(const ComplexMatrix& b, int degree) {
  const Eigen::Index n = b.rows();
  if (degree == 0) return ComplexMatrix::Identity(n, n);
  const int block = std::max(1, static_cast<int>(std::lround(std::sqrt(degree))));
  std::vector<ComplexMatrix> powers;
  powers.reserve(block + 1);
  powers.push_back(ComplexMatrix::Identity(n, n));
  powers.push_back(b);
  for (int k = 2; k <= block; ++k) powers.push_back(powers.back() * b);

  std::vector<double> coeff(degree + 1);
  coeff[0] = 1.0;
  for (int k = 1; k <= degree; ++k) coeff[k] = coeff[k - 1] / k;

  const int n_blocks = degree / block;
  auto block_sum = [&](int j) {
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < block; ++i) {
      const int k = j * block + i;
      if (k > degree) break;
      acc += coeff[k] * powers[i];
    }
    return acc;
  };

  ComplexMatrix result = block_sum(n_blocks);
  ComplexMatrix tmp(n, n);
  for (int j = n_blocks - 1; j >= 0; --j) {
    tmp.noalias() = result * powers[block];
    result = tmp + block_sum(j);
  }
  return result;
}

}  // namespace

ComplexMatrix matrix_exp(const ComplexMatrix& a, double tol) {
  require(a.rows() == a.cols(), ErrorKind::kDimensionMismatch,
          "matrix_exp: matrix is " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + ", expected square");
  const double nrm = norm1(a);
  require(std::isfinite(nrm), ErrorKind::kNonFinite,
          "matrix_exp: non-finite input");
  int squarings = 0;
  if (nrm > kScaledNormTarget) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / kScaledNormTarget)));
  }
  const ComplexMatrix scaled = a * std::ldexp(1.0, -squarings);
  ComplexMatrix result =
      taylor_paterson_stockmeyer(scaled, taylor_degree(norm1(scaled), tol));
  ComplexMatrix tmp(a.rows(), a.cols());
  for (int k = 0; k < squarings; ++k) {
    tmp.noalias() = result * result;
    result.swap(tmp);
  }
  return result;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double hermitian_tol,
                             double trace_tol, double psd_tol)
    : m_(std::move(m)) {
  require(m_.rows() == m_.cols() && m_.rows() > 0,
          ErrorKind::kDimensionMismatch, "density matrix must be square");
  require(m_.allFinite(), ErrorKind::kNonFinite,
          "density matrix has non-finite entries");
  const double herm = max_abs(m_ - m_.adjoint());
  require(herm <= hermitian_tol, ErrorKind::kInvalidArgument,
          "density matrix not Hermitian (deviation " + std::to_string(herm) +
              ")");
  const double tr_dev = std::abs(m_.trace() - Complex{1.0, 0.0});
  require(tr_dev <= trace_tol, ErrorKind::kInvalidArgument,
          "density matrix trace deviates from 1 by " + std::to_string(tr_dev));
  const double min_ev = min_eigenvalue();
  require(min_ev >= -psd_tol, ErrorKind::kInvalidArgument,
          "density matrix has negative eigenvalue " + std::to_string(min_ev));
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
  DensityMatrix out;
  out.m_ = std::move(m);
  return out;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return unchecked(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const ComplexVector unit = psi.normalized();
  return unchecked(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
  require(index < dim, ErrorKind::kInvalidArgument,
          "basis_state: index out of range");
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return unchecked(std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix herm = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ComplexMatrix hermitize_normalize(const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  require(std::isfinite(tr) && tr > 0.0, ErrorKind::kNonFinite,
          "state lost its trace (trace = " + std::to_string(tr) + ")");
  h /= tr;
  return h;
}

ComplexVector random_pure_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector psi(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi(i) = Complex{re, im};
  }
  return psi.normalized();
}

DensityMatrix random_density(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex{re, im};
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  return DensityMatrix::unchecked(hermitize_normalize(rho));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  require(!keep.empty(), ErrorKind::kInvalidArgument,
          "partial_trace: keep set is empty");
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  require(rho.rows() == rho.cols() &&
              static_cast<std::size_t>(rho.rows()) == total,
          ErrorKind::kDimensionMismatch,
          "partial_trace: subsystem dims multiply to " + std::to_string(total) +
              " but state has dimension " + std::to_string(rho.rows()));
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    require(k < dims.size(), ErrorKind::kInvalidArgument,
            "partial_trace: subsystem index out of range");
    kept[k] = true;
  }

  // Split every full index into its kept and traced parts.
  std::size_t kept_dim = 1;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (kept[s]) kept_dim *= dims[s];
  }
  std::vector<std::size_t> kept_index(total);
  std::vector<std::size_t> traced_index(total);
  for (std::size_t full = 0; full < total; ++full) {
    std::size_t rem = full;
    std::size_t k_idx = 0;
    std::size_t k_stride = 1;
    std::size_t t_idx = 0;
    std::size_t t_stride = 1;
    for (std::size_t s = dims.size(); s-- > 0;) {
      const std::size_t digit = rem % dims[s];
      rem /= dims[s];
      if (kept[s]) {
        k_idx += digit * k_stride;
        k_stride *= dims[s];
      } else {
        t_idx += digit * t_stride;
        t_stride *= dims[s];
      }
    }
    kept_index[full] = k_idx;
    traced_index[full] = t_idx;
  }

  const auto kd = static_cast<Eigen::Index>(kept_dim);
  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t r = 0; r < total; ++r) {
      if (traced_index[r] != traced_index[c]) continue;
      out(static_cast<Eigen::Index>(kept_index[r]),
          static_cast<Eigen::Index>(kept_index[c])) +=
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  return DensityMatrix::unchecked(partial_trace(rho.matrix(), dims, keep));
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix devectorize(const ComplexVector& v) {
  const auto dim = static_cast<Eigen::Index>(
      std::llround(std::sqrt(static_cast<double>(v.size()))));
  require(dim * dim == v.size(), ErrorKind::kDimensionMismatch,
          "devectorize: length " + std::to_string(v.size()) +
              " is not a perfect square");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

}  // namespace qrc
