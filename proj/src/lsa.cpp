#include "cwemap/lsa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace cwemap {

SvdResult svd(const DenseMatrix& matrix) {
  if (matrix.rows != matrix.cols) {
    throw std::invalid_argument("svd: matrix must be square");
  }
  const std::size_t n = matrix.rows;
  Eigen::MatrixXd m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = matrix.at(r, c);
    }
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (n > 0 && asym > 1e-10) {
    throw std::invalid_argument("svd: matrix is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("svd: eigendecomposition failed to converge");
  }

  // Order spectral pairs by |eigenvalue| descending and fold signs into U
  // so that M = U diag(S) V^T with S = |eigenvalues| >= 0.
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  std::vector<Eigen::Index> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<Eigen::Index>(i);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(values(a));
    const double mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    return values(a) > values(b);
  });

  SvdResult result;
  result.order = n;
  result.u.resize(n * n);
  result.v.resize(n * n);
  result.singular_values.resize(n);
  for (std::size_t out = 0; out < n; ++out) {
    const Eigen::Index in = order[out];
    const double lambda = values(in);
    result.singular_values[out] = std::abs(lambda);
    const double sign = lambda < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double component = vectors(static_cast<Eigen::Index>(r), in);
      result.u[r * n + out] = sign * component;
      result.v[r * n + out] = component;
    }
  }
  return result;
}

ReducedSpectrum reduce(const std::vector<double>& singular_values, const ReductionPolicy& policy) {
  ReducedSpectrum reduced;
  reduced.values = singular_values;
  reduced.zeroed.assign(singular_values.size(), 0);
  for (std::size_t i = 0; i < reduced.values.size(); ++i) {
    if (reduced.values[i] <= policy.threshold) {
      reduced.values[i] = 0.0;
      reduced.zeroed[i] = 1;
      ++reduced.zeroed_count;
    }
  }
  return reduced;
}

LsaOutput lsa_pipeline(const DenseMatrix& doc_similarity, const ReductionPolicy& policy) {
  SvdResult decomposition = svd(doc_similarity);
  ReducedSpectrum spectrum = reduce(decomposition.singular_values, policy);

  const std::size_t n = decomposition.order;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> u(
      decomposition.u.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> v(
      decomposition.v.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXd s(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) s(static_cast<Eigen::Index>(i)) = spectrum.values[i];

  Eigen::MatrixXd reconstructed = u * s.asDiagonal() * v.transpose();

  LsaOutput output;
  output.reduced = DenseMatrix(n, n);
  output.reduced.row_labels = doc_similarity.row_labels;
  output.reduced.col_labels = doc_similarity.col_labels;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      output.reduced.at(r, c) =
          reconstructed(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  output.spectrum = std::move(decomposition.singular_values);
  output.zeroed = std::move(spectrum.zeroed);
  output.zeroed_fraction = spectrum.zeroed_fraction();
  return output;
}

}  // namespace cwemap
