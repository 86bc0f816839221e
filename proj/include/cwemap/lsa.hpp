#pragma once

#include <vector>

#include "cwemap/similarity.hpp"

namespace cwemap {

/// Full decomposition M = U diag(S) V^T of a square symmetric matrix.
/// Singular values are non-negative and descending.
struct SvdResult {
  std::size_t order = 0;
  std::vector<double> u;  // row-major order x order
  std::vector<double> v;  // row-major order x order
  std::vector<double> singular_values;
};

struct ReductionPolicy {
  double threshold = 1.0;
};

/// Spectrum after thresholding: values at or below the threshold zeroed,
/// with the zeroed share kept for reporting.
struct ReducedSpectrum {
  std::vector<double> values;
  std::vector<char> zeroed;  // 1 where the original value was zeroed
  std::size_t zeroed_count = 0;

  double zeroed_fraction() const {
    return values.empty() ? 0.0
                          : static_cast<double>(zeroed_count) / static_cast<double>(values.size());
  }
};

/// Rank-reduced reconstruction of a similarity matrix plus the spectrum it
/// was derived from. The reconstruction is consumed as-is downstream; it
/// may contain values outside [0, 1].
struct LsaOutput {
  DenseMatrix reduced;
  std::vector<double> spectrum;  // original singular values, descending
  std::vector<char> zeroed;
  double zeroed_fraction = 0.0;
};

/// Decomposes a square symmetric matrix (checked to 1e-10). Since the
/// inputs here are Gram matrices of normalized rows, a symmetric
/// eigendecomposition realizes the contract.
SvdResult svd(const DenseMatrix& matrix);

ReducedSpectrum reduce(const std::vector<double>& singular_values, const ReductionPolicy& policy);

/// svd -> threshold -> reconstruct. Labels are carried over from the input.
LsaOutput lsa_pipeline(const DenseMatrix& doc_similarity, const ReductionPolicy& policy);

}  // namespace cwemap
