#pragma once

#include "spikelab/ensemble.hpp"

namespace spikelab {

/// Top-k eigenpairs of A, ordered lambda_1 >= ... >= lambda_k, with the sign
/// convention e_i'v_i >= 0.
struct OutlierSet {
    Vector eigenvalues;   // k, descending
    Matrix eigenvectors;  // n x k, unit columns
    Matrix alignments;    // k x k, (j,i) = e_j' v_i
    bool sign_fixed = false;
};

/// Full symmetric eigendecomposition, top-k extracted. Fails hard if the
/// residual ||A v - lambda v|| exceeds 1e-8 (|lambda| + ||A||_F / sqrt(n)).
/// Ties |e_i'v_i| < 1e-12 are broken by making the first nonzero coordinate
/// positive.
OutlierSet top_eigenpairs(const Matrix& a, int k, const SpikeVectors& vecs);

/// K(j,l) = theta sqrt(a_j a_l) e_j'(I - W/mu)^{-1} e_l when ||W|| < mu,
/// else valid=false and K=0. The gate is certified by the sign of the LDLT
/// pivots of (mu I - W), not by computing ||W||.
struct ResolventK {
    double mu = 0.0;
    Matrix k;
    bool valid = false;
};

ResolventK resolvent_k_matrix(const Matrix& w, double mu, const SpikeSpec& spike,
                              const SpikeVectors& vecs);

/// max_l |v(l) - e(l)|
double delocalization_metric(const Vector& v, const Vector& e);

/// (j,i) entry = e_j' v_i
Matrix alignment_matrix(const SpikeVectors& vecs, const OutlierSet& outliers);

}  // namespace spikelab
