#pragma once

#include <vector>

#include "spikelab/ensemble.hpp"

namespace spikelab {

/// Exact split of T_N = e'W^2 e into the martingale sum M_N and the lower
/// order sums A_N, B_N:
///   T_N = (2/N) M_N + (2/N) A_N + (1/N) B_N
/// with
///   M_N = sum_r sum_{p<r, q != p,r} W_pq W_qr h(p/N) h(r/N)
///   A_N = sum_p sum_{r != p}        W_pp W_pr h(p/N) h(r/N)
///   B_N = sum_{p,q}                 W_pq^2   h(p/N)^2
/// m_n is the fixed-order sum of the per-row martingale increments, so the
/// telescoping identity sum(increments) == m_n holds bitwise.
struct MartingaleDecomposition {
    double t_n = 0.0;
    double m_n = 0.0;
    double a_n = 0.0;
    double b_n = 0.0;
    std::vector<double> increments;  // M_{N,r} - M_{N,r-1}, r = 1..N
    double v_n = 0.0;                // set by the profile-aware overload

    /// |t_n - (2/N)m - (2/N)a - (1/N)b| / (1 + |t_n|)
    double identity_residual() const;
};

MartingaleDecomposition decompose(const Matrix& w, const SignalFunction& h);
MartingaleDecomposition decompose(const Matrix& w, const SignalFunction& h,
                                  const VarianceProfile& profile);

/// Normalized conditional variance of the martingale increments,
///   V_N = N^{-3} sum_r E[(M_{N,r} - M_{N,r-1})^2 | F_{r-1}],
/// evaluated with the explicit three-block formula: realized entries for the
/// q < r blocks and profile values f(p/N,q/N) f(q/N,r/N) for the q > r block.
/// Converges to (1/2) int^3 h^2(x) f(x,y) f(y,z) h^2(z).
double conditional_variance(const Matrix& w, const SignalFunction& h,
                            const VarianceProfile& profile);

/// (e_i' W^2 e_i - expected) / sqrt(N); expected must be the exact
/// expected_w2_form value.
double clt_statistic(const Matrix& w, const SpikeVectors& vecs, int i, double expected);

}  // namespace spikelab
