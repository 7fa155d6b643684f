#pragma once

#include <utility>
#include <vector>

#include "spikelab/ensemble.hpp"
#include "spikelab/quadrature.hpp"

namespace spikelab {

/// Limit Cov(G_i, G_j) of the outlier eigenvalue fluctuations:
/// 2 * int int h_i(x) h_i(y) h_j(x) h_j(y) f(x,y) dx dy. Indices 1-based.
double cov_eigenvalues(int i, int j, const VarianceProfile& f,
                       const std::vector<SignalFunction>& h, const QuadratureGrid& grid);

/// Alignment CLT variance: (1/2) * int^3 h_i(x)^2 f(x,y) f(y,z) h_i(z)^2.
double var_alignment(int i, const VarianceProfile& f, const std::vector<SignalFunction>& h,
                     const QuadratureGrid& grid);

/// Both printed values for the orthogonal-direction variance tau_ij^2, which
/// disagree between the theorem statement and the end of its proof:
///   first  = I / ((a_i - a_j)^2 a_j)            (theorem statement)
///   second = I (a_i - a_j)^2 / (a_i^4 a_j)      (proof's final display)
/// with I = int int [h_j(x) h_i(y) + h_i(x) h_j(y)]^2 f(x,y) dx dy.
/// The Monte Carlo report adjudicates between them.
std::pair<double, double> var_orthogonal(int i, int j, const std::vector<double>& alphas,
                                         const VarianceProfile& f,
                                         const std::vector<SignalFunction>& h,
                                         const QuadratureGrid& grid);

/// Raw integral I above, exposed for diagnostics.
double orthogonal_integral(int i, int j, const VarianceProfile& f,
                           const std::vector<SignalFunction>& h, const QuadratureGrid& grid);

/// Martingale CLT variance: 2 * int^3 h_i(x)^2 f(x,y) f(y,z) h_i(z)^2.
/// Exactly 4 * var_alignment at the integrand level.
double var_martingale(int i, const VarianceProfile& f, const std::vector<SignalFunction>& h,
                      const QuadratureGrid& grid);

/// Deterministic k x k matrix whose i-th eigenvalue approximates E(lambda_i):
/// B(j,l) = sqrt(a_j a_l) theta e_j'e_l + sqrt(a_j a_l) E(e_j'W^2 e_l)/(theta a_i^2).
/// B depends on the target index through the a_i^2 denominator, so one B per
/// outlier.
struct BMatrixResult {
    Matrix b;
    double lambda = 0.0;     // i-th largest eigenvalue of B
    bool theta_warning = false;  // theta <= n^{2/3}
};
BMatrixResult b_matrix(int i_target, const SpikeSpec& spike, const SpikeVectors& vecs,
                       const VarianceProfile& profile, int n);

/// Covariance functional C_k^{(i)}(g_p, g_q) of the eigenvector fluctuation
/// field, every term evaluated by 1D/2D quadrature. For k = 1 the spike sums
/// are empty and the expression reduces (at alpha = 1, f == 1, h == 1) to
/// int g_p g_q - (int g_p)(int g_q).
double field_covariance(const std::function<double(double)>& gp,
                        const std::function<double(double)>& gq, int i,
                        const std::vector<double>& alphas, const VarianceProfile& f,
                        const std::vector<SignalFunction>& h, const QuadratureGrid& grid);

/// Quadrature values of every limiting variance/covariance for a spec, plus
/// refinement deltas (relative change when the grid is doubled).
struct TheoryPredictions {
    Matrix cov_eigen;          // k x k
    Vector var_align;          // k
    Matrix tau_sq_theorem;     // k x k, zero diagonal
    Matrix tau_sq_proof;       // k x k, zero diagonal
    Vector sigma2_martingale;  // k
    Vector b_eigenvalue;       // k, lambda_i(B^{(i)})
    double max_refinement_delta = 0.0;
    bool refinement_ok = true;  // all deltas < 1e-4 relative
};

TheoryPredictions compute_predictions(const EnsembleSpec& spec, const QuadratureGrid& grid);

/// Grid with the midpoint fallback applied when the profile or a signal is
/// not smooth.
QuadratureGrid effective_grid(const EnsembleSpec& spec, const QuadratureGrid& grid);

}  // namespace spikelab
