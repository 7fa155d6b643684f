#include "spikelab/spectral.hpp"

#include <cmath>

namespace spikelab {

OutlierSet top_eigenpairs(const Matrix& a, int k, const SpikeVectors& vecs) {
    const int n = static_cast<int>(a.rows());
    if (k < 1 || k > n) throw Error(Errc::config_error, "top_eigenpairs: k out of range");
    if (vecs.size() != n || vecs.rank() < k)
        throw Error(Errc::dimension_mismatch, "top_eigenpairs: spike vectors mismatch");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw Error(Errc::eigen_solver_failure, "SelfAdjointEigenSolver did not converge");

    OutlierSet out;
    out.eigenvalues.resize(k);
    out.eigenvectors.resize(n, k);
    const double fro_scaled = a.norm() / std::sqrt(double(n));
    for (int i = 0; i < k; ++i) {
        const double lambda = solver.eigenvalues()(n - 1 - i);
        Vector v = solver.eigenvectors().col(n - 1 - i);
        const double resid = (a * v - lambda * v).norm();
        if (resid > 1e-8 * (std::abs(lambda) + fro_scaled))
            throw Error(Errc::eigen_solver_failure,
                        "residual " + std::to_string(resid) + " for eigenpair " +
                            std::to_string(i + 1));
        const double align = vecs.col(i).dot(v);
        if (std::abs(align) < 1e-12) {
            for (int l = 0; l < n; ++l) {
                if (v(l) != 0.0) {
                    if (v(l) < 0.0) v = -v;
                    break;
                }
            }
        } else if (align < 0.0) {
            v = -v;
        }
        out.eigenvalues(i) = lambda;
        out.eigenvectors.col(i) = v;
    }
    out.alignments = vecs.cols.transpose() * out.eigenvectors;
    out.sign_fixed = true;
    return out;
}

ResolventK resolvent_k_matrix(const Matrix& w, double mu, const SpikeSpec& spike,
                              const SpikeVectors& vecs) {
    if (!(mu > 0.0)) throw Error(Errc::config_error, "resolvent_k_matrix needs mu > 0");
    const int n = static_cast<int>(w.rows());
    const int k = vecs.rank();
    if (vecs.size() != n || spike.rank() != k)
        throw Error(Errc::dimension_mismatch, "resolvent_k_matrix: inconsistent inputs");

    Matrix shifted = -w;
    shifted.diagonal().array() += mu;

    Eigen::LDLT<Matrix> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
        throw Error(Errc::solve_failure, "LDLT factorization failed");

    ResolventK out;
    out.mu = mu;
    if (!(ldlt.vectorD().array() > 0.0).all()) {
        // mu I - W is not positive definite, i.e. ||W|| >= mu.
        out.valid = false;
        out.k = Matrix::Zero(k, k);
        return out;
    }
    out.valid = true;

    // (mu I - W)^{-1} (mu E) = (I - W/mu)^{-1} E
    Matrix x = ldlt.solve(mu * vecs.cols);
    out.k.resize(k, k);
    for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l)
            out.k(j, l) = spike.theta * std::sqrt(spike.alphas[j] * spike.alphas[l]) *
                          vecs.col(j).dot(x.col(l));
    return out;
}

double delocalization_metric(const Vector& v, const Vector& e) {
    if (v.size() != e.size())
        throw Error(Errc::dimension_mismatch, "delocalization_metric: lengths differ");
    return (v - e).lpNorm<Eigen::Infinity>();
}

Matrix alignment_matrix(const SpikeVectors& vecs, const OutlierSet& outliers) {
    if (vecs.size() != outliers.eigenvectors.rows())
        throw Error(Errc::dimension_mismatch, "alignment_matrix: dimensions disagree");
    return vecs.cols.transpose() * outliers.eigenvectors;
}

}  // namespace spikelab
