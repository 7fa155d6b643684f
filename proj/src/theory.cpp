#include "spikelab/theory.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace spikelab {

namespace {

void check_index(int i, int k) {
    if (i < 1 || i > k) throw Error(Errc::config_error, "signal index out of range");
}

// int^3 h_i(x)^2 f(x,y) f(y,z) h_i(z)^2 dx dy dz; shared by the alignment and
// martingale variances so their 1:4 ratio holds exactly in floating point.
double triple_integral(int i, const VarianceProfile& f, const std::vector<SignalFunction>& h,
                       const QuadratureGrid& grid) {
    const auto& hi = h[i - 1];
    return integrate_3d(
        [&](double x, double y, double z) {
            const double hx = hi(x), hz = hi(z);
            return hx * hx * f(x, y) * f(y, z) * hz * hz;
        },
        grid);
}

}  // namespace

double cov_eigenvalues(int i, int j, const VarianceProfile& f,
                       const std::vector<SignalFunction>& h, const QuadratureGrid& grid) {
    check_index(i, static_cast<int>(h.size()));
    check_index(j, static_cast<int>(h.size()));
    const auto& hi = h[i - 1];
    const auto& hj = h[j - 1];
    return 2.0 * integrate_2d(
                     [&](double x, double y) { return hi(x) * hi(y) * hj(x) * hj(y) * f(x, y); },
                     grid);
}

double var_alignment(int i, const VarianceProfile& f, const std::vector<SignalFunction>& h,
                     const QuadratureGrid& grid) {
    check_index(i, static_cast<int>(h.size()));
    return 0.5 * triple_integral(i, f, h, grid);
}

double var_martingale(int i, const VarianceProfile& f, const std::vector<SignalFunction>& h,
                      const QuadratureGrid& grid) {
    check_index(i, static_cast<int>(h.size()));
    return 2.0 * triple_integral(i, f, h, grid);
}

double orthogonal_integral(int i, int j, const VarianceProfile& f,
                           const std::vector<SignalFunction>& h, const QuadratureGrid& grid) {
    const auto& hi = h[i - 1];
    const auto& hj = h[j - 1];
    return integrate_2d(
        [&](double x, double y) {
            const double t = hj(x) * hi(y) + hi(x) * hj(y);
            return t * t * f(x, y);
        },
        grid);
}

std::pair<double, double> var_orthogonal(int i, int j, const std::vector<double>& alphas,
                                         const VarianceProfile& f,
                                         const std::vector<SignalFunction>& h,
                                         const QuadratureGrid& grid) {
    const int k = static_cast<int>(h.size());
    check_index(i, k);
    check_index(j, k);
    if (i == j) throw Error(Errc::identical_indices, "var_orthogonal needs i != j");
    const double ai = alphas[i - 1];
    const double aj = alphas[j - 1];
    const double gap = ai - aj;
    const double integral = orthogonal_integral(i, j, f, h, grid);
    const double theorem_value = integral / (gap * gap * aj);
    const double proof_value = integral * gap * gap / (ai * ai * ai * ai * aj);
    return {theorem_value, proof_value};
}

BMatrixResult b_matrix(int i_target, const SpikeSpec& spike, const SpikeVectors& vecs,
                       const VarianceProfile& profile, int n) {
    const int k = spike.rank();
    check_index(i_target, k);
    BMatrixResult out;
    out.theta_warning = spike.theta <= std::pow(double(n), 2.0 / 3.0);
    out.b.resize(k, k);
    const double ai = spike.alphas[i_target - 1];
    for (int j = 0; j < k; ++j) {
        for (int l = j; l < k; ++l) {
            const double root = std::sqrt(spike.alphas[j] * spike.alphas[l]);
            const double gram = vecs.col(j).dot(vecs.col(l));
            const double w2 = expected_w2_form(vecs.col(j), vecs.col(l), profile, n);
            const double v = root * spike.theta * gram + root * w2 / (spike.theta * ai * ai);
            out.b(j, l) = v;
            out.b(l, j) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(out.b);
    if (es.info() != Eigen::Success)
        throw Error(Errc::eigen_solver_failure, "b_matrix eigensolve failed");
    out.lambda = es.eigenvalues()(k - i_target);
    return out;
}

double field_covariance(const std::function<double(double)>& gp,
                        const std::function<double(double)>& gq, int i,
                        const std::vector<double>& alphas, const VarianceProfile& f,
                        const std::vector<SignalFunction>& h, const QuadratureGrid& grid) {
    const int k = static_cast<int>(h.size());
    check_index(i, k);
    const auto& hi = h[i - 1];
    const double ai = alphas[i - 1];
    const double ai2 = ai * ai;

    auto int1 = [&](auto&& fn) { return integrate_1d(fn, grid); };
    auto int2 = [&](auto&& fn) { return integrate_2d(fn, grid); };

    const double gp_hi = int1([&](double x) { return gp(x) * hi(x); });
    const double gq_hi = int1([&](double x) { return gq(x) * hi(x); });
    const double hi2_f_hi2 =
        int2([&](double x, double y) { return hi(x) * hi(x) * hi(y) * hi(y) * f(x, y); });

    // Terms in the order the covariance functional is printed.
    double total = 2.0 * ai2 * gp_hi * gq_hi * hi2_f_hi2;

    total += ai2 * int2([&](double x, double y) { return gp(x) * gq(x) * hi(y) * hi(y) * f(x, y); });
    total += ai2 * int2([&](double x, double y) { return gp(x) * hi(x) * gq(y) * hi(y) * f(x, y); });

    const double hi_gp_hi2 =
        int2([&](double x, double y) { return hi(x) * gp(x) * hi(y) * hi(y) * f(x, y); });
    const double hi_gq_hi2 =
        int2([&](double x, double y) { return hi(x) * gq(x) * hi(y) * hi(y) * f(x, y); });
    total -= 2.0 * ai2 * gq_hi * hi_gp_hi2;
    total -= 2.0 * ai2 * gp_hi * hi_gq_hi2;

    for (int l = 1; l <= k; ++l) {
        if (l == i) continue;
        const auto& hl = h[l - 1];
        const double al = alphas[l - 1];
        const double coef = ai2 * std::sqrt(al) / (ai - al);
        const double gp_hl = int1([&](double x) { return gp(x) * hl(x); });
        const double gq_hl = int1([&](double x) { return gq(x) * hl(x); });
        const double gp_hl_hi2 =
            int2([&](double x, double y) { return gp(x) * hl(x) * hi(y) * hi(y) * f(x, y); });
        const double gq_hl_hi2 =
            int2([&](double x, double y) { return gq(x) * hl(x) * hi(y) * hi(y) * f(x, y); });
        const double gp_hi_hihl =
            int2([&](double x, double y) { return gp(x) * hi(x) * hi(y) * hl(y) * f(x, y); });
        const double gq_hi_hihl =
            int2([&](double x, double y) { return gq(x) * hi(x) * hi(y) * hl(y) * f(x, y); });
        const double hl_hi_hi2 =
            int2([&](double x, double y) { return hl(x) * hi(x) * hi(y) * hi(y) * f(x, y); });

        total += coef * gq_hl * (gp_hl_hi2 + gp_hi_hihl);
        total -= 2.0 * coef * gq_hl * gp_hi * hl_hi_hi2;
        total += coef * gp_hl * (gq_hl_hi2 + gq_hi_hihl);
        total -= 2.0 * coef * gp_hl * gq_hi * hl_hi_hi2;
    }

    for (int l1 = 1; l1 <= k; ++l1) {
        if (l1 == i) continue;
        for (int l2 = 1; l2 <= k; ++l2) {
            if (l2 == i) continue;
            const auto& h1 = h[l1 - 1];
            const auto& h2 = h[l2 - 1];
            const double a1 = alphas[l1 - 1];
            const double a2 = alphas[l2 - 1];
            const double coef =
                ai2 * std::sqrt(a1) * std::sqrt(a2) / ((ai - a1) * (ai - a2));
            const double gp_h1 = int1([&](double x) { return gp(x) * h1(x); });
            const double gq_h2 = int1([&](double x) { return gq(x) * h2(x); });
            const double h1h2_hi2 =
                int2([&](double x, double y) { return h1(x) * h2(x) * hi(y) * hi(y) * f(x, y); });
            const double h1hi_hih2 =
                int2([&](double x, double y) { return h1(x) * hi(x) * hi(y) * h2(y) * f(x, y); });
            total += coef * gp_h1 * gq_h2 * (h1h2_hi2 + h1hi_hih2);
        }
    }

    return total;
}

QuadratureGrid effective_grid(const EnsembleSpec& spec, const QuadratureGrid& grid) {
    QuadratureGrid g = grid;
    bool smooth = spec.profile.smooth;
    for (const auto& s : spec.spike.signals)
        if (!s.lipschitz) smooth = false;
    if (!smooth) g.rule = QuadRule::midpoint;
    return g;
}

TheoryPredictions compute_predictions(const EnsembleSpec& spec, const QuadratureGrid& grid) {
    const int k = spec.spike.rank();
    const auto& h = spec.spike.signals;
    const auto& f = spec.profile;
    const auto& alphas = spec.spike.alphas;
    const QuadratureGrid g = effective_grid(spec, grid);
    const QuadratureGrid g2 = g.refined();
    const SpikeVectors vecs = build_spike_vectors(spec.spike, spec.n);

    TheoryPredictions p;
    p.cov_eigen.setZero(k, k);
    p.var_align.setZero(k);
    p.tau_sq_theorem.setZero(k, k);
    p.tau_sq_proof.setZero(k, k);
    p.sigma2_martingale.setZero(k);
    p.b_eigenvalue.setZero(k);

    double max_delta = 0.0;
    // Predictors that vanish identically (factorized cross terms) sit at
    // roundoff; the absolute floor keeps their deltas from reading as large
    // relative errors.
    auto track = [&max_delta](double coarse, double fine) {
        const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-8});
        max_delta = std::max(max_delta, std::abs(fine - coarse) / scale);
        return fine;
    };

    for (int i = 1; i <= k; ++i) {
        for (int j = i; j <= k; ++j) {
            const double v = track(cov_eigenvalues(i, j, f, h, g), cov_eigenvalues(i, j, f, h, g2));
            p.cov_eigen(i - 1, j - 1) = v;
            p.cov_eigen(j - 1, i - 1) = v;
            if (i != j) {
                auto [t1, p1] = var_orthogonal(i, j, alphas, f, h, g);
                auto [t2, p2] = var_orthogonal(i, j, alphas, f, h, g2);
                p.tau_sq_theorem(i - 1, j - 1) = track(t1, t2);
                p.tau_sq_proof(i - 1, j - 1) = track(p1, p2);
                auto [t1r, p1r] = var_orthogonal(j, i, alphas, f, h, g);
                auto [t2r, p2r] = var_orthogonal(j, i, alphas, f, h, g2);
                p.tau_sq_theorem(j - 1, i - 1) = track(t1r, t2r);
                p.tau_sq_proof(j - 1, i - 1) = track(p1r, p2r);
            }
        }
        p.var_align(i - 1) = track(var_alignment(i, f, h, g), var_alignment(i, f, h, g2));
        p.sigma2_martingale(i - 1) =
            track(var_martingale(i, f, h, g), var_martingale(i, f, h, g2));
        p.b_eigenvalue(i - 1) = b_matrix(i, spec.spike, vecs, f, spec.n).lambda;
    }

    p.max_refinement_delta = max_delta;
    p.refinement_ok = max_delta < 1e-4;
    return p;
}

}  // namespace spikelab
