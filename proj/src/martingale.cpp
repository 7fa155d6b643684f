#include "spikelab/martingale.hpp"

#include <cmath>

namespace spikelab {

namespace {

Vector signal_grid(const SignalFunction& h, int n) {
    Vector v(n);
    for (int l = 0; l < n; ++l) v(l) = h(double(l + 1) / n);
    return v;
}

}  // namespace

double MartingaleDecomposition::identity_residual() const {
    const double n = static_cast<double>(increments.size());
    const double rhs = (2.0 / n) * m_n + (2.0 / n) * a_n + (1.0 / n) * b_n;
    return std::abs(t_n - rhs) / (1.0 + std::abs(t_n));
}

MartingaleDecomposition decompose(const Matrix& w, const SignalFunction& h) {
    const int n = static_cast<int>(w.rows());
    const Vector hv = signal_grid(h, n);

    MartingaleDecomposition d;
    d.increments.assign(n, 0.0);

    // Increment r needs s_q(r) = sum_{p<r} W_pq h_p for every q; maintain the
    // whole vector and update it after each row. Column scans of W keep the
    // inner loops contiguous.
    Vector s = Vector::Zero(n);
    for (int r = 0; r < n; ++r) {
        double inc = 0.0;
        for (int q = 0; q < n; ++q) {
            if (q == r) continue;
            double c = s(q);
            if (q < r) c -= w(q, q) * hv(q);  // drop the p = q term
            inc += w(q, r) * c;
        }
        d.increments[r] = inc * hv(r);
        for (int q = 0; q < n; ++q) s(q) += w(r, q) * hv(r);
    }
    for (int r = 0; r < n; ++r) d.m_n += d.increments[r];

    double a = 0.0, b = 0.0;
    for (int p = 0; p < n; ++p) {
        double row = 0.0, row_sq = 0.0;
        for (int r = 0; r < n; ++r) {
            if (r != p) row += w(r, p) * hv(r);
            row_sq += w(r, p) * w(r, p);
        }
        a += w(p, p) * hv(p) * row;
        b += hv(p) * hv(p) * row_sq;
    }
    d.a_n = a;
    d.b_n = b;

    Vector e = hv / std::sqrt(double(n));
    d.t_n = quadratic_form(e, w, 2, e);
    return d;
}

MartingaleDecomposition decompose(const Matrix& w, const SignalFunction& h,
                                  const VarianceProfile& profile) {
    MartingaleDecomposition d = decompose(w, h);
    d.v_n = conditional_variance(w, h, profile);
    return d;
}

double conditional_variance(const Matrix& w, const SignalFunction& h,
                            const VarianceProfile& profile) {
    const int n = static_cast<int>(w.rows());
    const Vector hv = signal_grid(h, n);

    // Swap the (r, q) sums so each q runs independently with two scalar
    // prefix states; per-q partials are reduced in index order, which keeps
    // the result identical for any thread count.
    std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int q = 0; q < n; ++q) {
        const double xq = double(q + 1) / n;
        double t = 0.0;  // s_q(r)  = sum_{p<r} W_pq h_p
        double g = 0.0;  // G_q(r)  = sum_{p<r} h_p^2 f(p/N, q/N)
        double acc = 0.0;
        for (int r = 0; r < n; ++r) {
            const double fqr = profile(xq, double(r + 1) / n);
            const double hr2 = hv(r) * hv(r);
            if (q < r) {
                const double c = t - w(q, q) * hv(q);
                acc += hr2 * fqr * c * c;
            } else if (q > r) {
                acc += hr2 * fqr * g;
            }
            t += w(r, q) * hv(r);
            g += hv(r) * hv(r) * fqr;
        }
        partial[q] = acc;
    }
    double total = 0.0;
    for (int q = 0; q < n; ++q) total += partial[q];
    return total / (double(n) * double(n) * double(n));
}

double clt_statistic(const Matrix& w, const SpikeVectors& vecs, int i, double expected) {
    if (i < 1 || i > vecs.rank())
        throw Error(Errc::config_error, "clt_statistic: spike index out of range");
    const Vector e = vecs.col(i - 1);
    return (quadratic_form(e, w, 2, e) - expected) / std::sqrt(double(w.rows()));
}

}  // namespace spikelab
