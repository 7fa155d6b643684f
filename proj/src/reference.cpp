#include "spikelab/reference.hpp"

#include <cmath>

namespace spikelab::ref {

namespace {

Vector signal_grid(const SignalFunction& h, int n) {
    Vector v(n);
    for (int l = 0; l < n; ++l) v(l) = h(double(l + 1) / n);
    return v;
}

}  // namespace

double quadratic_form_densepow(const Vector& u, const Matrix& w, int n_power, const Vector& v) {
    Matrix p = Matrix::Identity(w.rows(), w.cols());
    for (int i = 0; i < n_power; ++i) p = p * w;
    return u.dot(p * v);
}

MartingaleDecomposition decompose_bruteforce(const Matrix& w, const SignalFunction& h) {
    const int n = static_cast<int>(w.rows());
    const Vector hv = signal_grid(h, n);

    MartingaleDecomposition d;
    d.increments.assign(n, 0.0);
    for (int r = 0; r < n; ++r) {
        double inc = 0.0;
        for (int p = 0; p < r; ++p)
            for (int q = 0; q < n; ++q) {
                if (q == p || q == r) continue;
                inc += w(p, q) * w(q, r) * hv(p) * hv(r);
            }
        d.increments[r] = inc;
        d.m_n += inc;
    }
    for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r) {
            if (r == p) continue;
            d.a_n += w(p, p) * w(p, r) * hv(p) * hv(r);
        }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) d.b_n += w(p, q) * w(p, q) * hv(p) * hv(p);

    double t = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r) t += hv(p) * w(p, q) * w(q, r) * hv(r) / n;
    d.t_n = t;
    return d;
}

double conditional_variance_literal(const Matrix& w, const SignalFunction& h,
                                    const VarianceProfile& profile) {
    const int n = static_cast<int>(w.rows());
    const Vector hv = signal_grid(h, n);
    auto f = [&](int a, int b) { return profile(double(a + 1) / n, double(b + 1) / n); };

    double total = 0.0;
    for (int r = 0; r < n; ++r) {
        double block = 0.0;
        // squared terms, p < r, q < r, p != q
        for (int q = 0; q < r; ++q)
            for (int p = 0; p < r; ++p) {
                if (p == q) continue;
                block += w(p, q) * w(p, q) * hv(p) * hv(p) * f(q, r);
            }
        // cross terms, p != p', both < r and != q
        for (int q = 0; q < r; ++q)
            for (int p = 0; p < r; ++p)
                for (int pp = 0; pp < r; ++pp) {
                    if (p == q || pp == q || p == pp) continue;
                    block += w(p, q) * w(pp, q) * hv(p) * hv(pp) * f(q, r);
                }
        // deterministic block, q > r
        for (int p = 0; p < r; ++p)
            for (int q = r + 1; q < n; ++q) block += hv(p) * hv(p) * f(p, q) * f(q, r);
        total += hv(r) * hv(r) * block;
    }
    return total / (double(n) * double(n) * double(n));
}

double conditional_variance_serial(const Matrix& w, const SignalFunction& h,
                                   const VarianceProfile& profile) {
    const int n = static_cast<int>(w.rows());
    const Vector hv = signal_grid(h, n);
    auto f = [&](int a, int b) { return profile(double(a + 1) / n, double(b + 1) / n); };

    double total = 0.0;
    for (int r = 0; r < n; ++r) {
        double block = 0.0;
        for (int q = 0; q < r; ++q) {
            double c = 0.0;
            for (int p = 0; p < r; ++p)
                if (p != q) c += w(p, q) * hv(p);
            block += f(q, r) * c * c;
        }
        for (int q = r + 1; q < n; ++q) {
            double g = 0.0;
            for (int p = 0; p < r; ++p) g += hv(p) * hv(p) * f(p, q);
            block += f(q, r) * g;
        }
        total += hv(r) * hv(r) * block;
    }
    return total / (double(n) * double(n) * double(n));
}

}  // namespace spikelab::ref
