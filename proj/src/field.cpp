#include "spikelab/field.hpp"

#include <cmath>

namespace spikelab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double DirichletBasis::phi(int j, double x) const {
    return std::sqrt(2.0) * std::sin(j * kPi * x);
}

double DirichletBasis::eigenvalue(int j) const { return (j * kPi) * (j * kPi); }

SignalFunction DirichletBasis::mode(int j) const {
    SignalFunction s;
    s.eval = [j](double x) { return std::sqrt(2.0) * std::sin(j * kPi * x); };
    s.sup_norm = std::sqrt(2.0);
    s.lipschitz = std::sqrt(2.0) * j * kPi;
    s.name = "phi(" + std::to_string(j) + ")";
    return s;
}

double StepFunction::operator()(double t) const {
    if (t <= 0.0 || t > 1.0) return 0.0;
    int l = static_cast<int>(std::ceil(t * n));
    if (l < 1) l = 1;
    if (l > n) l = n;
    return values(l - 1);
}

double StepFunction::l2_norm_sq() const { return values.squaredNorm() / n; }

StepFunction embed_step(const Vector& v, int n) {
    if (v.size() != n) throw Error(Errc::dimension_mismatch, "embed_step: length(v) != n");
    StepFunction s;
    s.n = n;
    s.values = std::sqrt(double(n)) * v;
    return s;
}

Vector discretize_test_function(const std::function<double(double)>& g, int n) {
    if (n < 1) throw Error(Errc::config_error, "discretize_test_function needs n >= 1");
    Vector out(n);
    constexpr int kSub = 8;
    for (int j = 0; j < n; ++j) {
        const double a = double(j) / n;
        const double h = 1.0 / (double(n) * kSub);
        double sum = g(a) + g(a + kSub * h);
        for (int i = 1; i < kSub; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
        out(j) = sum * h / 3.0;
    }
    return out;
}

double pairing(const Vector& v, const Vector& center, const Vector& g_disc, double theta, int n) {
    if (v.size() != n || center.size() != n || g_disc.size() != n)
        throw Error(Errc::dimension_mismatch, "pairing: inconsistent lengths");
    return theta * std::sqrt(double(n)) * g_disc.dot(v - center);
}

double hneg_norm(const std::vector<double>& pairings, double d) {
    if (!(d > 0.0)) throw Error(Errc::config_error, "hneg_norm needs d > 0");
    double sum = 0.0;
    for (size_t j = 0; j < pairings.size(); ++j) {
        const double lambda = (double(j + 1) * kPi) * (double(j + 1) * kPi);
        sum += pairings[j] * pairings[j] * std::pow(lambda, -d);
    }
    return sum;
}

}  // namespace spikelab
