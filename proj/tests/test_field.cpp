#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spikelab/field.hpp"
#include "spikelab/quadrature.hpp"

using namespace spikelab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Dirichlet basis: boundary values and discrete orthonormality") {
    DirichletBasis basis{32};
    for (int j = 1; j <= 32; ++j) {
        CHECK(std::abs(basis.phi(j, 0.0)) <= 1e-13);
        CHECK(std::abs(basis.phi(j, 1.0)) <= 1e-12);
        CHECK(basis.eigenvalue(j) == doctest::Approx(j * j * kPi * kPi));
    }
    const int g = 1000;
    for (int i = 1; i <= 8; ++i) {
        for (int j = i; j <= 8; ++j) {
            double ip = 0.0;
            for (int l = 1; l <= g; ++l)
                ip += basis.phi(i, double(l) / g) * basis.phi(j, double(l) / g);
            ip /= g;
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-3);
        }
    }
}

TEST_CASE("step embedding: constant vector, norms, coordinate vector") {
    const int n = 4;
    Vector e = Vector::Ones(n) * 0.5;  // h == 1 discretized
    const auto step = embed_step(e, n);
    CHECK(step(0.1) == doctest::Approx(1.0));
    CHECK(step(1.0) == doctest::Approx(1.0));
    CHECK(step(0.0) == 0.0);

    Vector unit = Vector::Zero(n);
    unit(0) = 1.0;
    const auto coord = embed_step(unit, n);
    CHECK(coord(0.2) == doctest::Approx(2.0));  // sqrt(4) * 1
    CHECK(coord(0.3) == 0.0);
    CHECK(coord.l2_norm_sq() == doctest::Approx(1.0).epsilon(1e-15));

    Vector v(4);
    v << 0.1, -0.3, 0.7, 0.2;
    CHECK(embed_step(v, 4).l2_norm_sq() == doctest::Approx(v.squaredNorm()).epsilon(1e-15));
}

TEST_CASE("discretize: constants, linear cells, and the phi_1 mass") {
    const Vector c = discretize_test_function([](double) { return 1.0; }, 4);
    for (int j = 0; j < 4; ++j) CHECK(c(j) == doctest::Approx(0.25).epsilon(1e-15));

    const Vector lin = discretize_test_function([](double x) { return x; }, 2);
    CHECK(lin(0) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(lin(1) == doctest::Approx(0.375).epsilon(1e-14));

    const Vector p1 = discretize_test_function(
        [](double x) { return std::sqrt(2.0) * std::sin(kPi * x); }, 1000);
    CHECK(std::abs(p1.sum() - 2.0 * std::sqrt(2.0) / kPi) <= 1e-6);
}

TEST_CASE("pairing: zero at the center, scalar case") {
    Vector v(1), c(1), g(1);
    v << 3.0;
    c << 1.0;
    g << 0.5;
    CHECK(pairing(v, v, g, 2.0, 1) == 0.0);
    CHECK(pairing(v, c, g, 1.0, 1) == doctest::Approx(1.0));  // (3-1)*0.5*sqrt(1)
    CHECK_THROWS_AS(pairing(v, c, Vector::Ones(2), 1.0, 1), Error);
}

TEST_CASE("H^{-d} norm: first mode, zeros, monotonicity in d") {
    std::vector<double> p(8, 0.0);
    p[0] = 1.0;
    CHECK(hneg_norm(p, 1.0) == doctest::Approx(1.0 / (kPi * kPi)));
    CHECK(hneg_norm(std::vector<double>(8, 0.0), 0.75) == 0.0);

    std::vector<double> q = {0.3, -1.2, 0.8, 2.0, -0.5};
    CHECK(hneg_norm(q, 1.5) <= hneg_norm(q, 0.75));
    CHECK_THROWS_AS(hneg_norm(q, 0.0), Error);
}

TEST_CASE("Parseval sanity for a smooth function vanishing at the endpoints") {
    DirichletBasis basis{64};
    QuadratureGrid grid;
    auto g = [](double x) { return x * (1.0 - x); };
    double sum = 0.0;
    for (int j = 1; j <= 64; ++j) {
        const double coeff =
            integrate_1d([&](double x) { return g(x) * basis.phi(j, x); }, grid);
        sum += coeff * coeff;
    }
    const double norm2 = integrate_1d([&](double x) { return g(x) * g(x); }, grid);
    CHECK(std::abs(sum - norm2) <= 1e-3);
}

TEST_CASE("pairing is linear in the eigenvector for fixed centering") {
    const int n = 32;
    const Vector g = discretize_test_function([](double x) { return std::sin(kPi * x); }, n);
    const Vector center = Vector::Constant(n, 1.0 / std::sqrt(double(n)));
    Vector v1 = Vector::Random(n), v2 = Vector::Random(n);
    const double a = 0.7, b = -1.3;
    const Vector combo = a * v1 + b * v2 + (1.0 - a - b) * center;
    const double direct = pairing(combo, center, g, 3.0, n);
    const double split = a * pairing(v1, center, g, 3.0, n) +
                         b * pairing(v2, center, g, 3.0, n);
    CHECK(direct == doctest::Approx(split).epsilon(1e-10));
}
