#pragma once

#include <functional>
#include <vector>

#include "spikelab/common.hpp"
#include "spikelab/model.hpp"

namespace spikelab {

/// Eigenfunctions of the Dirichlet Laplacian -d^2/dx^2 on [0,1]:
/// phi_j(x) = sqrt(2) sin(j pi x), lambda_j = (j pi)^2, j = 1..max_mode.
struct DirichletBasis {
    int max_mode = 32;

    double phi(int j, double x) const;
    double eigenvalue(int j) const;
    SignalFunction mode(int j) const;
};

/// Step-function embedding of an eigenvector: sqrt(N) v(l) on ((l-1)/N, l/N],
/// 0 at t = 0. Its squared L2 norm equals ||v||_2^2 exactly.
struct StepFunction {
    Vector values;  // sqrt(N) v(l)
    int n = 0;

    double operator()(double t) const;
    double l2_norm_sq() const;
};

StepFunction embed_step(const Vector& v, int n);

/// Per-cell integrals g_bar(j) = int_{(j-1)/N}^{j/N} g(t) dt, each cell by
/// composite Simpson with 8 subintervals.
Vector discretize_test_function(const std::function<double(double)>& g, int n);

/// theta sqrt(n) g_disc' (v - center); with center = E-proxy this is the
/// fluctuation-field pairing <V_N, g>.
double pairing(const Vector& v, const Vector& center, const Vector& g_disc, double theta, int n);

/// sum_j pairings(j)^2 lambda_j^{-d} with lambda_j = (j pi)^2.
double hneg_norm(const std::vector<double>& pairings, double d);

}  // namespace spikelab
