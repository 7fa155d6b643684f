#pragma once

#include "spikelab/martingale.hpp"

namespace spikelab::ref {

/// u' W^n v by explicitly forming W^n. Oracle for quadratic_form.
double quadratic_form_densepow(const Vector& u, const Matrix& w, int n_power, const Vector& v);

/// Literal nested-loop evaluation of the three decomposition sums. O(N^3);
/// keep N small in tests, moderate in benchmarks.
MartingaleDecomposition decompose_bruteforce(const Matrix& w, const SignalFunction& h);

/// Literal evaluation of the conditional-variance formula, including the
/// p != p' cross sum written out term by term. O(N^4); test oracle only.
double conditional_variance_literal(const Matrix& w, const SignalFunction& h,
                                    const VarianceProfile& profile);

/// Per-(r,q) squared-sum evaluation, O(N^3). Serial reference for the
/// optimized kernel at benchmark sizes.
double conditional_variance_serial(const Matrix& w, const SignalFunction& h,
                                   const VarianceProfile& profile);

}  // namespace spikelab::ref
