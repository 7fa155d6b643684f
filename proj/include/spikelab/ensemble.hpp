#pragma once

#include <cstdint>
#include <string>

#include "spikelab/model.hpp"

namespace spikelab {

/// Discretized spike directions, one column per signal: e_i(l) = h_i(l/N)/sqrt(N).
struct SpikeVectors {
    Matrix cols;  // n x k

    int size() const { return static_cast<int>(cols.rows()); }
    int rank() const { return static_cast<int>(cols.cols()); }
    Vector col(int i) const { return cols.col(i); }
};

SpikeVectors build_spike_vectors(const SpikeSpec& spike, int n);

/// Entry standard deviations sqrt(f(j/N, l/N)), sampled once per spec so the
/// profile is not re-evaluated for every replicate.
Matrix sample_profile_sd(const VarianceProfile& profile, int n);

/// Draws the symmetric Wigner-type matrix: independent mean-zero entries on
/// the upper triangle (diagonal included), variance f(j/N, l/N), mirrored
/// bit-exactly. Deterministic function of (spec, seed); the stream is
/// consumed in row-major upper-triangle order regardless of the profile.
Matrix sample_wigner(const EnsembleSpec& spec, uint64_t seed);
Matrix sample_wigner(const EnsembleSpec& spec, uint64_t seed, const Matrix& profile_sd);

/// A = W + theta * sum_i alpha_i e_i e_i'. Symmetric by construction.
Matrix assemble_perturbed(const Matrix& w, const SpikeSpec& spike, const SpikeVectors& vecs);

/// u' W^n v via successive matrix-vector products; never forms W^n.
/// Requires 0 <= n_power <= 3*floor(log N).
double quadratic_form(const Vector& u, const Matrix& w, int n_power, const Vector& v);

/// Exact E(e_a' W^2 e_b) under independent mean-zero entries: E[W^2] is
/// diagonal with (a,a) entry sum_c f(a/n, c/n).
double expected_w2_form(const Vector& ea, const Vector& eb, const VarianceProfile& profile, int n);

struct Realization {
    uint64_t seed = 0;
    Matrix w;
    Matrix a;
    SpikeVectors spikes;
};

Realization make_realization(const EnsembleSpec& spec, uint64_t seed);
Realization make_realization(const EnsembleSpec& spec, uint64_t seed, const Matrix& profile_sd,
                             const SpikeVectors& vecs);

/// Debugging dump: upper triangle, row-major float64, with a small header.
void dump_matrix(const std::string& path, const Matrix& w, uint64_t seed);
Matrix load_matrix(const std::string& path, uint64_t* seed_out = nullptr);

}  // namespace spikelab
