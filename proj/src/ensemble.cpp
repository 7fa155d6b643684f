#include "spikelab/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace spikelab {

namespace {

int max_power(int n) {
    const int l = std::max(1, int(std::floor(std::log(double(std::max(2, n))))));
    return 3 * l;
}

double draw_unit(std::mt19937_64& rng, EntryLawKind kind) {
    switch (kind) {
        case EntryLawKind::gaussian: {
            std::normal_distribution<double> d(0.0, 1.0);
            return d(rng);
        }
        case EntryLawKind::rademacher: {
            std::uniform_int_distribution<int> d(0, 1);
            return d(rng) ? 1.0 : -1.0;
        }
        case EntryLawKind::uniform: {
            std::uniform_real_distribution<double> d(-1.0, 1.0);
            return std::sqrt(3.0) * d(rng);
        }
    }
    return 0.0;
}

}  // namespace

SpikeVectors build_spike_vectors(const SpikeSpec& spike, int n) {
    if (n < 1) throw Error(Errc::config_error, "build_spike_vectors needs n >= 1");
    const int k = spike.rank();
    SpikeVectors v;
    v.cols.resize(n, k);
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    for (int i = 0; i < k; ++i)
        for (int l = 0; l < n; ++l)
            v.cols(l, i) = spike.signals[i](double(l + 1) / n) * inv_sqrt_n;
    return v;
}

Matrix sample_profile_sd(const VarianceProfile& profile, int n) {
    Matrix sd(n, n);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int l = j; l < n; ++l) {
            const double f = profile(double(j + 1) / n, double(l + 1) / n);
            const double s = std::sqrt(std::max(0.0, f));
            sd(j, l) = s;
            sd(l, j) = s;
        }
    }
    return sd;
}

Matrix sample_wigner(const EnsembleSpec& spec, uint64_t seed, const Matrix& profile_sd) {
    const int n = spec.n;
    if (profile_sd.rows() != n || profile_sd.cols() != n)
        throw Error(Errc::dimension_mismatch, "profile_sd size does not match spec.n");
    Matrix w(n, n);
    std::mt19937_64 rng(seed);
    for (int j = 0; j < n; ++j) {
        for (int l = j; l < n; ++l) {
            const double x = draw_unit(rng, spec.law.kind) * profile_sd(j, l);
            w(j, l) = x;
            w(l, j) = x;
        }
    }
    return w;
}

Matrix sample_wigner(const EnsembleSpec& spec, uint64_t seed) {
    return sample_wigner(spec, seed, sample_profile_sd(spec.profile, spec.n));
}

Matrix assemble_perturbed(const Matrix& w, const SpikeSpec& spike, const SpikeVectors& vecs) {
    const int n = static_cast<int>(w.rows());
    if (w.cols() != n || vecs.size() != n || vecs.rank() != spike.rank())
        throw Error(Errc::dimension_mismatch, "assemble_perturbed: inconsistent dimensions");
    Matrix a = w;
    for (int i = 0; i < spike.rank(); ++i) {
        const double scale = spike.theta * spike.alphas[i];
        a.selfadjointView<Eigen::Upper>().rankUpdate(vecs.cols.col(i), scale);
    }
    // rankUpdate touches only the upper triangle; mirror it exactly.
    for (int j = 0; j < n; ++j)
        for (int l = j + 1; l < n; ++l) a(l, j) = a(j, l);
    return a;
}

double quadratic_form(const Vector& u, const Matrix& w, int n_power, const Vector& v) {
    const int n = static_cast<int>(w.rows());
    if (u.size() != n || v.size() != n)
        throw Error(Errc::dimension_mismatch, "quadratic_form: vector sizes");
    if (n_power < 0 || n_power > max_power(n))
        throw Error(Errc::config_error,
                    "quadratic_form power " + std::to_string(n_power) + " out of range");
    Vector x = v;
    for (int i = 0; i < n_power; ++i) x = w * x;
    return u.dot(x);
}

double expected_w2_form(const Vector& ea, const Vector& eb, const VarianceProfile& profile,
                        int n) {
    if (ea.size() != n || eb.size() != n)
        throw Error(Errc::dimension_mismatch, "expected_w2_form: vector sizes");
    double total = 0.0;
    for (int a = 0; a < n; ++a) {
        double row = 0.0;
        for (int c = 0; c < n; ++c) row += profile(double(a + 1) / n, double(c + 1) / n);
        total += ea(a) * eb(a) * row;
    }
    return total;
}

Realization make_realization(const EnsembleSpec& spec, uint64_t seed, const Matrix& profile_sd,
                             const SpikeVectors& vecs) {
    Realization r;
    r.seed = seed;
    r.w = sample_wigner(spec, seed, profile_sd);
    r.a = assemble_perturbed(r.w, spec.spike, vecs);
    r.spikes = vecs;
    return r;
}

Realization make_realization(const EnsembleSpec& spec, uint64_t seed) {
    return make_realization(spec, seed, sample_profile_sd(spec.profile, spec.n),
                            build_spike_vectors(spec.spike, spec.n));
}

void dump_matrix(const std::string& path, const Matrix& w, uint64_t seed) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error(Errc::io_error, "cannot open " + path);
    const char magic[8] = {'s', 'p', 'k', 'w', 'i', 'g', '0', '1'};
    const uint64_t n = static_cast<uint64_t>(w.rows());
    std::fwrite(magic, 1, 8, f);
    std::fwrite(&n, sizeof n, 1, f);
    std::fwrite(&seed, sizeof seed, 1, f);
    for (uint64_t j = 0; j < n; ++j)
        for (uint64_t l = j; l < n; ++l) {
            const double x = w(j, l);
            std::fwrite(&x, sizeof x, 1, f);
        }
    std::fclose(f);
}

Matrix load_matrix(const std::string& path, uint64_t* seed_out) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw Error(Errc::io_error, "cannot open " + path);
    char magic[8];
    uint64_t n = 0, seed = 0;
    if (std::fread(magic, 1, 8, f) != 8 || std::string(magic, 8) != "spkwig01" ||
        std::fread(&n, sizeof n, 1, f) != 1 || std::fread(&seed, sizeof seed, 1, f) != 1) {
        std::fclose(f);
        throw Error(Errc::io_error, "bad matrix dump header in " + path);
    }
    Matrix w(n, n);
    for (uint64_t j = 0; j < n; ++j)
        for (uint64_t l = j; l < n; ++l) {
            double x;
            if (std::fread(&x, sizeof x, 1, f) != 1) {
                std::fclose(f);
                throw Error(Errc::io_error, "truncated matrix dump " + path);
            }
            w(j, l) = x;
            w(l, j) = x;
        }
    std::fclose(f);
    if (seed_out) *seed_out = seed;
    return w;
}

}  // namespace spikelab
