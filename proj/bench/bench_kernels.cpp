// Compares the optimized kernels against the serial reference
// implementations, and the replicate loop against its single-thread baseline.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "spikelab/martingale.hpp"
#include "spikelab/reference.hpp"
#include "spikelab/spectral.hpp"

using namespace spikelab;

namespace {

double time_ms(const std::function<void()>& fn, int iters = 3) {
    double best = 1e300;
    for (int i = 0; i < iters; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

EnsembleSpec make_spec(int n) {
    EnsembleSpec s;
    s.n = n;
    s.profile = make_affine_profile();
    s.law = EntryLaw{};
    s.spike = SpikeSpec::create(double(n), {1.0}, {make_constant_signal()});
    return s;
}

volatile double sink = 0.0;

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    std::printf("%-34s %10s %10s %8s\n", "kernel", "ref ms", "opt ms", "speedup");
    for (int n : {64, 128, 256, 512}) {
        const auto spec = make_spec(n);
        const Matrix w = sample_wigner(spec, 1);
        const auto h = make_cosine_signal(1);

        const double ref_dec =
            time_ms([&] { sink = ref::decompose_bruteforce(w, h).m_n; });
        const double opt_dec = time_ms([&] { sink = decompose(w, h).m_n; });
        std::printf("decompose            N=%4d        %10.2f %10.2f %7.1fx\n", n, ref_dec,
                    opt_dec, ref_dec / opt_dec);

        const double ref_vn =
            time_ms([&] { sink = ref::conditional_variance_serial(w, h, spec.profile); });
        const double opt_vn =
            time_ms([&] { sink = conditional_variance(w, h, spec.profile); });
        std::printf("conditional_variance N=%4d        %10.2f %10.2f %7.1fx\n", n, ref_vn,
                    opt_vn, ref_vn / opt_vn);
    }

    {
        const int n = 512;
        const auto spec = make_spec(n);
        const Matrix w = sample_wigner(spec, 2);
        const auto vecs = build_spike_vectors(spec.spike, n);
        const Vector e = vecs.col(0);
        const double ref_qf =
            time_ms([&] { sink = ref::quadratic_form_densepow(e, w, 3, e); });
        const double opt_qf = time_ms([&] { sink = quadratic_form(e, w, 3, e); });
        std::printf("quadratic_form n=3   N=%4d        %10.2f %10.2f %7.1fx\n\n", n, ref_qf,
                    opt_qf, ref_qf / opt_qf);
    }

    // Replicate-level scaling: sample + eigensolve + quadratic forms.
    {
        const int n = 256, reps = 32;
        const auto spec = make_spec(n);
        const Matrix sd = sample_profile_sd(spec.profile, n);
        const auto vecs = build_spike_vectors(spec.spike, n);
        auto batch = [&](int workers) {
            return time_ms(
                [&] {
                    std::vector<double> out(reps);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
                    for (int r = 0; r < reps; ++r) {
                        const Matrix w = sample_wigner(spec, replicate_seed(3, uint64_t(r)), sd);
                        const Matrix a = assemble_perturbed(w, spec.spike, vecs);
                        out[size_t(r)] = top_eigenpairs(a, 1, vecs).eigenvalues(0);
                    }
                    sink = out[0];
                },
                2);
        };
        const double t1 = batch(1);
        const double tp = batch(omp_get_max_threads());
        std::printf("replicate loop N=%d R=%d: 1 thread %.1f ms, %d threads %.1f ms (%.2fx)\n",
                    n, reps, t1, omp_get_max_threads(), tp, t1 / tp);
    }
    return 0;
}
