#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spikelab/spectral.hpp"

using namespace spikelab;

namespace {

EnsembleSpec make_spec(int n, double theta, std::vector<double> alphas,
                       std::vector<SignalFunction> signals) {
    EnsembleSpec s;
    s.n = n;
    s.profile = make_constant_profile();
    s.law = EntryLaw{};
    s.spike = SpikeSpec::create(theta, std::move(alphas), std::move(signals));
    return s;
}

}  // namespace

TEST_CASE("top eigenpairs of a diagonal matrix") {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 3.0, 2.0, 1.0;
    const auto spike = SpikeSpec::create(1.0, {2.0, 1.0},
                                         {make_constant_signal(), make_cosine_signal(1)});
    const auto vecs = build_spike_vectors(spike, 3);
    const auto out = top_eigenpairs(a, 2, vecs);
    CHECK(out.eigenvalues(0) == doctest::Approx(3.0));
    CHECK(out.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(std::abs(out.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(out.sign_fixed);
}

TEST_CASE("rank-one planted matrix: lambda_1 = theta, v_1 = e") {
    const int n = 50;
    const auto spike = SpikeSpec::create(100.0, {1.0}, {make_constant_signal()});
    const auto vecs = build_spike_vectors(spike, n);
    const Matrix a = assemble_perturbed(Matrix::Zero(n, n), spike, vecs);
    const auto out = top_eigenpairs(a, 1, vecs);
    CHECK(out.eigenvalues(0) == doctest::Approx(100.0));
    CHECK((out.eigenvectors.col(0) - vecs.col(0)).norm() <= 1e-10);
    CHECK(out.alignments(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("sign convention: e_i'v_i >= 0 on sampled realizations") {
    EnsembleSpec spec = make_spec(128, 128.0, {2.0, 1.0},
                                  {make_constant_signal(), make_cosine_signal(1)});
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        const Realization r = make_realization(spec, seed);
        const auto out = top_eigenpairs(r.a, 2, r.spikes);
        CHECK(out.alignments(0, 0) >= 0.0);
        CHECK(out.alignments(1, 1) >= 0.0);
        CHECK(out.eigenvalues(0) >= out.eigenvalues(1));
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(out.eigenvectors.col(i).norm() - 1.0) <= 1e-10);
    }
}

TEST_CASE("resolvent K with W = 0") {
    const int n = 40;
    SUBCASE("rank one: K = theta alpha") {
        const auto spike = SpikeSpec::create(50.0, {1.0}, {make_constant_signal()});
        const auto vecs = build_spike_vectors(spike, n);
        const auto kk = resolvent_k_matrix(Matrix::Zero(n, n), 10.0, spike, vecs);
        CHECK(kk.valid);
        CHECK(kk.k(0, 0) == doctest::Approx(50.0));
    }
    SUBCASE("rank two: K(j,l) = theta sqrt(a_j a_l) e_j'e_l") {
        const auto spike = SpikeSpec::create(50.0, {2.0, 1.0},
                                             {make_constant_signal(), make_cosine_signal(1)});
        const auto vecs = build_spike_vectors(spike, n);
        const auto kk = resolvent_k_matrix(Matrix::Zero(n, n), 10.0, spike, vecs);
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l) {
                const double want = 50.0 * std::sqrt(spike.alphas[size_t(j)] *
                                                     spike.alphas[size_t(l)]) *
                                    vecs.col(j).dot(vecs.col(l));
                CHECK(kk.k(j, l) == doctest::Approx(want).epsilon(1e-12));
            }
    }
}

TEST_CASE("resolvent gate: mu below ||W|| reports the zero branch") {
    Matrix w = Matrix::Zero(5, 5);
    w.diagonal() << 4.0, 1.0, 0.5, -0.5, -3.0;
    const auto spike = SpikeSpec::create(10.0, {1.0}, {make_constant_signal()});
    const auto vecs = build_spike_vectors(spike, 5);
    const auto kk = resolvent_k_matrix(w, 2.0, spike, vecs);
    CHECK_FALSE(kk.valid);
    CHECK(kk.k.isZero(0.0));
    CHECK(resolvent_k_matrix(w, 5.0, spike, vecs).valid);
}

TEST_CASE("resolvent oracle identity: mu = lambda_i(K) on realizations") {
    EnsembleSpec spec = make_spec(200, 200.0, {1.0}, {make_constant_signal()});
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        const Realization r = make_realization(spec, seed);
        const auto out = top_eigenpairs(r.a, 1, r.spikes);
        const double mu = out.eigenvalues(0);
        const auto kk = resolvent_k_matrix(r.w, mu, spec.spike, r.spikes);
        REQUIRE(kk.valid);
        CHECK(std::abs(kk.k(0, 0) - mu) / mu <= 1e-7);
    }
}

TEST_CASE("resolvent K symmetry on a rank-two realization") {
    EnsembleSpec spec = make_spec(150, 300.0, {2.0, 1.0},
                                  {make_constant_signal(), make_cosine_signal(1)});
    const Realization r = make_realization(spec, 5);
    const auto out = top_eigenpairs(r.a, 2, r.spikes);
    const auto kk = resolvent_k_matrix(r.w, out.eigenvalues(0), spec.spike, r.spikes);
    REQUIRE(kk.valid);
    const double scale = kk.k.cwiseAbs().maxCoeff();
    CHECK((kk.k - kk.k.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
}

TEST_CASE("K/theta is close to diag(alpha) at theta = N") {
    // |K(j,l)/theta - alpha_j delta_jl| <= 0.2, checked over realizations.
    EnsembleSpec spec = make_spec(256, 256.0, {2.0, 1.0},
                                  {make_constant_signal(), make_cosine_signal(1)});
    int good = 0;
    const int reps = 40;
    for (uint64_t seed = 1; seed <= reps; ++seed) {
        const Realization r = make_realization(spec, seed);
        const auto out = top_eigenpairs(r.a, 2, r.spikes);
        const auto kk = resolvent_k_matrix(r.w, out.eigenvalues(0), spec.spike, r.spikes);
        if (!kk.valid) continue;
        bool ok = true;
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l) {
                const double want = j == l ? spec.spike.alphas[size_t(j)] : 0.0;
                ok = ok && std::abs(kk.k(j, l) / spec.spike.theta - want) <= 0.2;
            }
        good += ok;
    }
    CHECK(good >= int(0.95 * reps));
}

TEST_CASE("delocalization metric basics") {
    Vector e = Vector::Ones(4) * 0.5;
    CHECK(delocalization_metric(e, e) == 0.0);
    Vector v = e;
    v(0) += 0.25;
    CHECK(delocalization_metric(v, e) == doctest::Approx(0.25));
    CHECK_THROWS_AS(delocalization_metric(Vector::Ones(3), e), Error);
}

TEST_CASE("delocalization scaling across N (reduced-size version)") {
    // median ||v - e||_inf * theta / (log N)^2 varies by a bounded factor.
    std::vector<double> rates;
    for (int n : {64, 128, 256}) {
        EnsembleSpec spec = make_spec(n, double(n), {1.0}, {make_constant_signal()});
        std::vector<double> metric;
        for (uint64_t seed = 1; seed <= 50; ++seed) {
            const Realization r = make_realization(spec, seed);
            const auto out = top_eigenpairs(r.a, 1, r.spikes);
            metric.push_back(delocalization_metric(out.eigenvectors.col(0), r.spikes.col(0)));
        }
        std::sort(metric.begin(), metric.end());
        const double median = metric[metric.size() / 2];
        const double logn = std::log(double(n));
        rates.push_back(median * spec.spike.theta / (logn * logn));
    }
    const double lo = *std::min_element(rates.begin(), rates.end());
    const double hi = *std::max_element(rates.begin(), rates.end());
    CHECK(hi / lo <= 4.0);
}

TEST_CASE("alignment matrix statistics at moderate size") {
    // diag in [1 - 5 sqrt(N)/theta, 1], off-diag below 5 sqrt(N)/theta in
    // at least 95% of replicates.
    const int n = 256;
    EnsembleSpec spec = make_spec(n, double(n), {2.0, 1.0},
                                  {make_constant_signal(), make_cosine_signal(1)});
    const double band = 5.0 * std::sqrt(double(n)) / spec.spike.theta;
    int good = 0;
    const int reps = 60;
    for (uint64_t seed = 1; seed <= reps; ++seed) {
        const Realization r = make_realization(spec, seed);
        const auto out = top_eigenpairs(r.a, 2, r.spikes);
        const Matrix al = alignment_matrix(r.spikes, out);
        bool ok = true;
        for (int i = 0; i < 2; ++i) {
            ok = ok && al(i, i) >= 1.0 - band && al(i, i) <= 1.0 + 1e-9;
            for (int j = 0; j < 2; ++j)
                if (i != j) ok = ok && std::abs(al(j, i)) <= band;
        }
        good += ok;
    }
    CHECK(good >= int(0.95 * reps));
}

TEST_CASE("first-order ratio lambda_1/(theta alpha_1) concentrates near 1") {
    const int n = 128;
    EnsembleSpec spec = make_spec(n, double(n), {1.0}, {make_constant_signal()});
    int in_band = 0;
    const int reps = 100;
    for (uint64_t seed = 1; seed <= reps; ++seed) {
        const Realization r = make_realization(spec, seed);
        const auto out = top_eigenpairs(r.a, 1, r.spikes);
        const double ratio = out.eigenvalues(0) / (spec.spike.theta * spec.spike.alphas[0]);
        // Wider band than at N=500: sd(lambda)/theta ~ sqrt(2)/128 plus the
        // +1/N mean shift, so 0.05 is a > 4 sigma allowance.
        if (std::abs(ratio - 1.0) <= 0.05) ++in_band;
    }
    CHECK(in_band >= 97);
}
