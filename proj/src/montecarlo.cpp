#include "spikelab/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spikelab/field.hpp"
#include "spikelab/martingale.hpp"
#include "spikelab/spectral.hpp"

namespace spikelab {

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

// Unbiased sample variance; the 1/(R-1) denominator carries the (1 - 1/R)
// correction for centering at the replicate mean.
double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / double(v.size() - 1);
}

double covariance_of(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean_of(a), mb = mean_of(b);
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / double(a.size() - 1);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

bool needs_eigensolve(const std::vector<Statistic>& stats) {
    for (Statistic s : stats) {
        switch (s) {
            case Statistic::eigenvalue_clt:
            case Statistic::alignment_clt:
            case Statistic::ortho_clt:
            case Statistic::field_clt:
            case Statistic::delocalization:
            case Statistic::mean_expansion:
            case Statistic::resolvent_oracle:
                return true;
            default:
                break;
        }
    }
    return false;
}

bool has(const std::vector<Statistic>& stats, Statistic s) {
    return std::find(stats.begin(), stats.end(), s) != stats.end();
}

bool is_clt_statistic(Statistic s) {
    switch (s) {
        case Statistic::eigenvalue_clt:
        case Statistic::alignment_clt:
        case Statistic::ortho_clt:
        case Statistic::martingale_clt:
        case Statistic::field_clt:
            return true;
        default:
            return false;
    }
}

struct RepRaw {
    bool ok = true;
    std::string error;
    uint64_t seed = 0;

    Vector lambdas;        // k
    Matrix alignments;     // k x k
    Vector deloc;          // k
    Vector w2;             // k, e_i'W^2 e_i
    Vector vn;             // k
    double identity_residual = 0.0;
    Vector field_proj;     // J, gbar_j' v_1
    Vector resolvent_dev;  // k, min_j |lambda_j(K) - mu| / mu, -1 if uncertified
    Vector qform;          // powers 1..4 of e_1' W^n e_1
};

std::string idx(int i) { return std::to_string(i); }

}  // namespace

const char* statistic_name(Statistic s) {
    switch (s) {
        case Statistic::eigenvalue_clt: return "eigenvalue_clt";
        case Statistic::alignment_clt: return "alignment_clt";
        case Statistic::ortho_clt: return "ortho_clt";
        case Statistic::martingale_clt: return "martingale_clt";
        case Statistic::field_clt: return "field_clt";
        case Statistic::delocalization: return "delocalization";
        case Statistic::mean_expansion: return "mean_expansion";
        case Statistic::resolvent_oracle: return "resolvent_oracle";
        case Statistic::concentration: return "concentration";
    }
    return "unknown";
}

Statistic statistic_from_name(const std::string& name) {
    for (int s = 0; s <= int(Statistic::concentration); ++s)
        if (name == statistic_name(Statistic(s))) return Statistic(s);
    throw Error(Errc::config_error, "unknown statistic '" + name + "'");
}

double StatisticSummary::value(const std::string& key) const {
    for (const auto& [k, v] : values)
        if (k == key) return v;
    for (const auto& [k, v] : theory)
        if (k == key) return v;
    throw Error(Errc::config_error, "summary '" + name + "' has no value '" + key + "'");
}

const StatisticSummary* ExperimentSummary::find(const std::string& name) const {
    for (const auto& s : stats)
        if (s.name == name) return &s;
    return nullptr;
}

std::pair<double, double> ks_gaussian(const std::vector<double>& samples, double sigma) {
    if (sigma <= 0.0) throw Error(Errc::config_error, "ks_gaussian needs sigma > 0");
    if (samples.size() < 100) throw Error(Errc::config_error, "ks_gaussian needs >= 100 samples");
    if (variance_of(samples) == 0.0)
        throw Error(Errc::degenerate_samples, "samples have zero variance");

    std::vector<double> x = samples;
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double cdf = normal_cdf(x[i] / sigma);
        d = std::max(d, std::abs(double(i + 1) / n - cdf));
        d = std::max(d, std::abs(cdf - double(i) / n));
    }
    // Asymptotic Kolmogorov distribution with the usual finite-n argument.
    const double t = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double q = 0.0;
    for (int j = 1; j <= 100; ++j) q += (j % 2 ? 1.0 : -1.0) * std::exp(-2.0 * j * j * t * t);
    return {d, std::clamp(2.0 * q, 0.0, 1.0)};
}

double variance_z(const std::vector<double>& samples, double theory_var) {
    if (samples.size() < 100) throw Error(Errc::config_error, "variance_z needs >= 100 samples");
    if (theory_var <= 0.0) throw Error(Errc::config_error, "variance_z needs theory_var > 0");
    const double se = theory_var * std::sqrt(2.0 / double(samples.size() - 1));
    return (variance_of(samples) - theory_var) / se;
}

ExperimentSummary run(const ExperimentConfig& config) {
    const EnsembleSpec& spec = config.ensemble;
    const int n = spec.n;
    const int k = spec.spike.rank();
    const int big_r = config.replicates;
    const double theta = spec.spike.theta;

    ValidationReport vr = validate_spec(spec);
    if (!vr.ok()) {
        std::string bad;
        for (const auto& it : vr.items)
            if (it.status == CheckStatus::violated) bad += it.check + " ";
        throw Error(Errc::config_error, "spec validation failed: " + bad);
    }
    for (Statistic s : config.statistics)
        if (is_clt_statistic(s) && big_r < 100)
            throw Error(Errc::config_error,
                        std::string("statistic ") + statistic_name(s) + " needs R >= 100");
    if (has(config.statistics, Statistic::ortho_clt) && k < 2)
        throw Error(Errc::config_error, "ortho_clt needs rank k >= 2");

    const bool need_eig = needs_eigensolve(config.statistics);
    const bool want_mart = has(config.statistics, Statistic::martingale_clt);
    const bool want_field = has(config.statistics, Statistic::field_clt);
    const bool want_resolvent = has(config.statistics, Statistic::resolvent_oracle);
    const bool want_conc = has(config.statistics, Statistic::concentration);
    const int max_mode = config.field_max_mode;

    const SpikeVectors vecs = build_spike_vectors(spec.spike, n);
    const Matrix profile_sd = sample_profile_sd(spec.profile, n);
    const QuadratureGrid grid = effective_grid(spec, config.grid);

    Vector expected_w2(k);
    for (int i = 0; i < k; ++i)
        expected_w2(i) = expected_w2_form(vecs.col(i), vecs.col(i), spec.profile, n);

    DirichletBasis basis{max_mode};
    std::vector<Vector> g_disc;
    if (want_field)
        for (int j = 1; j <= max_mode; ++j)
            g_disc.push_back(
                discretize_test_function([&](double x) { return basis.phi(j, x); }, n));

    // Replicates are independent tasks; each writes only its own slot, so the
    // raw data is identical for any scheduling.
    std::vector<RepRaw> reps(big_r);
    const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int r = 0; r < big_r; ++r) {
        RepRaw& rep = reps[r];
        rep.seed = replicate_seed(config.master_seed, uint64_t(r));
        try {
            const Matrix w = sample_wigner(spec, rep.seed, profile_sd);
            if (need_eig) {
                const Matrix a = assemble_perturbed(w, spec.spike, vecs);
                const OutlierSet out = top_eigenpairs(a, k, vecs);
                rep.lambdas = out.eigenvalues;
                rep.alignments = out.alignments;
                rep.deloc.resize(k);
                for (int i = 0; i < k; ++i)
                    rep.deloc(i) = delocalization_metric(out.eigenvectors.col(i), vecs.col(i));
                if (want_resolvent) {
                    rep.resolvent_dev.resize(k);
                    for (int i = 0; i < k; ++i) {
                        const double mu = out.eigenvalues(i);
                        const ResolventK kk = resolvent_k_matrix(w, mu, spec.spike, vecs);
                        if (!kk.valid) {
                            rep.resolvent_dev(i) = -1.0;
                            continue;
                        }
                        Eigen::SelfAdjointEigenSolver<Matrix> ek(0.5 * (kk.k + kk.k.transpose()));
                        double best = std::numeric_limits<double>::infinity();
                        for (int j = 0; j < k; ++j)
                            best = std::min(best, std::abs(ek.eigenvalues()(j) - mu));
                        rep.resolvent_dev(i) = best / std::abs(mu);
                    }
                }
                if (want_field) {
                    rep.field_proj.resize(max_mode);
                    for (int j = 0; j < max_mode; ++j)
                        rep.field_proj(j) = g_disc[size_t(j)].dot(out.eigenvectors.col(0));
                }
            }
            if (want_mart) {
                rep.w2.resize(k);
                rep.vn.resize(k);
                double max_resid = 0.0;
                for (int i = 0; i < k; ++i) {
                    const Vector e = vecs.col(i);
                    rep.w2(i) = quadratic_form(e, w, 2, e);
                    const MartingaleDecomposition d =
                        decompose(w, spec.spike.signals[size_t(i)], spec.profile);
                    rep.vn(i) = d.v_n;
                    max_resid = std::max(max_resid, d.identity_residual());
                }
                rep.identity_residual = max_resid;
            }
            if (want_conc) {
                rep.qform.resize(4);
                Vector x = vecs.col(0);
                for (int p = 1; p <= 4; ++p) {
                    x = w * x;
                    rep.qform(p - 1) = vecs.col(0).dot(x);
                }
            }
        } catch (const std::exception& e) {
            rep.ok = false;
            rep.error = e.what();
        }
    }

    for (const RepRaw& rep : reps)
        if (!rep.ok)
            throw Error(Errc::eigen_solver_failure,
                        rep.error + " (replicate seed " + std::to_string(rep.seed) + ")");

    const Thresholds& th = config.thresholds;
    ExperimentSummary summary;
    summary.meta = {{"n", double(n)},
                    {"k", double(k)},
                    {"theta", theta},
                    {"replicates", double(big_r)},
                    {"field_max_mode", double(max_mode)}};
    summary.master_seed_text = std::to_string(config.master_seed);

    auto column = [&](const std::string& name, auto&& get) {
        if (!config.keep_samples) return;
        summary.sample_names.push_back(name);
        if (summary.samples.empty()) summary.samples.resize(size_t(big_r));
        for (int r = 0; r < big_r; ++r) summary.samples[size_t(r)].push_back(get(reps[size_t(r)]));
    };

    for (Statistic stat : config.statistics) {
        StatisticSummary s;
        s.name = statistic_name(stat);
        switch (stat) {
            case Statistic::eigenvalue_clt: {
                for (int i = 1; i <= k; ++i) {
                    std::vector<double> lam(big_r);
                    for (int r = 0; r < big_r; ++r) lam[size_t(r)] = reps[size_t(r)].lambdas(i - 1);
                    const double tv =
                        cov_eigenvalues(i, i, spec.profile, spec.spike.signals, grid);
                    const double m = mean_of(lam);
                    std::vector<double> centered(lam);
                    for (double& x : centered) x -= m;
                    auto [d, p] = ks_gaussian(centered, std::sqrt(tv));
                    const double var = variance_of(lam);
                    s.values.emplace_back("mean_" + idx(i), m);
                    s.values.emplace_back("var_" + idx(i), var);
                    s.values.emplace_back("var_z_" + idx(i), variance_z(lam, tv));
                    s.values.emplace_back("ks_d_" + idx(i), d);
                    s.values.emplace_back("ks_p_" + idx(i), p);
                    s.theory.emplace_back("cov_eigenvalues(" + idx(i) + "," + idx(i) + ")", tv);
                    s.pass = s.pass && std::abs(var / tv - 1.0) <= th.eigen_var_band &&
                             p >= th.ks_min_p;
                    column("lambda_" + idx(i),
                           [i](const RepRaw& r) { return r.lambdas(i - 1); });
                }
                for (int i = 1; i <= k; ++i) {
                    for (int j = i + 1; j <= k; ++j) {
                        std::vector<double> a(big_r), b(big_r);
                        for (int r = 0; r < big_r; ++r) {
                            a[size_t(r)] = reps[size_t(r)].lambdas(i - 1);
                            b[size_t(r)] = reps[size_t(r)].lambdas(j - 1);
                        }
                        const double cij =
                            cov_eigenvalues(i, j, spec.profile, spec.spike.signals, grid);
                        const double cii =
                            cov_eigenvalues(i, i, spec.profile, spec.spike.signals, grid);
                        const double cjj =
                            cov_eigenvalues(j, j, spec.profile, spec.spike.signals, grid);
                        const double emp = covariance_of(a, b);
                        const double se =
                            std::sqrt((cii * cjj + cij * cij) / double(big_r - 1));
                        s.values.emplace_back("cov_" + idx(i) + "_" + idx(j), emp);
                        s.values.emplace_back("cov_se_" + idx(i) + "_" + idx(j), se);
                        s.theory.emplace_back("cov_eigenvalues(" + idx(i) + "," + idx(j) + ")",
                                              cij);
                        s.pass = s.pass && std::abs(emp - cij) <= 4.0 * se;
                    }
                }
                break;
            }
            case Statistic::mean_expansion: {
                for (int i = 1; i <= k; ++i) {
                    std::vector<double> lam(big_r);
                    for (int r = 0; r < big_r; ++r) lam[size_t(r)] = reps[size_t(r)].lambdas(i - 1);
                    const BMatrixResult b = b_matrix(i, spec.spike, vecs, spec.profile, n);
                    const double tv =
                        cov_eigenvalues(i, i, spec.profile, spec.spike.signals, grid);
                    const double m = mean_of(lam);
                    const double gap = std::abs(m - b.lambda);
                    const double band =
                        4.0 * std::sqrt(2.0 / double(big_r)) * std::sqrt(tv) + th.mean_gap_slack;
                    const double scale = theta * spec.spike.alphas[size_t(i - 1)];
                    int in_band = 0;
                    for (double x : lam)
                        if (std::abs(x / scale - 1.0) <= th.first_order_band) ++in_band;
                    s.values.emplace_back("mc_mean_" + idx(i), m);
                    s.values.emplace_back("gap_" + idx(i), gap);
                    s.values.emplace_back("gap_band_" + idx(i), band);
                    s.values.emplace_back("mean_se_" + idx(i), std::sqrt(tv / double(big_r)));
                    s.values.emplace_back("first_order_frac_" + idx(i),
                                          double(in_band) / double(big_r));
                    s.values.emplace_back("theta_warning_" + idx(i),
                                          b.theta_warning ? 1.0 : 0.0);
                    s.theory.emplace_back("b_matrix(" + idx(i) + ")", b.lambda);
                    s.pass = s.pass && gap <= band;
                }
                break;
            }
            case Statistic::alignment_clt: {
                for (int i = 1; i <= k; ++i) {
                    std::vector<double> a(big_r);
                    for (int r = 0; r < big_r; ++r)
                        a[size_t(r)] = reps[size_t(r)].alignments(i - 1, i - 1);
                    const double am = mean_of(a);
                    const double scale =
                        (theta * spec.spike.alphas[size_t(i - 1)]) *
                        (theta * spec.spike.alphas[size_t(i - 1)]) / std::sqrt(double(n));
                    std::vector<double> stat_samples(big_r);
                    for (int r = 0; r < big_r; ++r)
                        stat_samples[size_t(r)] = scale * (a[size_t(r)] - am);
                    const double tv = var_alignment(i, spec.profile, spec.spike.signals, grid);
                    auto [d, p] = ks_gaussian(stat_samples, std::sqrt(tv));
                    const double var = variance_of(stat_samples);
                    s.values.emplace_back("align_mean_" + idx(i), am);
                    s.values.emplace_back("var_" + idx(i), var);
                    s.values.emplace_back("var_z_" + idx(i), variance_z(stat_samples, tv));
                    s.values.emplace_back("ks_d_" + idx(i), d);
                    s.values.emplace_back("ks_p_" + idx(i), p);
                    s.theory.emplace_back("var_alignment(" + idx(i) + ")", tv);
                    s.pass = s.pass && std::abs(var / tv - 1.0) <= th.align_var_band &&
                             p >= th.ks_min_p;
                    column("align_" + idx(i),
                           [i](const RepRaw& r) { return r.alignments(i - 1, i - 1); });
                }
                break;
            }
            case Statistic::ortho_clt: {
                for (int i = 1; i <= k; ++i) {
                    for (int j = 1; j <= k; ++j) {
                        if (i == j) continue;
                        std::vector<double> a(big_r);
                        for (int r = 0; r < big_r; ++r)
                            a[size_t(r)] = reps[size_t(r)].alignments(j - 1, i - 1);
                        const double am = mean_of(a);
                        std::vector<double> stat_samples(big_r);
                        for (int r = 0; r < big_r; ++r)
                            stat_samples[size_t(r)] = theta * (a[size_t(r)] - am);
                        const double var = variance_of(stat_samples);
                        auto [tau_thm, tau_proof] = var_orthogonal(
                            i, j, spec.spike.alphas, spec.profile, spec.spike.signals, grid);
                        const double integral = orthogonal_integral(
                            i, j, spec.profile, spec.spike.signals, grid);
                        const double gap =
                            spec.spike.alphas[size_t(i - 1)] - spec.spike.alphas[size_t(j - 1)];
                        // Linear-response diagnostic: Var(e_j'We_i)/gap^2.
                        const double tau_linear = 0.5 * integral / (gap * gap);
                        const std::string pair = idx(i) + "_" + idx(j);
                        const double dev_thm = std::abs(var / tau_thm - 1.0);
                        const double dev_proof = std::abs(var / tau_proof - 1.0);
                        const bool theorem_better = dev_thm <= dev_proof;
                        s.values.emplace_back("var_" + pair, var);
                        s.values.emplace_back("z_theorem_" + pair,
                                              variance_z(stat_samples, tau_thm));
                        s.values.emplace_back("z_proof_" + pair,
                                              variance_z(stat_samples, tau_proof));
                        s.values.emplace_back("ratio_theorem_" + pair, var / tau_thm);
                        s.values.emplace_back("ratio_proof_" + pair, var / tau_proof);
                        s.values.emplace_back("best_is_theorem_" + pair,
                                              theorem_better ? 1.0 : 0.0);
                        s.theory.emplace_back("var_orthogonal(" + idx(i) + "," + idx(j) +
                                                  ").theorem",
                                              tau_thm);
                        s.theory.emplace_back("var_orthogonal(" + idx(i) + "," + idx(j) +
                                                  ").proof",
                                              tau_proof);
                        s.theory.emplace_back("linear_response(" + idx(i) + "," + idx(j) + ")",
                                              tau_linear);
                        s.pass = s.pass && std::min(dev_thm, dev_proof) <= th.ortho_var_band;
                        column("ortho_" + pair, [i, j](const RepRaw& r) {
                            return r.alignments(j - 1, i - 1);
                        });
                    }
                }
                break;
            }
            case Statistic::martingale_clt: {
                double max_resid = 0.0;
                for (const RepRaw& r : reps) max_resid = std::max(max_resid, r.identity_residual);
                s.values.emplace_back("max_identity_residual", max_resid);
                s.pass = s.pass && max_resid <= th.identity_rel_tol;
                for (int i = 1; i <= k; ++i) {
                    std::vector<double> stat_samples(big_r), vn(big_r);
                    for (int r = 0; r < big_r; ++r) {
                        stat_samples[size_t(r)] =
                            (reps[size_t(r)].w2(i - 1) - expected_w2(i - 1)) /
                            std::sqrt(double(n));
                        vn[size_t(r)] = reps[size_t(r)].vn(i - 1);
                    }
                    const double tv = var_martingale(i, spec.profile, spec.spike.signals, grid);
                    const double vn_limit =
                        var_alignment(i, spec.profile, spec.spike.signals, grid);
                    auto [d, p] = ks_gaussian(stat_samples, std::sqrt(tv));
                    const double var = variance_of(stat_samples);
                    const double vn_mean = mean_of(vn);
                    s.values.emplace_back("expected_w2_" + idx(i), expected_w2(i - 1));
                    s.values.emplace_back("var_" + idx(i), var);
                    s.values.emplace_back("var_z_" + idx(i), variance_z(stat_samples, tv));
                    s.values.emplace_back("ks_d_" + idx(i), d);
                    s.values.emplace_back("ks_p_" + idx(i), p);
                    s.values.emplace_back("vn_mean_" + idx(i), vn_mean);
                    s.values.emplace_back("vn_se_" + idx(i),
                                          std::sqrt(variance_of(vn) / double(big_r)));
                    s.theory.emplace_back("var_martingale(" + idx(i) + ")", tv);
                    s.theory.emplace_back("vn_limit(" + idx(i) + ")", vn_limit);
                    s.pass = s.pass && std::abs(var / tv - 1.0) <= th.mart_var_band &&
                             p >= th.ks_min_p &&
                             std::abs(vn_mean / vn_limit - 1.0) <= th.vn_band;
                    column("w2_" + idx(i), [i](const RepRaw& r) { return r.w2(i - 1); });
                    column("vn_" + idx(i), [i](const RepRaw& r) { return r.vn(i - 1); });
                }
                break;
            }
            case Statistic::field_clt: {
                std::vector<double> emp(max_mode), theo(max_mode);
                for (int j = 1; j <= max_mode; ++j) {
                    std::vector<double> proj(big_r);
                    for (int r = 0; r < big_r; ++r)
                        proj[size_t(r)] = reps[size_t(r)].field_proj(j - 1);
                    const double pm = mean_of(proj);
                    std::vector<double> pairings(big_r);
                    for (int r = 0; r < big_r; ++r)
                        pairings[size_t(r)] =
                            theta * std::sqrt(double(n)) * (proj[size_t(r)] - pm);
                    emp[size_t(j - 1)] = variance_of(pairings);
                    theo[size_t(j - 1)] = field_covariance(
                        [&](double x) { return basis.phi(j, x); },
                        [&](double x) { return basis.phi(j, x); }, 1, spec.spike.alphas,
                        spec.profile, spec.spike.signals, grid);
                    column("field_m" + idx(j),
                           [j](const RepRaw& r) { return r.field_proj(j - 1); });
                }
                for (int j = 1; j <= max_mode; ++j) {
                    s.values.emplace_back("var_m" + idx(j), emp[size_t(j - 1)]);
                    s.theory.emplace_back("field_covariance(phi_" + idx(j) + ",phi_" + idx(j) +
                                              ",1)",
                                          theo[size_t(j - 1)]);
                }
                const double max_emp = *std::max_element(emp.begin(), emp.end());
                const double min_emp = *std::min_element(emp.begin(), emp.end());
                const double max_theo = *std::max_element(theo.begin(), theo.end());
                s.values.emplace_back("var_ratio_m1", emp[0] / theo[0]);
                s.values.emplace_back("tightness_max_emp", max_emp);
                s.values.emplace_back("tightness_max_theory", max_theo);
                s.values.emplace_back("tightness_spread", max_emp / min_emp);
                // Partial sums of the H^{-d} norm: weight j^{-2d}, tail = last
                // quarter of the computed modes.
                {
                    const double dexp = th.hneg_exponent;
                    double total = 0.0, tail = 0.0;
                    for (int j = 1; j <= max_mode; ++j) {
                        const double term =
                            emp[size_t(j - 1)] * std::pow(double(j), -2.0 * dexp);
                        total += term;
                        if (j > (3 * max_mode) / 4) tail += term;
                    }
                    s.values.emplace_back("hneg_tail_ratio", tail / total);
                    s.pass = s.pass && tail / total < th.hneg_tail_ratio_max;
                }
                s.pass = s.pass &&
                         std::abs(emp[0] / theo[0] - 1.0) <= th.field_var_band &&
                         max_emp <= th.tightness_max_factor * max_theo &&
                         max_emp / min_emp <= th.tightness_spread_max;
                break;
            }
            case Statistic::delocalization: {
                for (int i = 1; i <= k; ++i) {
                    std::vector<double> m(big_r);
                    for (int r = 0; r < big_r; ++r) m[size_t(r)] = reps[size_t(r)].deloc(i - 1);
                    const double med = median_of(m);
                    const double logn = std::log(double(n));
                    s.values.emplace_back("median_" + idx(i), med);
                    s.values.emplace_back("mean_" + idx(i), mean_of(m));
                    s.values.emplace_back("max_" + idx(i), *std::max_element(m.begin(), m.end()));
                    s.values.emplace_back("rate_" + idx(i), med * theta / (logn * logn));
                    column("deloc_" + idx(i), [i](const RepRaw& r) { return r.deloc(i - 1); });
                }
                break;
            }
            case Statistic::resolvent_oracle: {
                for (int i = 1; i <= k; ++i) {
                    int certified = 0, uncertified = 0;
                    double worst = 0.0;
                    for (const RepRaw& r : reps) {
                        const double dev = r.resolvent_dev(i - 1);
                        if (dev < 0.0) {
                            ++uncertified;
                        } else {
                            ++certified;
                            worst = std::max(worst, dev);
                        }
                    }
                    s.values.emplace_back("certified_" + idx(i), double(certified));
                    s.values.emplace_back("uncertified_" + idx(i), double(uncertified));
                    s.values.emplace_back("max_rel_dev_" + idx(i), worst);
                    s.pass = s.pass && worst <= th.resolvent_rel_tol;
                    column("resolvent_dev_" + idx(i),
                           [i](const RepRaw& r) { return r.resolvent_dev(i - 1); });
                }
                break;
            }
            case Statistic::concentration: {
                const double root_n = std::sqrt(double(n));
                for (int p = 1; p <= 4; ++p) {
                    std::vector<double> q(big_r);
                    for (int r = 0; r < big_r; ++r) q[size_t(r)] = reps[size_t(r)].qform(p - 1);
                    const double m = mean_of(q);
                    const double sd = std::sqrt(variance_of(q));
                    const double bound =
                        std::pow(th.moment_bound_factor *
                                     std::sqrt(spec.profile.sup_bound) * root_n,
                                 double(p));
                    s.values.emplace_back("mean_n" + idx(p), m);
                    s.values.emplace_back("sd_n" + idx(p), sd);
                    s.values.emplace_back("sd_scaled_n" + idx(p),
                                          sd / std::pow(root_n, double(p - 1)));
                    s.values.emplace_back("moment_bound_n" + idx(p), bound);
                    s.pass = s.pass && std::abs(m) <= bound;
                    column("qform_n" + idx(p), [p](const RepRaw& r) { return r.qform(p - 1); });
                }
                break;
            }
        }
        summary.all_pass = summary.all_pass && s.pass;
        summary.stats.push_back(std::move(s));
    }

    return summary;
}

}  // namespace spikelab
