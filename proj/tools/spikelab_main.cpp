#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spikelab/config.hpp"

namespace fs = std::filesystem;
using namespace spikelab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;    // run completed, some pass flag is false
constexpr int kExitConfig = 2;  // config / validation / io problem
constexpr int kExitSolver = 3;  // solver failure (offending seed printed)

int resolve_workers(int flag_workers, int config_workers) {
    const char* env = std::getenv("SPIKELAB_WORKERS");
    if (flag_workers > 0) return flag_workers;
    if (env && config_workers > 0)
        throw Error(Errc::config_error,
                    "workers set in both config and SPIKELAB_WORKERS; remove one");
    if (config_workers > 0) return config_workers;
    if (env) {
        const int w = std::atoi(env);
        if (w < 1) throw Error(Errc::config_error, "SPIKELAB_WORKERS must be a positive integer");
        return w;
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int workers,
            bool emit_samples, long long seed_override) {
    ExperimentConfig cfg = parse_config_file(config_path);
    if (seed_override >= 0) {
        // Override then re-resolve so the manifest reflects the run.
        nlohmann::json j = nlohmann::json::parse(read_text_file(config_path));
        j["master_seed"] = std::to_string(uint64_t(seed_override));
        cfg = parse_config(j.dump());
    }
    cfg.workers = resolve_workers(workers, cfg.workers);
    cfg.keep_samples = emit_samples;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    {
        // Fail before the run if the directory is unusable.
        const std::string probe = out_dir + "/.write_probe";
        write_text_file(probe, "ok");
        fs::remove(probe, ec);
    }

    const auto t0 = std::chrono::steady_clock::now();
    ExperimentSummary summary = run(cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_text_file(out_dir + "/summary.json", summary_to_json(summary));
    write_text_file(out_dir + "/manifest.json",
                    manifest_to_json(cfg, config_path, cfg.workers, seconds));
    if (emit_samples) write_text_file(out_dir + "/samples.csv", samples_to_csv(summary));

    for (const auto& s : summary.stats)
        std::printf("%-18s %s\n", s.name.c_str(), s.pass ? "pass" : "FAIL");
    std::printf("summary: %s (%.1f s)\n", summary.all_pass ? "all pass" : "FAILURES",
                seconds);
    return summary.all_pass ? kExitOk : kExitFail;
}

int cmd_theory(const std::string& config_path, const std::string& json_path) {
    ExperimentConfig cfg = parse_config_file(config_path);
    const ValidationReport vr = validate_spec(cfg.ensemble);
    for (const auto& it : vr.items)
        if (it.status != CheckStatus::satisfied)
            std::printf("# check %s: %s (%s)\n", it.check.c_str(),
                        check_status_name(it.status), it.detail.c_str());
    if (!vr.ok()) {
        std::fprintf(stderr, "spec validation failed\n");
        return kExitConfig;
    }

    const TheoryPredictions p = compute_predictions(cfg.ensemble, cfg.grid);
    const int k = cfg.ensemble.spike.rank();
    std::printf("refinement: max relative delta %.6g (%s)\n", p.max_refinement_delta,
                p.refinement_ok ? "ok" : "FLAGGED");
    nlohmann::ordered_json flat;
    flat["refinement_max_delta"] = p.max_refinement_delta;
    auto key = [](const char* name, int i, int j = 0) {
        std::string s = std::string(name) + "(" + std::to_string(i);
        if (j) s += "," + std::to_string(j);
        return s + ")";
    };
    for (int i = 0; i < k; ++i) {
        std::printf("cov_eigen(%d,%d)      = %.6g\n", i + 1, i + 1, p.cov_eigen(i, i));
        std::printf("var_align(%d)        = %.6g\n", i + 1, p.var_align(i));
        std::printf("sigma2_martingale(%d)= %.6g\n", i + 1, p.sigma2_martingale(i));
        std::printf("b_eigenvalue(%d)     = %.6g\n", i + 1, p.b_eigenvalue(i));
        flat[key("cov_eigenvalues", i + 1, i + 1)] = p.cov_eigen(i, i);
        flat[key("var_alignment", i + 1)] = p.var_align(i);
        flat[key("var_martingale", i + 1)] = p.sigma2_martingale(i);
        flat[key("b_matrix", i + 1)] = p.b_eigenvalue(i);
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            std::printf("cov_eigen(%d,%d)      = %.6g\n", i + 1, j + 1, p.cov_eigen(i, j));
            std::printf("tau_sq(%d,%d) theorem = %.6g  proof = %.6g\n", i + 1, j + 1,
                        p.tau_sq_theorem(i, j), p.tau_sq_proof(i, j));
            flat[key("cov_eigenvalues", i + 1, j + 1)] = p.cov_eigen(i, j);
            flat[key("var_orthogonal", i + 1, j + 1) + ".theorem"] = p.tau_sq_theorem(i, j);
            flat[key("var_orthogonal", i + 1, j + 1) + ".proof"] = p.tau_sq_proof(i, j);
        }
    }
    if (!json_path.empty()) write_text_file(json_path, flat.dump(2) + "\n");
    return kExitOk;
}

struct ReportRow {
    double n = 0, theta = 0, replicates = 0;
    double deloc_median = NAN, deloc_rate = NAN;
    double sd1 = NAN, sd2 = NAN, sd3 = NAN;
    double vn_mean = NAN;
};

int cmd_report(const std::vector<std::string>& dirs, const std::string& out_csv) {
    std::vector<ReportRow> rows;
    for (const auto& dir : dirs) {
        const std::string path =
            fs::is_directory(dir) ? dir + "/summary.json" : dir;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(path));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "cannot read summary %s: %s\n", path.c_str(), e.what());
            return kExitConfig;
        }
        try {
            ReportRow row;
            row.n = j.at("meta").at("n").get<double>();
            row.theta = j.at("meta").at("theta").get<double>();
            row.replicates = j.at("meta").at("replicates").get<double>();
            const auto& stats = j.at("statistics");
            if (stats.contains("delocalization")) {
                row.deloc_median = stats["delocalization"]["values"]["median_1"].get<double>();
                row.deloc_rate = stats["delocalization"]["values"]["rate_1"].get<double>();
            }
            if (stats.contains("concentration")) {
                row.sd1 = stats["concentration"]["values"]["sd_scaled_n1"].get<double>();
                row.sd2 = stats["concentration"]["values"]["sd_scaled_n2"].get<double>();
                row.sd3 = stats["concentration"]["values"]["sd_scaled_n3"].get<double>();
            }
            if (stats.contains("martingale_clt"))
                row.vn_mean = stats["martingale_clt"]["values"]["vn_mean_1"].get<double>();
            rows.push_back(row);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "summary %s is missing fields: %s\n", path.c_str(), e.what());
            return kExitConfig;
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const ReportRow& a, const ReportRow& b) { return a.n < b.n; });

    std::ostringstream csv;
    csv << "n,theta,replicates,deloc_median,deloc_rate,deloc_rate_ratio,"
           "sd_qf_n1,sd_qf_n2,sd_qf_n3,vn_mean\n";
    char line[512];
    std::printf("%6s %10s %6s %12s %12s %8s %10s %10s %10s %10s\n", "n", "theta", "R",
                "deloc_med", "deloc_rate", "ratio", "sd_qf1", "sd_qf2", "sd_qf3", "vn_mean");
    const double base_rate = rows.empty() ? NAN : rows.front().deloc_rate;
    for (const auto& r : rows) {
        const double ratio = r.deloc_rate / base_rate;
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n,
                      r.theta, r.replicates, r.deloc_median, r.deloc_rate, ratio, r.sd1, r.sd2,
                      r.sd3, r.vn_mean);
        csv << line;
        std::printf("%6.0f %10.1f %6.0f %12.6g %12.6g %8.3f %10.6g %10.6g %10.6g %10.6g\n", r.n,
                    r.theta, r.replicates, r.deloc_median, r.deloc_rate, ratio, r.sd1, r.sd2,
                    r.sd3, r.vn_mean);
    }
    if (!out_csv.empty()) write_text_file(out_csv, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spiked generalized-Wigner ensemble laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", report_csv;
    std::vector<std::string> report_dirs;
    int workers = 0;
    bool emit_samples = false;
    long long seed_override = -1;

    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("--config", config_path, "config file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--workers", workers, "worker threads (overrides config and env)");
    run_cmd->add_option("--master-seed", seed_override, "override the config master seed");
    run_cmd->add_flag("--samples", emit_samples, "emit raw per-replicate samples.csv");

    std::string theory_json;
    auto* theory_cmd = app.add_subcommand("theory", "print theory predictions, no sampling");
    theory_cmd->add_option("--config", config_path, "config file")->required();
    theory_cmd->add_option("--json", theory_json, "also write the flat JSON report here");

    auto* report_cmd = app.add_subcommand("report", "merge summaries into a cross-N table");
    report_cmd->add_option("dirs", report_dirs, "run directories or summary.json files")
        ->required();
    report_cmd->add_option("--csv", report_csv, "also write the table as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, out_dir, workers, emit_samples,
                                              seed_override);
        if (theory_cmd->parsed()) return cmd_theory(config_path, theory_json);
        if (report_cmd->parsed()) return cmd_report(report_dirs, report_csv);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return e.code() == Errc::eigen_solver_failure || e.code() == Errc::solve_failure
                   ? kExitSolver
                   : kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
