#include "spikelab/config.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace spikelab {

namespace {

using nlohmann::ordered_json;

double parse_theta(const nlohmann::json& j, int n) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        // "n", "2n", "0.5n": multiples of the matrix size.
        std::string s = j.get<std::string>();
        if (!s.empty() && s.back() == 'n') {
            const std::string head = s.substr(0, s.size() - 1);
            const double c = head.empty() ? 1.0 : std::stod(head);
            return c * n;
        }
    }
    throw Error(Errc::config_error, "theta must be a number or '<c>n'");
}

SignalFunction parse_signal(const nlohmann::json& j) {
    const std::string family = j.value("family", "const");
    if (family == "const") return make_constant_signal();
    if (family == "cos") return make_cosine_signal(j.value("m", 1));
    if (family == "pwl")
        return make_pwl_signal(j.at("xs").get<std::vector<double>>(),
                               j.at("ys").get<std::vector<double>>());
    throw Error(Errc::config_error, "unknown signal family '" + family + "'");
}

VarianceProfile parse_profile(const nlohmann::json& j) {
    const std::string family = j.value("family", "const");
    if (family == "const") return make_constant_profile(j.value("value", 1.0));
    if (family == "xy") return make_product_profile();
    if (family == "affine") return make_affine_profile();
    if (family == "pwl")
        return make_pwl_profile(j.at("knots").get<std::vector<double>>(),
                                j.at("values").get<std::vector<std::vector<double>>>());
    throw Error(Errc::config_error, "unknown profile family '" + family + "'");
}

EntryLaw parse_law(const nlohmann::json& j) {
    EntryLaw law;
    const std::string kind = j.value("kind", "gaussian");
    if (kind == "gaussian")
        law.kind = EntryLawKind::gaussian;
    else if (kind == "rademacher")
        law.kind = EntryLawKind::rademacher;
    else if (kind == "uniform")
        law.kind = EntryLawKind::uniform;
    else
        throw Error(Errc::config_error, "unknown entry law '" + kind + "'");
    law.moment_constant = j.value("moment_constant", 1.0);
    return law;
}

uint64_t parse_seed(const nlohmann::json& j) {
    if (j.is_number_unsigned()) return j.get<uint64_t>();
    if (j.is_number_integer()) return uint64_t(j.get<int64_t>());
    if (j.is_string()) return std::stoull(j.get<std::string>());
    throw Error(Errc::config_error, "master_seed must be an integer or string");
}

ordered_json thresholds_json(const Thresholds& t) {
    ordered_json j;
    j["resolvent_rel_tol"] = t.resolvent_rel_tol;
    j["identity_rel_tol"] = t.identity_rel_tol;
    j["eigen_var_band"] = t.eigen_var_band;
    j["align_var_band"] = t.align_var_band;
    j["mart_var_band"] = t.mart_var_band;
    j["ortho_var_band"] = t.ortho_var_band;
    j["field_var_band"] = t.field_var_band;
    j["ks_min_p"] = t.ks_min_p;
    j["mean_gap_slack"] = t.mean_gap_slack;
    j["vn_band"] = t.vn_band;
    j["tightness_max_factor"] = t.tightness_max_factor;
    j["tightness_spread_max"] = t.tightness_spread_max;
    j["hneg_tail_ratio_max"] = t.hneg_tail_ratio_max;
    j["hneg_exponent"] = t.hneg_exponent;
    j["first_order_band"] = t.first_order_band;
    j["moment_bound_factor"] = t.moment_bound_factor;
    return j;
}

void parse_thresholds(const nlohmann::json& j, Thresholds& t) {
    t.resolvent_rel_tol = j.value("resolvent_rel_tol", t.resolvent_rel_tol);
    t.identity_rel_tol = j.value("identity_rel_tol", t.identity_rel_tol);
    t.eigen_var_band = j.value("eigen_var_band", t.eigen_var_band);
    t.align_var_band = j.value("align_var_band", t.align_var_band);
    t.mart_var_band = j.value("mart_var_band", t.mart_var_band);
    t.ortho_var_band = j.value("ortho_var_band", t.ortho_var_band);
    t.field_var_band = j.value("field_var_band", t.field_var_band);
    t.ks_min_p = j.value("ks_min_p", t.ks_min_p);
    t.mean_gap_slack = j.value("mean_gap_slack", t.mean_gap_slack);
    t.vn_band = j.value("vn_band", t.vn_band);
    t.tightness_max_factor = j.value("tightness_max_factor", t.tightness_max_factor);
    t.tightness_spread_max = j.value("tightness_spread_max", t.tightness_spread_max);
    t.hneg_tail_ratio_max = j.value("hneg_tail_ratio_max", t.hneg_tail_ratio_max);
    t.hneg_exponent = j.value("hneg_exponent", t.hneg_exponent);
    t.first_order_band = j.value("first_order_band", t.first_order_band);
    t.moment_bound_factor = j.value("moment_bound_factor", t.moment_bound_factor);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(Errc::config_error, std::string("config is not valid JSON: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        const auto& je = j.at("ensemble");
        cfg.ensemble.n = je.at("n").get<int>();
        if (cfg.ensemble.n < 2) throw Error(Errc::config_error, "ensemble.n must be >= 2");
        cfg.ensemble.profile = parse_profile(je.value("profile", nlohmann::json::object()));
        cfg.ensemble.law = parse_law(je.value("law", nlohmann::json::object()));
        cfg.ensemble.xi = je.value("xi", 9.0);
        cfg.ensemble.theta_cap = je.value("theta_cap", 4.0);

        const auto& js = je.at("spike");
        std::vector<SignalFunction> signals;
        for (const auto& sig : js.at("signals")) signals.push_back(parse_signal(sig));
        cfg.ensemble.spike =
            SpikeSpec::create(parse_theta(js.at("theta"), cfg.ensemble.n),
                              js.at("alphas").get<std::vector<double>>(), std::move(signals));

        cfg.replicates = j.value("replicates", 100);
        if (cfg.replicates < 1) throw Error(Errc::config_error, "replicates must be >= 1");
        cfg.master_seed = j.contains("master_seed") ? parse_seed(j["master_seed"]) : 1;
        for (const auto& name : j.value("statistics", std::vector<std::string>{}))
            cfg.statistics.push_back(statistic_from_name(name));

        if (j.contains("grid")) {
            const auto& jg = j["grid"];
            cfg.grid.points_1d = jg.value("points_1d", cfg.grid.points_1d);
            cfg.grid.points_2d = jg.value("points_2d", cfg.grid.points_2d);
            cfg.grid.points_3d = jg.value("points_3d", cfg.grid.points_3d);
            const std::string rule = jg.value("rule", "simpson");
            if (rule == "simpson")
                cfg.grid.rule = QuadRule::simpson;
            else if (rule == "midpoint")
                cfg.grid.rule = QuadRule::midpoint;
            else
                throw Error(Errc::config_error, "unknown quadrature rule '" + rule + "'");
        }
        cfg.workers = j.value("workers", 0);
        cfg.field_max_mode = j.value("field_max_mode", 32);
        if (j.contains("thresholds")) parse_thresholds(j["thresholds"], cfg.thresholds);

        // Canonical resolved text: original structure with defaults filled in.
        ordered_json r;
        r["ensemble"]["n"] = cfg.ensemble.n;
        r["ensemble"]["profile"] = je.value("profile", nlohmann::json::object({{"family", "const"}}));
        r["ensemble"]["law"]["kind"] = entry_law_name(cfg.ensemble.law.kind);
        r["ensemble"]["law"]["moment_constant"] = cfg.ensemble.law.moment_constant;
        r["ensemble"]["spike"]["theta"] = cfg.ensemble.spike.theta;
        r["ensemble"]["spike"]["alphas"] = cfg.ensemble.spike.alphas;
        r["ensemble"]["spike"]["signals"] = js.at("signals");
        r["ensemble"]["xi"] = cfg.ensemble.xi;
        r["ensemble"]["theta_cap"] = cfg.ensemble.theta_cap;
        r["replicates"] = cfg.replicates;
        r["master_seed"] = std::to_string(cfg.master_seed);
        {
            std::vector<std::string> names;
            for (Statistic s : cfg.statistics) names.push_back(statistic_name(s));
            r["statistics"] = names;
        }
        r["grid"]["rule"] = cfg.grid.rule == QuadRule::simpson ? "simpson" : "midpoint";
        r["grid"]["points_1d"] = cfg.grid.points_1d;
        r["grid"]["points_2d"] = cfg.grid.points_2d;
        r["grid"]["points_3d"] = cfg.grid.points_3d;
        r["workers"] = cfg.workers;
        r["field_max_mode"] = cfg.field_max_mode;
        r["thresholds"] = thresholds_json(cfg.thresholds);
        cfg.resolved_json = r.dump(2);
        return cfg;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(Errc::config_error, e.what());
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    return parse_config(read_text_file(path));
}

std::string summary_to_json(const ExperimentSummary& summary) {
    ordered_json j;
    for (const auto& [k, v] : summary.meta) j["meta"][k] = v;
    j["meta"]["master_seed"] = summary.master_seed_text;
    j["all_pass"] = summary.all_pass;
    for (const auto& s : summary.stats) {
        ordered_json js;
        js["pass"] = s.pass;
        for (const auto& [k, v] : s.values) js["values"][k] = v;
        for (const auto& [k, v] : s.theory) js["theory"][k] = v;
        j["statistics"][s.name] = js;
    }
    return j.dump(2) + "\n";
}

std::string manifest_to_json(const ExperimentConfig& config, const std::string& config_path,
                             int workers, double seconds) {
    ordered_json j;
    j["config_path"] = config_path;
    char hash_text[32];
    std::snprintf(hash_text, sizeof hash_text, "%016" PRIx64, config_hash(config));
    j["config_hash"] = hash_text;
    j["master_seed"] = std::to_string(config.master_seed);
    j["workers"] = workers;
    j["duration_seconds"] = seconds;
    const auto now = std::chrono::system_clock::now();
    j["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    j["artifact_version"] = "0.1.0";
    j["resolved_config"] = nlohmann::ordered_json::parse(config.resolved_json);
    return j.dump(2) + "\n";
}

std::string samples_to_csv(const ExperimentSummary& summary) {
    std::ostringstream os;
    os << "replicate";
    for (const auto& name : summary.sample_names) os << "," << name;
    os << "\n";
    char buf[64];
    for (size_t r = 0; r < summary.samples.size(); ++r) {
        os << r;
        for (double v : summary.samples[r]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << "," << buf;
        }
        os << "\n";
    }
    return os.str();
}

uint64_t config_hash(const ExperimentConfig& config) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : config.resolved_json) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    out << text;
    if (!out.good()) throw Error(Errc::io_error, "short write to " + path);
}

}  // namespace spikelab
