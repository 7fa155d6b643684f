#include "spikelab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spikelab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Grid used by validate_spec for inner products and bound checks.
constexpr int kValidationGrid = 4096;

// Riemann-sum tolerance for |<h_i,h_j> - delta_ij| when both Lipschitz
// constants are known: C/n with C = 4(L_i s_j + L_j s_i + s_i s_j).
double inner_product_tolerance(const SignalFunction& a, const SignalFunction& b, int n) {
    if (a.lipschitz && b.lipschitz) {
        const double c = 4.0 * (*a.lipschitz * b.sup_norm + *b.lipschitz * a.sup_norm +
                                a.sup_norm * b.sup_norm);
        return c / n;
    }
    return 1e-2;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

SignalFunction make_constant_signal() {
    SignalFunction h;
    h.eval = [](double) { return 1.0; };
    h.sup_norm = 1.0;
    h.lipschitz = 0.0;
    h.name = "const";
    return h;
}

SignalFunction make_cosine_signal(int m) {
    if (m < 1) throw Error(Errc::config_error, "cosine signal needs m >= 1");
    SignalFunction h;
    const double s = std::sqrt(2.0);
    h.eval = [m, s](double x) { return s * std::cos(m * kPi * x); };
    h.sup_norm = s;
    h.lipschitz = s * m * kPi;
    h.name = "cos(" + std::to_string(m) + ")";
    return h;
}

SignalFunction make_pwl_signal(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw Error(Errc::config_error, "piecewise-linear signal needs matching xs/ys, size >= 2");
    if (xs.front() != 0.0 || xs.back() != 1.0 || !std::is_sorted(xs.begin(), xs.end()))
        throw Error(Errc::config_error, "piecewise-linear knots must be sorted over [0,1]");
    double sup = 0.0, lip = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sup = std::max(sup, std::abs(ys[i]));
        if (i > 0 && xs[i] > xs[i - 1])
            lip = std::max(lip, std::abs(ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
    }
    SignalFunction h;
    h.eval = [xs = std::move(xs), ys = std::move(ys)](double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return ys.front();
        if (it == xs.end()) return ys.back();
        const size_t i = static_cast<size_t>(it - xs.begin());
        const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + t * (ys[i] - ys[i - 1]);
    };
    h.sup_norm = sup;
    h.lipschitz = lip;
    h.name = "pwl";
    return h;
}

VarianceProfile make_constant_profile(double value) {
    if (value < 0.0) throw Error(Errc::negative_profile, "constant profile value " + fmt(value));
    VarianceProfile f;
    f.eval = [value](double, double) { return value; };
    f.sup_bound = value;
    f.smooth = true;
    f.name = value == 1.0 ? "const" : "const(" + fmt(value) + ")";
    return f;
}

VarianceProfile make_product_profile() {
    VarianceProfile f;
    f.eval = [](double x, double y) { return x * y; };
    f.sup_bound = 1.0;
    f.smooth = true;
    f.name = "xy";
    return f;
}

VarianceProfile make_affine_profile() {
    VarianceProfile f;
    f.eval = [](double x, double y) { return (1.0 + x + y) / 3.0; };
    f.sup_bound = 1.0;
    f.smooth = true;
    f.name = "affine";
    return f;
}

VarianceProfile make_pwl_profile(std::vector<double> knots,
                                 std::vector<std::vector<double>> values) {
    const size_t m = knots.size();
    if (m < 2 || values.size() != m)
        throw Error(Errc::config_error, "pwl profile needs a square value table over the knots");
    if (knots.front() != 0.0 || knots.back() != 1.0 || !std::is_sorted(knots.begin(), knots.end()))
        throw Error(Errc::config_error, "pwl profile knots must be sorted over [0,1]");
    double sup = 0.0;
    for (size_t i = 0; i < m; ++i) {
        if (values[i].size() != m)
            throw Error(Errc::config_error, "pwl profile value table is not square");
        for (size_t j = 0; j < m; ++j) {
            if (values[i][j] < 0.0)
                throw Error(Errc::negative_profile, "pwl profile table entry < 0");
            if (std::abs(values[i][j] - values[j][i]) > 1e-12)
                throw Error(Errc::config_error, "pwl profile table is not symmetric");
            sup = std::max(sup, values[i][j]);
        }
    }
    VarianceProfile f;
    f.eval = [knots = std::move(knots), values = std::move(values)](double x, double y) {
        auto cell = [&](double t) {
            auto it = std::upper_bound(knots.begin(), knots.end(), t);
            size_t i = it == knots.begin() ? 1 : static_cast<size_t>(it - knots.begin());
            if (i >= knots.size()) i = knots.size() - 1;
            const double w = (t - knots[i - 1]) / (knots[i] - knots[i - 1]);
            return std::pair<size_t, double>(i, std::clamp(w, 0.0, 1.0));
        };
        const auto [ix, wx] = cell(x);
        const auto [iy, wy] = cell(y);
        const double v00 = values[ix - 1][iy - 1], v10 = values[ix][iy - 1];
        const double v01 = values[ix - 1][iy], v11 = values[ix][iy];
        return (1 - wx) * (1 - wy) * v00 + wx * (1 - wy) * v10 + (1 - wx) * wy * v01 +
               wx * wy * v11;
    };
    f.sup_bound = sup;
    f.smooth = false;
    f.name = "pwl";
    return f;
}

double EntryLaw::abs_moment(int m) const {
    switch (kind) {
        case EntryLawKind::gaussian:
            // E|Z|^m = 2^{m/2} Gamma((m+1)/2) / sqrt(pi)
            return std::pow(2.0, m / 2.0) * std::tgamma((m + 1) / 2.0) /
                   std::sqrt(3.14159265358979323846);
        case EntryLawKind::rademacher:
            return 1.0;
        case EntryLawKind::uniform:
            // X = sqrt(3) U[-1,1]: E|X|^m = 3^{m/2} / (m+1)
            return std::pow(3.0, m / 2.0) / (m + 1);
    }
    return 0.0;
}

bool EntryLaw::satisfies_moment_bound(int max_m) const {
    for (int m = 1; m <= max_m; ++m)
        if (abs_moment(m) > std::pow(double(m), moment_constant * m) + 1e-12) return false;
    return true;
}

const char* entry_law_name(EntryLawKind kind) {
    switch (kind) {
        case EntryLawKind::gaussian: return "gaussian";
        case EntryLawKind::rademacher: return "rademacher";
        case EntryLawKind::uniform: return "uniform";
    }
    return "unknown";
}

SpikeSpec SpikeSpec::create(double theta, std::vector<double> alphas,
                            std::vector<SignalFunction> signals) {
    if (alphas.empty() || alphas.size() != signals.size())
        throw Error(Errc::config_error, "spike needs matching alphas and signals");
    if (theta <= 0.0) throw Error(Errc::config_error, "theta must be positive");
    for (size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] <= 0.0 || (i > 0 && alphas[i] >= alphas[i - 1]))
            throw Error(Errc::non_decreasing_alphas,
                        "alphas must satisfy a_1 > a_2 > ... > a_k > 0");
    }
    SpikeSpec s;
    s.theta = theta;
    s.alphas = std::move(alphas);
    s.signals = std::move(signals);
    return s;
}

bool ValidationReport::ok() const {
    return std::none_of(items.begin(), items.end(),
                        [](const ValidationItem& it) { return it.status == CheckStatus::violated; });
}

bool ValidationReport::has_waived() const {
    return std::any_of(items.begin(), items.end(),
                       [](const ValidationItem& it) { return it.status == CheckStatus::waived; });
}

const ValidationItem* ValidationReport::find(const std::string& check) const {
    for (const auto& it : items)
        if (it.check == check) return &it;
    return nullptr;
}

const char* check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::satisfied: return "satisfied";
        case CheckStatus::violated: return "violated";
        case CheckStatus::waived: return "waived";
    }
    return "unknown";
}

double grid_inner_product(const SignalFunction& a, const SignalFunction& b, int n) {
    if (n < 1) throw Error(Errc::config_error, "grid_inner_product needs n >= 1");
    double sum = 0.0;
    for (int l = 1; l <= n; ++l) {
        const double x = double(l) / n;
        sum += a(x) * b(x);
    }
    return sum / n;
}

ValidationReport validate_spec(const EnsembleSpec& spec) {
    ValidationReport rep;
    const int k = spec.spike.rank();
    const int g = kValidationGrid;

    // Structure: matrix size versus rank.
    rep.items.push_back({"rank_vs_size",
                         spec.n >= 2 * k ? CheckStatus::satisfied : CheckStatus::violated,
                         "n=" + std::to_string(spec.n) + ", k=" + std::to_string(k)});

    // Profile: nonnegative, bounded by sup_bound, symmetric on a grid.
    {
        double min_v = 0.0, max_dev = 0.0, max_asym = 0.0;
        const int gp = 128;
        for (int i = 0; i <= gp; ++i) {
            for (int j = i; j <= gp; ++j) {
                const double x = double(i) / gp, y = double(j) / gp;
                const double v = spec.profile(x, y);
                min_v = std::min(min_v, v);
                max_dev = std::max(max_dev, v - spec.profile.sup_bound);
                max_asym = std::max(max_asym, std::abs(v - spec.profile(y, x)));
            }
        }
        if (min_v < -1e-12)
            throw Error(Errc::negative_profile, "profile attains " + fmt(min_v) + " < 0");
        rep.items.push_back({"profile_bounds",
                             max_dev <= 1e-12 ? CheckStatus::satisfied : CheckStatus::violated,
                             "max excess over sup_bound " + fmt(max_dev)});
        rep.items.push_back({"profile_symmetry",
                             max_asym <= 1e-12 ? CheckStatus::satisfied : CheckStatus::violated,
                             "max |f(x,y)-f(y,x)| " + fmt(max_asym)});
    }

    // A2: orthonormality of the signal family.
    {
        CheckStatus status = CheckStatus::satisfied;
        std::string detail;
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) {
                const double ip = grid_inner_product(spec.spike.signals[i], spec.spike.signals[j], g);
                const double dev = std::abs(ip - (i == j ? 1.0 : 0.0));
                const double tol =
                    inner_product_tolerance(spec.spike.signals[i], spec.spike.signals[j], g);
                if (dev > 10.0 * tol)
                    throw Error(Errc::non_orthonormal_signals,
                                "<h_" + std::to_string(i + 1) + ",h_" + std::to_string(j + 1) +
                                    "> deviates by " + fmt(dev) + " (tol " + fmt(tol) + ")");
                if (dev > tol) {
                    status = CheckStatus::violated;
                    detail = "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") deviation " + fmt(dev);
                }
            }
        }
        rep.items.push_back({"a2_orthonormal", status, detail});
    }

    // A3: bounds and Lipschitz continuity on sampled pairs.
    {
        CheckStatus bound_status = CheckStatus::satisfied;
        CheckStatus lip_status = CheckStatus::satisfied;
        for (int i = 0; i < k; ++i) {
            const auto& h = spec.spike.signals[i];
            double prev = h(0.0);
            for (int l = 1; l <= g; ++l) {
                const double x = double(l) / g;
                const double v = h(x);
                if (std::abs(v) > h.sup_norm + 1e-12) bound_status = CheckStatus::violated;
                if (h.lipschitz && std::abs(v - prev) > *h.lipschitz / g + 1e-12)
                    lip_status = CheckStatus::violated;
                prev = v;
            }
        }
        rep.items.push_back({"signal_bounds", bound_status, ""});
        rep.items.push_back({"a3_lipschitz", lip_status, ""});
    }

    // Entry law moment condition, checked numerically for m <= 8.
    rep.items.push_back({"moment_condition",
                         spec.law.satisfies_moment_bound(8) ? CheckStatus::satisfied
                                                            : CheckStatus::violated,
                         std::string("law ") + entry_law_name(spec.law.kind)});

    // A1 upper side: theta <= cap * n.
    rep.items.push_back({"a1_upper",
                         spec.spike.theta <= spec.theta_cap * spec.n ? CheckStatus::satisfied
                                                                     : CheckStatus::violated,
                         "theta=" + fmt(spec.spike.theta) + ", cap*n=" +
                             fmt(spec.theta_cap * spec.n)});

    // A1 lower side: sqrt(N)(log N)^xi <= theta cannot hold literally at desk
    // scale, so theta >= sqrt(N) is accepted with a waiver flag.
    {
        const double root_n = std::sqrt(double(spec.n));
        const double literal = root_n * std::pow(std::log(double(spec.n)), spec.xi);
        CheckStatus status;
        if (spec.spike.theta >= literal)
            status = CheckStatus::satisfied;
        else if (spec.spike.theta >= root_n)
            status = CheckStatus::waived;
        else
            status = CheckStatus::violated;
        rep.items.push_back({"a1_lower", status,
                             "theta=" + fmt(spec.spike.theta) + ", sqrt(N)=" + fmt(root_n) +
                                 ", literal bound=" + fmt(literal)});
    }

    // Outlier separation guard: theta (a_i - a_{i+1}) > 10 sqrt(N). Rank-order
    // matching of outliers to spikes is unsafe without it.
    if (k >= 2) {
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < k; ++i)
            min_gap = std::min(min_gap,
                               spec.spike.theta * (spec.spike.alphas[i] - spec.spike.alphas[i + 1]));
        const double need = 10.0 * std::sqrt(double(spec.n));
        rep.items.push_back({"spike_separation",
                             min_gap > need ? CheckStatus::satisfied : CheckStatus::violated,
                             "min theta*gap=" + fmt(min_gap) + ", need > " + fmt(need)});
    }

    return rep;
}

}  // namespace spikelab
