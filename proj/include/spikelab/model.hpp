#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/common.hpp"

namespace spikelab {

/// Signal function h on [0,1]. Built-ins are orthonormal in L2[0,1] and
/// Lipschitz; the grid discretization divided by sqrt(N) is a spike direction.
struct SignalFunction {
    std::function<double(double)> eval;
    double sup_norm = 1.0;
    std::optional<double> lipschitz;
    std::string name = "custom";

    double operator()(double x) const { return eval(x); }
};

SignalFunction make_constant_signal();
SignalFunction make_cosine_signal(int m);  // sqrt(2) cos(m pi x), m >= 1
SignalFunction make_pwl_signal(std::vector<double> xs, std::vector<double> ys);

/// Symmetric bounded nonnegative variance profile on [0,1]^2.
struct VarianceProfile {
    std::function<double(double, double)> eval;
    double sup_bound = 1.0;
    bool smooth = true;  // false selects the midpoint quadrature fallback
    std::string name = "custom";

    double operator()(double x, double y) const { return eval(x, y); }
};

VarianceProfile make_constant_profile(double value = 1.0);
VarianceProfile make_product_profile();  // f(x,y) = x*y
VarianceProfile make_affine_profile();   // f(x,y) = (1+x+y)/3
VarianceProfile make_pwl_profile(std::vector<double> knots,
                                 std::vector<std::vector<double>> values);

enum class EntryLawKind { gaussian, rademacher, uniform };

/// Entry law: mean zero, unit variance, E|X|^m <= m^{Bm}.
struct EntryLaw {
    EntryLawKind kind = EntryLawKind::gaussian;
    double moment_constant = 1.0;  // the B in the sub-exponential moment bound

    /// Exact absolute moment E|X|^m, closed form per law.
    double abs_moment(int m) const;
    /// Checks E|X|^m <= m^{Bm} for 1 <= m <= max_m.
    bool satisfies_moment_bound(int max_m = 8) const;
};

const char* entry_law_name(EntryLawKind kind);

/// Rank-k perturbation: theta * sum_i alpha_i e_i e_i'.
struct SpikeSpec {
    double theta = 1.0;
    std::vector<double> alphas;          // strictly decreasing, positive
    std::vector<SignalFunction> signals;

    int rank() const { return static_cast<int>(alphas.size()); }

    /// Throws Errc::non_decreasing_alphas unless alpha_1 > ... > alpha_k > 0.
    static SpikeSpec create(double theta, std::vector<double> alphas,
                            std::vector<SignalFunction> signals);
};

struct EnsembleSpec {
    int n = 0;
    VarianceProfile profile;
    EntryLaw law;
    SpikeSpec spike;
    double xi = 9.0;        // assumption A1 exponent, recorded only
    double theta_cap = 4.0; // upper-side A1 constant: require theta <= cap * n
};

enum class CheckStatus { satisfied, violated, waived };

const char* check_status_name(CheckStatus s);

struct ValidationItem {
    std::string check;
    CheckStatus status;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;

    bool ok() const;            // no violated item
    bool has_waived() const;    // any desk-scale waiver
    const ValidationItem* find(const std::string& check) const;
};

/// Checks assumptions A1-A3 plus structural invariants. Gross violations
/// (negative profile, inner products off by more than 10x the quadrature
/// tolerance) are hard errors; asymptotic conditions that cannot hold at desk
/// scale are reported as waived.
ValidationReport validate_spec(const EnsembleSpec& spec);

/// (1/n) sum_{l=1..n} h_a(l/n) h_b(l/n); equals e_a'e_b for the discretized
/// spike vectors.
double grid_inner_product(const SignalFunction& a, const SignalFunction& b, int n);

}  // namespace spikelab
