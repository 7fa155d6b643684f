#include "spikelab/quadrature.hpp"

#include <vector>

namespace spikelab {

namespace {

// Nodes and weights on [0,1] for one axis. Simpson needs an even number of
// subintervals; weights sum to 1.
void axis_rule(QuadRule rule, int m, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.clear();
    weights.clear();
    if (m < 2) m = 2;
    if (rule == QuadRule::midpoint) {
        const double h = 1.0 / m;
        for (int i = 0; i < m; ++i) {
            nodes.push_back((i + 0.5) * h);
            weights.push_back(h);
        }
    } else {
        if (m % 2) ++m;
        const double h = 1.0 / m;
        for (int i = 0; i <= m; ++i) {
            nodes.push_back(i * h);
            double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            weights.push_back(w * h / 3.0);
        }
    }
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, const QuadratureGrid& grid) {
    std::vector<double> x, w;
    axis_rule(grid.rule, grid.points_1d, x, w);
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) sum += w[i] * f(x[i]);
    return sum;
}

double integrate_2d(const std::function<double(double, double)>& f, const QuadratureGrid& grid) {
    std::vector<double> x, w;
    axis_rule(grid.rule, grid.points_2d, x, w);
    const size_t m = x.size();
    std::vector<double> rows(m, 0.0);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(m); ++i) {
        double row = 0.0;
        for (size_t j = 0; j < m; ++j) row += w[j] * f(x[i], x[j]);
        rows[i] = w[i] * row;
    }
    double sum = 0.0;
    for (size_t i = 0; i < m; ++i) sum += rows[i];
    return sum;
}

double integrate_3d(const std::function<double(double, double, double)>& f,
                    const QuadratureGrid& grid) {
    std::vector<double> x, w;
    axis_rule(grid.rule, grid.points_3d, x, w);
    const size_t m = x.size();
    std::vector<double> slabs(m, 0.0);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(m); ++i) {
        double slab = 0.0;
        for (size_t j = 0; j < m; ++j) {
            double row = 0.0;
            for (size_t l = 0; l < m; ++l) row += w[l] * f(x[i], x[j], x[l]);
            slab += w[j] * row;
        }
        slabs[i] = w[i] * slab;
    }
    double sum = 0.0;
    for (size_t i = 0; i < m; ++i) sum += slabs[i];
    return sum;
}

}  // namespace spikelab
