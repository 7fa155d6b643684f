#pragma once

#include <functional>

#include "spikelab/common.hpp"

namespace spikelab {

enum class QuadRule { midpoint, simpson };

/// Tensor-product quadrature over [0,1]^d. points_* is the number of
/// subintervals per axis (forced even for Simpson).
struct QuadratureGrid {
    int points_1d = 512;
    int points_2d = 256;
    int points_3d = 128;
    QuadRule rule = QuadRule::simpson;

    QuadratureGrid refined() const {
        QuadratureGrid g = *this;
        g.points_1d *= 2;
        g.points_2d *= 2;
        g.points_3d *= 2;
        return g;
    }
};

double integrate_1d(const std::function<double(double)>& f, const QuadratureGrid& grid);
double integrate_2d(const std::function<double(double, double)>& f, const QuadratureGrid& grid);
double integrate_3d(const std::function<double(double, double, double)>& f,
                    const QuadratureGrid& grid);

}  // namespace spikelab
