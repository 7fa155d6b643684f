#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace spikelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Errc {
    non_decreasing_alphas,
    non_orthonormal_signals,
    negative_profile,
    dimension_mismatch,
    eigen_solver_failure,
    solve_failure,
    identical_indices,
    degenerate_samples,
    config_error,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

/// 64-bit finalizer used to derive independent per-replicate seeds.
uint64_t splitmix64(uint64_t x);

/// Seed for replicate `index` under `master_seed`. Stable across platforms.
uint64_t replicate_seed(uint64_t master_seed, uint64_t index);

}  // namespace spikelab
