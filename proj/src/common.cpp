#include "spikelab/common.hpp"

namespace spikelab {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::non_decreasing_alphas: return "NonDecreasingAlphas";
        case Errc::non_orthonormal_signals: return "NonOrthonormalSignals";
        case Errc::negative_profile: return "NegativeProfile";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::eigen_solver_failure: return "EigenSolverFailure";
        case Errc::solve_failure: return "SolveFailure";
        case Errc::identical_indices: return "IdenticalIndices";
        case Errc::degenerate_samples: return "DegenerateSamples";
        case Errc::config_error: return "ConfigError";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t replicate_seed(uint64_t master_seed, uint64_t index) {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace spikelab
