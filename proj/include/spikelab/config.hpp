#pragma once

#include <string>

#include "spikelab/montecarlo.hpp"

namespace spikelab {

/// Parses the JSON experiment config. All defaults are applied and the
/// resolved config is stored back into the returned object so a run is
/// self-describing. Throws Errc::config_error with a specific message.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Deterministic serialization of a summary; excludes anything that can vary
/// between runs (timing, worker count).
std::string summary_to_json(const ExperimentSummary& summary);

/// Manifest: resolved config, hash, timing, workers. Not reproducible by
/// design (carries timestamps).
std::string manifest_to_json(const ExperimentConfig& config, const std::string& config_path,
                             int workers, double seconds);

/// One row per replicate, one column per raw statistic, 17 significant
/// digits, locale independent.
std::string samples_to_csv(const ExperimentSummary& summary);

/// FNV-1a over the canonical resolved config text.
uint64_t config_hash(const ExperimentConfig& config);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace spikelab
