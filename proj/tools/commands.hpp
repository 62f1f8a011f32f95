#pragma once

#include <string>

#include "scifit/pipeline.hpp"
#include "scifit/synth.hpp"

namespace scifit::cli {

// Exit codes shared by every subcommand: 0 success, 1 fatal input error,
// 2 partial analytic failure.
inline constexpr int kOk = 0;
inline constexpr int kFatal = 1;
inline constexpr int kPartial = 2;

int cmd_ingest(const PipelineConfig& config);
int cmd_fitness(const PipelineConfig& config);
int cmd_sector_fitness(const PipelineConfig& config, const std::string& root);
int cmd_metrics(const PipelineConfig& config);
int cmd_synth(const PipelineConfig& config, const SynthParams& params);
int cmd_export(const PipelineConfig& config, const std::string& stage, const std::string& measure);

}  // namespace scifit::cli
