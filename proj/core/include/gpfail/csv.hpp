#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gpfail/sequencer.hpp"
#include "gpfail/studies.hpp"

namespace gpfail {

// Shortest representation that round-trips a double exactly.
std::string fmt_double(double v);

// (step, coordinates, value, alpha_hat, alpha_plugin); the alpha columns
// read "nan" for the initial-design rows, where no estimate is recorded.
void write_trace_csv(const std::string& path, const RunTrace& trace);

// Key-value sidecar, one "key = value" line per entry.
void write_meta(const std::string& path,
                const std::vector<std::pair<std::string, std::string>>& entries);

void write_ngamma_csv(const std::string& path, const FourBranchReport& report);

// rmse_db of -infinity (all estimates exact) is written as "exact".
void write_rmse_csv(const std::string& path, const GpPathReport& report);

void write_scores_csv(const std::string& path, const StepScores& scores);

void write_posterior_csv(const std::string& path, const MCSample& sample,
                         const PosteriorSummary& summary);

}  // namespace gpfail
