#pragma once

#include <string>

#include "gpfail/sequencer.hpp"
#include "gpfail/studies.hpp"
#include "json.hpp"

namespace gpfail::cli {

nlohmann::json load_json_file(const std::string& path);

// Named objectives for config files: "one_d", "four_branch",
// "four_branch_neg" (negated, for excursion-below-zero setups).
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

CriterionConfig parse_criterion(const nlohmann::json& j);

// Presets for the --criterion override: sur1..sur4, timse, ech, rb, maximin.
CriterionConfig parse_criterion_name(const std::string& name);

enum class StudyKind { FourBranch, GpPaths };

StudyKind parse_study_kind(const nlohmann::json& j);
FourBranchStudySpec parse_four_branch_spec(const nlohmann::json& j,
                                           bool paper_scale);
GpPathStudySpec parse_gp_path_spec(const nlohmann::json& j, bool paper_scale);

}  // namespace gpfail::cli
