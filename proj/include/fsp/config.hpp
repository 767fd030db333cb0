#ifndef FSP_CONFIG_HPP
#define FSP_CONFIG_HPP

#include <string>

#include "fsp/trainer.hpp"

namespace fsp {

// Parses the JSON run configuration. Every key is optional and falls back
// to its default; unknown keys are config errors. Dimension fields left at
// 0 are bound from the dataset at run start.
RunConfig parse_run_config(const std::string& json_text);

// Canonical JSON echo of a config (sorted keys, all fields explicit), as
// embedded in manifests and reports.
std::string run_config_to_json(const RunConfig& rc);

}  // namespace fsp

#endif
