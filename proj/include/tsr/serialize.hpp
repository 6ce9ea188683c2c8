#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tsr/corr.hpp"
#include "tsr/posterior.hpp"
#include "tsr/priors.hpp"
#include "tsr/simharness.hpp"

namespace tsr {

using json = nlohmann::ordered_json;

/// FNV-1a 64-bit hash; stable across platforms, used for config digests.
std::uint64_t fnv1a64(std::string_view s);

/// Lower-case 16-character hex rendering.
std::string hex64(std::uint64_t v);

json to_json(const CorrelationModel& model);
json to_json(const PriorSpec& prior);
json to_json(const SamplerConfig& config);
json to_json(const ScenarioConfig& config);

/// Digest of a canonical (key-ordered, compact) JSON dump.
std::string config_digest(const json& j);

}  // namespace tsr
