#pragma once

#include <json.hpp>

#include "edgeelim/instance.hpp"

namespace edgeelim {

void to_json(nlohmann::json& j, const GaussianComponent& g);
void from_json(const nlohmann::json& j, GaussianComponent& g);
void to_json(nlohmann::json& j, const DensitySpec& spec);
void from_json(const nlohmann::json& j, DensitySpec& spec);

}  // namespace edgeelim
