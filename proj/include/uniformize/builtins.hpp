#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "uniformize/domain.hpp"

namespace uniformize {

/// Named level functions accepted in domain specs:
/// disk, square, ring, kidney, dumbbell, annulus_bump, saddle,
/// halfplane_cap, custom-sampled.
LevelFunction make_level_function(const std::string& expr, const nlohmann::json& params);

std::vector<std::string> builtin_level_names();

}  // namespace uniformize
