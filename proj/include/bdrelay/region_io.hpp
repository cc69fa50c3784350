#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "bdrelay/rate_region.hpp"

namespace bdrelay {

/// Shortest-safe text form of a double: 17 significant digits.
std::string format_double(double v);

/// `r_a,r_b` header followed by one vertex per row in vertex order.
std::string region_to_csv(const RateRegion& region);
RateRegion region_from_csv(std::string_view text);

/// Array of [r_a, r_b] pairs.
nlohmann::json region_to_json(const RateRegion& region);
RateRegion region_from_json(const nlohmann::json& j);

}  // namespace bdrelay
