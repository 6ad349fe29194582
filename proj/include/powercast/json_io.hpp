#pragma once

#include "powercast/dist_sim.hpp"
#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace powercast {

using Json = nlohmann::ordered_json;

/// Scalars print as "num/den", or as rounded decimals when `decimal` is set.
struct ScalarFormat {
  std::optional<int> decimal;
};

Json scalar_json(const Scalar& v, const ScalarFormat& fmt = {});

/// {"node": name} | {"edge": [u, v], "offset": s} | {"x": s}
Json location_json(const Configuration& arena, const Location& loc, const ScalarFormat& fmt = {});
/// Accepts the same shapes; edge offsets are measured from the first listed endpoint.
Location parse_location(const Configuration& arena, const Json& j);

Json strategy_json(const Configuration& arena, const Strategy& s, const ScalarFormat& fmt = {});
Strategy parse_strategy(const Configuration& arena, const Json& doc);
Strategy load_strategy_file(const Configuration& arena, const std::string& path);

Json trace_json(const Configuration& arena, const Trace& tr, const ScalarFormat& fmt = {});

/// The event log is included only when `with_log` is set.
Json outcome_json(const Configuration& arena, const DistOutcome& o, bool with_log, const ScalarFormat& fmt = {});

}  // namespace powercast
