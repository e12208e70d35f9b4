#pragma once

#include "robustna/ftap.hpp"
#include "robustna/market.hpp"
#include "robustna/noarb.hpp"
#include "robustna/pstar.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace robustna {

using Json = nlohmann::ordered_json;

std::string tool_version();

Json point_json(const Point& p);
Json selection_json(const ScenarioTree& tree, const KernelSelection& selection);
Json strategy_json(const ScenarioTree& tree, const Strategy& strategy);
Json measure_json(const ScenarioTree& tree, const MartingaleMeasure& measure);

/// Verdicts, per-node records and certificates. Every report starts with the
/// tool version, the command and the input digest.
Json check_report(const ScenarioTree& tree, const std::string& digest);
Json constants_report(const ScenarioTree& tree, const std::string& digest);
Json pstar_report(const ScenarioTree& tree, const std::string& digest);
Json martingale_report(const ScenarioTree& tree, const std::string& digest);
Json arbitrage_report(const ScenarioTree& tree, const std::string& digest);

/// Throws Error naming the first missing or mistyped field.
void check_report_schema(const Json& report);

}  // namespace robustna
