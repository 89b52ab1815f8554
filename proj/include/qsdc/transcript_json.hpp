#pragma once

#include <string>

#include "qsdc/sim.hpp"

#include "json.hpp"

namespace qsdc {

/// Structured transcript export with top-level keys `params`, `rounds_summary`,
/// `valid_indices`, `assignment`, `matched`, `bits`, `report`. Raw per-round
/// data is large and only emitted when dump_rounds is set (requires a
/// materialized transcript).
nlohmann::json transcript_to_json(const SimTranscript& transcript, bool dump_rounds = false);

nlohmann::json report_to_json(const EstimationReport& report);

nlohmann::json params_to_json(const ChannelParams& params);

/// Canonical serialization used for byte-identical comparisons.
std::string transcript_to_string(const SimTranscript& transcript, bool dump_rounds = false);

}  // namespace qsdc
