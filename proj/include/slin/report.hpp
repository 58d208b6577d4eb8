#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "slin/checker.hpp"

namespace slin {

/// Plain-text report: a summary line, then every failing execution with its
/// recorded final state and the closest witness found. With `verbose`, passing
/// executions are listed with their witnesses too.
std::string render_text(const CheckReport& report, std::span<const RecordedExecution> execs,
                        const StateDomain& object_domain, const StateDomain& spec_domain,
                        bool verbose = false);

/// One record per execution: verdict, note, completion, witness (history line
/// format) and the witness's legal final states.
nlohmann::json to_json(const CheckReport& report, const StateDomain& spec_domain);

}  // namespace slin
