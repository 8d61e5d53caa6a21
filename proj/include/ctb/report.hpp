#pragma once

#include <string>

#include <json.hpp>

namespace ctb {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Assembles the standard report envelope: config echo, derived parameters
/// (with clamp/override provenance), metrics, wall clock, version.
nlohmann::json make_report(const std::string& command,
                           nlohmann::json config, nlohmann::json derived,
                           nlohmann::json metrics, double wall_clock_sec);

/// Writes text through a temp file in the same directory plus rename, so a
/// killed run never leaves a partial file at the destination.
void write_text_atomic(const std::string& path, const std::string& text);

void write_json_atomic(const std::string& path, const nlohmann::json& j);

}  // namespace ctb
