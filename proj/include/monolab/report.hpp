#pragma once

#include "monolab/verdict.hpp"

#include <json.hpp>

#include <string>

namespace monolab::report {

/// Canonical JSON: objects with sorted keys, floats at 17 significant
/// digits, no whitespace. Byte-identical for identical inputs.
std::string canonical_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const Verdict& v);

/// FNV-1a 64-bit over the raw bytes, rendered as fnv1a:<hex>.
std::string content_hash(const std::string& text);

extern const char* kSchemaVersion; // "monolab-report/1"
extern const char* kToolVersion;

} // namespace monolab::report
