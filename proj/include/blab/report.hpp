#pragma once

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace blab::report {

using Json = nlohmann::ordered_json;

/// Serializes with every floating-point number printed at 17 significant
/// digits (round-trip exact for binary64), so identical runs diff clean.
std::string dumpJson(const Json& j, int indent = 2);

std::string formatDouble(double v);

/// "generated_at" is the one non-deterministic report field; comparisons
/// strip it.
std::string timestampUtc();

}  // namespace blab::report
