// SPDX-License-Identifier: Apache-2.0
//
// Embedded JSON schemas for every document the CLI reads or writes, and a
// validator for the subset of JSON Schema they use: type, enum, properties,
// required, additionalProperties, items, minItems, maxItems, minimum,
// maximum and local $ref.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "restaurant/serialization.hpp"

namespace restaurant::schema {

/// Schema names: game, quantum_strategy, verify_report, classical_result,
/// polarimeter_config, counts, experiment_result, certificate, repro_report.
std::vector<std::string> names();

/// The schema with shared definitions inlined; throws InvalidInput for an unknown name.
Json get(std::string_view name);

/// Human-readable violations, each prefixed with a JSON pointer; empty if valid.
std::vector<std::string> violations(const Json& doc, std::string_view name);

/// Throws InvalidInput listing the first violations.
void validate(const Json& doc, std::string_view name);

}  // namespace restaurant::schema
