// SPDX-License-Identifier: Apache-2.0
//
// JSON encodings of the public value types. Restaurant labels are 1-based in
// every document; field order is fixed so output is stable for hashing.
#pragma once

#include "json.hpp"

#include "restaurant/certify.hpp"
#include "restaurant/cstrategy.hpp"
#include "restaurant/experiment.hpp"
#include "restaurant/game.hpp"
#include "restaurant/polarimeter.hpp"
#include "restaurant/qstrategy.hpp"

namespace restaurant {

using Json = nlohmann::ordered_json;

Json to_json(const GameSpec& g);
/// Accepts {gamma, k1?, k2?, prior?}; gamma is renormalized within 1e-6.
GameSpec game_from_json(const Json& j, std::string* warning = nullptr);

Json to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const Json& j);

Json to_json(const VerifyReport& r);

Json to_json(const ClassicalStrategy& cs);
Json to_json(const ClassicalOptimum& opt, const GameSpec& g);

/// Angles are written in degrees rounded to 4 decimals.
Json to_json(const PolarimeterConfig& cfg);
PolarimeterConfig config_from_json(const Json& j);

Json counts_to_json(const Counts& c);
Counts counts_from_json(const Json& j);

Json to_json(const NoiseModel& n);
Json to_json(const ExperimentResult& r);

Json to_json(const Certificate& c);
/// Restores the inputs embedded in a certificate (game, counts, z, bootstrap).
Certificate certificate_from_json(const Json& j);

Json matrix_to_json(const Eigen::Matrix3d& m);

}  // namespace restaurant
