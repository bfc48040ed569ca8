// SPDX-License-Identifier: Apache-2.0
//
// Reference values for the ten experimentally played games, transcribed by
// hand into data/reference_games.json and compiled into the library.
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "restaurant/game.hpp"

namespace restaurant {

struct ReferenceGame {
  int index = 0;  // 1-based
  Prob3 gamma{};
  double eps_c = 0.0;
  double eps_q_ideal = 0.0;
  double eps_q_noisy = 0.0;
  Prob3 p_noisy{};
  std::array<Eigen::Vector3d, 3> encodings;          // as printed, not renormalized
  std::array<std::array<double, 3>, 3> u1_angles{};  // state preparation, degrees
  std::array<double, 3> mo_weights{};
  std::array<double, 3> u2_angles{};
};

struct ReferenceData {
  std::string note;
  int version = 0;
  double k1 = 0.0;
  double k2 = 0.0;
  double ppbs_reflection_ratio = 0.0;
  std::array<double, 3> u3_angles{};
  std::vector<ReferenceGame> games;
};

/// The embedded copy, parsed once.
const ReferenceData& reference_data();

/// Parses a document with the layout of data/reference_games.json.
ReferenceData parse_reference_data(std::string_view text);

/// Raw embedded text.
std::string_view reference_json_text();

}  // namespace restaurant
