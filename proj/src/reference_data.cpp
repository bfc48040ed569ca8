// SPDX-License-Identifier: Apache-2.0
#include "restaurant/reference_data.hpp"

#include "json.hpp"

#include "restaurant/error.hpp"

namespace restaurant {

namespace {

template <std::size_t N>
std::array<double, N> arr(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != N) throw Error(ErrorKind::InvalidInput, "reference data: wrong array length");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<double>();
  return out;
}

}  // namespace

ReferenceData parse_reference_data(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ReferenceData d;
    d.note = j.at("note").get<std::string>();
    d.version = j.at("version").get<int>();
    d.k1 = j.at("k1").get<double>();
    d.k2 = j.at("k2").get<double>();
    d.ppbs_reflection_ratio = j.at("ppbs_reflection_ratio").get<double>();
    d.u3_angles = arr<3>(j.at("u3_angles"));
    for (const auto& g : j.at("games")) {
      ReferenceGame r;
      r.index = g.at("index").get<int>();
      r.gamma = arr<3>(g.at("gamma"));
      r.eps_c = g.at("eps_c").get<double>();
      r.eps_q_ideal = g.at("eps_q_ideal").get<double>();
      r.eps_q_noisy = g.at("eps_q_noisy").get<double>();
      r.p_noisy = arr<3>(g.at("p_noisy"));
      for (int k = 0; k < 3; ++k) {
        const auto e = arr<3>(g.at("encodings").at(k));
        r.encodings[k] = {e[0], e[1], e[2]};
        r.u1_angles[k] = arr<3>(g.at("u1_angles").at(k));
      }
      r.mo_weights = arr<3>(g.at("mo_weights"));
      r.u2_angles = arr<3>(g.at("u2_angles"));
      d.games.push_back(r);
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("reference data: ") + e.what());
  }
}

const ReferenceData& reference_data() {
  static const ReferenceData data = parse_reference_data(reference_json_text());
  return data;
}

}  // namespace restaurant
