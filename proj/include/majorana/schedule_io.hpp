#pragma once

// JSON form of a ControlSchedule. Frequencies are written in Hz (Omega / 2 pi)
// and converted back to rad/s on load, so a round trip is exact to a few ulp.

#include "majorana/errors.hpp"
#include "majorana/linalg.hpp"
#include "majorana/waveforms.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace majorana {

inline nlohmann::json schedule_to_json(const ControlSchedule& s) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& seg : s.segments()) {
    nlohmann::json j;
    j["kind"] = to_string(segment_kind(seg));
    j["duration_s"] = segment_duration(seg);
    if (const auto* c = std::get_if<ConstantSegment>(&seg)) {
      j["rabi_half_hz"] = c->rabi_half / kTwoPi;
      j["phase_rad"] = c->phase;
      j["detuning_half_hz"] = c->detuning_half / kTwoPi;
    } else {
      const auto& b = std::get<BlackmanSegment>(seg);
      j["omega0_hz"] = b.omega0 / kTwoPi;
      j["delta0_hz"] = b.delta0 / kTwoPi;
      j["t_omega_s"] = b.t_omega;
      j["t_delta_s"] = b.t_delta;
    }
    segs.push_back(std::move(j));
  }
  return {{"segments", segs}};
}

inline ControlSchedule schedule_from_json(const nlohmann::json& doc) {
  std::vector<Segment> segs;
  try {
    for (const auto& j : doc.at("segments")) {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "square" || kind == "hold") {
        ConstantSegment c;
        c.kind = kind == "square" ? SegmentKind::Square : SegmentKind::Hold;
        c.duration = j.at("duration_s").get<double>();
        c.rabi_half = j.at("rabi_half_hz").get<double>() * kTwoPi;
        c.phase = j.at("phase_rad").get<double>();
        c.detuning_half = j.at("detuning_half_hz").get<double>() * kTwoPi;
        segs.emplace_back(c);
      } else if (kind == "blackman_forward" || kind == "blackman_reverse") {
        BlackmanSegment b;
        b.omega0 = j.at("omega0_hz").get<double>() * kTwoPi;
        b.delta0 = j.at("delta0_hz").get<double>() * kTwoPi;
        b.t_omega = j.at("t_omega_s").get<double>();
        b.t_delta = j.at("t_delta_s").get<double>();
        b.reversed = kind == "blackman_reverse";
        if (j.contains("duration_s") && j.at("duration_s").get<double>() != b.t_delta) {
          throw InvalidArgument("schedule JSON: blackman duration_s must equal t_delta_s");
        }
        segs.emplace_back(b);
      } else {
        throw LookupError("schedule JSON: unknown segment kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("schedule JSON: ") + e.what());
  }
  return ControlSchedule(std::move(segs));
}

}  // namespace majorana
