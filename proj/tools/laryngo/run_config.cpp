// Copyright (c) 2026 The laryngo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "run_config.hpp"

#include "laryngo/error.hpp"
#include "laryngo/io.hpp"

namespace laryngo::cli {

std::string channel_name(video::HsvChannel c) {
  switch (c) {
    case video::HsvChannel::H: return "H";
    case video::HsvChannel::S: return "S";
    case video::HsvChannel::V: return "V";
  }
  return "V";
}

video::HsvChannel channel_from_name(const std::string& name) {
  if (name == "H" || name == "h") return video::HsvChannel::H;
  if (name == "S" || name == "s") return video::HsvChannel::S;
  if (name == "V" || name == "v") return video::HsvChannel::V;
  throw Error(ErrorCode::BadConfig, "unknown HSV channel '" + name + "'");
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  const nlohmann::json doc = read_json(path);
  if (!doc.is_object()) throw Error(ErrorCode::BadConfig, path.string() + ": expected an object");
  try {
    if (doc.contains("kws")) {
      nlohmann::json merged = kws;
      merged.update(doc["kws"]);
      kws = merged.get<audio::KwsConfig>();
    }
    if (doc.contains("geometry")) {
      nlohmann::json merged = geometry;
      merged.update(doc["geometry"]);
      geometry = merged.get<geometry::GeometryConfig>();
    }
    if (doc.contains("presence")) {
      const auto& p = doc["presence"];
      presence.confidence_threshold = p.value("confidence_threshold", presence.confidence_threshold);
      presence.min_area = p.value("min_area", presence.min_area);
    }
    if (doc.contains("strobe")) {
      const auto& s = doc["strobe"];
      eps_empty = s.value("eps_empty", eps_empty);
      if (s.contains("channel")) channel = channel_from_name(s["channel"].get<std::string>());
    }
    if (doc.contains("highlights"))
      min_highlight_s = doc["highlights"].value("min_len_s", min_highlight_s);
    if (doc.contains("uvfp")) delta = doc["uvfp"].value("delta", delta);
    if (doc.contains("fps") && !doc["fps"].is_null()) fps = doc["fps"].get<double>();
    if (doc.contains("threshold") && !doc["threshold"].is_null())
      threshold = doc["threshold"].get<double>();
    seed = doc.value("seed", seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, path.string() + ": " + e.what());
  }
  kws.validate();
  geometry.validate();
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& [role, path] : inputs) in[role] = path;
  return {{"command", command},
          {"inputs", in},
          {"kws", kws},
          {"geometry", geometry},
          {"presence",
           {{"confidence_threshold", presence.confidence_threshold},
            {"min_area", presence.min_area}}},
          {"strobe", {{"eps_empty", eps_empty}, {"channel", channel_name(channel)}}},
          {"highlights", {{"min_len_s", min_highlight_s}}},
          {"uvfp", {{"delta", delta}}},
          {"fps", fps ? nlohmann::json(*fps) : nlohmann::json(nullptr)},
          {"threshold", threshold ? nlohmann::json(*threshold) : nlohmann::json(nullptr)},
          {"seed", seed}};
}

}  // namespace laryngo::cli
