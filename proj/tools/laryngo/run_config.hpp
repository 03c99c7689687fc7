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


// Merged configuration of one CLI run: defaults, then --config, then flags.
// Serialized into every output directory as effective_config.json.

#ifndef LARYNGO_TOOLS_RUN_CONFIG_HPP_
#define LARYNGO_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "laryngo/audio.hpp"
#include "laryngo/fold_geometry.hpp"
#include "laryngo/uvfp.hpp"
#include "laryngo/video.hpp"

namespace laryngo::cli {

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> inputs;  // role -> path as given
  audio::KwsConfig kws;
  geometry::GeometryConfig geometry;
  video::PresenceConfig presence;
  double eps_empty = video::kDefaultEmptyEps;
  video::HsvChannel channel = video::HsvChannel::V;
  double min_highlight_s = 0.5;
  double delta = uvfp::kDefaultDelta;
  std::optional<double> fps;        // overrides video.json
  std::optional<double> threshold;  // overrides the active scorer threshold
  std::uint64_t seed = 0;

  /// Sections: kws, geometry, presence, strobe, highlights, uvfp.
  void merge_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

std::string channel_name(video::HsvChannel c);
video::HsvChannel channel_from_name(const std::string& name);

}  // namespace laryngo::cli

#endif  // LARYNGO_TOOLS_RUN_CONFIG_HPP_
