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


#ifndef LARYNGO_TOOLS_COMMANDS_HPP_
#define LARYNGO_TOOLS_COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "run_config.hpp"

namespace laryngo::cli {

namespace fs = std::filesystem;

struct HighlightsArgs {
  fs::path audio, frames, out;
  std::optional<fs::path> detections, masks, scores;
};

struct GeometryArgs {
  fs::path masks, out;
};

struct ClassifyArgs {
  std::vector<fs::path> vfdyn;
  fs::path out;
};

struct SynthArgs {
  std::optional<fs::path> spec;
  std::optional<std::string> kind;
  fs::path out;
};

struct ExportArgs {
  fs::path highlights, audio, masks, out;
  std::optional<fs::path> labels;
};

struct AnalyzeArgs {
  fs::path audio, frames, masks, out;
  std::optional<fs::path> detections, scores;
};

// Each command writes its outputs plus effective_config.json into `out` and
// returns a short summary for stdout.
nlohmann::json cmd_highlights(const HighlightsArgs& args, RunConfig cfg);
nlohmann::json cmd_geometry(const GeometryArgs& args, RunConfig cfg);
nlohmann::json cmd_classify_side(const ClassifyArgs& args, RunConfig cfg);
nlohmann::json cmd_synth(const SynthArgs& args, RunConfig cfg, bool seed_given);
nlohmann::json cmd_export_features(const ExportArgs& args, RunConfig cfg);
nlohmann::json cmd_analyze(const AnalyzeArgs& args, RunConfig cfg);

}  // namespace laryngo::cli

#endif  // LARYNGO_TOOLS_COMMANDS_HPP_
