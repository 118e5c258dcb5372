// Copyright 2026 The noiseswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <filesystem>

#include "noiseswitch/cli.hpp"

namespace noiseswitch::cli {

namespace fs = std::filesystem;

std::vector<CatalogEntry> list_experiments(const std::string& config_dir) {
  std::vector<CatalogEntry> out;
  if (!fs::is_directory(config_dir)) return out;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.path().extension() != ".cfg") continue;
    const ExperimentConfig c = load_config(entry.path().string());
    out.push_back({c.name, c.anchor, c.description, entry.path().string()});
  }
  std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return out;
}

}  // namespace noiseswitch::cli
