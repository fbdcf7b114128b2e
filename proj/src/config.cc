// Copyright 2026 The HoGS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <string>

#include "hogs/errors.h"
#include "hogs/pipeline.h"
#include "hogs/text_io.h"

namespace hogs {
namespace {

template <typename T>
T number(std::string_view key, std::string_view value) {
  T out{};
  if (!text::parse_number(text::trim(value), out)) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool boolean(std::string_view key, std::string_view value) {
  const std::string_view v = text::trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const std::string v(text::trim(value));
  if (key == "features") {
    cfg.features_path = v;
  } else if (key == "edges") {
    cfg.edges_path = v;
  } else if (key == "labels") {
    cfg.labels_path = v;
  } else if (key == "dataset_dir") {
    cfg.dataset_dir = v;
  } else if (key == "epsilon") {
    cfg.epsilon = number<double>(key, v);
  } else if (key == "delta") {
    cfg.delta = number<double>(key, v);
  } else if (key == "tau") {
    cfg.tau = number<double>(key, v);
  } else if (key == "l") {
    cfg.l = number<int>(key, v);
  } else if (key == "variant") {
    cfg.variant = parse_variant(v);
  } else if (key == "public_features") {
    cfg.public_features = boolean(key, v);
  } else if (key == "seed") {
    cfg.master_seed = number<std::uint64_t>(key, v);
  } else if (key == "repeats") {
    cfg.repeats = number<int>(key, v);
  } else if (key == "lr") {
    cfg.gnn.learning_rate = number<double>(key, v);
  } else if (key == "weight_decay") {
    cfg.gnn.weight_decay = number<double>(key, v);
  } else if (key == "dropout") {
    cfg.gnn.dropout = number<double>(key, v);
  } else if (key == "hidden") {
    cfg.gnn.hidden_dim = number<std::size_t>(key, v);
  } else if (key == "max_epochs") {
    cfg.gnn.max_epochs = number<int>(key, v);
  } else if (key == "patience") {
    cfg.gnn.patience = number<int>(key, v);
  } else if (key == "block_rows") {
    cfg.block_rows = number<std::size_t>(key, v);
  } else if (key == "threads") {
    cfg.threads = number<unsigned>(key, v);
  } else if (key == "split") {
    const auto parts = text::split(v, ",");
    if (parts.size() != 3) throw ConfigError("split expects 'train,validation,test'");
    cfg.split = {number<double>(key, parts[0]), number<double>(key, parts[1]),
                 number<double>(key, parts[2])};
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in = text::open_input(path);
  std::string raw;
  std::size_t number_of_line = 0;
  while (std::getline(in, raw)) {
    ++number_of_line;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(path.string(), number_of_line, "expected 'key = value'");
    }
    try {
      apply_setting(base, text::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ParseError(path.string(), number_of_line, e.what());
    }
  }
  // Relative dataset paths are resolved against the config file's directory.
  const auto dir = path.parent_path();
  for (auto* p : {&base.features_path, &base.edges_path, &base.labels_path, &base.dataset_dir}) {
    if (!p->empty() && p->is_relative()) *p = dir / *p;
  }
  return base;
}

}  // namespace hogs
