// Copyright 2026 The SCP Authors
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

#include "scp/instance_io.h"

#include <fstream>
#include <stdexcept>

namespace scp {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

const json& Require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw std::invalid_argument(std::string("instance: missing field '") + key +
                                "'");
  }
  return doc.at(key);
}

UnigramCounts CountsFromJson(const json& arr) {
  UnigramCounts out;
  for (const json& pair : arr) {
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("instance: unigram entries are [word, count]");
    }
    out.emplace_back(pair[0].get<int>(), pair[1].get<double>());
  }
  return out;
}

json CountsToJson(const UnigramCounts& counts) {
  json arr = json::array();
  for (const auto& [word, count] : counts) arr.push_back({word, count});
  return arr;
}

std::shared_ptr<const Objective> ObjectiveFromJson(const json& obj) {
  const std::string type = Require(obj, "type").get<std::string>();
  if (type == "probabilistic_coverage") {
    return std::make_shared<ProbabilisticCoverage>(
        Require(obj, "success_prob").get<std::vector<std::vector<double>>>());
  }
  if (type == "unigram_coverage") {
    std::vector<UnigramCoverage::StateData> states;
    for (const json& st : Require(obj, "states")) {
      UnigramCoverage::StateData data;
      data.reference = CountsFromJson(Require(st, "reference"));
      for (const json& item : Require(st, "items")) {
        data.item_length.push_back(Require(item, "length").get<double>());
        data.item_unigrams.push_back(CountsFromJson(Require(item, "unigrams")));
      }
      states.push_back(std::move(data));
    }
    return std::make_shared<UnigramCoverage>(std::move(states),
                                             Require(obj, "budget").get<double>());
  }
  throw std::invalid_argument("instance: unknown objective type '" + type + "'");
}

json ObjectiveToJson(const Objective& obj) {
  if (const auto* pc = dynamic_cast<const ProbabilisticCoverage*>(&obj)) {
    return {{"type", "probabilistic_coverage"}, {"success_prob", pc->matrix()}};
  }
  if (const auto* uc = dynamic_cast<const UnigramCoverage*>(&obj)) {
    json states = json::array();
    for (const UnigramCoverage::StateData& st : uc->states()) {
      json items = json::array();
      for (size_t s = 0; s < st.item_unigrams.size(); ++s) {
        items.push_back({{"length", st.item_length[s]},
                         {"unigrams", CountsToJson(st.item_unigrams[s])}});
      }
      states.push_back(
          {{"reference", CountsToJson(st.reference)}, {"items", items}});
    }
    return {{"type", "unigram_coverage"},
            {"budget", uc->budget()},
            {"states", states}};
  }
  throw std::invalid_argument("instance: objective type cannot be serialized");
}

void CheckIds(const std::vector<int>& ids, int num_states, const char* name) {
  for (int id : ids) {
    if (id < 0 || id >= num_states) {
      throw std::invalid_argument(std::string("instance: split '") + name +
                                  "' has state id out of range");
    }
  }
}

}  // namespace

Instance InstanceFromJson(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("instance: not an object");
  if (doc.contains("format") && doc.at("format") != "scp-instance") {
    throw std::invalid_argument("instance: format is not scp-instance");
  }
  if (doc.contains("version") && doc.at("version").get<int>() != kFormatVersion) {
    throw std::invalid_argument("instance: unsupported version");
  }
  Instance out;
  try {
    out.objective = ObjectiveFromJson(Require(doc, "objective"));
    const int n_states = out.objective->num_states();
    const int n_items = out.objective->num_items();

    if (doc.contains("base_features")) {
      std::vector<Eigen::MatrixXd> tables;
      for (const json& state : doc.at("base_features")) {
        const auto rows = state.get<std::vector<std::vector<double>>>();
        const Eigen::Index cols = rows.empty() ? 0 : rows.front().size();
        Eigen::MatrixXd m(rows.size(), cols);
        for (size_t r = 0; r < rows.size(); ++r) {
          if (static_cast<Eigen::Index>(rows[r].size()) != cols) {
            throw std::invalid_argument("instance: ragged base feature rows");
          }
          for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        tables.push_back(std::move(m));
      }
      BaseFeatureTable table(std::move(tables));
      if (table.num_states() != n_states || table.num_items() != n_items) {
        throw std::invalid_argument(
            "instance: base_features shape differs from the objective");
      }
      out.base_features = std::move(table);
    }

    if (doc.contains("splits")) {
      const json& sp = doc.at("splits");
      StateSplits splits;
      splits.train = sp.value("train", std::vector<int>{});
      splits.validation = sp.value("validation", std::vector<int>{});
      splits.test = sp.value("test", std::vector<int>{});
      CheckIds(splits.train, n_states, "train");
      CheckIds(splits.validation, n_states, "validation");
      CheckIds(splits.test, n_states, "test");
      out.splits = std::move(splits);
    }
    if (doc.contains("metadata")) out.metadata = doc.at("metadata");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance: ") + e.what());
  }
  return out;
}

json InstanceToJson(const Instance& instance) {
  if (instance.objective == nullptr) {
    throw std::invalid_argument("instance has no objective");
  }
  json doc;
  doc["format"] = "scp-instance";
  doc["version"] = kFormatVersion;
  doc["objective"] = ObjectiveToJson(*instance.objective);
  if (instance.base_features.has_value()) {
    json states = json::array();
    const BaseFeatureTable& table = *instance.base_features;
    for (int x = 0; x < table.num_states(); ++x) {
      const Eigen::MatrixXd& m = table.state(x);
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
      }
      states.push_back(std::move(rows));
    }
    doc["base_features"] = std::move(states);
  }
  if (instance.splits.has_value()) {
    doc["splits"] = {{"train", instance.splits->train},
                     {"validation", instance.splits->validation},
                     {"test", instance.splits->test}};
  }
  doc["metadata"] = instance.metadata;
  return doc;
}

Instance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("cannot parse instance file " + path + ": " +
                             e.what());
  }
  return InstanceFromJson(doc);
}

void SaveInstance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << InstanceToJson(instance).dump(1) << '\n';
}

}  // namespace scp
