#include "boostray/model_io.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>

#include <json.hpp>

#include "boostray/errors.hpp"

namespace boostray {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) throw FormatError(std::string("expected an object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

double real_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t int_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) {
    throw FormatError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::size_t count_field(const json& obj, const char* key) {
  const auto v = int_field(obj, key);
  if (v < 0) throw FormatError(std::string("field '") + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::int32_t index_field(const json& obj, const char* key) {
  const auto v = int_field(obj, key);
  if (v < -1 || v > INT32_MAX) throw FormatError(std::string("field '") + key + "' out of range");
  return static_cast<std::int32_t>(v);
}

ordered_json tree_to_json(const RegressionTree& tree) {
  ordered_json nodes = ordered_json::array();
  for (const auto& n : tree.nodes()) {
    ordered_json node;
    node["feature"] = n.feature;
    node["threshold"] = n.threshold;
    node["left"] = n.left;
    node["right"] = n.right;
    node["weight"] = n.weight;
    node["gain"] = n.gain;
    nodes.push_back(std::move(node));
  }
  ordered_json out;
  out["nodes"] = std::move(nodes);
  return out;
}

RegressionTree tree_from_json(const json& obj) {
  const json& nodes = field(obj, "nodes");
  if (!nodes.is_array()) throw FormatError("tree 'nodes' must be an array");
  std::vector<TreeNode> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) {
    out.push_back(TreeNode{index_field(n, "feature"), real_field(n, "threshold"),
                           index_field(n, "left"), index_field(n, "right"),
                           real_field(n, "weight"), real_field(n, "gain")});
  }
  return RegressionTree(std::move(out));
}

}  // namespace

std::string model_to_json(const BoostModel& model) {
  ordered_json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["objective"]["kind"] = std::string(to_string(model.objective().kind));
  doc["objective"]["n_classes"] = model.objective().n_classes;
  const HyperParams& p = model.params();
  doc["params"]["num_rounds"] = p.num_rounds;
  doc["params"]["eta"] = p.eta;
  doc["params"]["gamma"] = p.gamma;
  doc["params"]["lambda"] = p.lambda;
  doc["params"]["max_depth"] = p.max_depth;
  doc["params"]["min_child_weight"] = p.min_child_weight;
  doc["base_margin"] = model.base_margin();
  doc["n_features"] = model.n_features();
  doc["class_names"] = model.class_names();
  ordered_json rounds = ordered_json::array();
  for (const auto& round : model.trees()) {
    ordered_json group = ordered_json::array();
    for (const auto& tree : round) group.push_back(tree_to_json(tree));
    rounds.push_back(std::move(group));
  }
  doc["trees"] = std::move(rounds);
  return doc.dump() + "\n";
}

BoostModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("model document must be a JSON object");
  const auto version = int_field(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model format_version " + std::to_string(version));
  }

  try {
    const json& obj = field(doc, "objective");
    const json& kind = field(obj, "kind");
    if (!kind.is_string()) throw FormatError("objective kind must be a string");
    ObjectiveSpec objective{objective_kind_from_string(kind.get<std::string>()),
                            count_field(obj, "n_classes")};

    const json& pj = field(doc, "params");
    HyperParams params;
    params.num_rounds = count_field(pj, "num_rounds");
    params.eta = real_field(pj, "eta");
    params.gamma = real_field(pj, "gamma");
    params.lambda = real_field(pj, "lambda");
    params.max_depth = count_field(pj, "max_depth");
    params.min_child_weight = real_field(pj, "min_child_weight");

    const double base_margin = real_field(doc, "base_margin");
    const std::size_t n_features = count_field(doc, "n_features");

    const json& names = field(doc, "class_names");
    if (!names.is_array()) throw FormatError("class_names must be an array");
    std::vector<std::string> class_names;
    for (const auto& name : names) {
      if (!name.is_string()) throw FormatError("class names must be strings");
      class_names.push_back(name.get<std::string>());
    }

    const json& rounds = field(doc, "trees");
    if (!rounds.is_array()) throw FormatError("trees must be an array of rounds");
    std::vector<std::vector<RegressionTree>> trees;
    trees.reserve(rounds.size());
    for (const auto& round : rounds) {
      if (!round.is_array()) throw FormatError("each round must be an array of trees");
      std::vector<RegressionTree> group;
      for (const auto& tree : round) group.push_back(tree_from_json(tree));
      trees.push_back(std::move(group));
    }
    return BoostModel(objective, params, base_margin, n_features, std::move(class_names),
                      std::move(trees));
  } catch (const ConfigurationError& e) {
    throw FormatError(std::string("invalid model: ") + e.what());
  }
}

void save_model(const BoostModel& model, const std::filesystem::path& path) {
  const std::string text = model_to_json(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

BoostModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace boostray
