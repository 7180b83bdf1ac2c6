// instance_io.hpp
//
// JSON instance and delegation documents.
//
//   instance:   {"n": 7, "accuracies": [...], "edges": [[i, j], ...],
//                "ids": [...]?, "meta": {...}?}
//   delegation: {"choice": [...]}
//
// When "ids" is present, edges and delegation choices are written in terms
// of those external labels (e.g. 1-based voter numbers); otherwise they are
// 0-based positions.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>
#include "liquid/model.hpp"

namespace liquid {

struct Instance {
  SocialNetwork network;
  std::vector<std::int64_t> ids;  // empty: positions are the ids
  nlohmann::json meta = nlohmann::json::object();

  friend bool operator==(const Instance&, const Instance&) = default;
};

namespace detail {

class IdMap {
 public:
  IdMap(const std::vector<std::int64_t>& ids, std::size_t n) : ids_(ids), n_(n) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!index_.emplace(ids[i], i).second) {
        throw Error("duplicate voter id " + std::to_string(ids[i]));
      }
    }
  }

  Voter to_index(std::int64_t id) const {
    if (ids_.empty()) {
      if (id < 0 || static_cast<std::uint64_t>(id) >= n_) {
        throw Error("dangling endpoint " + std::to_string(id));
      }
      return static_cast<Voter>(id);
    }
    auto it = index_.find(id);
    if (it == index_.end()) throw Error("dangling endpoint " + std::to_string(id));
    return it->second;
  }

  std::int64_t to_id(Voter v) const {
    return ids_.empty() ? static_cast<std::int64_t>(v) : ids_[v];
  }

 private:
  const std::vector<std::int64_t>& ids_;
  std::size_t n_;
  std::unordered_map<std::int64_t, Voter> index_;
};

inline nlohmann::json parse_document(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error("malformed document: expected a JSON object");
  }
  return doc;
}

}  // namespace detail

inline Instance load_instance(std::string_view text) {
  const auto doc = detail::parse_document(text);
  try {
    const auto n = doc.at("n").get<std::int64_t>();
    if (n < 0) throw Error("malformed document: negative n");
    auto accuracies = doc.at("accuracies").get<std::vector<double>>();
    if (accuracies.size() != static_cast<std::size_t>(n)) {
      throw Error("malformed document: accuracies length differs from n");
    }
    for (double p : accuracies) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error("accuracy out of range");
    }
    Instance inst;
    if (doc.contains("ids")) {
      inst.ids = doc.at("ids").get<std::vector<std::int64_t>>();
      if (inst.ids.size() != accuracies.size()) {
        throw Error("malformed document: ids length differs from n");
      }
    }
    detail::IdMap map(inst.ids, accuracies.size());
    std::vector<Arc> arcs;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw Error("malformed document: edge must be a pair");
      }
      arcs.emplace_back(map.to_index(e[0].get<std::int64_t>()),
                        map.to_index(e[1].get<std::int64_t>()));
    }
    if (doc.contains("meta")) inst.meta = doc.at("meta");
    inst.network = SocialNetwork(std::move(accuracies), std::move(arcs));
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed document: ") + e.what());
  }
}

inline std::string save_instance(const Instance& inst) {
  const auto& net = inst.network;
  detail::IdMap map(inst.ids, net.size());
  nlohmann::json doc;
  doc["n"] = net.size();
  doc["accuracies"] = net.accuracies();
  auto edges = nlohmann::json::array();
  for (const auto& [i, j] : net.arcs()) {
    edges.push_back({map.to_id(i), map.to_id(j)});
  }
  doc["edges"] = std::move(edges);
  if (!inst.ids.empty()) doc["ids"] = inst.ids;
  if (!inst.meta.empty()) doc["meta"] = inst.meta;
  return doc.dump(1) + "\n";
}

inline Delegation load_delegation(std::string_view text,
                                  const Instance& inst) {
  const auto doc = detail::parse_document(text);
  detail::IdMap map(inst.ids, inst.network.size());
  try {
    std::vector<Voter> choice;
    for (const auto& c : doc.at("choice")) {
      choice.push_back(map.to_index(c.get<std::int64_t>()));
    }
    return Delegation(std::move(choice));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed document: ") + e.what());
  }
}

inline nlohmann::json delegation_json(const Delegation& d, const Instance& inst) {
  detail::IdMap map(inst.ids, inst.network.size());
  auto choice = nlohmann::json::array();
  for (Voter v = 0; v < d.size(); ++v) choice.push_back(map.to_id(d[v]));
  return nlohmann::json{{"choice", std::move(choice)}};
}

}  // namespace liquid
