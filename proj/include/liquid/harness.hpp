// harness.hpp
//
// Batch experiments: for every sweep point, graph replicate and accuracy
// replicate, generate an instance, hand every method the quantized
// accuracies, and score the result with the true ones. Rows come out in
// cell order regardless of which worker finishes first.
#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>
#include "liquid/generators.hpp"
#include "liquid/methods.hpp"
#include "liquid/paths.hpp"
#include "liquid/probability.hpp"

namespace liquid {

struct Measures {
  std::size_t nb_gurus = 0;
  double avg_distance = 0.0;  // hops in G from each voter to her guru
  double avg_accuracy = 0.0;  // guru accuracies weighted by represented voters
};

inline Measures measure(const SocialNetwork& net, const Delegation& d) {
  const auto profile = guru_profile(net, d);
  const auto root = guru_of(d);
  const std::size_t n = net.size();
  Measures m;
  m.nb_gurus = profile.gurus.size();
  if (n == 0) return m;
  std::vector<std::vector<Voter>> followers(n);
  for (Voter v = 0; v < n; ++v) {
    if (root[v] != v) followers[root[v]].push_back(v);
  }
  double distance = 0.0, accuracy = 0.0;
  for (const auto& g : profile.gurus) {
    accuracy += static_cast<double>(g.weight) * net.accuracy(g.voter);
    if (followers[g.voter].empty()) continue;
    const auto dist = hops_to(net, g.voter);
    for (Voter v : followers[g.voter]) distance += static_cast<double>(dist[v]);
  }
  m.avg_distance = distance / static_cast<double>(n);
  m.avg_accuracy = accuracy / static_cast<double>(n);
  return m;
}

struct ExperimentConfig {
  GraphModel model = GraphModel::kGnm;
  std::vector<std::size_t> sizes{11};
  double m_factor = 4.0;            // gnm: m = round(m_factor * n) ...
  std::vector<std::size_t> m_values;  // ... unless explicit edge counts are swept
  std::size_t ba_m = 2;
  std::size_t ws_k = 2;
  double ws_p = 0.1;
  AccuracyModel accuracy;
  std::vector<Method> methods{Method::kDirect};
  std::size_t graph_reps = 10;
  std::size_t acc_reps = 5;
  std::uint64_t seed = 1;
  StrategyParams params;
  unsigned threads = 0;  // 0: hardware concurrency
  bool record_runtime = true;

  void check() const {
    if (sizes.empty()) throw Error("experiment sweep is empty");
    if (graph_reps < 1 || acc_reps < 1) throw Error("replicate counts must be >= 1");
    if (methods.empty()) throw Error("experiment has no methods");
    if (!(m_factor >= 0.0)) throw Error("m_factor must be non-negative");
    accuracy.check();
    params.check();
  }
};

struct ResultRow {
  std::string method;
  std::string model;
  std::size_t n = 0;
  std::size_t m = 0;  // undirected edges of the generated graph
  std::size_t graph_rep = 0;
  std::size_t acc_rep = 0;
  double score = 0.0;
  std::size_t nb_gurus = 0;
  double avg_distance = 0.0;
  double avg_accuracy = 0.0;
  double runtime_s = 0.0;
  std::string error;  // non-empty for a failed cell
};

inline std::string_view graph_model_name(GraphModel m) {
  switch (m) {
    case GraphModel::kGnm:
      return "gnm";
    case GraphModel::kBarabasiAlbert:
      return "ba";
    case GraphModel::kWattsStrogatz:
      return "ws";
  }
  return "unknown";
}

inline GraphModel parse_graph_model(std::string_view name) {
  if (name == "gnm") return GraphModel::kGnm;
  if (name == "ba") return GraphModel::kBarabasiAlbert;
  if (name == "ws") return GraphModel::kWattsStrogatz;
  throw Error("unknown graph model '" + std::string(name) + "'");
}

// Config document, see README for the schema.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  try {
    if (doc.contains("model")) cfg.model = parse_graph_model(doc["model"].get<std::string>());
    if (doc.contains("n")) {
      const auto& n = doc["n"];
      cfg.sizes.clear();
      if (n.is_array()) {
        cfg.sizes = n.get<std::vector<std::size_t>>();
      } else if (n.is_object()) {
        const auto from = n.at("from").get<std::size_t>();
        const auto to = n.at("to").get<std::size_t>();
        const auto step = n.value("step", std::size_t{1});
        if (step == 0) throw Error("sweep step must be positive");
        for (std::size_t v = from; v <= to; v += step) cfg.sizes.push_back(v);
      } else {
        cfg.sizes.push_back(n.get<std::size_t>());
      }
    }
    cfg.m_factor = doc.value("m_factor", cfg.m_factor);
    if (doc.contains("m")) cfg.m_values = doc["m"].get<std::vector<std::size_t>>();
    cfg.ba_m = doc.value("ba_m", cfg.ba_m);
    cfg.ws_k = doc.value("ws_k", cfg.ws_k);
    cfg.ws_p = doc.value("ws_p", cfg.ws_p);
    if (doc.contains("prec")) {
      if (doc["prec"].is_null()) {
        cfg.accuracy.prec.reset();
      } else {
        cfg.accuracy.prec = doc["prec"].get<double>();
      }
    }
    if (doc.contains("accuracy_mixture")) {
      cfg.accuracy.components.clear();
      for (const auto& c : doc["accuracy_mixture"]) {
        cfg.accuracy.components.push_back(
            {c.at("weight").get<double>(), c.at("mean").get<double>(), c.at("sd").get<double>()});
      }
    }
    if (doc.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : doc["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
    }
    cfg.graph_reps = doc.value("graph_reps", cfg.graph_reps);
    cfg.acc_reps = doc.value("acc_reps", cfg.acc_reps);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.params.epsilon = doc.value("epsilon", cfg.params.epsilon);
    cfg.params.greedy_cap_alpha = doc.value("alpha", cfg.params.greedy_cap_alpha);
    cfg.threads = doc.value("threads", cfg.threads);
    cfg.record_runtime = doc.value("record_runtime", cfg.record_runtime);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed config: ") + e.what());
  }
  cfg.check();
  return cfg;
}

inline constexpr const char* kCsvHeader =
    "method,model,n,m,graph_rep,acc_rep,score,nb_gurus,avg_distance,avg_accuracy,runtime_s";

inline std::string csv_line(const ResultRow& r) {
  char buf[256];
  if (!r.error.empty()) {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%zu,%zu,nan,nan,nan,nan,nan", r.method.c_str(),
                  r.model.c_str(), r.n, r.m, r.graph_rep, r.acc_rep);
  } else {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%zu,%zu,%.12f,%zu,%.12f,%.12f,%.3f",
                  r.method.c_str(), r.model.c_str(), r.n, r.m, r.graph_rep, r.acc_rep, r.score,
                  r.nb_gurus, r.avg_distance, r.avg_accuracy, r.runtime_s);
  }
  return buf;
}

struct ExperimentCell {
  std::size_t n;
  std::size_t m_param;  // gnm edge count or barabasi-albert attachments
  std::size_t graph_rep;
  std::size_t acc_rep;
};

inline std::vector<ExperimentCell> experiment_cells(const ExperimentConfig& cfg) {
  std::vector<ExperimentCell> cells;
  for (std::size_t n : cfg.sizes) {
    std::vector<std::size_t> ms;
    if (cfg.model == GraphModel::kGnm) {
      if (cfg.m_values.empty()) {
        ms.push_back(static_cast<std::size_t>(std::llround(cfg.m_factor * static_cast<double>(n))));
      } else {
        ms = cfg.m_values;
      }
    } else if (cfg.model == GraphModel::kBarabasiAlbert) {
      ms.push_back(cfg.ba_m);
    } else {
      ms.push_back(cfg.ws_k);
    }
    for (std::size_t m : ms) {
      for (std::size_t g = 0; g < cfg.graph_reps; ++g) {
        for (std::size_t a = 0; a < cfg.acc_reps; ++a) cells.push_back({n, m, g, a});
      }
    }
  }
  return cells;
}

// Every method on one cell. Failures are captured per method.
inline std::vector<ResultRow> run_cell(const ExperimentConfig& cfg, const ExperimentCell& cell) {
  const std::string model(graph_model_name(cfg.model));
  std::vector<ResultRow> rows;
  GraphSpec spec{cfg.model, cell.n, cell.m_param, cfg.ws_k, cfg.ws_p};
  const auto graph_seed = derive_seed(cfg.seed, {1, cell.n, cell.m_param, cell.graph_rep});
  const auto acc_seed =
      derive_seed(cfg.seed, {2, cell.n, cell.m_param, cell.graph_rep, cell.acc_rep});
  UndirectedEdges edges;
  std::vector<double> truth;
  std::string setup_error;
  try {
    edges = generate_edges(spec, graph_seed);
    truth = sample_accuracies(cell.n, cfg.accuracy, acc_seed);
  } catch (const std::exception& e) {
    setup_error = e.what();
  }
  for (Method method : cfg.methods) {
    ResultRow row;
    row.method = std::string(method_name(method));
    row.model = model;
    row.n = cell.n;
    row.m = edges.size();
    row.graph_rep = cell.graph_rep;
    row.acc_rep = cell.acc_rep;
    if (!setup_error.empty()) {
      row.error = setup_error;
      rows.push_back(std::move(row));
      continue;
    }
    try {
      const auto true_net = symmetric_network(truth, edges);
      // The exact optimum is computed with full knowledge of accuracies.
      const auto seen_net = method == Method::kExact
                                ? true_net
                                : true_net.with_accuracies(quantize_all(truth, cfg.accuracy.prec));
      StrategyParams params = cfg.params;
      params.seed = derive_seed(cfg.seed, {3, cell.n, cell.m_param, cell.graph_rep, cell.acc_rep,
                                           static_cast<std::uint64_t>(method)});
      const auto start = std::chrono::steady_clock::now();
      const auto d = run_method(seen_net, method, params, 1);
      const auto stop = std::chrono::steady_clock::now();
      row.score = score(true_net, d);
      const auto meas = measure(true_net, d);
      row.nb_gurus = meas.nb_gurus;
      row.avg_distance = meas.avg_distance;
      row.avg_accuracy = meas.avg_accuracy;
      if (cfg.record_runtime) {
        row.runtime_s = std::round(std::chrono::duration<double>(stop - start).count() * 1000.0) /
                        1000.0;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Runs every cell on a bounded worker pool. When `csv` is given the header
// and rows are written as soon as the next cell in order is complete.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg,
                                             std::ostream* csv = nullptr) {
  cfg.check();
  const auto cells = experiment_cells(cfg);
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));

  std::vector<std::optional<std::vector<ResultRow>>> done(cells.size());
  std::vector<ResultRow> all;
  std::mutex mu;
  std::size_t flushed = 0;
  std::atomic<std::size_t> next{0};
  if (csv) *csv << kCsvHeader << "\n";

  auto flush_ready = [&] {  // holds mu
    while (flushed < cells.size() && done[flushed]) {
      for (auto& row : *done[flushed]) {
        if (csv) *csv << csv_line(row) << "\n";
        all.push_back(std::move(row));
      }
      done[flushed].reset();
      ++flushed;
    }
  };
  auto work = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      auto rows = run_cell(cfg, cells[c]);
      std::lock_guard lock(mu);
      done[c] = std::move(rows);
      flush_ready();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (csv) csv->flush();
  return all;
}

}  // namespace liquid
