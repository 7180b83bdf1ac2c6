// liquid: command-line front end.
//
//   liquid gen --model gnm --n 51 --m 204 --seed 7 --out inst.json
//   liquid solve inst.json --method ls_gr --out d.json
//   liquid eval inst.json d.json
//   liquid export-milp inst.json > model.lp
//   liquid feasdel inst.json --weights w.json
//   liquid experiment --config cfg.json --out results.csv
//   liquid check-reduction --N 3 --sets "0,1;1,2;0,2" --beta 0.25

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "liquid/liquid.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw liquid::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw liquid::Error("cannot write " + path);
  out << text;
}

std::vector<std::vector<std::size_t>> parse_sets(const std::string& text) {
  std::vector<std::vector<std::size_t>> sets;
  std::stringstream all(text);
  std::string group;
  while (std::getline(all, group, ';')) {
    std::vector<std::size_t> s;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (!item.empty()) s.push_back(std::stoul(item));
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

nlohmann::json measures_json(const liquid::SocialNetwork& net, const liquid::Delegation& d) {
  const auto m = liquid::measure(net, d);
  return {{"score", liquid::score(net, d)},
          {"nb_gurus", m.nb_gurus},
          {"avg_distance", m.avg_distance},
          {"avg_accuracy", m.avg_accuracy}};
}

// Runs `command` with "{}" replaced by the LP path and pulls the first
// number following "objective" out of its output.
std::optional<double> run_external_solver(const std::string& command, const std::string& lp) {
  const std::string path = "/tmp/liquid_model_" + std::to_string(::getpid()) + ".lp";
  write_output(path, lp);
  std::string cmd = command;
  const auto pos = cmd.find("{}");
  if (pos == std::string::npos) {
    cmd += " " + path;
  } else {
    cmd.replace(pos, 2, path);
  }
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(::popen(cmd.c_str(), "r"), ::pclose);
  if (!pipe) return std::nullopt;
  std::string output;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe.get())) output += buf;
  std::remove(path.c_str());
  static const std::regex kObjective(R"([Oo]bjective[^0-9+\-]*([+\-]?[0-9]*\.?[0-9]+(?:[eE][+\-]?[0-9]+)?))");
  std::smatch match;
  if (std::regex_search(output, match, kObjective)) return std::stod(match[1].str());
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delegation optimization toolkit for liquid democracy"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  std::string gen_model = "gnm", gen_out, gen_sets;
  std::size_t gen_n = 11, gen_m = 0, gen_k = 2, gen_universe = 3;
  double gen_p = 0.1, gen_beta = 0.25;
  std::uint64_t gen_seed = 1;
  gen->add_option("--model", gen_model, "gnm, ba, ws or reduction")
      ->check(CLI::IsMember({"gnm", "ba", "ws", "reduction"}));
  gen->add_option("--n", gen_n, "Number of voters");
  gen->add_option("--m", gen_m, "gnm: edges (default 4n); ba: attachments (default 2)");
  gen->add_option("--k", gen_k, "ws: lattice degree");
  gen->add_option("--p", gen_p, "ws: shortcut probability");
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--N", gen_universe, "reduction: universe size");
  gen->add_option("--sets", gen_sets, "reduction: sets as \"0,1;1,2\"");
  gen->add_option("--beta", gen_beta, "reduction: beta in (0, 0.5)");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a delegation");
  std::string eval_instance, eval_delegation;
  eval->add_option("instance", eval_instance)->required();
  eval->add_option("delegation", eval_delegation)->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Compute a delegation");
  std::string solve_instance, solve_method = "ls_gr", solve_out;
  liquid::StrategyParams solve_params;
  std::optional<double> solve_prec;
  solve->add_option("instance", solve_instance)->required();
  solve->add_option("--method", solve_method)
      ->check(CLI::IsMember({"direct", "best_guru", "greedy_gr", "greedy_vo", "ls_gr", "ls_vo",
                             "greedy_cap", "emerging", "exact"}));
  solve->add_option("--epsilon", solve_params.epsilon);
  solve->add_option("--alpha", solve_params.greedy_cap_alpha);
  solve->add_option("--seed", solve_params.seed);
  solve->add_option("--prec", solve_prec, "Let the method see quantized accuracies");
  solve->add_option("--out", solve_out, "Delegation file to write");

  // export-milp
  auto* milp = app.add_subcommand("export-milp", "Write the MILP in LP format");
  std::string milp_instance, milp_out, milp_solver;
  milp->add_option("instance", milp_instance)->required();
  milp->add_option("--out", milp_out);
  milp->add_option("--solver-cmd", milp_solver,
                   "Solver command; {} is replaced by the LP path, objective parsed from output");

  // feasdel
  auto* fd = app.add_subcommand("feasdel", "Check a fractional target weight vector");
  std::string fd_instance, fd_weights;
  fd->add_option("instance", fd_instance)->required();
  fd->add_option("--weights", fd_weights, "JSON array or {\"weights\": [...]}")->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a batch experiment");
  std::string exp_config, exp_out;
  std::optional<unsigned> exp_threads;
  bool exp_no_timing = false;
  exp->add_option("--config", exp_config)->required();
  exp->add_option("--out", exp_out, "CSV output (default stdout)");
  exp->add_option("--threads", exp_threads);
  exp->add_flag("--no-timing", exp_no_timing, "Write runtime_s as 0 for byte-stable output");

  // check-reduction
  auto* red = app.add_subcommand("check-reduction", "Evaluate the reduction inequalities");
  std::size_t red_universe = 3;
  std::string red_sets;
  double red_beta = 0.25;
  red->add_option("--N", red_universe)->required();
  red->add_option("--sets", red_sets)->required();
  red->add_option("--beta", red_beta);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      liquid::Instance inst;
      if (gen_model == "reduction") {
        liquid::ReductionParams params{gen_universe, parse_sets(gen_sets), gen_beta};
        auto built = liquid::build_reduction(params);
        inst.network = std::move(built.network);
        inst.meta = {{"model", "reduction"}, {"N", gen_universe}, {"M", params.sets.size()},
                     {"beta", gen_beta}, {"K", built.sizes.isolated}, {"L", built.sizes.chain},
                     {"covers", built.covers}, {"synthetic", true}};
        if (!built.covers) std::cerr << "warning: sets do not cover the universe\n";
      } else {
        liquid::GraphSpec spec;
        spec.model = liquid::parse_graph_model(gen_model);
        spec.n = gen_n;
        spec.k = gen_k;
        spec.p_rewire = gen_p;
        if (spec.model == liquid::GraphModel::kGnm) {
          spec.m = gen_m != 0 ? gen_m : 4 * gen_n;
        } else {
          spec.m = gen_m != 0 ? gen_m : 2;
        }
        const auto edges = liquid::generate_edges(spec, liquid::derive_seed(gen_seed, {1}));
        auto p = liquid::sample_accuracies(gen_n, liquid::AccuracyModel{},
                                           liquid::derive_seed(gen_seed, {2}));
        inst.network = liquid::symmetric_network(std::move(p), edges);
        inst.meta = {{"model", gen_model}, {"seed", gen_seed}, {"edges", edges.size()}};
      }
      write_output(gen_out, liquid::save_instance(inst));
    } else if (*eval) {
      const auto inst = liquid::load_instance(read_file(eval_instance));
      const auto d = liquid::load_delegation(read_file(eval_delegation), inst);
      if (auto bad = liquid::validate_delegation(inst.network, d)) {
        std::cerr << "invalid delegation: " << bad->message << "\n";
        return 2;
      }
      std::cout << measures_json(inst.network, d).dump(1) << "\n";
    } else if (*solve) {
      const auto inst = liquid::load_instance(read_file(solve_instance));
      const auto method = liquid::parse_method(solve_method);
      auto seen = inst.network;
      if (solve_prec && method != liquid::Method::kExact) {
        seen = inst.network.with_accuracies(liquid::quantize_all(inst.network.accuracies(), solve_prec));
      }
      const auto d = liquid::run_method(seen, method, solve_params, 0);
      auto doc = liquid::delegation_json(d, inst);
      doc["method"] = solve_method;
      doc["score"] = liquid::score(inst.network, d);
      if (!solve_out.empty()) write_output(solve_out, doc.dump(1) + "\n");
      std::cout << measures_json(inst.network, d).dump(1) << "\n";
    } else if (*milp) {
      const auto inst = liquid::load_instance(read_file(milp_instance));
      const auto lp = liquid::export_lp(liquid::build_milp(inst.network));
      if (!milp_solver.empty()) {
        if (auto obj = run_external_solver(milp_solver, lp)) {
          std::cout << "objective " << *obj << "\n";
        } else {
          std::cerr << "could not read an objective value from the solver output\n";
          return 3;
        }
      }
      if (milp_solver.empty() || !milp_out.empty()) write_output(milp_out, lp);
    } else if (*fd) {
      const auto inst = liquid::load_instance(read_file(fd_instance));
      auto doc = nlohmann::json::parse(read_file(fd_weights));
      const auto weights =
          (doc.is_object() ? doc.at("weights") : doc).get<std::vector<double>>();
      const auto res = liquid::feasdel(inst.network, weights);
      if (!res.feasible) {
        std::cout << "infeasible\n";
        return 0;
      }
      nlohmann::json flows = nlohmann::json::array();
      liquid::detail::IdMap map(inst.ids, inst.network.size());
      for (std::size_t a = 0; a < res.arcs.size(); ++a) {
        if (res.weight[a] > 0.0) {
          flows.push_back({{"from", map.to_id(res.arcs[a].first)},
                           {"to", map.to_id(res.arcs[a].second)},
                           {"weight", res.weight[a]}});
        }
      }
      std::cout << nlohmann::json{{"feasible", true}, {"flows", flows}}.dump(1) << "\n";
    } else if (*exp) {
      auto cfg = liquid::parse_experiment_config(nlohmann::json::parse(read_file(exp_config)));
      if (exp_threads) cfg.threads = *exp_threads;
      if (exp_no_timing) cfg.record_runtime = false;
      if (exp_out.empty() || exp_out == "-") {
        liquid::run_experiment(cfg, &std::cout);
      } else {
        std::ofstream out(exp_out, std::ios::binary);
        if (!out) throw liquid::Error("cannot write " + exp_out);
        liquid::run_experiment(cfg, &out);
      }
    } else if (*red) {
      liquid::ReductionParams params{red_universe, parse_sets(red_sets), red_beta};
      const auto rep = liquid::verify_reduction_inequalities(params);
      nlohmann::json doc{{"K", rep.sizes.isolated},
                         {"L", rep.sizes.chain},
                         {"n", rep.sizes.voters},
                         {"r", rep.sizes.r},
                         {"epsilon", rep.sizes.slack},
                         {"enough_isolated_margin", rep.enough_isolated.margin},
                         {"enough_isolated_pass", rep.enough_isolated.pass},
                         {"missing_voters_margin", rep.missing_voters.margin},
                         {"missing_voters_pass", rep.missing_voters.pass},
                         {"size_bound_applies", rep.size_bound_applies},
                         {"size_bound_pass", rep.size_bound_pass},
                         {"pass", rep.pass()}};
      std::cout << doc.dump(1) << "\n";
      return rep.pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
