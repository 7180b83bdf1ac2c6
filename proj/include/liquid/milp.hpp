// milp.hpp
//
// Mixed-integer model of the optimal delegation problem and its export to
// the CPLEX LP text format. Voters are numbered 1..n in variable names.
//
//   d_i_w    binary, voter i ends with weight w (w in 0..n)
//   z_i_j_w  binary, voter i passes w votes to out-neighbor j (w in 1..n)
//   x_i_t    continuous in [0,1], probability that correct voters among
//            i..n carry weight at least t (t in 1..T, T = floor(n/2) + 1)
//
// Rows, in emission order:
//   flow_i   sum_j,w w z_i_j_w + sum_w w d_i_w - sum_k,w w z_k_i_w = 1
//   pass_i   sum_j,w z_i_j_w - d_i_0 = 0
//   one_i    sum_w d_i_w = 1
//   total    sum_i,w w d_i_w = n
//   rec_i_t_w  x_i_t <= p_i y_(i+1),(t-w) + (1-p_i) y_(i+1),t + 1 - d_i_w
// where y_k,t is 1 for t <= 0, 0 for k > n, and x_k,t otherwise.
// The objective is to maximize x_1_T.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "liquid/model.hpp"
#include "liquid/probability.hpp"

namespace liquid {

struct LinearTerm {
  std::size_t var;
  double coef;
};

enum class RowSense { kLessEqual, kEqual };

struct MilpRow {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense;
  double rhs;
};

enum class VarKind { kBinary, kContinuous };

struct MilpVariable {
  std::string name;
  VarKind kind;
};

class MilpModel {
 public:
  std::size_t voters() const noexcept { return n_; }
  std::size_t threshold() const noexcept { return threshold_; }
  const std::vector<MilpVariable>& variables() const noexcept { return vars_; }
  const std::vector<MilpRow>& rows() const noexcept { return rows_; }
  std::size_t objective() const noexcept { return x(0, threshold_); }

  // 0-based voter, w in 0..n.
  std::size_t delta(Voter i, std::size_t w) const { return i * (n_ + 1) + w; }
  // 0-based voter, t in 1..T.
  std::size_t x(Voter i, std::size_t t) const {
    return x_base_ + i * threshold_ + (t - 1);
  }
  // Arc index as in SocialNetwork::arcs(), w in 1..n.
  std::size_t z(std::size_t arc, std::size_t w) const {
    return z_base_ + arc * n_ + (w - 1);
  }
  std::size_t arc_index(Voter from, Voter to) const { return arc_index_.at({from, to}); }
  const std::vector<Arc>& arcs() const noexcept { return arcs_; }

  friend MilpModel build_milp(const SocialNetwork& net);

 private:
  std::size_t n_ = 0;
  std::size_t threshold_ = 0;
  std::size_t z_base_ = 0;
  std::size_t x_base_ = 0;
  std::vector<Arc> arcs_;
  std::map<Arc, std::size_t> arc_index_;
  std::vector<MilpVariable> vars_;
  std::vector<MilpRow> rows_;
};

inline MilpModel build_milp(const SocialNetwork& net) {
  MilpModel m;
  const std::size_t n = net.size();
  m.n_ = n;
  m.threshold_ = majority_threshold(n);
  m.arcs_ = net.arcs();
  for (std::size_t a = 0; a < m.arcs_.size(); ++a) m.arc_index_[m.arcs_[a]] = a;
  const std::size_t T = m.threshold_;

  for (Voter i = 0; i < n; ++i) {
    for (std::size_t w = 0; w <= n; ++w) {
      m.vars_.push_back({"d_" + std::to_string(i + 1) + "_" + std::to_string(w),
                         VarKind::kBinary});
    }
  }
  m.z_base_ = m.vars_.size();
  for (const auto& [i, j] : m.arcs_) {
    for (std::size_t w = 1; w <= n; ++w) {
      m.vars_.push_back({"z_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) +
                             "_" + std::to_string(w),
                         VarKind::kBinary});
    }
  }
  m.x_base_ = m.vars_.size();
  for (Voter i = 0; i < n; ++i) {
    for (std::size_t t = 1; t <= T; ++t) {
      m.vars_.push_back({"x_" + std::to_string(i + 1) + "_" + std::to_string(t),
                         VarKind::kContinuous});
    }
  }

  const auto id = [](Voter i) { return std::to_string(i + 1); };
  for (Voter i = 0; i < n; ++i) {
    MilpRow row{"flow_" + id(i), {}, RowSense::kEqual, 1.0};
    for (Voter j : net.out_neighbors(i)) {
      const auto a = m.arc_index(i, j);
      for (std::size_t w = 1; w <= n; ++w) row.terms.push_back({m.z(a, w), double(w)});
    }
    for (std::size_t w = 1; w <= n; ++w) row.terms.push_back({m.delta(i, w), double(w)});
    for (Voter k : net.in_neighbors(i)) {
      const auto a = m.arc_index(k, i);
      for (std::size_t w = 1; w <= n; ++w) row.terms.push_back({m.z(a, w), -double(w)});
    }
    m.rows_.push_back(std::move(row));
  }
  for (Voter i = 0; i < n; ++i) {
    MilpRow row{"pass_" + id(i), {}, RowSense::kEqual, 0.0};
    for (Voter j : net.out_neighbors(i)) {
      const auto a = m.arc_index(i, j);
      for (std::size_t w = 1; w <= n; ++w) row.terms.push_back({m.z(a, w), 1.0});
    }
    row.terms.push_back({m.delta(i, 0), -1.0});
    m.rows_.push_back(std::move(row));
  }
  for (Voter i = 0; i < n; ++i) {
    MilpRow row{"one_" + id(i), {}, RowSense::kEqual, 1.0};
    for (std::size_t w = 0; w <= n; ++w) row.terms.push_back({m.delta(i, w), 1.0});
    m.rows_.push_back(std::move(row));
  }
  {
    MilpRow row{"total", {}, RowSense::kEqual, double(n)};
    for (Voter i = 0; i < n; ++i) {
      for (std::size_t w = 1; w <= n; ++w) row.terms.push_back({m.delta(i, w), double(w)});
    }
    m.rows_.push_back(std::move(row));
  }
  for (Voter i = 0; i < n; ++i) {
    const double p = net.accuracy(i);
    const bool last = i + 1 == n;
    for (std::size_t t = 1; t <= T; ++t) {
      for (std::size_t w = 0; w <= n; ++w) {
        MilpRow row{"rec_" + id(i) + "_" + std::to_string(t) + "_" + std::to_string(w),
                    {},
                    RowSense::kLessEqual,
                    1.0};
        row.terms.push_back({m.x(i, t), 1.0});
        row.terms.push_back({m.delta(i, w), 1.0});
        // p * y_(i+1),(t-w)
        if (t <= w) {
          row.rhs += p;
        } else if (!last) {
          row.terms.push_back({m.x(i + 1, t - w), -p});
        }
        // (1 - p) * y_(i+1),t
        if (!last) {
          if (w == 0) {
            row.terms.back().coef -= 1.0 - p;  // same variable as above
          } else {
            row.terms.push_back({m.x(i + 1, t), -(1.0 - p)});
          }
        }
        m.rows_.push_back(std::move(row));
      }
    }
  }
  return m;
}

struct MilpCounts {
  std::size_t variables;
  std::size_t binaries;
  std::size_t rows;
};

// Sizes implied by the model definition for n voters and `arcs` arcs.
inline MilpCounts milp_counts(std::size_t n, std::size_t arcs) {
  const std::size_t T = majority_threshold(n);
  const std::size_t binaries = n * (n + 1) + arcs * n;
  return {binaries + n * T, binaries, 3 * n + 1 + n * T * (n + 1)};
}

// Variable values induced by a valid delegation: weights from the delegation
// forest and x from the voter-ordered recursion (followers carry weight 0).
inline std::vector<double> milp_assignment(const MilpModel& model, const SocialNetwork& net,
                                           const Delegation& d) {
  const std::size_t n = net.size();
  const auto profile = guru_profile(net, d);
  std::vector<double> values(model.variables().size(), 0.0);

  std::vector<std::size_t> subtree(n, 1);
  // Push each voter's single vote along its chain.
  for (Voter v = 0; v < n; ++v) {
    for (Voter u = v; d[u] != u; u = d[u]) ++subtree[d[u]];
  }
  std::vector<WeightedVoter> entries(n);
  for (Voter i = 0; i < n; ++i) entries[i] = {0, net.accuracy(i)};
  for (const auto& g : profile.gurus) entries[g.voter].weight = g.weight;
  for (Voter i = 0; i < n; ++i) {
    if (d.is_guru(i)) {
      values[model.delta(i, subtree[i])] = 1.0;
    } else {
      values[model.delta(i, 0)] = 1.0;
      values[model.z(model.arc_index(i, d[i]), subtree[i])] = 1.0;
    }
  }
  const ProbabilityTable table(entries, model.threshold());
  for (Voter i = 0; i < n; ++i) {
    for (std::size_t t = 1; t <= model.threshold(); ++t) values[model.x(i, t)] = table.at(t, i);
  }
  return values;
}

// Largest violation of any row by `values` (0 when all rows hold).
inline double milp_max_violation(const MilpModel& model, const std::vector<double>& values) {
  double worst = 0.0;
  for (const auto& row : model.rows()) {
    double lhs = 0.0;
    for (const auto& term : row.terms) lhs += term.coef * values[term.var];
    const double gap = row.sense == RowSense::kEqual ? std::abs(lhs - row.rhs) : lhs - row.rhs;
    worst = std::max(worst, gap);
  }
  return worst;
}

namespace detail {

inline std::string lp_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string export_lp(const MilpModel& model) {
  const auto& vars = model.variables();
  std::string out;
  out += "\\ optimal delegation model, " + std::to_string(model.voters()) + " voters\n";
  out += "Maximize\n obj: " + vars[model.objective()].name + "\n";
  out += "Subject To\n";
  for (const auto& row : model.rows()) {
    out += " " + row.name + ":";
    bool first = true;
    for (const auto& term : row.terms) {
      if (term.coef == 0.0) continue;
      const double mag = std::abs(term.coef);
      out += term.coef < 0 ? " - " : (first ? " " : " + ");
      if (mag != 1.0) out += detail::lp_number(mag) + " ";
      out += vars[term.var].name;
      first = false;
    }
    if (first) out += " 0 " + vars[model.objective()].name;
    out += row.sense == RowSense::kEqual ? " = " : " <= ";
    out += detail::lp_number(row.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const auto& v : vars) {
    if (v.kind == VarKind::kContinuous) out += " 0 <= " + v.name + " <= 1\n";
  }
  out += "Binary\n";
  for (const auto& v : vars) {
    if (v.kind == VarKind::kBinary) out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace liquid
