#include "vmdp/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vmdp/error.hpp"

namespace vmdp::io {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

const json& array_of(const json& j, std::size_t size, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  if (j.size() != size)
    throw ParseError(what + " has " + std::to_string(j.size()) + " entries, expected " +
                     std::to_string(size));
  return j;
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + " must be an integer");
  return j.get<int>();
}

std::string at(std::initializer_list<int> idx) {
  std::string s;
  for (int i : idx) s += "[" + std::to_string(i) + "]";
  return s;
}

}  // namespace

json model_to_json(const Model& m) {
  const int S = m.num_states();
  const int T = m.horizon();
  json p = json::array(), r = json::array(), rT = json::array();
  for (int t = 0; t < T - 1; ++t) {
    json pt = json::array(), rt = json::array();
    for (int s = 0; s < S; ++s) {
      json ps = json::array(), rs = json::array();
      for (int a = 0; a < m.num_actions(s); ++a) {
        auto row = m.transition_row(t, s, a);
        ps.push_back(std::vector<double>(row.begin(), row.end()));
        auto rew = m.reward(t, s, a);
        rs.push_back(std::vector<double>(rew.begin(), rew.end()));
      }
      pt.push_back(std::move(ps));
      rt.push_back(std::move(rs));
    }
    p.push_back(std::move(pt));
    r.push_back(std::move(rt));
  }
  for (int s = 0; s < S; ++s) {
    auto tr = m.terminal_reward(s);
    rT.push_back(std::vector<double>(tr.begin(), tr.end()));
  }
  auto k = m.layout().actions_per_state();
  return {
      {"num_states", S},
      {"horizon", T},
      {"num_objectives", m.num_objectives()},
      {"actions_per_state", std::vector<int>(k.begin(), k.end())},
      {"alpha", std::vector<double>(m.alpha().begin(), m.alpha().end())},
      {"transitions", std::move(p)},
      {"rewards", std::move(r)},
      {"terminal_rewards", std::move(rT)},
  };
}

Model model_from_json(const json& j) {
  const int S = integer(field(j, "num_states"), "num_states");
  const int T = integer(field(j, "horizon"), "horizon");
  const int k = integer(field(j, "num_objectives"), "num_objectives");
  if (S < 1) throw ModelError("num_states must be positive");
  const auto& kj = array_of(field(j, "actions_per_state"), static_cast<std::size_t>(S), "actions_per_state");
  std::vector<int> actions;
  for (std::size_t s = 0; s < kj.size(); ++s)
    actions.push_back(integer(kj[s], "actions_per_state" + at({static_cast<int>(s)})));

  Model m(S, T, k, actions);
  const auto& alpha = array_of(field(j, "alpha"), static_cast<std::size_t>(S), "alpha");
  for (int s = 0; s < S; ++s) m.alpha()[static_cast<std::size_t>(s)] = number(alpha[static_cast<std::size_t>(s)], "alpha" + at({s}));

  const auto& p = array_of(field(j, "transitions"), static_cast<std::size_t>(T - 1), "transitions");
  const auto& r = array_of(field(j, "rewards"), static_cast<std::size_t>(T - 1), "rewards");
  for (int t = 0; t < T - 1; ++t) {
    const auto& pt = array_of(p[static_cast<std::size_t>(t)], static_cast<std::size_t>(S), "transitions" + at({t}));
    const auto& rt = array_of(r[static_cast<std::size_t>(t)], static_cast<std::size_t>(S), "rewards" + at({t}));
    for (int s = 0; s < S; ++s) {
      const auto ks = static_cast<std::size_t>(m.num_actions(s));
      const auto& ps = array_of(pt[static_cast<std::size_t>(s)], ks, "transitions" + at({t, s}));
      const auto& rs = array_of(rt[static_cast<std::size_t>(s)], ks, "rewards" + at({t, s}));
      for (int a = 0; a < m.num_actions(s); ++a) {
        const auto& pa = array_of(ps[static_cast<std::size_t>(a)], static_cast<std::size_t>(S), "transitions" + at({t, s, a}));
        const auto& ra = array_of(rs[static_cast<std::size_t>(a)], static_cast<std::size_t>(k), "rewards" + at({t, s, a}));
        for (int jj = 0; jj < S; ++jj)
          m.transition(t, s, a, jj) = number(pa[static_cast<std::size_t>(jj)], "transitions" + at({t, s, a, jj}));
        auto rew = m.reward(t, s, a);
        for (int i = 0; i < k; ++i) rew[static_cast<std::size_t>(i)] = number(ra[static_cast<std::size_t>(i)], "rewards" + at({t, s, a, i}));
      }
    }
  }
  const auto& rT = array_of(field(j, "terminal_rewards"), static_cast<std::size_t>(S), "terminal_rewards");
  for (int s = 0; s < S; ++s) {
    const auto& rs = array_of(rT[static_cast<std::size_t>(s)], static_cast<std::size_t>(k), "terminal_rewards" + at({s}));
    auto tr = m.terminal_reward(s);
    for (int i = 0; i < k; ++i) tr[static_cast<std::size_t>(i)] = number(rs[static_cast<std::size_t>(i)], "terminal_rewards" + at({s, i}));
  }
  return m;
}

json policy_to_json(const Policy& pi) {
  const auto& L = pi.layout();
  if (auto d = pi.action_map()) {
    json out = json::array();
    for (int t = 0; t < L.num_decision_epochs(); ++t) {
      json row = json::array();
      for (int s = 0; s < L.num_states(); ++s) row.push_back(d->at(t, s));
      out.push_back(std::move(row));
    }
    return {{"d", std::move(out)}};
  }
  json q = json::array();
  for (int t = 0; t < L.num_decision_epochs(); ++t) {
    json qt = json::array();
    for (int s = 0; s < L.num_states(); ++s) {
      auto row = pi.row(t, s);
      qt.push_back(std::vector<double>(row.begin(), row.end()));
    }
    q.push_back(std::move(qt));
  }
  return {{"q", std::move(q)}};
}

Policy policy_from_json(const Layout& L, const json& j) {
  if (!j.is_object()) throw ParseError("policy must be a JSON object");
  const auto epochs = static_cast<std::size_t>(L.num_decision_epochs());
  const auto S = static_cast<std::size_t>(L.num_states());
  if (j.contains("d")) {
    const auto& d = array_of(j["d"], epochs, "d");
    ActionMap map(L);
    for (int t = 0; t < L.num_decision_epochs(); ++t) {
      const auto& dt = array_of(d[static_cast<std::size_t>(t)], S, "d" + at({t}));
      for (int s = 0; s < L.num_states(); ++s) {
        const int a = integer(dt[static_cast<std::size_t>(s)], "d" + at({t, s}));
        if (a < 0 || a >= L.num_actions(s))
          throw ModelError("d" + at({t, s}) + " = " + std::to_string(a) + " is not an action of state " +
                           std::to_string(s));
        map.at(t, s) = a;
      }
    }
    return Policy::deterministic(L, map);
  }
  const auto& q = array_of(field(j, "q"), epochs, "q");
  Policy pi(L);
  for (int t = 0; t < L.num_decision_epochs(); ++t) {
    const auto& qt = array_of(q[static_cast<std::size_t>(t)], S, "q" + at({t}));
    for (int s = 0; s < L.num_states(); ++s) {
      const auto& qs = array_of(qt[static_cast<std::size_t>(s)], static_cast<std::size_t>(L.num_actions(s)), "q" + at({t, s}));
      for (int a = 0; a < L.num_actions(s); ++a) pi.prob(t, s, a) = number(qs[static_cast<std::size_t>(a)], "q" + at({t, s, a}));
    }
  }
  return pi;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Model read_model_file(const std::string& path) {
  auto j = read_json_file(path);
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw ParseError("write failed: " + path);
}

DesignInstance design_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("design CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "component,alternative,cost,reliability")
    throw ParseError("design CSV header must be component,alternative,cost,reliability");

  DesignInstance d;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell[4];
    for (int i = 0; i < 4; ++i)
      if (!std::getline(ss, cell[i], ','))
        throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
    int component = 0, alternative = 0;
    double cost = 0, reliability = 0;
    try {
      component = std::stoi(cell[0]);
      alternative = std::stoi(cell[1]);
      cost = std::stod(cell[2]);
      reliability = std::stod(cell[3]);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed number");
    }
    if (component != 1 && component != 2)
      throw ParseError("line " + std::to_string(line_no) + ": component must be 1 or 2");
    auto& comp = component == 1 ? d.component1 : d.component2;
    if (alternative != static_cast<int>(comp.size()) + 1)
      throw ParseError("line " + std::to_string(line_no) + ": alternatives must be numbered 1, 2, ... in order");
    comp.push_back({cost, reliability});
  }
  return d;
}

void design_to_csv(const DesignInstance& d, std::ostream& out) {
  out << "component,alternative,cost,reliability\n";
  const auto old = out.precision(17);
  for (int s = 0; s < 2; ++s) {
    const auto& comp = d.component(s);
    for (std::size_t a = 0; a < comp.size(); ++a)
      out << s + 1 << ',' << a + 1 << ',' << comp[a].cost << ',' << comp[a].reliability << '\n';
  }
  out.precision(old);
}

}  // namespace vmdp::io
