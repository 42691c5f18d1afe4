#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "vmdp/detail/parallel.hpp"
#include "vmdp/error.hpp"
#include "vmdp/pareto.hpp"

namespace vmdp {

namespace {

using VertexKey = std::vector<long long>;

// Regular processes: the action map identifies the vertex. Otherwise several
// maps share a vertex and the rounded frequency vector is the key.
VertexKey vertex_key(const CanonicalProgram& cp, const VertexRecord& v) {
  VertexKey key;
  if (cp.process_regular()) {
    key.assign(v.actions.choices().begin(), v.actions.choices().end());
  } else {
    key.reserve(static_cast<std::size_t>(v.x.coords().size()));
    for (double c : v.x.coords()) key.push_back(std::llround(c * 1e8));
  }
  return key;
}

struct Node {
  VertexRecord vertex;
  simplex::BasisFactorization factor;
};

// A neighbour basis reached by one pivot from the active vertex.
struct Candidate {
  std::optional<Node> node;
  bool same_vertex = false;
  VertexKey key;
  bool needs_test = false;
  bool efficient = false;
};

struct Walk {
  const CanonicalProgram& cp;
  EnumerationResult result;
  std::deque<Node> work;
  std::set<ActionMap> queued;        // bases already placed on the work list
  std::map<VertexKey, bool> tested;  // vertex -> efficiency verdict

  explicit Walk(const CanonicalProgram& program, const EnumerateOptions& options) : cp(program) {
    const auto count = cp.layout().deterministic_policy_count();
    if (count > kRegularBasisLimit && !options.force)
      throw ModelError("model has " + std::to_string(count) + " regular bases (limit " +
                       std::to_string(kRegularBasisLimit) + "); use --force to proceed");
    VertexRecord first = initial_efficient_vertex(cp);
    ++result.stats.efficiency_tests;
    tested[vertex_key(cp, first)] = true;
    accept(first, simplex::BasisFactorization(cp.dense_A(), first.basis));
  }

  void accept(VertexRecord v, simplex::BasisFactorization f) {
    v.status = Efficiency::Efficient;
    result.efficient.push_back(v);
    enqueue(std::move(v), std::move(f));
  }

  void enqueue(VertexRecord v, simplex::BasisFactorization f) {
    queued.insert(v.actions);
    work.push_back(Node{std::move(v), std::move(f)});
  }

  // One pivot: the action column of (s, t) is exchanged.
  Candidate step(const Node& from, const ActionMap& target) const {
    const Layout& L = cp.layout();
    int enter = -1;
    int leave = -1;
    for (int t = 0; t < L.num_decision_epochs() && enter < 0; ++t)
      for (int s = 0; s < L.num_states(); ++s)
        if (target.at(t, s) != from.vertex.actions.at(t, s)) {
          enter = L.column(t, s, target.at(t, s));
          leave = L.column(t, s, from.vertex.actions.at(t, s));
          break;
        }
    simplex::BasisFactorization f = from.factor;
    f.pivot(enter, leave);
    Candidate c;
    c.node.emplace(Node{make_vertex(cp, target), std::move(f)});
    c.same_vertex = same_vertex(c.node->vertex.x, from.vertex.x);
    if (!c.same_vertex) c.key = vertex_key(cp, c.node->vertex);
    return c;
  }

  // Bookkeeping for one candidate, in neighbour order. Returns true when the
  // candidate still needs an efficiency test.
  bool classify(Candidate& c, std::set<VertexKey>& pending) {
    ++result.stats.pivots;
    if (c.same_vertex) {
      ++result.stats.degenerate_moves;
      return false;
    }
    if (tested.count(c.key) || pending.count(c.key)) {
      ++result.stats.cache_hits;
      return false;
    }
    pending.insert(c.key);
    return true;
  }

  void merge(Candidate& c) {
    if (c.same_vertex) {
      // Another regular basis of the active (efficient) vertex: explore it too.
      enqueue(std::move(c.node->vertex), std::move(c.node->factor));
    } else if (c.needs_test) {
      ++result.stats.efficiency_tests;
      tested[c.key] = c.efficient;
      if (c.efficient) accept(std::move(c.node->vertex), std::move(c.node->factor));
    }
  }

  std::vector<ActionMap> fresh_neighbours(const Node& active) const {
    std::vector<ActionMap> out;
    for (auto& nb : adjacent_regular_bases(cp.layout(), active.vertex.actions))
      if (!queued.count(nb)) out.push_back(std::move(nb));
    return out;
  }

  EnumerationResult finish() {
    for (const auto& v : result.efficient) result.policies.push_back(frequencies_to_policy(cp.model(), v.x));
    return std::move(result);
  }
};

}  // namespace

EnumerationResult enumerate_efficient_serial(const CanonicalProgram& cp, const EnumerateOptions& options) {
  Walk walk(cp, options);
  while (!walk.work.empty()) {
    const Node active = std::move(walk.work.front());
    walk.work.pop_front();
    ++walk.result.stats.vertices_visited;
    for (const auto& nb : adjacent_regular_bases(cp.layout(), active.vertex.actions)) {
      if (walk.queued.count(nb)) continue;
      Candidate c = walk.step(active, nb);
      std::set<VertexKey> none;
      c.needs_test = walk.classify(c, none);
      if (c.needs_test) c.efficient = efficiency_test(cp, c.node->vertex, c.node->factor);
      walk.merge(c);
    }
  }
  return walk.finish();
}

EnumerationResult enumerate_efficient(const CanonicalProgram& cp, const EnumerateOptions& options) {
  Walk walk(cp, options);
  while (!walk.work.empty()) {
    const Node active = std::move(walk.work.front());
    walk.work.pop_front();
    ++walk.result.stats.vertices_visited;

    const auto targets = walk.fresh_neighbours(active);
    const auto count = static_cast<long>(targets.size());
    std::vector<Candidate> batch(targets.size());
    detail::ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < count; ++i)
      failure.run([&] { batch[static_cast<std::size_t>(i)] = walk.step(active, targets[static_cast<std::size_t>(i)]); });
    failure.rethrow();

    std::set<VertexKey> pending;
    std::vector<long> to_test;
    for (long i = 0; i < count; ++i) {
      auto& c = batch[static_cast<std::size_t>(i)];
      c.needs_test = walk.classify(c, pending);
      if (c.needs_test) to_test.push_back(i);
    }

    const auto tests = static_cast<long>(to_test.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < tests; ++i)
      failure.run([&] {
        auto& c = batch[static_cast<std::size_t>(to_test[static_cast<std::size_t>(i)])];
        c.efficient = efficiency_test(cp, c.node->vertex, c.node->factor);
      });
    failure.rethrow();

    for (auto& c : batch) walk.merge(c);
  }
  return walk.finish();
}

}  // namespace vmdp
