#include "mull/validity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mull/closure.hpp"

namespace mull {

namespace {

struct Edge {
  NodeId from;
  std::uint32_t premise;
  NodeId to;
};

bool position_principal(const Node& node, std::uint32_t pos) {
  switch (node.rule.kind) {
    case RuleKind::Cut:
    case RuleKind::Mcut:
      return false;
    case RuleKind::Ax:
      return true;
    default:
      return node.rule.principal == pos;
  }
}

// One thread crossing of a path: source position, target position, the
// smallest priority visited, and whether a principal position was stepped
// from along the way.
struct Entry {
  std::uint32_t src;
  std::uint32_t dst;
  std::uint32_t minpri;
  bool principal;
  auto operator<=>(const Entry&) const = default;
};

struct Profile {
  NodeId from = 0, to = 0;
  std::vector<Entry> entries;  // sorted, unique
  bool operator==(const Profile&) const = default;
};

Profile compose(const Profile& a, const Profile& b) {
  Profile out;
  out.from = a.from;
  out.to = b.to;
  std::set<Entry> acc;
  for (const Entry& x : a.entries)
    for (const Entry& y : b.entries)
      if (x.dst == y.src)
        acc.insert({x.src, y.dst, std::min(x.minpri, y.minpri), x.principal || y.principal});
  out.entries.assign(acc.begin(), acc.end());
  return out;
}

struct ThreadSystem {
  const Proof& p;
  std::vector<NodeId> order;
  std::vector<Edge> edges;
  ClosureTable closure;
  std::vector<char> nu_priority;  // indexed by priority

  explicit ThreadSystem(const Proof& pr) : p(pr), order(pr.reachable()) {
    std::vector<FormulaId> roots;
    for (NodeId n : order)
      for (FormulaId f : p.at(n).seq.formulas) roots.push_back(f);
    closure = ClosureTable::build(roots);
    nu_priority.assign(closure.size(), 0);
    for (std::size_t i = 0; i < closure.size(); ++i)
      nu_priority[i] = store().tag(closure.formula_at(i)) == Tag::Nu;
    for (NodeId n : order)
      for (std::uint32_t k = 0; k < p.at(n).premises.size(); ++k)
        edges.push_back({n, k, p.at(n).premises[k].id});
  }

  Profile edge_profile(const Edge& e) const {
    Profile prof;
    prof.from = e.from;
    prof.to = e.to;
    auto anc = ancestry(p, e.from, e.premise);
    const Node& src = p.at(e.from);
    const Node& dst = p.at(e.to);
    std::set<Entry> acc;
    for (std::uint32_t a = 0; a < anc.size(); ++a) {
      bool princ = position_principal(src, a);
      for (std::uint32_t b : anc[a]) {
        std::uint32_t pri = static_cast<std::uint32_t>(closure.priority(dst.seq[b]));
        acc.insert({a, b, pri, princ});
      }
    }
    prof.entries.assign(acc.begin(), acc.end());
    return prof;
  }

  bool good_self_loop(const Profile& cyc) const {
    for (const Entry& e : cyc.entries)
      if (e.src == e.dst && e.principal && nu_priority[e.minpri]) return true;
    return false;
  }
};

// shortest premise path between two nodes, as node ids (both ends included)
std::vector<NodeId> shortest_path(const Proof& p, NodeId from, NodeId to) {
  std::map<NodeId, NodeId> parent;
  std::vector<NodeId> queue{from};
  parent[from] = from;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    NodeId n = queue[i];
    if (n == to) break;
    for (const auto& pr : p.at(n).premises)
      if (!parent.count(pr.id)) {
        parent[pr.id] = n;
        queue.push_back(pr.id);
      }
  }
  std::vector<NodeId> path;
  if (!parent.count(to)) return path;
  for (NodeId n = to; n != from; n = parent[n]) path.push_back(n);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

ValidityResult check_validity(const Proof& p) {
  ThreadSystem sys(p);
  if (sys.edges.empty()) return {true, std::nullopt};

  // Composition closure of the edge profiles, shortest words first, each
  // element carrying a witness word of edge indices.
  struct Element {
    Profile prof;
    std::vector<std::uint32_t> word;
  };
  std::vector<Element> elems;
  std::map<std::pair<std::pair<NodeId, NodeId>, std::vector<Entry>>, std::size_t> seen;

  auto push = [&](Profile prof, std::vector<std::uint32_t> word) -> bool {
    auto key = std::make_pair(std::make_pair(prof.from, prof.to), prof.entries);
    if (seen.count(key)) return false;
    seen.emplace(std::move(key), elems.size());
    elems.push_back({std::move(prof), std::move(word)});
    return true;
  };

  auto make_lasso = [&](const Element& el) {
    Lasso l;
    std::vector<NodeId> entry_path = shortest_path(p, p.root, el.prof.from);
    l.prefix.assign(entry_path.begin(), entry_path.end() - 1);
    l.cycle.push_back(el.prof.from);
    for (std::size_t k = 0; k + 1 < el.word.size(); ++k)
      l.cycle.push_back(sys.edges[el.word[k]].to);
    return l;
  };

  // an idempotent cycle profile without an accepting self-loop denotes an
  // invalid branch
  auto bad_cycle = [&](const Element& el) -> bool {
    if (el.prof.from != el.prof.to) return false;
    if (!(compose(el.prof, el.prof) == el.prof)) return false;
    return !sys.good_self_loop(el.prof);
  };

  for (std::uint32_t i = 0; i < sys.edges.size(); ++i) {
    push(sys.edge_profile(sys.edges[i]), {i});
    if (bad_cycle(elems.back())) return {false, make_lasso(elems.back())};
  }
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (auto [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
        if (elems[x].prof.to != elems[y].prof.from) continue;
        Profile prod = compose(elems[x].prof, elems[y].prof);
        std::vector<std::uint32_t> word = elems[x].word;
        word.insert(word.end(), elems[y].word.begin(), elems[y].word.end());
        if (push(std::move(prod), std::move(word)) && bad_cycle(elems.back()))
          return {false, make_lasso(elems.back())};
      }
    }
  }
  return {true, std::nullopt};
}

bool lasso_is_branch(const Proof& p, const Lasso& l) {
  std::vector<NodeId> nodes = l.prefix;
  nodes.insert(nodes.end(), l.cycle.begin(), l.cycle.end());
  if (nodes.empty() || nodes.front() != p.root || l.cycle.empty()) return false;
  auto is_edge = [&](NodeId a, NodeId b) {
    for (const auto& pr : p.at(a).premises)
      if (pr.id == b) return true;
    return false;
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!is_edge(nodes[i], nodes[i + 1])) return false;
  return is_edge(nodes.back(), l.cycle.front());
}

bool lasso_has_valid_thread(const Proof& p, const Lasso& l) {
  ThreadSystem sys(p);
  const auto& cyc = l.cycle;
  std::size_t C = cyc.size();
  if (C == 0) return false;
  // premise index taken at step j of the cycle
  std::vector<std::uint32_t> step(C);
  for (std::size_t j = 0; j < C; ++j) {
    NodeId next = cyc[(j + 1) % C];
    const auto& prems = p.at(cyc[j]).premises;
    std::uint32_t k = UINT32_MAX;
    for (std::uint32_t q = 0; q < prems.size(); ++q)
      if (prems[q].id == next) { k = q; break; }
    if (k == UINT32_MAX) return false;  // not a branch
    step[j] = k;
  }
  // product graph: vertices (step, position), edges along the ancestor
  // relation; a thread around the cycle is a closed walk here
  auto vid = [&](std::size_t j, std::uint32_t pos) { return j * 4096 + pos; };
  std::map<std::size_t, std::vector<std::size_t>> succ;
  std::map<std::size_t, std::uint32_t> pri;
  std::map<std::size_t, bool> princ;
  for (std::size_t j = 0; j < C; ++j) {
    const Node& node = p.at(cyc[j]);
    auto anc = ancestry(p, cyc[j], step[j]);
    for (std::uint32_t a = 0; a < node.seq.size(); ++a) {
      std::size_t v = vid(j, a);
      pri[v] = static_cast<std::uint32_t>(sys.closure.priority(node.seq[a]));
      princ[v] = position_principal(node, a);
      for (std::uint32_t b : anc[a]) succ[v].push_back(vid((j + 1) % C, b));
    }
  }
  // a valid thread exists iff for some nu-priority m the subgraph of
  // priorities >= m has a strongly connected component that realizes m and
  // takes a principal step inside itself
  for (std::size_t m = 0; m < sys.closure.size(); ++m) {
    if (!sys.nu_priority[m]) continue;
    std::map<std::size_t, int> index, low;
    std::map<std::size_t, bool> onstack;
    std::vector<std::size_t> stack;
    int counter = 0;
    bool found = false;
    auto allowed = [&](std::size_t v) { return pri.count(v) && pri[v] >= m; };
    std::function<void(std::size_t)> dfs = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      onstack[v] = true;
      for (std::size_t w : succ[v]) {
        if (!allowed(w)) continue;
        if (!index.count(w)) {
          dfs(w);
          low[v] = std::min(low[v], low[w]);
        } else if (onstack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        while (true) {
          std::size_t w = stack.back();
          stack.pop_back();
          onstack[w] = false;
          comp.push_back(w);
          if (w == v) break;
        }
        std::set<std::size_t> members(comp.begin(), comp.end());
        bool cyclic = comp.size() > 1;
        if (!cyclic)
          for (std::size_t w : succ[comp[0]])
            if (w == comp[0]) cyclic = true;
        if (!cyclic) return;
        bool has_m = false, has_princ = false;
        for (std::size_t w : comp) {
          if (pri[w] == m) has_m = true;
          if (princ[w])
            for (std::size_t x : succ[w])
              if (members.count(x)) has_princ = true;
        }
        if (has_m && has_princ) found = true;
      }
    };
    for (const auto& [v, _] : pri)
      if (allowed(v) && !index.count(v)) dfs(v);
    if (found) return true;
  }
  return false;
}

OracleResult validity_oracle(const Proof& p, std::uint64_t bound) {
  auto order = p.reachable();
  {
    // a proof with no reachable cycle has no infinite branch at all
    std::map<NodeId, int> state;  // 0 unseen, 1 active, 2 done
    bool cyclic = false;
    std::function<void(NodeId)> dfs = [&](NodeId n) {
      state[n] = 1;
      for (const auto& pr : p.at(n).premises) {
        if (state[pr.id] == 1) { cyclic = true; return; }
        if (state[pr.id] == 0) dfs(pr.id);
        if (cyclic) return;
      }
      state[n] = 2;
    };
    dfs(p.root);
    if (!cyclic) return {OracleVerdict::Valid, std::nullopt};
  }

  // enumerate lassos with |prefix| + |cycle| <= bound
  std::vector<NodeId> path{p.root};
  std::optional<Lasso> bad;
  std::function<void()> walk = [&]() {
    if (bad) return;
    NodeId n = path.back();
    for (const auto& pr : p.at(n).premises) {
      if (bad) return;
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i] == pr.id) {
          Lasso l;
          l.prefix.assign(path.begin(), path.begin() + i);
          l.cycle.assign(path.begin() + i, path.end());
          if (!lasso_has_valid_thread(p, l)) bad = l;
          break;
        }
      }
      if (bad) return;
      bool repeat = false;
      for (NodeId q : path)
        if (q == pr.id) repeat = true;
      if (!repeat && path.size() < bound) {
        path.push_back(pr.id);
        walk();
        path.pop_back();
      }
    }
  };
  walk();
  if (bad) return {OracleVerdict::Invalid, bad};

  // Conclusive validity needs the bound to dominate the counterexample size
  // of the inclusion check: |nodes| * (number of transition profiles + 1).
  ThreadSystem sys(p);
  std::uint32_t max_occ = 0;
  for (NodeId n : order)
    max_occ = std::max<std::uint32_t>(max_occ, static_cast<std::uint32_t>(p.at(n).seq.size()));
  long double log2_profiles =
      static_cast<long double>(max_occ) * max_occ * static_cast<long double>(sys.closure.size()) * 2.0L;
  if (log2_profiles <= 62.0L) {
    long double needed = static_cast<long double>(order.size()) *
                         (std::pow(2.0L, log2_profiles) + 1.0L);
    if (static_cast<long double>(bound) >= needed)
      return {OracleVerdict::Valid, std::nullopt};
  }
  return {OracleVerdict::Inconclusive, std::nullopt};
}

std::string emit_thread_automaton(const Proof& p) {
  ThreadSystem sys(p);
  std::ostringstream out;
  out << "threads: states are (node, position); a run accepts when its "
         "minimal recurring priority is a nu-formula and principal states "
         "recur\n";
  out << "priorities:\n";
  for (std::size_t i = 0; i < sys.closure.size(); ++i)
    out << "  " << i << (sys.nu_priority[i] ? " nu " : "    ")
        << store().show(sys.closure.formula_at(i)) << "\n";
  out << "states:\n";
  for (NodeId n : sys.order) {
    const Node& node = p.at(n);
    for (std::uint32_t a = 0; a < node.seq.size(); ++a)
      out << "  (" << n << "," << a << ") pri=" << sys.closure.priority(node.seq[a])
          << (position_principal(node, a) ? " principal" : "") << "\n";
  }
  out << "transitions:\n";
  for (const Edge& e : sys.edges) {
    auto anc = ancestry(p, e.from, e.premise);
    for (std::uint32_t a = 0; a < anc.size(); ++a)
      for (auto b : anc[a])
        out << "  (" << e.from << "," << a << ") -[" << e.premise << "]-> (" << e.to << "," << b
            << ")\n";
  }
  return out.str();
}

}  // namespace mull
