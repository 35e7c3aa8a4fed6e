#include "mull/mcut.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mull {

const char* mcut_error_name(McutErrorKind k) {
  switch (k) {
    case McutErrorKind::NotInjective: return "NotInjective";
    case McutErrorKind::NotTotalOffIota: return "NotTotalOffIota";
    case McutErrorKind::NotSymmetric: return "NotSymmetric";
    case McutErrorKind::MultiplyPaired: return "MultiplyPaired";
    case McutErrorKind::NotDual: return "NotDual";
    case McutErrorKind::NotTree: return "NotTree";
  }
  return "?";
}

static std::string show_pos(PremPos p) {
  return "(" + std::to_string(p.prem) + "," + std::to_string(p.pos) + ")";
}

std::optional<McutError> validate_mcut(const Mcut& m) {
  std::set<PremPos> iota_range;
  for (const auto& pp : m.iota) {
    if (pp.prem >= m.premises.size() || pp.pos >= m.premises[pp.prem].size())
      return McutError{McutErrorKind::NotInjective, {pp}, "iota target out of range " + show_pos(pp)};
    if (!iota_range.insert(pp).second)
      return McutError{McutErrorKind::NotInjective, {pp}, "two conclusion formulas share ancestor " + show_pos(pp)};
  }

  std::map<PremPos, std::vector<PremPos>> partner;
  for (const auto& [a, b] : m.pp) {
    for (PremPos q : {a, b})
      if (q.prem >= m.premises.size() || q.pos >= m.premises[q.prem].size())
        return McutError{McutErrorKind::NotTotalOffIota, {q}, "pp position out of range " + show_pos(q)};
    partner[a].push_back(b);
    partner[b].push_back(a);
  }

  // pp lives exactly on the positions iota does not cover
  for (std::uint32_t i = 0; i < m.premises.size(); ++i) {
    for (std::uint32_t j = 0; j < m.premises[i].size(); ++j) {
      PremPos q{i, j};
      bool in_iota = iota_range.count(q) != 0;
      bool in_pp = partner.count(q) != 0;
      if (in_iota && in_pp)
        return McutError{McutErrorKind::NotTotalOffIota, {q},
                         show_pos(q) + " is both an ancestor and a cut position"};
      if (!in_iota && !in_pp)
        return McutError{McutErrorKind::NotTotalOffIota, {q},
                         show_pos(q) + " is neither an ancestor nor a cut position"};
    }
  }

  // symmetry is structural here (pairs are registered both ways); a pair with
  // identical endpoints still breaks it
  for (const auto& [a, b] : m.pp)
    if (a == b)
      return McutError{McutErrorKind::NotSymmetric, {a}, show_pos(a) + " paired with itself"};

  for (const auto& [q, ps] : partner)
    if (ps.size() > 1)
      return McutError{McutErrorKind::MultiplyPaired, {q, ps[0], ps[1]},
                       show_pos(q) + " paired more than once"};

  FormulaStore& st = store();
  for (const auto& [a, b] : m.pp) {
    FormulaId fa = m.premises[a.prem][a.pos];
    FormulaId fb = m.premises[b.prem][b.pos];
    if (st.negate(fa) != fb)
      return McutError{McutErrorKind::NotDual, {a, b},
                       st.show(fa) + " vs " + st.show(fb) + " are not dual"};
  }

  // premise graph: one edge per pp pair, must be a tree over all premises
  std::size_t n = m.premises.size();
  if (m.pp.size() + 1 != n)
    return McutError{McutErrorKind::NotTree, {},
                     std::to_string(m.pp.size()) + " cut edges over " + std::to_string(n) + " premises"};
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [a, b] : m.pp) {
    adj[a.prem].push_back(b.prem);
    adj[b.prem].push_back(a.prem);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> stack{0};
  std::size_t visited = 0;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    ++visited;
    for (auto w : adj[v]) stack.push_back(w);
  }
  if (visited != n)
    return McutError{McutErrorKind::NotTree, {}, "premise cut graph is not connected"};
  // edge count == n-1 and connected => acyclic
  return std::nullopt;
}

std::vector<std::uint32_t> restrict_context(const Mcut& m, PremPos pos) {
  bool paired = false;
  for (const auto& [a, b] : m.pp)
    if (a == pos || b == pos) { paired = true; break; }
  if (!paired) return {};
  std::vector<std::vector<std::uint32_t>> adj(m.premises.size());
  for (const auto& [a, b] : m.pp) {
    adj[a.prem].push_back(b.prem);
    adj[b.prem].push_back(a.prem);
  }
  std::vector<char> seen(m.premises.size(), 0);
  seen[pos.prem] = 1;
  std::vector<std::uint32_t> stack(adj[pos.prem].begin(), adj[pos.prem].end());
  std::vector<std::uint32_t> out;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    out.push_back(v);
    for (auto w : adj[v]) stack.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> restrict_context(const Mcut& m, const std::vector<PremPos>& xs) {
  std::set<std::uint32_t> acc;
  for (PremPos q : xs)
    for (auto v : restrict_context(m, q)) acc.insert(v);
  return {acc.begin(), acc.end()};
}

std::vector<std::uint32_t> reach_without(const Mcut& m, std::uint32_t from, std::uint32_t removed) {
  std::vector<std::vector<std::uint32_t>> adj(m.premises.size());
  for (const auto& [a, b] : m.pp) {
    adj[a.prem].push_back(b.prem);
    adj[b.prem].push_back(a.prem);
  }
  std::vector<char> seen(m.premises.size(), 0);
  seen[removed] = 1;
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> stack{from};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    out.push_back(v);
    for (auto w : adj[v]) stack.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Mcut mcut_of_node(const Proof& p, NodeId n) {
  const Node& node = p.at(n);
  if (node.rule.kind != RuleKind::Mcut || !node.rule.mcut)
    throw std::logic_error("mcut_of_node: not an mcut node");
  Mcut m;
  for (const auto& pr : node.premises) m.premises.push_back(p.at(pr.id).seq);
  m.iota = node.rule.mcut->iota;
  m.pp = node.rule.mcut->pp;
  return m;
}

BangContextShape detect_bang_context(const Proof& p, NodeId mcut_node, std::uint32_t around) {
  const Node& node = p.at(mcut_node);
  BangContextShape shape;
  shape.all_promotions = true;
  shape.kinds.resize(node.premises.size(), RuleKind::Mcut);
  shape.nonempty_context.resize(node.premises.size(), false);
  for (std::uint32_t i = 0; i < node.premises.size(); ++i) {
    if (i == around) continue;
    const Node& prem = p.at(node.premises[i].id);
    shape.kinds[i] = prem.rule.kind;
    if (!is_promotion(prem.rule.kind)) {
      shape.all_promotions = false;
      shape.all_u = false;
      continue;
    }
    bool nonempty = prem.seq.size() > 1;
    shape.nonempty_context[i] = nonempty;
    if (prem.rule.kind == RuleKind::BangF) shape.has_f = true;
    if (prem.rule.kind != RuleKind::BangU) shape.all_u = false;
    if (prem.rule.kind == RuleKind::BangG && nonempty) shape.any_g_nonempty = true;
  }
  return shape;
}

}  // namespace mull
