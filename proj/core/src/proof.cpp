#include "mull/proof.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace mull {

std::string Sequent::show() const {
  std::string s = "|-";
  for (FormulaId f : formulas) s += " " + store().show(f) + ",";
  if (!formulas.empty()) s.pop_back();
  return s;
}

const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::Ax: return "ax";
    case RuleKind::Cut: return "cut";
    case RuleKind::Tensor: return "tensor";
    case RuleKind::Par: return "par";
    case RuleKind::Plus1: return "plus1";
    case RuleKind::Plus2: return "plus2";
    case RuleKind::With: return "with";
    case RuleKind::One: return "one";
    case RuleKind::Bot: return "bot";
    case RuleKind::Top: return "top";
    case RuleKind::Mu: return "mu";
    case RuleKind::Nu: return "nu";
    case RuleKind::Mpx: return "mpx";
    case RuleKind::Contr: return "contr";
    case RuleKind::BangG: return "bang_g";
    case RuleKind::BangF: return "bang_f";
    case RuleKind::BangU: return "bang_u";
    case RuleKind::Mcut: return "mcut";
  }
  return "?";
}

std::optional<RuleKind> rule_kind_from_name(const std::string& s) {
  static const std::map<std::string, RuleKind> table = {
      {"ax", RuleKind::Ax}, {"cut", RuleKind::Cut}, {"tensor", RuleKind::Tensor},
      {"par", RuleKind::Par}, {"plus1", RuleKind::Plus1}, {"plus2", RuleKind::Plus2},
      {"with", RuleKind::With}, {"one", RuleKind::One}, {"bot", RuleKind::Bot},
      {"top", RuleKind::Top}, {"mu", RuleKind::Mu}, {"nu", RuleKind::Nu},
      {"mpx", RuleKind::Mpx}, {"contr", RuleKind::Contr}, {"bang_g", RuleKind::BangG},
      {"bang_f", RuleKind::BangF}, {"bang_u", RuleKind::BangU}, {"mcut", RuleKind::Mcut}};
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool is_promotion(RuleKind k) {
  return k == RuleKind::BangG || k == RuleKind::BangF || k == RuleKind::BangU;
}

std::vector<NodeId> Proof::reachable() const {
  std::vector<NodeId> order;
  std::vector<char> seen(nodes.size(), 0);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (n >= nodes.size() || seen[n]) continue;
    seen[n] = 1;
    order.push_back(n);
    const auto& prems = nodes[n].premises;
    for (auto it = prems.rbegin(); it != prems.rend(); ++it) stack.push_back(it->id);
  }
  return order;
}

std::vector<std::uint32_t> Proof::in_degrees() const {
  std::vector<std::uint32_t> deg(nodes.size(), 0);
  for (NodeId n : reachable())
    for (const auto& pr : nodes[n].premises) deg.at(pr.id)++;
  return deg;
}

void Proof::compact() {
  auto live = reachable();
  std::vector<NodeId> remap(nodes.size(), 0);
  std::vector<Node> fresh;
  fresh.reserve(live.size());
  for (NodeId n : live) {
    remap[n] = static_cast<NodeId>(fresh.size());
    fresh.push_back(std::move(nodes[n]));
  }
  for (auto& node : fresh)
    for (auto& pr : node.premises) pr.id = remap[pr.id];
  nodes = std::move(fresh);
  root = remap[root];
}

bool Proof::has_rule(RuleKind k) const {
  for (NodeId n : reachable())
    if (nodes[n].rule.kind == k) return true;
  return false;
}

// Premise layout is positional: a rule's components replace the principal
// formula in place and the context keeps its order around them. Tensor and
// cut also split the context by their recorded sides.

std::vector<Sequent> expected_premises(const Proof& p, NodeId id) {
  FormulaStore& st = store();
  const Node& node = p.at(id);
  const RuleInstance& r = node.rule;
  auto principal_formula = [&]() -> FormulaId {
    if (r.principal >= node.seq.size()) throw std::logic_error("principal out of range");
    return node.seq[r.principal];
  };
  // context split rank bookkeeping for tensor
  auto ctx_index = [&](std::uint32_t pos) {
    std::uint32_t rank = 0;
    for (std::uint32_t q = 0; q < pos; ++q)
      if (q != r.principal) ++rank;
    return rank;
  };
  switch (r.kind) {
    case RuleKind::Ax:
    case RuleKind::One:
    case RuleKind::Top:
      return {};
    case RuleKind::Cut: {
      if (r.split.size() != node.seq.size()) throw std::logic_error("cut split size");
      if (node.premises.size() != 2) throw std::logic_error("cut premise count");
      const Sequent& actual_l = p.at(node.premises[0].id).seq;
      if (actual_l.size() == 0) throw std::logic_error("cut premise empty");
      FormulaId cutf = actual_l[0];
      Sequent l{{cutf}}, rr{{st.negate(cutf)}};
      for (std::uint32_t q = 0; q < node.seq.size(); ++q)
        (r.split[q] == 0 ? l : rr).formulas.push_back(node.seq[q]);
      return {l, rr};
    }
    case RuleKind::Tensor: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Tensor) throw std::logic_error("tensor principal");
      if (r.split.size() + 1 != node.seq.size()) throw std::logic_error("tensor split size");
      Sequent l, rr;
      for (std::uint32_t q = 0; q < node.seq.size(); ++q) {
        if (q == r.principal) {
          l.formulas.push_back(n.a);
          rr.formulas.push_back(n.b);
        } else {
          (r.split[ctx_index(q)] == 0 ? l : rr).formulas.push_back(node.seq[q]);
        }
      }
      return {l, rr};
    }
    case RuleKind::Par: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Par) throw std::logic_error("par principal");
      Sequent s = node.seq;
      s.formulas[r.principal] = n.a;
      s.formulas.insert(s.formulas.begin() + r.principal + 1, n.b);
      return {s};
    }
    case RuleKind::Plus1:
    case RuleKind::Plus2: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Plus) throw std::logic_error("plus principal");
      Sequent s = node.seq;
      s.formulas[r.principal] = r.kind == RuleKind::Plus1 ? n.a : n.b;
      return {s};
    }
    case RuleKind::With: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::With) throw std::logic_error("with principal");
      Sequent l = node.seq, rr = node.seq;
      l.formulas[r.principal] = n.a;
      rr.formulas[r.principal] = n.b;
      return {l, rr};
    }
    case RuleKind::Bot: {
      if (st.tag(principal_formula()) != Tag::Bot) throw std::logic_error("bot principal");
      Sequent s = node.seq;
      s.formulas.erase(s.formulas.begin() + r.principal);
      return {s};
    }
    case RuleKind::Mu:
    case RuleKind::Nu: {
      FormulaId f = principal_formula();
      Tag want = r.kind == RuleKind::Mu ? Tag::Mu : Tag::Nu;
      if (st.tag(f) != want) throw std::logic_error("fixpoint principal");
      Sequent s = node.seq;
      s.formulas[r.principal] = st.unfold(f);
      return {s};
    }
    case RuleKind::Mpx: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Whynot) throw std::logic_error("mpx principal");
      Sequent s;
      for (std::uint32_t q = 0; q < node.seq.size(); ++q) {
        if (q == r.principal)
          for (unsigned k = 0; k < r.index; ++k) s.formulas.push_back(n.a);
        else
          s.formulas.push_back(node.seq[q]);
      }
      return {s};
    }
    case RuleKind::Contr: {
      FormulaId f = principal_formula();
      if (st.tag(f) != Tag::Whynot) throw std::logic_error("contr principal");
      Sequent s;
      for (std::uint32_t q = 0; q < node.seq.size(); ++q) {
        if (q == r.principal)
          for (unsigned k = 0; k < r.index; ++k) s.formulas.push_back(f);
        else
          s.formulas.push_back(node.seq[q]);
      }
      return {s};
    }
    case RuleKind::BangG: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Bang) throw std::logic_error("bang principal");
      Sequent s = node.seq;
      s.formulas[r.principal] = n.a;
      for (std::uint32_t q = 0; q < node.seq.size(); ++q)
        if (q != r.principal && st.tag(node.seq[q]) != Tag::Whynot)
          throw std::logic_error("bang_g context must be why-not formulas");
      return {s};
    }
    case RuleKind::BangF: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Bang) throw std::logic_error("bang principal");
      Sequent s = node.seq;
      s.formulas[r.principal] = n.a;
      for (std::uint32_t q = 0; q < node.seq.size(); ++q) {
        if (q == r.principal) continue;
        const auto& c = st.node(node.seq[q]);
        if (c.tag != Tag::Whynot) throw std::logic_error("bang_f context must be why-not formulas");
        s.formulas[q] = c.a;
      }
      return {s};
    }
    case RuleKind::BangU: {
      const auto& n = st.node(principal_formula());
      if (n.tag != Tag::Bang || node.seq.size() != 2) throw std::logic_error("bang_u shape");
      std::uint32_t other = r.principal == 0 ? 1 : 0;
      const auto& c = st.node(node.seq[other]);
      if (c.tag != Tag::Whynot) throw std::logic_error("bang_u context");
      Sequent s = node.seq;
      s.formulas[r.principal] = n.a;
      s.formulas[other] = c.a;
      return {s};
    }
    case RuleKind::Mcut: {
      if (!r.mcut) throw std::logic_error("mcut data missing");
      // premises are free-form; the iota/pp conditions carry the constraints
      std::vector<Sequent> out;
      out.reserve(node.premises.size());
      for (const auto& pr : node.premises) out.push_back(p.at(pr.id).seq);
      return out;
    }
  }
  throw std::logic_error("expected_premises: bad kind");
}

std::vector<std::vector<std::uint32_t>> ancestry(const Proof& p, NodeId n, std::uint32_t premise_idx) {
  const Node& node = p.at(n);
  const RuleInstance& r = node.rule;
  std::vector<std::vector<std::uint32_t>> out(node.seq.size());
  std::uint32_t j = r.principal;
  auto ctx_index = [&](std::uint32_t pos) {
    std::uint32_t rank = 0;
    for (std::uint32_t q = 0; q < pos; ++q)
      if (q != j) ++rank;
    return rank;
  };
  switch (r.kind) {
    case RuleKind::Ax:
    case RuleKind::One:
    case RuleKind::Top:
      break;
    case RuleKind::Cut: {
      std::uint32_t seen = 0;
      for (std::uint32_t t = 0; t < node.seq.size(); ++t)
        if (r.split[t] == premise_idx) out[t].push_back(1 + seen++);
      break;
    }
    case RuleKind::Tensor: {
      std::uint32_t seen = 0;
      for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
        if (t == j) out[t].push_back(seen++);
        else if (r.split[ctx_index(t)] == premise_idx) out[t].push_back(seen++);
      }
      break;
    }
    case RuleKind::Par:
      for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
        if (t == j) { out[t].push_back(j); out[t].push_back(j + 1); }
        else out[t].push_back(t < j ? t : t + 1);
      }
      break;
    case RuleKind::Bot:
      for (std::uint32_t t = 0; t < node.seq.size(); ++t)
        if (t != j) out[t].push_back(t < j ? t : t - 1);
      break;
    case RuleKind::Mpx:
    case RuleKind::Contr:
      for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
        if (t == j)
          for (unsigned k = 0; k < r.index; ++k) out[t].push_back(j + k);
        else
          out[t].push_back(t < j ? t : t + r.index - 1);
      }
      break;
    default:
      // all remaining rules keep every position in place
      for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
        if (r.kind == RuleKind::Mcut) break;
        out[t].push_back(t);
      }
      if (r.kind == RuleKind::Mcut)
        for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
          const PremPos& pp = r.mcut->iota.at(t);
          if (pp.prem == premise_idx) out[t].push_back(pp.pos);
        }
      break;
  }
  return out;
}

bool proof_equal(const Proof& a, const Proof& b) {
  std::unordered_map<NodeId, NodeId> match;
  std::vector<std::pair<NodeId, NodeId>> stack{{a.root, b.root}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    auto it = match.find(x);
    if (it != match.end()) {
      if (it->second != y) return false;
      continue;
    }
    match.emplace(x, y);
    const Node& nx = a.at(x);
    const Node& ny = b.at(y);
    if (nx.seq != ny.seq) return false;
    const RuleInstance& rx = nx.rule;
    const RuleInstance& ry = ny.rule;
    if (rx.kind != ry.kind || rx.principal != ry.principal || rx.index != ry.index ||
        rx.split != ry.split)
      return false;
    if (rx.kind == RuleKind::Mcut) {
      if (rx.mcut->iota != ry.mcut->iota || rx.mcut->pp != ry.mcut->pp) return false;
    }
    if (nx.premises.size() != ny.premises.size()) return false;
    for (std::size_t i = 0; i < nx.premises.size(); ++i)
      stack.push_back({nx.premises[i].id, ny.premises[i].id});
  }
  return true;
}

namespace {

struct Expander {
  Proof proof;
  const InstanceSpec& inst;
  std::map<FormulaId, NodeId> open;  // fixed points currently being expanded
  std::map<FormulaId, NodeId> done;  // completed expansions, shared

  explicit Expander(const InstanceSpec& i) : inst(i) {}

  // builds a node proving |- ~f, f  (negation first)
  NodeId build(FormulaId f) {
    if (auto it = open.find(f); it != open.end()) return it->second;
    if (auto it = done.find(f); it != done.end()) return it->second;
    NodeId n = build_fresh(f);
    done[f] = n;
    return n;
  }

  NodeId build_fresh(FormulaId f) {
    FormulaStore& st = store();
    FormulaId nf = st.negate(f);
    const FormulaNode n = st.node(f);
    Sequent concl{{nf, f}};
    switch (n.tag) {
      case Tag::Atom:
      case Tag::NegAtom:
        return proof.add({concl, {RuleKind::Ax, 0, 0, {}, nullptr}, {}});
      case Tag::One: {
        NodeId one = proof.add({Sequent{{f}}, {RuleKind::One, 0, 0, {}, nullptr}, {}});
        return proof.add({concl, {RuleKind::Bot, 0, 0, {}, nullptr}, {{one, false}}});
      }
      case Tag::Bot: {
        NodeId one = proof.add({Sequent{{nf}}, {RuleKind::One, 0, 0, {}, nullptr}, {}});
        return proof.add({concl, {RuleKind::Bot, 1, 0, {}, nullptr}, {{one, false}}});
      }
      case Tag::Zero:
        return proof.add({concl, {RuleKind::Top, 0, 0, {}, nullptr}, {}});
      case Tag::Top:
        return proof.add({concl, {RuleKind::Top, 1, 0, {}, nullptr}, {}});
      case Tag::Par: {
        // f = a | b : par at 1 over a tensor at 0 splitting the pair proofs
        NodeId t = proof.add({Sequent{{nf, n.a, n.b}},
                              {RuleKind::Tensor, 0, 0, {0, 1}, nullptr},
                              {{build(n.a), false}, {build(n.b), false}}});
        return proof.add({concl, {RuleKind::Par, 1, 0, {}, nullptr}, {{t, false}}});
      }
      case Tag::Tensor: {
        // f = a * b : par at 0 over a tensor at 2
        NodeId t = proof.add({Sequent{{st.negate(n.a), st.negate(n.b), f}},
                              {RuleKind::Tensor, 2, 0, {0, 1}, nullptr},
                              {{build(n.a), false}, {build(n.b), false}}});
        return proof.add({concl, {RuleKind::Par, 0, 0, {}, nullptr}, {{t, false}}});
      }
      case Tag::Plus: {
        // f = a + b : with at 0, plus_i at 1 in each branch
        NodeId bl = proof.add({Sequent{{st.negate(n.a), f}},
                               {RuleKind::Plus1, 1, 0, {}, nullptr},
                               {{build(n.a), false}}});
        NodeId br = proof.add({Sequent{{st.negate(n.b), f}},
                               {RuleKind::Plus2, 1, 0, {}, nullptr},
                               {{build(n.b), false}}});
        return proof.add({concl, {RuleKind::With, 0, 0, {}, nullptr}, {{bl, false}, {br, false}}});
      }
      case Tag::With: {
        // f = a & b : with at 1, plus_i at 0 in each branch
        NodeId bl = proof.add({Sequent{{nf, n.a}},
                               {RuleKind::Plus1, 0, 0, {}, nullptr},
                               {{build(n.a), false}}});
        NodeId br = proof.add({Sequent{{nf, n.b}},
                               {RuleKind::Plus2, 0, 0, {}, nullptr},
                               {{build(n.b), false}}});
        return proof.add({concl, {RuleKind::With, 1, 0, {}, nullptr}, {{bl, false}, {br, false}}});
      }
      case Tag::Mu:
      case Tag::Nu: {
        // unfold both sides and tie the knot on repetition
        NodeId self = proof.add({concl, {}, {}});
        open.emplace(f, self);
        FormulaId uf = st.unfold(f);
        NodeId body = build(uf);  // |- unfold(nf), unfold(f)
        open.erase(f);
        RuleKind rule_f = n.tag == Tag::Mu ? RuleKind::Mu : RuleKind::Nu;
        RuleKind rule_nf = n.tag == Tag::Mu ? RuleKind::Nu : RuleKind::Mu;
        NodeId mid = proof.add({Sequent{{nf, uf}},
                                {rule_nf, 0, 0, {}, nullptr},
                                {{body, false}}});
        proof.nodes[self].rule = {rule_f, 1, 0, {}, nullptr};
        proof.nodes[self].premises = {{mid, false}};
        return self;
      }
      case Tag::Whynot:
        // |- !s ~a, ?s a : promotion at 0
        return build_bang(concl, n.sig, 0, n.a);
      case Tag::Bang:
        // |- ?s ~a, !s a : promotion at 1
        return build_bang(concl, n.sig, 1, n.a);
      default:
        throw std::logic_error("expand_identity: open formula");
    }
  }

  // concl = two dual formulas with the bang at bang_pos; a is the formula
  // under the why-not
  NodeId build_bang(const Sequent& concl, SigId sig, std::uint32_t bang_pos, FormulaId a) {
    FormulaStore& st = store();
    const std::string& sname = st.sig_name(sig);
    if (!inst.has_sig(sname)) throw NotDerivable("unknown signature " + sname);
    // both orientations strip to the same premise |- ~a, a
    NodeId sub = build(a);
    if (inst.leq(Promo::U, sname, sname))
      return proof.add({concl, {RuleKind::BangU, bang_pos, 0, {}, nullptr}, {{sub, false}}});
    if (inst.leq(Promo::F, sname, sname))
      return proof.add({concl, {RuleKind::BangF, bang_pos, 0, {}, nullptr}, {{sub, false}}});
    if (inst.leq(Promo::G, sname, sname) && inst.sig(sname).has(RuleName::mpx(1))) {
      Sequent mid = concl;
      mid.formulas[bang_pos] = bang_pos == 0 ? st.negate(a) : a;
      NodeId d = proof.add({mid, {RuleKind::Mpx, bang_pos == 0 ? 1u : 0u, 1, {}, nullptr},
                            {{sub, false}}});
      return proof.add({concl, {RuleKind::BangG, bang_pos, 0, {}, nullptr}, {{d, false}}});
    }
    throw NotDerivable("expansion axiom fails for signature " + sname);
  }
};

}  // namespace

Proof expand_identity(FormulaId f, const InstanceSpec& inst) {
  Expander e(inst);
  e.proof.root = 0;
  NodeId r = e.build(f);
  e.proof.root = r;
  return e.proof;
}

}  // namespace mull
