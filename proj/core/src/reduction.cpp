#include "mull/reduction.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace mull {

const char* step_shape_name(StepShape s) {
  switch (s) {
    case StepShape::MergeCut: return "merge_cut";
    case StepShape::Ax: return "ax";
    case StepShape::CommTensor: return "comm_tensor";
    case StepShape::CommPar: return "comm_par";
    case StepShape::CommPlus: return "comm_plus";
    case StepShape::CommWith: return "comm_with";
    case StepShape::CommBot: return "comm_bot";
    case StepShape::CommTop: return "comm_top";
    case StepShape::CommOne: return "comm_one";
    case StepShape::CommMu: return "comm_mu";
    case StepShape::CommNu: return "comm_nu";
    case StepShape::PrincTensorPar: return "princ_tensor_par";
    case StepShape::PrincPlusWith: return "princ_plus_with";
    case StepShape::PrincMuNu: return "princ_mu_nu";
    case StepShape::PrincOneBot: return "princ_one_bot";
    case StepShape::CommBangG: return "comm_bang_g";
    case StepShape::Comm1BangF: return "comm1_bang_f";
    case StepShape::Comm2BangF: return "comm2_bang_f";
    case StepShape::Comm1BangU: return "comm1_bang_u";
    case StepShape::Comm2BangU: return "comm2_bang_u";
    case StepShape::Comm3BangU: return "comm3_bang_u";
    case StepShape::Comm4BangU: return "comm4_bang_u";
    case StepShape::CommMpx: return "comm_mpx";
    case StepShape::CommContr: return "comm_contr";
    case StepShape::PrincContr: return "princ_contr";
    case StepShape::PrincMpx: return "princ_mpx";
  }
  return "?";
}

namespace {

std::vector<std::uint32_t> ctx_positions(const Node& node) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < node.seq.size(); ++p)
    if (p != node.rule.principal) out.push_back(p);
  return out;
}

std::uint32_t ctx_rank(const Node& node, std::uint32_t pos) {
  std::uint32_t r = 0;
  for (std::uint32_t p = 0; p < pos; ++p)
    if (p != node.rule.principal) ++r;
  return r;
}

// number of positions the rule's components occupy at the premise front
std::uint32_t premise_base(const RuleInstance& r) {
  switch (r.kind) {
    case RuleKind::Par: return 2;
    case RuleKind::Bot: return 0;
    case RuleKind::Mpx:
    case RuleKind::Contr: return r.index;
    default: return 1;
  }
}

// where a promotion's conclusion position sits in its immediate subproof
std::uint32_t promo_sub_pos(const Node& promo, std::uint32_t pos) {
  if (pos == promo.rule.principal) return 0;
  return 1 + ctx_rank(promo, pos);
}

const std::string& sig_name_of(FormulaId f) { return store().sig_name(store().node(f).sig); }

struct Surgery {
  Proof& p;
  NodeId at;
  const InstanceSpec& inst;
  Node old;                 // copy of the multicut node before the step
  std::vector<Sequent> pseq;
  std::map<PremPos, std::uint32_t> iota_at;  // premise position -> conclusion index
  std::map<PremPos, PremPos> partner;

  Surgery(Proof& proof, NodeId node, const InstanceSpec& i)
      : p(proof), at(node), inst(i), old(proof.at(node)) {
    for (const auto& pr : old.premises) pseq.push_back(p.at(pr.id).seq);
    for (std::uint32_t t = 0; t < old.rule.mcut->iota.size(); ++t)
      iota_at[old.rule.mcut->iota[t]] = t;
    for (const auto& [a, b] : old.rule.mcut->pp) {
      partner[a] = b;
      partner[b] = a;
    }
  }

  const Node& prem(std::uint32_t k) const { return p.at(old.premises[k].id); }

  bool in_iota(PremPos q) const { return iota_at.count(q) != 0; }

  void require(bool ok, const std::string& what) const {
    if (!ok) throw InternalInvariantBroken(what + " (at node " + std::to_string(at) + ")");
  }

  // overwrite the multicut node with new content
  void replace_at(Node n) { p.nodes[at] = std::move(n); }
};

Node make_mcut(Sequent concl, std::vector<PremiseRef> premises, McutData data) {
  Node n;
  n.seq = std::move(concl);
  n.rule.kind = RuleKind::Mcut;
  n.rule.mcut = std::make_shared<McutData>(std::move(data));
  n.premises = std::move(premises);
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// derived-rule materialization

namespace {

NodeId mat_contr(Proof& p, const DerivPlan& plan, const Sequent& below, std::uint32_t pos,
                 NodeId above);

NodeId mat_mpx(Proof& p, const DerivPlan& plan, const Sequent& below, std::uint32_t pos,
               NodeId above) {
  FormulaStore& st = store();
  FormulaId wn = below[pos];
  FormulaId naked = st.node(wn).a;
  unsigned n = plan.target.index;
  auto expand = [&](const Sequent& base, std::uint32_t at_pos, unsigned banged,
                    unsigned naked_count) {
    Sequent s;
    for (std::uint32_t q = 0; q < at_pos; ++q) s.formulas.push_back(base[q]);
    for (unsigned k = 0; k < banged; ++k) s.formulas.push_back(wn);
    for (unsigned k = 0; k < naked_count; ++k) s.formulas.push_back(naked);
    for (std::uint32_t q = at_pos + 1; q < base.size(); ++q) s.formulas.push_back(base[q]);
    return s;
  };
  switch (plan.kind) {
    case DerivPlan::Kind::Prim:
      return p.add({below, {RuleKind::Mpx, pos, n, {}, nullptr}, {{above, false}}});
    case DerivPlan::Kind::SumM: {
      unsigned i = plan.left->target.index;
      unsigned j = plan.right->target.index;
      // first i naked copies become one why-not, then the next j, then c_2
      Sequent mid1 = expand(below, pos, 1, j);
      Sequent mid2 = expand(below, pos, 2, 0);
      NodeId m1 = mat_mpx(p, *plan.left, mid1, pos, above);
      NodeId m2 = mat_mpx(p, *plan.right, mid2, pos + 1, m1);
      return p.add({below, {RuleKind::Contr, pos, 2, {}, nullptr}, {{m2, false}}});
    }
    case DerivPlan::Kind::MpxViaC: {
      // n derelictions, then the contraction plan
      NodeId cur = above;
      for (unsigned d = 0; d < n; ++d) {
        Sequent s = expand(below, pos, d + 1, n - d - 1);
        cur = p.add({s, {RuleKind::Mpx, pos + d, 1, {}, nullptr}, {{cur, false}}});
      }
      return mat_contr(p, *plan.left, below, pos, cur);
    }
    default:
      throw InternalInvariantBroken("malformed multiplexing plan");
  }
}

NodeId mat_contr(Proof& p, const DerivPlan& plan, const Sequent& below, std::uint32_t pos,
                 NodeId above) {
  FormulaId wn = below[pos];
  unsigned n = plan.target.index;
  auto expand = [&](unsigned copies) {
    Sequent s;
    for (std::uint32_t q = 0; q < pos; ++q) s.formulas.push_back(below[q]);
    for (unsigned k = 0; k < copies; ++k) s.formulas.push_back(wn);
    for (std::uint32_t q = pos + 1; q < below.size(); ++q) s.formulas.push_back(below[q]);
    return s;
  };
  switch (plan.kind) {
    case DerivPlan::Kind::Empty:
      return above;
    case DerivPlan::Kind::Prim:
      if (plan.target.kind == RuleNameKind::Mpx)  // c_0, realized as weakening
        return p.add({below, {RuleKind::Mpx, pos, 0, {}, nullptr}, {{above, false}}});
      return p.add({below, {RuleKind::Contr, pos, n, {}, nullptr}, {{above, false}}});
    case DerivPlan::Kind::MergeC: {
      unsigned i = plan.left->target.index;
      unsigned j = plan.right->target.index;
      (void)i;
      Sequent mid = expand(j);
      NodeId m = mat_contr(p, *plan.left, mid, pos, above);
      return mat_contr(p, *plan.right, below, pos, m);
    }
    default:
      throw InternalInvariantBroken("malformed contraction plan");
  }
}

}  // namespace

NodeId materialize_plan(Proof& p, const DerivPlan& plan, const Sequent& below, std::uint32_t pos,
                        NodeId above) {
  if (plan.target.kind == RuleNameKind::Mpx) return mat_mpx(p, plan, below, pos, above);
  return mat_contr(p, plan, below, pos, above);
}

// ---------------------------------------------------------------------------
// redex enumeration

namespace {

// promotion-commutation conditions around focus premise k; the focus's
// principal must already be known to map to the conclusion
std::optional<StepShape> promo_comm_shape(const Surgery& s, std::uint32_t k) {
  const Node& focus = s.prem(k);
  // every other conclusion formula must be a why-not for the rebuilt
  // promotion to be well-formed
  std::uint32_t t = s.iota_at.at({k, focus.rule.principal});
  for (std::uint32_t q = 0; q < s.old.seq.size(); ++q)
    if (q != t && store().tag(s.old.seq[q]) != Tag::Whynot) return std::nullopt;

  bool all_promos = true, has_f = false, any_g_nonempty = false, all_u = true;
  for (std::uint32_t i = 0; i < s.old.premises.size(); ++i) {
    if (i == k) continue;
    const Node& other = s.prem(i);
    if (!is_promotion(other.rule.kind)) { all_promos = false; break; }
    if (other.rule.kind != RuleKind::BangU) all_u = false;
    if (other.rule.kind == RuleKind::BangF) has_f = true;
    if (other.rule.kind == RuleKind::BangG && other.seq.size() > 1) any_g_nonempty = true;
  }
  if (!all_promos) return std::nullopt;

  switch (focus.rule.kind) {
    case RuleKind::BangG:
      return StepShape::CommBangG;
    case RuleKind::BangF:
      return any_g_nonempty ? StepShape::Comm2BangF : StepShape::Comm1BangF;
    case RuleKind::BangU: {
      if (s.old.premises.size() == 1) return StepShape::Comm1BangU;
      if (all_u) return StepShape::Comm1BangU;
      if (has_f && !any_g_nonempty) return StepShape::Comm2BangU;
      // follow the unary chain from the focus context to the first non-unary
      std::uint32_t other_pos = focus.rule.principal == 0 ? 1 : 0;
      PremPos cur{k, other_pos};
      std::set<std::uint32_t> seen{k};
      while (true) {
        auto it = s.partner.find(cur);
        if (it == s.partner.end()) return std::nullopt;  // chain reaches the conclusion: all_u
        std::uint32_t n = it->second.prem;
        if (seen.count(n)) return std::nullopt;
        seen.insert(n);
        const Node& link = s.prem(n);
        if (link.rule.kind == RuleKind::BangF) return StepShape::Comm3BangU;
        if (link.rule.kind == RuleKind::BangG) return StepShape::Comm4BangU;
        // unary link: continue out of its other position
        std::uint32_t out = link.rule.principal == it->second.pos
                                ? (link.rule.principal == 0 ? 1 : 0)
                                : link.rule.principal;
        cur = {n, out};
      }
    }
    default:
      return std::nullopt;
  }
}

void enumerate_at(const Proof& p, const InstanceSpec& inst, NodeId at, std::vector<Redex>& out) {
  Surgery s(const_cast<Proof&>(p), at, inst);
  const auto& prems = s.old.premises;
  for (std::uint32_t k = 0; k < prems.size(); ++k) {
    const Node& prem = s.prem(k);
    const RuleInstance& r = prem.rule;
    switch (r.kind) {
      case RuleKind::Cut:
        out.push_back({at, StepShape::MergeCut, k, 0});
        break;
      case RuleKind::Ax:
        out.push_back({at, StepShape::Ax, k, 0});
        break;
      case RuleKind::Mcut:
        break;  // reduce the inner multicut at its own node
      case RuleKind::One:
        if (s.in_iota({k, 0})) out.push_back({at, StepShape::CommOne, k, 0});
        else if (auto it = s.partner.find({k, 0}); it != s.partner.end()) {
          const Node& b = s.prem(it->second.prem);
          if (b.rule.kind == RuleKind::Bot && b.rule.principal == it->second.pos)
            out.push_back({at, StepShape::PrincOneBot, k, it->second.prem});
        }
        break;
      case RuleKind::Top:
        if (s.in_iota({k, r.principal})) out.push_back({at, StepShape::CommTop, k, 0});
        break;
      default: {
        PremPos pp{k, r.principal};
        if (s.in_iota(pp)) {
          switch (r.kind) {
            case RuleKind::Tensor: out.push_back({at, StepShape::CommTensor, k, 0}); break;
            case RuleKind::Par: out.push_back({at, StepShape::CommPar, k, 0}); break;
            case RuleKind::Plus1:
            case RuleKind::Plus2: out.push_back({at, StepShape::CommPlus, k, 0}); break;
            case RuleKind::With: out.push_back({at, StepShape::CommWith, k, 0}); break;
            case RuleKind::Bot: out.push_back({at, StepShape::CommBot, k, 0}); break;
            case RuleKind::Mu: out.push_back({at, StepShape::CommMu, k, 0}); break;
            case RuleKind::Nu: out.push_back({at, StepShape::CommNu, k, 0}); break;
            case RuleKind::Mpx: out.push_back({at, StepShape::CommMpx, k, 0}); break;
            case RuleKind::Contr: out.push_back({at, StepShape::CommContr, k, 0}); break;
            case RuleKind::BangG:
            case RuleKind::BangF:
            case RuleKind::BangU:
              if (auto shape = promo_comm_shape(s, k)) out.push_back({at, *shape, k, 0});
              break;
            default:
              break;
          }
        } else if (auto it = s.partner.find(pp); it != s.partner.end()) {
          std::uint32_t b = it->second.prem;
          const Node& bn = s.prem(b);
          bool b_principal = is_promotion(bn.rule.kind) || bn.rule.kind == RuleKind::Tensor ||
                                     bn.rule.kind == RuleKind::With
                                 ? bn.rule.principal == it->second.pos
                                 : false;
          switch (r.kind) {
            case RuleKind::Par:
              if (bn.rule.kind == RuleKind::Tensor && bn.rule.principal == it->second.pos)
                out.push_back({at, StepShape::PrincTensorPar, k, b});
              break;
            case RuleKind::Plus1:
            case RuleKind::Plus2:
              if (bn.rule.kind == RuleKind::With && bn.rule.principal == it->second.pos)
                out.push_back({at, StepShape::PrincPlusWith, k, b});
              break;
            case RuleKind::Mu:
              if (bn.rule.kind == RuleKind::Nu && bn.rule.principal == it->second.pos)
                out.push_back({at, StepShape::PrincMuNu, k, b});
              break;
            case RuleKind::Mpx:
            case RuleKind::Contr: {
              if (!b_principal) break;
              // the whole restriction hanging off the cut formula must be
              // promotion-concluded
              Mcut m = mcut_of_node(p, at);
              bool ok = true;
              auto sub = reach_without(m, b, k);
              for (auto q : sub)
                if (!is_promotion(s.prem(q).rule.kind)) ok = false;
              if (ok)
                out.push_back({at, r.kind == RuleKind::Mpx ? StepShape::PrincMpx
                                                           : StepShape::PrincContr,
                               k, b});
              break;
            }
            default:
              break;
          }
        }
        break;
      }
    }
  }
}

}  // namespace

std::vector<Redex> enumerate_redexes(const Proof& p, const InstanceSpec& inst) {
  std::vector<Redex> out;
  for (NodeId n : p.reachable())
    if (p.at(n).rule.kind == RuleKind::Mcut) enumerate_at(p, inst, n, out);
  return out;
}

// ---------------------------------------------------------------------------
// step application

namespace {

// identity remap for every premise/position; steps edit what moves
struct Remap {
  // target premise/position per old premise and position; an unset premise
  // has been removed and must not be referenced
  std::vector<std::vector<PremPos>> pos;

  PremPos operator()(PremPos q) const { return pos.at(q.prem).at(q.pos); }
};

Remap identity_remap(const std::vector<Sequent>& pseq) {
  Remap r;
  r.pos.resize(pseq.size());
  for (std::uint32_t i = 0; i < pseq.size(); ++i) {
    r.pos[i].resize(pseq[i].size());
    for (std::uint32_t j = 0; j < pseq[i].size(); ++j) r.pos[i][j] = {i, j};
  }
  return r;
}

McutData remap_data(const Surgery& s, const Remap& rm,
                    const std::set<PremPos>& dropped_pairs = {}) {
  McutData nd;
  for (const auto& q : s.old.rule.mcut->iota) nd.iota.push_back(rm(q));
  for (const auto& [a, b] : s.old.rule.mcut->pp) {
    if (dropped_pairs.count(a) || dropped_pairs.count(b)) continue;
    nd.pp.push_back({rm(a), rm(b)});
  }
  return nd;
}

void step_merge_cut(Surgery& s, std::uint32_t k) {
  const Node cut = s.prem(k);
  if (cut.rule.kind != RuleKind::Cut) throw NotApplicable("premise does not end in cut");
  NodeId ql = cut.premises[0].id, qr = cut.premises[1].id;

  std::vector<PremiseRef> prems;
  for (std::uint32_t i = 0; i < s.old.premises.size(); ++i) {
    if (i == k) {
      prems.push_back({ql, false});
      prems.push_back({qr, false});
    } else {
      prems.push_back(s.old.premises[i]);
    }
  }
  Remap rm = identity_remap(s.pseq);
  for (std::uint32_t i = 0; i < s.pseq.size(); ++i) {
    std::uint32_t ni = i < k ? i : i + 1;
    for (std::uint32_t j = 0; j < s.pseq[i].size(); ++j) {
      if (i != k) { rm.pos[i][j] = {ni, j}; continue; }
      // conclusion position j of the cut goes to the side its split says
      std::uint32_t side = cut.rule.split.at(j);
      std::uint32_t rank = 0;
      for (std::uint32_t q = 0; q < j; ++q)
        if (cut.rule.split[q] == side) ++rank;
      rm.pos[i][j] = {side == 0 ? k : k + 1, 1 + rank};
    }
  }
  McutData nd = remap_data(s, rm);
  nd.pp.push_back({{k, 0}, {k + 1, 0}});
  s.replace_at(make_mcut(s.old.seq, std::move(prems), std::move(nd)));
}

void step_ax(Surgery& s, std::uint32_t k) {
  const Node ax = s.prem(k);
  if (ax.rule.kind != RuleKind::Ax) throw NotApplicable("premise does not end in ax");
  bool i0 = s.in_iota({k, 0}), i1 = s.in_iota({k, 1});
  if (i0 && i1) {
    // the multicut has this single premise; it becomes the axiom itself
    Node n;
    n.seq = s.old.seq;
    n.rule = {RuleKind::Ax, 0, 0, {}, nullptr};
    s.replace_at(std::move(n));
    return;
  }
  std::vector<PremiseRef> prems;
  for (std::uint32_t i = 0; i < s.old.premises.size(); ++i)
    if (i != k) prems.push_back(s.old.premises[i]);
  Remap rm = identity_remap(s.pseq);
  for (std::uint32_t i = 0; i < s.pseq.size(); ++i)
    for (std::uint32_t j = 0; j < s.pseq[i].size(); ++j)
      rm.pos[i][j] = {i < k ? i : i - 1, j};

  McutData nd;
  if (!i0 && !i1) {
    // both sides cut: the partners now face each other
    PremPos q0 = s.partner.at({k, 0}), q1 = s.partner.at({k, 1});
    for (const auto& q : s.old.rule.mcut->iota) nd.iota.push_back(rm(q));
    for (const auto& [a, b] : s.old.rule.mcut->pp) {
      if (a.prem == k || b.prem == k) continue;
      nd.pp.push_back({rm(a), rm(b)});
    }
    nd.pp.push_back({rm(q0), rm(q1)});
  } else {
    // one side in the conclusion, the other cut: route the conclusion
    // directly to the partner
    std::uint32_t ax_iota_pos = i0 ? 0 : 1;
    std::uint32_t ax_cut_pos = i0 ? 1 : 0;
    PremPos q = s.partner.at({k, ax_cut_pos});
    std::uint32_t t = s.iota_at.at({k, ax_iota_pos});
    for (std::uint32_t c = 0; c < s.old.rule.mcut->iota.size(); ++c)
      nd.iota.push_back(c == t ? rm(q) : rm(s.old.rule.mcut->iota[c]));
    for (const auto& [a, b] : s.old.rule.mcut->pp) {
      if (a.prem == k || b.prem == k) continue;
      nd.pp.push_back({rm(a), rm(b)});
    }
  }
  s.replace_at(make_mcut(s.old.seq, std::move(prems), std::move(nd)));
}

// unary commutations: par, plus, bot, mu, nu, mpx, contr
void step_comm_unary(Surgery& s, std::uint32_t k) {
  const Node rule_node = s.prem(k);
  const RuleInstance& r = rule_node.rule;
  std::uint32_t j = r.principal;
  std::uint32_t t = s.iota_at.at({k, j});
  NodeId q = rule_node.premises.at(0).id;
  const Sequent& qseq = s.p.at(q).seq;
  std::uint32_t base = premise_base(r);

  // conclusion of the inner multicut: position t expands to the components
  Sequent inner;
  for (std::uint32_t c = 0; c < t; ++c) inner.formulas.push_back(s.old.seq[c]);
  for (std::uint32_t c = 0; c < base; ++c) inner.formulas.push_back(qseq[c]);
  for (std::uint32_t c = t + 1; c < s.old.seq.size(); ++c) inner.formulas.push_back(s.old.seq[c]);

  Remap rm = identity_remap(s.pseq);
  for (std::uint32_t pos = 0; pos < s.pseq[k].size(); ++pos) {
    if (pos == j) continue;
    rm.pos[k][pos] = {k, base + ctx_rank(rule_node, pos)};
  }
  McutData nd;
  for (std::uint32_t c = 0; c < s.old.rule.mcut->iota.size(); ++c) {
    if (c == t) {
      for (std::uint32_t x = 0; x < base; ++x) nd.iota.push_back({k, x});
    } else {
      nd.iota.push_back(rm(s.old.rule.mcut->iota[c]));
    }
  }
  for (const auto& [a, b] : s.old.rule.mcut->pp) nd.pp.push_back({rm(a), rm(b)});

  std::vector<PremiseRef> prems = s.old.premises;
  prems[k] = {q, false};
  NodeId inner_id = s.p.add(make_mcut(std::move(inner), std::move(prems), std::move(nd)));

  Node below;
  below.seq = s.old.seq;
  below.rule = {r.kind, t, r.index, {}, nullptr};
  below.premises = {{inner_id, false}};
  s.replace_at(std::move(below));
}

void step_comm_top(Surgery& s, std::uint32_t k) {
  std::uint32_t t = s.iota_at.at({k, s.prem(k).rule.principal});
  Node n;
  n.seq = s.old.seq;
  n.rule = {RuleKind::Top, t, 0, {}, nullptr};
  s.replace_at(std::move(n));
}

void step_comm_one(Surgery& s, std::uint32_t k) {
  (void)k;
  Node n;
  n.seq = s.old.seq;
  n.rule = {RuleKind::One, 0, 0, {}, nullptr};
  s.replace_at(std::move(n));
}

void step_comm_with(Surgery& s, std::uint32_t k) {
  const Node withn = s.prem(k);
  std::uint32_t j = withn.rule.principal;
  std::uint32_t t = s.iota_at.at({k, j});
  NodeId ql = withn.premises.at(0).id, qr = withn.premises.at(1).id;
  FormulaId wf = s.old.seq[t];
  const FormulaNode& wn = store().node(wf);

  Remap rm = identity_remap(s.pseq);
  for (std::uint32_t pos = 0; pos < s.pseq[k].size(); ++pos)
    if (pos != j) rm.pos[k][pos] = {k, 1 + ctx_rank(withn, pos)};

  auto make_side = [&](NodeId sub, FormulaId comp) {
    Sequent inner = s.old.seq;
    inner.formulas[t] = comp;
    McutData nd;
    for (std::uint32_t c = 0; c < s.old.rule.mcut->iota.size(); ++c)
      nd.iota.push_back(c == t ? PremPos{k, 0} : rm(s.old.rule.mcut->iota[c]));
    for (const auto& [a, b] : s.old.rule.mcut->pp) nd.pp.push_back({rm(a), rm(b)});
    std::vector<PremiseRef> prems = s.old.premises;
    prems[k] = {sub, false};
    return s.p.add(make_mcut(std::move(inner), std::move(prems), std::move(nd)));
  };
  NodeId ml = make_side(ql, wn.a);
  NodeId mr = make_side(qr, wn.b);

  Node below;
  below.seq = s.old.seq;
  below.rule = {RuleKind::With, t, 0, {}, nullptr};
  below.premises = {{ml, false}, {mr, false}};
  s.replace_at(std::move(below));
}

void step_comm_tensor(Surgery& s, std::uint32_t k) {
  const Node tens = s.prem(k);
  std::uint32_t j = tens.rule.principal;
  std::uint32_t t = s.iota_at.at({k, j});
  NodeId ql = tens.premises.at(0).id, qr = tens.premises.at(1).id;
  const Sequent& lseq = s.p.at(ql).seq;
  const Sequent& rseq = s.p.at(qr).seq;

  Mcut m = mcut_of_node(s.p, s.at);

  // side of each context position of the focus premise
  auto side_of_ctx = [&](std::uint32_t pos) -> std::uint8_t {
    return tens.rule.split.at(ctx_rank(tens, pos));
  };
  // side of every other premise: which focus context position its component
  // hangs from
  std::vector<std::uint8_t> prem_side(s.pseq.size(), 0);
  for (std::uint32_t pos = 0; pos < s.pseq[k].size(); ++pos) {
    if (pos == j) continue;
    auto it = s.partner.find({k, pos});
    if (it == s.partner.end()) continue;
    for (auto q : reach_without(m, it->second.prem, k)) prem_side[q] = side_of_ctx(pos);
  }

  // conclusion positions: t is the tensor itself, the rest follow iota
  std::vector<std::uint8_t> concl_side(s.old.seq.size(), 0);
  for (std::uint32_t c = 0; c < s.old.seq.size(); ++c) {
    if (c == t) continue;
    PremPos src = s.old.rule.mcut->iota[c];
    concl_side[c] = src.prem == k ? side_of_ctx(src.pos) : prem_side[src.prem];
  }

  // build one side: premise k replaced by the tensor sub-proof, keeping only
  // that side's premises
  auto build_side = [&](std::uint8_t side, NodeId sub, const Sequent& subseq) {
    std::vector<PremiseRef> prems;
    std::vector<std::uint32_t> new_idx(s.pseq.size(), UINT32_MAX);
    for (std::uint32_t i = 0; i < s.old.premises.size(); ++i) {
      bool keep = i == k || prem_side[i] == side;
      if (i != k && !keep) continue;
      new_idx[i] = static_cast<std::uint32_t>(prems.size());
      prems.push_back(i == k ? PremiseRef{sub, false} : s.old.premises[i]);
    }
    Sequent inner{{subseq[0]}};
    McutData nd;
    nd.iota.push_back({new_idx[k], 0});
    for (std::uint32_t c = 0; c < s.old.seq.size(); ++c) {
      if (c == t || concl_side[c] != side) continue;
      inner.formulas.push_back(s.old.seq[c]);
      PremPos src = s.old.rule.mcut->iota[c];
      if (src.prem == k) {
        std::uint32_t rank = 0;
        for (std::uint32_t q2 = 0; q2 < src.pos; ++q2)
          if (q2 != j && side_of_ctx(q2) == side) ++rank;
        nd.iota.push_back({new_idx[k], 1 + rank});
      } else {
        nd.iota.push_back({new_idx[src.prem], src.pos});
      }
    }
    auto remap_side = [&](PremPos q) -> PremPos {
      if (q.prem != k) return {new_idx[q.prem], q.pos};
      std::uint32_t rank = 0;
      for (std::uint32_t q2 = 0; q2 < q.pos; ++q2)
        if (q2 != j && side_of_ctx(q2) == side) ++rank;
      return {new_idx[k], 1 + rank};
    };
    for (const auto& [a, b] : s.old.rule.mcut->pp) {
      bool a_in = a.prem == k ? side_of_ctx(a.pos) == side : prem_side[a.prem] == side && new_idx[a.prem] != UINT32_MAX;
      bool b_in = b.prem == k ? side_of_ctx(b.pos) == side : prem_side[b.prem] == side && new_idx[b.prem] != UINT32_MAX;
      if (a_in && b_in) nd.pp.push_back({remap_side(a), remap_side(b)});
    }
    return s.p.add(make_mcut(std::move(inner), std::move(prems), std::move(nd)));
  };
  NodeId ml = build_side(0, ql, lseq);
  NodeId mr = build_side(1, qr, rseq);

  Node below;
  below.seq = s.old.seq;
  below.rule.kind = RuleKind::Tensor;
  below.rule.principal = t;
  for (std::uint32_t c = 0; c < s.old.seq.size(); ++c)
    if (c != t) below.rule.split.push_back(concl_side[c]);
  below.premises = {{ml, false}, {mr, false}};
  s.replace_at(std::move(below));
}

// principal steps on dual pairs of plain rules
void step_princ_pair(Surgery& s, StepShape shape, std::uint32_t a, std::uint32_t b) {
  const Node an = s.prem(a);
  const Node bn = s.prem(b);
  std::uint32_t ja = an.rule.principal, jb = bn.rule.principal;

  switch (shape) {
    case StepShape::PrincMuNu: {
      NodeId qa = an.premises.at(0).id;
      NodeId qb = bn.premises.at(0).id;
      Remap rm = identity_remap(s.pseq);
      for (std::uint32_t pos = 0; pos < s.pseq[a].size(); ++pos)
        if (pos != ja) rm.pos[a][pos] = {a, 1 + ctx_rank(an, pos)};
      for (std::uint32_t pos = 0; pos < s.pseq[b].size(); ++pos)
        if (pos != jb) rm.pos[b][pos] = {b, 1 + ctx_rank(bn, pos)};
      McutData nd = remap_data(s, rm, {{a, ja}, {b, jb}});
      nd.pp.push_back({{a, 0}, {b, 0}});
      std::vector<PremiseRef> prems = s.old.premises;
      prems[a] = {qa, false};
      prems[b] = {qb, false};
      s.replace_at(make_mcut(s.old.seq, std::move(prems), std::move(nd)));
      return;
    }
    case StepShape::PrincPlusWith: {
      NodeId qa = an.premises.at(0).id;
      bool first = an.rule.kind == RuleKind::Plus1;
      NodeId qb = bn.premises.at(first ? 0 : 1).id;
      Remap rm = identity_remap(s.pseq);
      for (std::uint32_t pos = 0; pos < s.pseq[a].size(); ++pos)
        if (pos != ja) rm.pos[a][pos] = {a, 1 + ctx_rank(an, pos)};
      for (std::uint32_t pos = 0; pos < s.pseq[b].size(); ++pos)
        if (pos != jb) rm.pos[b][pos] = {b, 1 + ctx_rank(bn, pos)};
      McutData nd = remap_data(s, rm, {{a, ja}, {b, jb}});
      nd.pp.push_back({{a, 0}, {b, 0}});
      std::vector<PremiseRef> prems = s.old.premises;
      prems[a] = {qa, false};
      prems[b] = {qb, false};
      s.replace_at(make_mcut(s.old.seq, std::move(prems), std::move(nd)));
      return;
    }
    case StepShape::PrincOneBot: {
      // premise a is |- 1, premise b ends with bot; both vanish
      NodeId qb = bn.premises.at(0).id;
      std::vector<PremiseRef> prems;
      for (std::uint32_t i = 0; i < s.old.premises.size(); ++i) {
        if (i == a) continue;
        prems.push_back(i == b ? PremiseRef{qb, false} : s.old.premises[i]);
      }
      Remap rm = identity_remap(s.pseq);
      for (std::uint32_t i = 0; i < s.pseq.size(); ++i) {
        std::uint32_t ni = i < a ? i : i - 1;
        for (std::uint32_t j2 = 0; j2 < s.pseq[i].size(); ++j2) {
          if (i == b && j2 != jb) rm.pos[i][j2] = {ni, ctx_rank(bn, j2)};
          else rm.pos[i][j2] = {ni, j2};
        }
      }
      McutData nd = remap_data(s, rm, {{a, 0}, {b, jb}});
      s.replace_at(make_mcut(s.old.seq, std::move(prems), std::move(nd)));
      return;
    }
    case StepShape::PrincTensorPar: {
      // a ends with par on F|G; b ends with tensor on ~F * ~G
      NodeId qa = an.premises.at(0).id;
      NodeId ql = bn.premises.at(0).id, qr = bn.premises.at(1).id;
      Mcut m = mcut_of_node(s.p, s.at);
      auto bside = [&](std::uint32_t pos) { return bn.rule.split.at(ctx_rank(bn, pos)); };
      // premises hanging off b's context positions follow their side
      std::vector<std::uint8_t> hang(s.pseq.size(), 2);  // 2 = not behind b
      for (std::uint32_t pos = 0; pos < s.pseq[b].size(); ++pos) {
        if (pos == jb) continue;
        auto it = s.partner.find({b, pos});
        if (it == s.partner.end()) continue;
        for (auto q : reach_without(m, it->second.prem, b)) hang[q] = bside(pos);
      }
      std::vector<PremiseRef> prems;
      std::vector<std::uint32_t> new_idx(s.pseq.size(), UINT32_MAX);
      for (std::uint32_t i = 0; i < s.old.premises.size(); ++i) {
        new_idx[i] = static_cast<std::uint32_t>(prems.size());
        if (i == a) prems.push_back({qa, false});
        else if (i == b) {
          prems.push_back({ql, false});
          prems.push_back({qr, false});
        } else prems.push_back(s.old.premises[i]);
      }
      auto rmf = [&](PremPos q) -> PremPos {
        if (q.prem == a) {
          if (q.pos == ja) throw std::logic_error("principal consumed");
          return {new_idx[a], 2 + ctx_rank(an, q.pos)};
        }
        if (q.prem == b) {
          std::uint8_t side = bside(q.pos);
          std::uint32_t rank = 0;
          for (std::uint32_t q2 = 0; q2 < q.pos; ++q2)
            if (q2 != jb && bside(q2) == side) ++rank;
          return {new_idx[b] + side, 1 + rank};
        }
        return {new_idx[q.prem], q.pos};
      };
      McutData nd;
      for (const auto& q : s.old.rule.mcut->iota) nd.iota.push_back(rmf(q));
      for (const auto& [x, y] : s.old.rule.mcut->pp) {
        if ((x == PremPos{a, ja}) || (y == PremPos{a, ja})) continue;
        nd.pp.push_back({rmf(x), rmf(y)});
      }
      nd.pp.push_back({{new_idx[a], 0}, {new_idx[b], 0}});
      nd.pp.push_back({{new_idx[a], 1}, {new_idx[b] + 1, 0}});
      s.replace_at(make_mcut(s.old.seq, std::move(prems), std::move(nd)));
      return;
    }
    default:
      throw NotApplicable("not a principal pair step");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// exponential steps

namespace {

// strip plan for the premises hanging off a promotion-rooted subtree
struct StripPlan {
  std::set<std::uint32_t> members;   // the subtree, root included
  std::set<std::uint32_t> stripped;  // members losing their final promotion
  std::set<std::uint32_t> naked;     // stripped f/u members (contexts lose banners)
};

StripPlan ompx_plan(const Surgery& s, std::uint32_t root, std::uint32_t from) {
  Mcut m = mcut_of_node(s.p, s.at);
  StripPlan plan;
  auto sub = reach_without(m, root, from);
  plan.members.insert(sub.begin(), sub.end());
  // walk the tree: the root is stripped; below a stripped f/u the stripping
  // continues, below a Girard promotion it stops
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{root, from}};
  while (!stack.empty()) {
    auto [n, parent] = stack.back();
    stack.pop_back();
    plan.stripped.insert(n);
    RuleKind kind = s.prem(n).rule.kind;
    if (kind == RuleKind::BangF || kind == RuleKind::BangU) plan.naked.insert(n);
    if (kind == RuleKind::BangG) continue;  // children keep their promotions
    for (std::uint32_t pos = 0; pos < s.pseq[n].size(); ++pos) {
      auto it = s.partner.find({n, pos});
      if (it == s.partner.end()) continue;
      if (it->second.prem == parent || !plan.members.count(it->second.prem)) continue;
      if (plan.stripped.count(it->second.prem)) continue;
      stack.push_back({it->second.prem, n});
    }
  }
  return plan;
}

// common engine for princ_contr and princ_mpx: premise a ends with the rule,
// partner b roots the promotion subtree that gets copied `arity` times
void step_princ_exp(Surgery& s, StepShape shape, std::uint32_t a, std::uint32_t b) {
  FormulaStore& st = store();
  const Node an = s.prem(a);
  std::uint32_t ja = an.rule.principal;
  unsigned arity = an.rule.index;
  NodeId qa = an.premises.at(0).id;
  bool is_mpx = shape == StepShape::PrincMpx;

  StripPlan plan;
  if (is_mpx) {
    plan = ompx_plan(s, b, a);
  } else {
    Mcut m = mcut_of_node(s.p, s.at);
    auto sub = reach_without(m, b, a);
    plan.members.insert(sub.begin(), sub.end());
  }

  // premise layout: every old premise keeps its slot (copy 0); copies
  // c=1..arity-1 of the subtree are appended in member order
  std::vector<std::uint32_t> member_list(plan.members.begin(), plan.members.end());
  auto member_rank = [&](std::uint32_t i) {
    return static_cast<std::uint32_t>(
        std::lower_bound(member_list.begin(), member_list.end(), i) - member_list.begin());
  };
  std::uint32_t old_n = static_cast<std::uint32_t>(s.pseq.size());
  auto copy_index = [&](std::uint32_t i, unsigned c) -> std::uint32_t {
    if (c == 0) return i;
    return old_n + (c - 1) * static_cast<std::uint32_t>(member_list.size()) + member_rank(i);
  };

  // per-member node and position remap after stripping
  auto member_node = [&](std::uint32_t i) -> NodeId {
    if (plan.stripped.count(i)) return s.prem(i).premises.at(0).id;
    return s.old.premises[i].id;
  };
  auto member_pos = [&](std::uint32_t i, std::uint32_t pos) -> std::uint32_t {
    if (plan.stripped.count(i)) return promo_sub_pos(s.prem(i), pos);
    return pos;
  };

  std::vector<PremiseRef> prems;
  for (std::uint32_t i = 0; i < old_n; ++i) {
    if (i == a) prems.push_back({qa, false});
    else if (plan.members.count(i)) prems.push_back({member_node(i), false});
    else prems.push_back(s.old.premises[i]);
  }
  if (arity > 0)
    for (unsigned c = 1; c < arity; ++c)
      for (std::uint32_t i : member_list) prems.push_back({member_node(i), false});
  if (arity == 0) {
    // the subtree disappears entirely; drop its premise slots
    std::vector<PremiseRef> kept;
    for (std::uint32_t i = 0; i < old_n; ++i)
      if (!plan.members.count(i)) kept.push_back(i == a ? PremiseRef{qa, false} : s.old.premises[i]);
    prems = std::move(kept);
  }
  // index translation when arity == 0 (members removed)
  std::vector<std::uint32_t> squeezed(old_n, UINT32_MAX);
  {
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < old_n; ++i) {
      if (arity == 0 && plan.members.count(i)) continue;
      squeezed[i] = next++;
    }
  }
  auto map_outside = [&](PremPos q) -> PremPos {
    // positions in premise a (context of the dissolved rule)
    if (q.prem == a) return {squeezed[a], arity + ctx_rank(an, q.pos)};
    return {squeezed[q.prem], q.pos};
  };
  auto map_member = [&](PremPos q, unsigned c) -> PremPos {
    return {copy_index(q.prem, c), member_pos(q.prem, q.pos)};
  };

  // conclusion: members' iota positions expand to `arity` adjacent copies
  Sequent inner;
  McutData nd;
  struct Derived {
    std::uint32_t pos;      // position of the first copy in the inner conclusion
    FormulaId formula;      // the original why-not conclusion formula
    bool naked;             // copies lost their banner (rebuild by mpx)
  };
  std::vector<Derived> chains;
  for (std::uint32_t t = 0; t < s.old.seq.size(); ++t) {
    PremPos src = s.old.rule.mcut->iota[t];
    if (plan.members.count(src.prem)) {
      bool nk = plan.naked.count(src.prem) && src.pos != s.prem(src.prem).rule.principal;
      FormulaId full = s.old.seq[t];
      FormulaId each = nk ? st.node(full).a : full;
      chains.push_back({static_cast<std::uint32_t>(inner.size()), full, nk});
      for (unsigned c = 0; c < arity; ++c) {
        inner.formulas.push_back(each);
        nd.iota.push_back(map_member(src, c));
      }
    } else {
      inner.formulas.push_back(s.old.seq[t]);
      nd.iota.push_back(map_outside(src));
    }
  }
  // pairs: outside pairs survive once; member-internal pairs replicate per
  // copy; the principal pair connects each rule copy to its subtree copy
  for (const auto& [x, y] : s.old.rule.mcut->pp) {
    bool xm = plan.members.count(x.prem), ym = plan.members.count(y.prem);
    if ((x == PremPos{a, ja}) || (y == PremPos{a, ja})) continue;
    if (xm && ym) {
      for (unsigned c = 0; c < arity; ++c) nd.pp.push_back({map_member(x, c), map_member(y, c)});
    } else if (!xm && !ym) {
      nd.pp.push_back({map_outside(x), map_outside(y)});
    } else {
      throw InternalInvariantBroken("promotion subtree leaks a cut pair");
    }
  }
  const Node& bn = s.prem(b);
  std::uint32_t jb = bn.rule.principal;
  for (unsigned c = 0; c < arity; ++c) {
    PremPos root_pos{copy_index(b, c), is_mpx ? member_pos(b, jb) : jb};
    nd.pp.push_back({PremPos{squeezed[a], c}, root_pos});
  }

  NodeId inner_id = s.p.add(make_mcut(inner, std::move(prems), std::move(nd)));

  // rebuild the conclusion with derived rules, right to left so positions
  // computed against the inner conclusion stay valid
  NodeId cur = inner_id;
  Sequent cur_seq = inner;
  for (auto it = chains.rbegin(); it != chains.rend(); ++it) {
    Sequent want;
    for (std::uint32_t q2 = 0; q2 < it->pos; ++q2) want.formulas.push_back(cur_seq[q2]);
    want.formulas.push_back(it->formula);
    for (std::uint32_t q2 = it->pos + arity; q2 < cur_seq.size(); ++q2)
      want.formulas.push_back(cur_seq[q2]);
    const std::string& sg = sig_name_of(it->formula);
    s.require(s.inst.has_sig(sg), "signature " + sg + " unknown while rebuilding");
    RuleName target = it->naked ? RuleName::mpx(arity) : RuleName::contr(arity);
    if (!closure_contains(s.inst.sig(sg), target))
      throw InternalInvariantBroken("derived " + target.show() + " unavailable for " + sg);
    DerivPlan dp = synthesize_derived(s.inst.sig(sg), target);
    cur = materialize_plan(s.p, dp, want, it->pos, cur);
    cur_seq = want;
  }
  if (cur == inner_id) {
    s.replace_at(s.p.at(inner_id));
  } else {
    s.replace_at(s.p.at(cur));
  }
}

// the seven promotion commutations
void step_promo_comm(Surgery& s, StepShape shape, std::uint32_t k) {
  FormulaStore& st = store();
  const Node focus = s.prem(k);
  std::uint32_t jk = focus.rule.principal;
  std::uint32_t t = s.iota_at.at({k, jk});
  FormulaId bang = s.old.seq[t];
  const std::string& sigma = sig_name_of(bang);

  // which premises lose their promotion, and whether their contexts lose
  // banners, per shape
  std::set<std::uint32_t> stripped, naked;
  RuleKind below_kind = RuleKind::BangG;
  bool mpx1_focus = false;           // comm2_bang_f: re-banner the focus context
  std::uint32_t mpx1_member = UINT32_MAX;  // comm3_bang_u: re-banner that member

  auto all_premises = [&]() {
    std::set<std::uint32_t> out;
    for (std::uint32_t i = 0; i < s.pseq.size(); ++i) out.insert(i);
    return out;
  };

  switch (shape) {
    case StepShape::CommBangG:
      stripped = {k};
      below_kind = RuleKind::BangG;
      break;
    case StepShape::Comm1BangF:
      stripped = all_premises();
      for (std::uint32_t i : stripped)
        if (s.prem(i).rule.kind != RuleKind::BangG) naked.insert(i);
      below_kind = RuleKind::BangF;
      break;
    case StepShape::Comm2BangF:
      stripped = {k};
      naked = {k};
      mpx1_focus = true;
      below_kind = RuleKind::BangG;
      break;
    case StepShape::Comm1BangU:
      stripped = all_premises();
      naked = stripped;
      below_kind = RuleKind::BangU;
      break;
    case StepShape::Comm2BangU:
      stripped = all_premises();
      for (std::uint32_t i : stripped)
        if (s.prem(i).rule.kind != RuleKind::BangG) naked.insert(i);
      below_kind = RuleKind::BangF;
      break;
    case StepShape::Comm3BangU:
    case StepShape::Comm4BangU: {
      // strip the unary chain from the focus until the first non-unary rule
      stripped.insert(k);
      naked.insert(k);
      std::uint32_t pos = jk == 0 ? 1 : 0;
      PremPos cur{k, pos};
      while (true) {
        auto it = s.partner.find(cur);
        s.require(it != s.partner.end(), "unary chain reaches the conclusion");
        std::uint32_t n = it->second.prem;
        const Node& link = s.prem(n);
        stripped.insert(n);
        if (link.rule.kind == RuleKind::BangU) {
          naked.insert(n);
          std::uint32_t out = link.rule.principal == it->second.pos
                                  ? (link.rule.principal == 0 ? 1 : 0)
                                  : link.rule.principal;
          cur = {n, out};
          continue;
        }
        if (link.rule.kind == RuleKind::BangF) {
          naked.insert(n);
          mpx1_member = n;
        }
        break;
      }
      below_kind = RuleKind::BangG;
      break;
    }
    default:
      throw NotApplicable("not a promotion commutation");
  }

  // premise substitutions: stripped premises are replaced by their subproofs,
  // possibly under an mpx_1 chain re-bannering their context
  std::vector<PremiseRef> prems = s.old.premises;
  auto strip_with_chain = [&](std::uint32_t i) -> NodeId {
    const Node& promo = s.prem(i);
    NodeId sub = promo.premises.at(0).id;
    // rebuild |- A, ?t1 B1 ... from |- A, B1 ... with one dereliction each
    Sequent target{{st.node(s.pseq[i][promo.rule.principal]).a}};
    std::vector<FormulaId> ctx;
    for (std::uint32_t pos = 0; pos < s.pseq[i].size(); ++pos)
      if (pos != promo.rule.principal) ctx.push_back(s.pseq[i][pos]);
    for (FormulaId f : ctx) target.formulas.push_back(f);
    NodeId cur = sub;
    for (std::uint32_t d = 0; d < ctx.size(); ++d) {
      const std::string& tau = sig_name_of(ctx[d]);
      s.require(s.inst.has_sig(tau) && s.inst.sig(tau).has(RuleName::mpx(1)),
                tau + "(mpx_1) required by the commutation");
      Sequent step_seq{{target[0]}};
      for (std::uint32_t e = 0; e < ctx.size(); ++e)
        step_seq.formulas.push_back(e <= d ? ctx[e] : st.node(ctx[e]).a);
      cur = s.p.add({step_seq, {RuleKind::Mpx, 1 + d, 1, {}, nullptr}, {{cur, false}}});
    }
    return cur;
  };
  for (std::uint32_t i : stripped) {
    if ((i == k && mpx1_focus) || i == mpx1_member) {
      prems[i] = {strip_with_chain(i), false};
    } else {
      prems[i] = {s.prem(i).premises.at(0).id, false};
    }
  }

  // positions within a stripped premise move to the subproof layout, except
  // under an mpx_1 chain where the layout is restored
  auto member_pos = [&](std::uint32_t i, std::uint32_t pos) -> std::uint32_t {
    if (!stripped.count(i)) return pos;
    if ((i == k && mpx1_focus) || i == mpx1_member) return promo_sub_pos(s.prem(i), pos);
    return promo_sub_pos(s.prem(i), pos);
  };
  // whether a premise ctx formula keeps its banner in the new multicut
  auto keeps_banner = [&](std::uint32_t i) {
    if (!stripped.count(i)) return true;
    if ((i == k && mpx1_focus) || i == mpx1_member) return true;  // rebuilt above
    return !naked.count(i);
  };

  // the inner conclusion: position t turns into the naked promoted formula;
  // other positions lose banners when their source premise went naked
  Sequent inner = s.old.seq;
  inner.formulas[t] = st.node(bang).a;
  McutData nd;
  for (std::uint32_t c = 0; c < s.old.seq.size(); ++c) {
    PremPos src = s.old.rule.mcut->iota[c];
    if (c == t) {
      nd.iota.push_back({k, 0});
      continue;
    }
    if (!keeps_banner(src.prem)) inner.formulas[c] = st.node(s.old.seq[c]).a;
    nd.iota.push_back({src.prem, member_pos(src.prem, src.pos)});
  }
  for (const auto& [x, y] : s.old.rule.mcut->pp)
    nd.pp.push_back({{x.prem, member_pos(x.prem, x.pos)}, {y.prem, member_pos(y.prem, y.pos)}});

  NodeId inner_id = s.p.add(make_mcut(inner, std::move(prems), std::move(nd)));

  // the promotion below; its side conditions must hold by the axioms
  Promo promo = below_kind == RuleKind::BangG ? Promo::G
              : below_kind == RuleKind::BangF ? Promo::F : Promo::U;
  for (std::uint32_t c = 0; c < s.old.seq.size(); ++c) {
    if (c == t) continue;
    const std::string& rho = sig_name_of(s.old.seq[c]);
    s.require(s.inst.has_sig(rho), "unknown signature " + rho);
    if (!s.inst.leq(promo, sigma, rho))
      throw InternalInvariantBroken(sigma + " <=" + std::string(promo_name(promo)) + " " + rho +
                                    " missing after commutation");
  }
  if (below_kind == RuleKind::BangU && s.old.seq.size() != 2)
    throw InternalInvariantBroken("unary promotion needs a two-formula conclusion");

  Node below;
  below.seq = s.old.seq;
  below.rule = {below_kind, t, 0, {}, nullptr};
  below.premises = {{inner_id, false}};
  s.replace_at(std::move(below));
}

bool redex_matches(const Proof& p, const InstanceSpec& inst, const Redex& r) {
  auto all = enumerate_redexes(p, inst);
  return std::find(all.begin(), all.end(), r) != all.end();
}

void dispatch(Proof& p, const Redex& r, const InstanceSpec& inst) {
  Surgery s(p, r.at, inst);
  switch (r.shape) {
    case StepShape::MergeCut: step_merge_cut(s, r.premise); break;
    case StepShape::Ax: step_ax(s, r.premise); break;
    case StepShape::CommTensor: step_comm_tensor(s, r.premise); break;
    case StepShape::CommPar:
    case StepShape::CommPlus:
    case StepShape::CommBot:
    case StepShape::CommMu:
    case StepShape::CommNu:
    case StepShape::CommMpx:
    case StepShape::CommContr: step_comm_unary(s, r.premise); break;
    case StepShape::CommWith: step_comm_with(s, r.premise); break;
    case StepShape::CommTop: step_comm_top(s, r.premise); break;
    case StepShape::CommOne: step_comm_one(s, r.premise); break;
    case StepShape::PrincTensorPar:
    case StepShape::PrincPlusWith:
    case StepShape::PrincMuNu:
    case StepShape::PrincOneBot: step_princ_pair(s, r.shape, r.premise, r.partner); break;
    case StepShape::CommBangG:
    case StepShape::Comm1BangF:
    case StepShape::Comm2BangF:
    case StepShape::Comm1BangU:
    case StepShape::Comm2BangU:
    case StepShape::Comm3BangU:
    case StepShape::Comm4BangU: step_promo_comm(s, r.shape, r.premise); break;
    case StepShape::PrincContr:
    case StepShape::PrincMpx: step_princ_exp(s, r.shape, r.premise, r.partner); break;
  }
}

}  // namespace

void apply_step_inplace(Proof& p, const Redex& r, const InstanceSpec& inst) {
  if (p.at(r.at).rule.kind != RuleKind::Mcut) throw NotApplicable("not a multicut node");
  dispatch(p, r, inst);
}

Proof apply_step(const Proof& p, const Redex& r, const InstanceSpec& inst) {
  if (!redex_matches(p, inst, r)) throw NotApplicable("redex is not applicable");
  Proof out = p;
  apply_step_inplace(out, r, inst);
  return out;
}

OmpxResult compute_ompx(const Proof& p, NodeId mcut_node, std::uint32_t root) {
  // entry point used by tests: root's parent is the premise holding the
  // multiplexing, recovered from the pp pair on the root's principal
  const Node& node = p.at(mcut_node);
  const Node& rootn = p.at(node.premises.at(root).id);
  std::uint32_t from = UINT32_MAX;
  for (const auto& [a, b] : node.rule.mcut->pp) {
    if (a.prem == root && a.pos == rootn.rule.principal) from = b.prem;
    if (b.prem == root && b.pos == rootn.rule.principal) from = a.prem;
  }
  InstanceSpec dummy;
  Surgery s(const_cast<Proof&>(p), mcut_node, dummy);
  StripPlan plan = ompx_plan(s, root, from == UINT32_MAX ? root : from);
  OmpxResult res;
  for (auto i : plan.members) {
    if (plan.stripped.count(i)) res.stripped.push_back(i);
    else res.kept.push_back(i);
    if (plan.naked.count(i)) res.in_mpx.push_back(i);
  }
  return res;
}

// ---------------------------------------------------------------------------
// normalization

Proof fold_cuts(const Proof& p) {
  Proof out = p;
  for (NodeId n : out.reachable()) {
    Node& node = out.nodes[n];
    if (node.rule.kind != RuleKind::Cut) continue;
    McutData md;
    for (std::uint32_t t = 0; t < node.seq.size(); ++t) {
      std::uint32_t side = node.rule.split.at(t);
      std::uint32_t rank = 0;
      for (std::uint32_t q = 0; q < t; ++q)
        if (node.rule.split[q] == side) ++rank;
      md.iota.push_back({side, 1 + rank});
    }
    md.pp.push_back({{0, 0}, {1, 0}});
    node.rule.kind = RuleKind::Mcut;
    node.rule.split.clear();
    node.rule.mcut = std::make_shared<McutData>(std::move(md));
  }
  return out;
}

std::uint32_t productive_depth(const Proof& p) {
  std::deque<std::pair<NodeId, std::uint32_t>> queue{{p.root, 0}};
  std::set<NodeId> seen{p.root};
  while (!queue.empty()) {
    auto [n, d] = queue.front();
    queue.pop_front();
    if (is_cutlike(p.at(n).rule.kind)) return d;
    for (const auto& pr : p.at(n).premises)
      if (seen.insert(pr.id).second) queue.push_back({pr.id, d + 1});
  }
  return UINT32_MAX;
}

namespace {

std::string family_key(const Proof& p, const Redex& r) {
  // premise node identities survive steps at other premises; the multicut
  // node id itself is stable because steps rewrite it in place
  std::string key = std::to_string(r.at) + "/" + step_shape_name(r.shape) + "/" +
                    std::to_string(p.at(r.at).premises.at(r.premise).id);
  if (r.shape == StepShape::PrincTensorPar || r.shape == StepShape::PrincPlusWith ||
      r.shape == StepShape::PrincMuNu || r.shape == StepShape::PrincOneBot ||
      r.shape == StepShape::PrincContr || r.shape == StepShape::PrincMpx)
    key += "~" + std::to_string(p.at(r.at).premises.at(r.partner).id);
  return key;
}

}  // namespace

NormalizeResult fair_normalize(const Proof& p, const InstanceSpec& inst, std::uint64_t max_steps,
                               std::uint32_t depth_goal) {
  NormalizeResult res{fold_cuts(p), {}, NormalizeStatus::Budget};
  Proof& cur = res.proof;
  Trace& trace = res.trace;

  struct FamilyState {
    std::uint64_t last_touch;
    std::size_t log_index;
  };
  std::map<std::string, FamilyState> families;

  for (std::uint64_t step = 0; step < max_steps; ++step) {
    if (depth_goal != UINT32_MAX && productive_depth(cur) >= depth_goal) {
      res.status = productive_depth(cur) == UINT32_MAX ? NormalizeStatus::CutFree
                                                       : NormalizeStatus::DepthReached;
      return res;
    }
    auto redexes = enumerate_redexes(cur, inst);
    if (redexes.empty()) {
      res.status = cur.has_rule(RuleKind::Mcut) ? NormalizeStatus::Budget : NormalizeStatus::CutFree;
      return res;
    }
    // refresh the family table: register new families, drop dead ones
    std::map<std::string, Redex> live;
    for (const auto& r : redexes) {
      std::string key = family_key(cur, r);
      if (!live.count(key)) live.emplace(key, r);
      if (!families.count(key)) {
        families[key] = {step, trace.families.size()};
        trace.families.push_back({key, step, UINT64_MAX});
      }
    }
    for (auto it = families.begin(); it != families.end();)
      it = live.count(it->first) ? std::next(it) : families.erase(it);

    // oldest family first; ties resolved by key order
    std::string pick;
    std::uint64_t best = UINT64_MAX;
    for (const auto& [key, st] : families) {
      if (st.last_touch < best) {
        best = st.last_touch;
        pick = key;
      }
    }
    Redex chosen = live.at(pick);
    // count an unrolling when the step consumes a shared or cyclic premise
    {
      const auto& prems = cur.at(chosen.at).premises;
      NodeId target = prems.at(chosen.premise).id;
      std::uint32_t refs = 0;
      for (const auto& pr : prems)
        if (pr.id == target) ++refs;
      if (refs > 1 || prems.at(chosen.premise).back) ++trace.unrollings;
    }
    apply_step_inplace(cur, chosen, inst);
    families[pick].last_touch = step + 1;
    trace.families[families[pick].log_index].reduced = step;
    trace.steps.push_back({step, chosen, productive_depth(cur)});
  }
  res.status = NormalizeStatus::Budget;
  return res;
}

}  // namespace mull
