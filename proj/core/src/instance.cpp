#include "mull/instance.hpp"

namespace mull {

namespace {

void violate(AxiomReport& rep, std::string axiom, std::vector<std::string> witness,
             std::optional<unsigned> index, std::string detail) {
  rep.satisfied = false;
  rep.violations.push_back({std::move(axiom), std::move(witness), index, std::move(detail)});
}

}  // namespace

AxiomReport check_axioms(const InstanceSpec& inst, bool with_expansion) {
  AxiomReport rep;
  const auto names = inst.sig_names();
  const Promo promos[3] = {Promo::G, Promo::F, Promo::U};

  // Ax^g_m:  s <=g s'  =>  s(mpx_i) => closure s'(c_i),   i >= 0
  for (const auto& [a, b] : inst.leq_g) {
    for (unsigned i : inst.sig(a).mpx) {
      if (!closure_contains(inst.sig(b), RuleName::contr(i)))
        violate(rep, "Ax^g_m", {a, b}, i,
                a + "(mpx_" + std::to_string(i) + ") but c_" + std::to_string(i) +
                    " not derivable for " + b);
    }
  }
  // Ax^fu_m:  s <=s s'  =>  s(mpx_i) => closure s'(mpx_i),  s in {f,u}
  for (Promo p : {Promo::F, Promo::U}) {
    const auto& rel = p == Promo::F ? inst.leq_f : inst.leq_u;
    for (const auto& [a, b] : rel) {
      for (unsigned i : inst.sig(a).mpx) {
        if (!closure_contains(inst.sig(b), RuleName::mpx(i)))
          violate(rep, "Ax^fu_m", {a, b}, i,
                  std::string("via <=") + promo_name(p) + ": mpx_" + std::to_string(i) +
                      " not derivable for " + b);
      }
    }
  }
  // Ax_c:  s <=s s'  =>  s(c_i) => closure s'(c_i),  i >= 2, any s
  for (Promo p : promos) {
    const auto& rel = p == Promo::G ? inst.leq_g : p == Promo::F ? inst.leq_f : inst.leq_u;
    for (const auto& [a, b] : rel) {
      for (unsigned i : inst.sig(a).contr) {
        if (!closure_contains(inst.sig(b), RuleName::contr(i)))
          violate(rep, "Ax_c", {a, b}, i,
                  std::string("via <=") + promo_name(p) + ": c_" + std::to_string(i) +
                      " not derivable for " + b);
      }
    }
  }
  // Ax_trans:  s <=s s' and s' <=s s''  =>  s <=s s''
  for (Promo p : promos) {
    for (const auto& a : names)
      for (const auto& b : names)
        for (const auto& c : names)
          if (inst.leq(p, a, b) && inst.leq(p, b, c) && !inst.leq(p, a, c))
            violate(rep, "Ax_trans", {a, b, c}, std::nullopt,
                    std::string("<=") + promo_name(p) + " not transitive");
  }
  // Ax<=^gs:  a <=g b and b <=s c  =>  a <=g c
  for (Promo p : promos) {
    for (const auto& a : names)
      for (const auto& b : names)
        for (const auto& c : names)
          if (inst.leq(Promo::G, a, b) && inst.leq(p, b, c) && !inst.leq(Promo::G, a, c))
            violate(rep, "Ax<=^gs", {a, b, c}, std::nullopt,
                    std::string("through <=") + promo_name(p));
  }
  // Ax<=^fu:  a <=f b and b <=u c  =>  a <=f c
  for (const auto& a : names)
    for (const auto& b : names)
      for (const auto& c : names)
        if (inst.leq(Promo::F, a, b) && inst.leq(Promo::U, b, c) && !inst.leq(Promo::F, a, c))
          violate(rep, "Ax<=^fu", {a, b, c}, std::nullopt, "");
  // Ax<=^fg:  a <=f b and b <=g c  =>  a <=g c  and
  //           (a <=f d => (a <=g d and d(mpx_1)))  for every d
  for (const auto& a : names)
    for (const auto& b : names)
      for (const auto& c : names) {
        if (!(inst.leq(Promo::F, a, b) && inst.leq(Promo::G, b, c))) continue;
        if (!inst.leq(Promo::G, a, c))
          violate(rep, "Ax<=^fg", {a, b, c}, std::nullopt, "missing " + a + " <=g " + c);
        for (const auto& d : names) {
          if (!inst.leq(Promo::F, a, d)) continue;
          if (!inst.leq(Promo::G, a, d))
            violate(rep, "Ax<=^fg", {a, b, c, d}, std::nullopt, "missing " + a + " <=g " + d);
          if (!inst.sig(d).has(RuleName::mpx(1)))
            violate(rep, "Ax<=^fg", {a, b, c, d}, 1, d + "(mpx_1) required");
        }
      }
  // Ax<=^us:  a <=u b and b <=s c  =>  a <=s c
  for (Promo p : promos) {
    for (const auto& a : names)
      for (const auto& b : names)
        for (const auto& c : names)
          if (inst.leq(Promo::U, a, b) && inst.leq(p, b, c) && !inst.leq(p, a, c))
            violate(rep, "Ax<=^us", {a, b, c}, std::nullopt,
                    std::string("through <=") + promo_name(p));
  }

  if (with_expansion) {
    for (const auto& a : names) {
      bool ok = inst.leq(Promo::U, a, a) || inst.leq(Promo::F, a, a) ||
                (inst.leq(Promo::G, a, a) && inst.sig(a).has(RuleName::mpx(1)));
      if (!ok)
        violate(rep, "expansion", {a}, std::nullopt,
                "no reflexive promotion available for " + a);
    }
  }
  return rep;
}

InstanceSpec builtin_instance(const std::string& name) {
  InstanceSpec inst;
  if (name == "ell" || name == "mu-ell") {
    inst.sigs["o"] = Signature{{0}, {2}};
    inst.leq_f.insert({"o", "o"});
    return inst;
  }
  if (name == "ll") {
    inst.sigs["o"] = Signature{{0, 1}, {2}};
    inst.leq_g.insert({"o", "o"});
    return inst;
  }
  if (name.rfind("mu-ll-box:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(name.substr(10));
    } catch (...) {
      throw UnknownInstance(name);
    }
    if (k < 1) throw UnknownInstance(name);
    inst.sigs["o"] = Signature{{0, 1}, {2}};
    inst.leq_g.insert({"o", "o"});
    for (int i = 1; i <= k; ++i) {
      std::string act = "a" + std::to_string(i);
      inst.sigs[act] = Signature{{0}, {2}};
      inst.leq_g.insert({"o", act});
      inst.leq_f.insert({act, act});
    }
    return inst;
  }
  throw UnknownInstance(name);
}

}  // namespace mull
