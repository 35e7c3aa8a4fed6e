#include "doctest.h"

#include <random>

#include "mull/instance.hpp"
#include "mull/signature.hpp"

using namespace mull;

namespace {

// Independent oracle: breadth-first application of the closure rules over
// all indices up to max_idx, with the c_0 = mpx_0 and c_1 = true conventions.
struct OracleClosure {
  std::vector<char> mpx, con;

  OracleClosure(const Signature& sig, unsigned max_idx) {
    mpx.assign(max_idx + 1, 0);
    con.assign(max_idx + 1, 0);
    for (unsigned i : sig.mpx) if (i <= max_idx) mpx[i] = 1;
    for (unsigned i : sig.contr) if (i <= max_idx) con[i] = 1;
    bool base_c2 = sig.contr.count(2) != 0;
    bool base_m1 = sig.mpx.count(1) != 0;
    for (bool go = true; go;) {
      go = false;
      auto add_c = [&](unsigned i) {
        if (i >= 2 && i < con.size() && !con[i]) { con[i] = 1; go = true; }
      };
      auto add_m = [&](unsigned i) {
        if (i < mpx.size() && !mpx[i]) { mpx[i] = 1; go = true; }
      };
      for (unsigned i = 2; i < con.size(); ++i)
        for (unsigned j = 2; j < con.size(); ++j)
          if (con[i] && con[j] && i + j - 1 < con.size()) add_c(i + j - 1);
      if (base_c2)
        for (unsigned i = 1; i < mpx.size(); ++i)
          for (unsigned j = 1; j < mpx.size(); ++j)
            if (mpx[i] && mpx[j] && i + j < mpx.size()) add_m(i + j);
      if (base_m1)
        for (unsigned i = 2; i < con.size(); ++i)
          if (con[i]) add_m(i);
    }
  }

  bool holds(RuleName r) const {
    if (r.kind == RuleNameKind::Contr) {
      if (r.index == 0) return mpx[0];
      if (r.index == 1) return true;
      return con[r.index] != 0;
    }
    return mpx[r.index] != 0;
  }
};

// the target scheme a plan must realize, counted abstractly:
// a contraction target c_i turns i why-not copies into one; a multiplexing
// target mpx_i turns i naked copies into one why-not.
struct AbstractState {
  unsigned naked, banged;
};

void replay(const DerivPlan& p, AbstractState& st) {
  switch (p.kind) {
    case DerivPlan::Kind::Empty:
      break;
    case DerivPlan::Kind::Prim:
      if (p.target.kind == RuleNameKind::Mpx) {
        REQUIRE(st.naked >= p.target.index);
        st.naked -= p.target.index;
        st.banged += 1;
      } else {
        REQUIRE(st.banged >= p.target.index);
        st.banged -= p.target.index;
        st.banged += 1;
      }
      break;
    case DerivPlan::Kind::MergeC:
      replay(*p.left, st);
      replay(*p.right, st);
      break;
    case DerivPlan::Kind::SumM: {
      replay(*p.left, st);
      replay(*p.right, st);
      REQUIRE(st.banged >= 2);
      st.banged -= 1;
      break;
    }
    case DerivPlan::Kind::MpxViaC: {
      for (unsigned k = 0; k < p.target.index; ++k) {
        REQUIRE(st.naked >= 1);
        st.naked -= 1;
        st.banged += 1;
      }
      replay(*p.left, st);
      break;
    }
  }
}

std::vector<Signature> all_signatures(unsigned max_idx) {
  // subsets of mpx indices {0..max_idx} x contr indices {2..max_idx}
  std::vector<Signature> out;
  unsigned mbits = max_idx + 1;
  unsigned cbits = max_idx >= 2 ? max_idx - 1 : 0;
  for (unsigned m = 0; m < (1u << mbits); ++m)
    for (unsigned c = 0; c < (1u << cbits); ++c) {
      Signature s;
      for (unsigned i = 0; i <= max_idx; ++i)
        if (m & (1u << i)) s.mpx.insert(i);
      for (unsigned i = 0; i < cbits; ++i)
        if (c & (1u << i)) s.contr.insert(i + 2);
      out.push_back(std::move(s));
    }
  return out;
}

}  // namespace

TEST_CASE("derivability closure on the elementary signature") {
  Signature ell{{0}, {2}};  // weakening and binary contraction
  CHECK(closure_contains(ell, RuleName::contr(3)));
  CHECK(closure_contains(ell, RuleName::contr(1)));
  CHECK(closure_contains(ell, RuleName::contr(0)));  // c_0 = mpx_0
  CHECK(!closure_contains(ell, RuleName::mpx(2)));
  CHECK(!closure_contains(ell, RuleName::mpx(1)));
}

TEST_CASE("c_1 is always derivable") {
  Signature empty;
  CHECK(closure_contains(empty, RuleName::contr(1)));
  CHECK(!closure_contains(empty, RuleName::contr(0)));
  CHECK(!closure_contains(empty, RuleName::mpx(0)));
}

TEST_CASE("closure matches the brute-force oracle exhaustively") {
  // every signature over indices <= 6, every query up to index 8
  auto sigs = all_signatures(6);
  std::size_t checked = 0;
  for (const auto& sig : sigs) {
    OracleClosure oracle(sig, 8);
    for (unsigned i = 0; i <= 8; ++i) {
      for (RuleName q : {RuleName::mpx(i), RuleName::contr(i)}) {
        CHECK(closure_contains(sig, q) == oracle.holds(q));
        ++checked;
      }
    }
  }
  CHECK(checked >= 4096);
}

TEST_CASE("synthesized derivations realize the target scheme") {
  Signature ell{{0}, {2}};
  SUBCASE("c_3 from two binary contractions") {
    DerivPlan p = synthesize_derived(ell, RuleName::contr(3));
    AbstractState st{0, 3};
    replay(p, st);
    CHECK(st.naked == 0);
    CHECK(st.banged == 1);
  }
  SUBCASE("c_1 is the empty derivation") {
    DerivPlan p = synthesize_derived(ell, RuleName::contr(1));
    CHECK(p.kind == DerivPlan::Kind::Empty);
    CHECK(p.rule_count() == 0);
  }
  SUBCASE("mpx_4 via dereliction and c_4") {
    Signature s{{1}, {4}};
    DerivPlan p = synthesize_derived(s, RuleName::mpx(4));
    AbstractState st{4, 0};
    replay(p, st);
    CHECK(st.naked == 0);
    CHECK(st.banged == 1);
  }
  SUBCASE("underivable rules are rejected") {
    CHECK_THROWS_AS(synthesize_derived(ell, RuleName::mpx(2)), NotDerivable);
  }
}

TEST_CASE("synthesized plans replay correctly for every derivable target") {
  for (const auto& sig : all_signatures(4)) {
    for (unsigned i = 0; i <= 6; ++i) {
      for (RuleName q : {RuleName::mpx(i), RuleName::contr(i)}) {
        if (!closure_contains(sig, q)) continue;
        DerivPlan p = synthesize_derived(sig, q);
        AbstractState st{0, 0};
        if (q.kind == RuleNameKind::Mpx) st = {i, 0};
        else st = {0, i};
        // c_0 realizes the mpx_0 scheme
        if (q.kind == RuleNameKind::Contr && i == 0) st = {0, 0};
        replay(p, st);
        CHECK(st.naked == 0);
        CHECK(st.banged == 1);
      }
    }
  }
}

TEST_CASE("builtin instances satisfy the cut-elimination axioms") {
  for (const char* name : {"ell", "mu-ell", "ll", "mu-ll-box:1", "mu-ll-box:2"}) {
    CAPTURE(name);
    auto rep = check_axioms(builtin_instance(name), true);
    for (const auto& v : rep.violations) CAPTURE(v.axiom + " " + v.detail);
    CHECK(rep.satisfied);
  }
  CHECK_THROWS_AS(builtin_instance("nope"), UnknownInstance);
  CHECK_THROWS_AS(builtin_instance("mu-ll-box:0"), UnknownInstance);
}

TEST_CASE("the modal instance has the documented shape") {
  auto inst = builtin_instance("mu-ll-box:2");
  CHECK(inst.sigs.size() == 3);
  CHECK(inst.leq(Promo::G, "o", "o"));
  CHECK(inst.leq(Promo::G, "o", "a1"));
  CHECK(inst.leq(Promo::G, "o", "a2"));
  CHECK(inst.leq(Promo::F, "a1", "a1"));
  CHECK(!inst.leq(Promo::F, "a1", "a2"));
  CHECK(inst.leq_u.empty());
}

TEST_CASE("a missing derived contraction is reported with a witness") {
  InstanceSpec inst;
  inst.sigs["a"] = Signature{{2}, {}};
  inst.sigs["b"] = Signature{};
  inst.leq_g.insert({"a", "b"});
  auto rep = check_axioms(inst);
  REQUIRE(!rep.satisfied);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.axiom == "Ax^g_m" && v.witness == std::vector<std::string>{"a", "b"} && v.index == 2u)
      found = true;
  CHECK(found);
}

TEST_CASE("axiom verdicts only change when a witness appears or disappears") {
  std::mt19937_64 rng(17);
  std::vector<std::string> names{"x", "y", "z"};
  for (int round = 0; round < 60; ++round) {
    InstanceSpec inst;
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> idx(0, 3);
    for (const auto& n : names) {
      Signature s;
      for (unsigned i = 0; i <= 3; ++i) if (coin(rng)) s.mpx.insert(i);
      for (unsigned i = 2; i <= 3; ++i) if (coin(rng)) s.contr.insert(i);
      inst.sigs[n] = s;
    }
    for (auto* rel : {&inst.leq_g, &inst.leq_f, &inst.leq_u})
      for (const auto& a : names)
        for (const auto& b : names)
          if (coin(rng) && coin(rng)) rel->insert({a, b});

    auto before = check_axioms(inst);
    // mutate: add one random pair
    InstanceSpec mutated = inst;
    auto* rel = idx(rng) % 3 == 0 ? &mutated.leq_g : idx(rng) % 2 == 0 ? &mutated.leq_f : &mutated.leq_u;
    rel->insert({names[idx(rng) % 3], names[idx(rng) % 3]});
    auto after = check_axioms(mutated);
    if (before.satisfied != after.satisfied) {
      // the verdict flipped, so the violation lists must differ
      CHECK(before.violations.size() != after.violations.size());
    }
    // re-running is stable
    auto again = check_axioms(mutated);
    CHECK(again.satisfied == after.satisfied);
    CHECK(again.violations.size() == after.violations.size());
  }
}
