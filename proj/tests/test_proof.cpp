#include "doctest.h"

#include <random>

#include "mull/mcut.hpp"
#include "mull/parse.hpp"
#include "mull/print.hpp"
#include "mull/wellformed.hpp"
#include "test_util.hpp"

using namespace mull;

namespace {

InstanceSpec ll() { return builtin_instance("ll"); }

Mcut example_chain() {
  // |- a, b ; |- ~b, c ; |- ~c, d   with a and d in the conclusion
  FormulaStore& st = store();
  Mcut m;
  m.premises = {Sequent{{st.atom("a"), st.atom("b")}},
                Sequent{{st.natom("b"), st.atom("c")}},
                Sequent{{st.natom("c"), st.atom("d")}}};
  m.iota = {{0, 0}, {2, 1}};
  m.pp = {{{0, 1}, {1, 0}}, {{1, 1}, {2, 0}}};
  return m;
}

}  // namespace

TEST_CASE("the circular promotion proof is well-formed") {
  Proof p = parse_proof(read_data_file("regproof.prf"), "o");
  auto errs = check_wellformed(p, ll());
  for (const auto& e : errs) CAPTURE(e.message);
  CHECK(errs.empty());
}

TEST_CASE("a promotion with empty g-relation fails its side condition") {
  Proof p = parse_proof(read_data_file("regproof.prf"), "o");
  auto errs = check_wellformed(p, builtin_instance("ell"));
  REQUIRE(!errs.empty());
  bool side = false;
  for (const auto& e : errs) side |= e.kind == RuleErrorKind::SideConditionFailed;
  CHECK(side);
}

TEST_CASE("a back-edge to the wrong sequent is reported") {
  Proof p = parse_proof(read_data_file("regproof-broken.prf"), "o");
  auto errs = check_wellformed(p, ll());
  REQUIRE(!errs.empty());
  bool back = false;
  for (const auto& e : errs) back |= e.kind == RuleErrorKind::BackEdgeMismatch && e.node == 1;
  CHECK(back);
}

TEST_CASE("open formulas are rejected") {
  Proof p;
  p.root = p.add({Sequent{{store().var(0)}}, {RuleKind::Top, 0, 0, {}, nullptr}, {}});
  auto errs = check_wellformed(p, ll());
  REQUIRE(!errs.empty());
  CHECK(errs[0].kind == RuleErrorKind::NotClosed);
}

TEST_CASE("identity expansion is well-formed for the builtin systems") {
  std::mt19937_64 rng(5);
  FormulaStore& st = store();
  auto inst = ll();
  SigId o = st.sig_id("o");
  std::vector<FormulaId> cases = {
      st.atom("a"),
      st.tensor(st.atom("a"), st.par(st.atom("b"), st.one())),
      st.with(st.bot(), st.plus(st.atom("a"), st.zero())),
      st.mu(st.var(0)),
      st.nu(st.bang(o, st.var(0))),
      st.mu(st.plus(st.atom("a"), st.plus(st.bot(), st.par(st.var(0), st.var(0))))),
      st.whynot(o, st.atom("a")),
      st.bang(o, st.tensor(st.atom("a"), st.whynot(o, st.atom("b")))),
  };
  for (FormulaId f : cases) {
    CAPTURE(st.show(f));
    Proof p = expand_identity(f, inst);
    REQUIRE(p.at(p.root).seq == Sequent{{st.negate(f), f}});
    auto errs = check_wellformed(p, inst);
    for (const auto& e : errs) CAPTURE(std::to_string(e.node) + " " + e.message);
    CHECK(errs.empty());
  }
  // the functorial system expands its own exponentials
  auto ell = builtin_instance("ell");
  Proof q = expand_identity(st.bang(o, st.atom("a")), ell);
  CHECK(check_wellformed(q, ell).empty());
}

TEST_CASE("proof print/parse round-trip") {
  Proof p = parse_proof(read_data_file("regproof.prf"), "o");
  Proof q = parse_proof(print_proof(p), "o");
  CHECK(proof_equal(p, q));

  Proof e = expand_identity(parse_formula("nu X. (a * (X | bot))"), ll());
  Proof e2 = parse_proof(print_proof(e), "o");
  CHECK(proof_equal(e, e2));
  CHECK(check_wellformed(e2, ll()).empty());
}

TEST_CASE("ancestry covers each premise position exactly once") {
  FormulaStore& st = store();
  auto inst = ll();
  SigId o = st.sig_id("o");
  for (FormulaId f : {st.tensor(st.atom("a"), st.atom("b")),
                      st.nu(st.with(st.var(0), st.atom("a"))),
                      st.bang(o, st.whynot(o, st.atom("a")))}) {
    Proof p = expand_identity(f, inst);
    for (NodeId n : p.reachable()) {
      const Node& node = p.at(n);
      if (node.rule.kind == RuleKind::Mcut || node.rule.kind == RuleKind::Cut) continue;
      for (std::uint32_t k = 0; k < node.premises.size(); ++k) {
        auto anc = ancestry(p, n, k);
        std::vector<int> hits(p.at(node.premises[k].id).seq.size(), 0);
        for (const auto& targets : anc)
          for (auto t : targets) hits.at(t)++;
        for (int h : hits) CHECK(h == 1);
      }
    }
  }
}

TEST_CASE("multicut conditions accept the three-premise chain") {
  CHECK(!validate_mcut(example_chain()).has_value());
}

TEST_CASE("multicut violations are reported in order") {
  FormulaStore& st = store();
  SUBCASE("pairing non-duals") {
    Mcut m = example_chain();
    // additionally pair a with d: a is in iota's range, so the failure is
    // NotTotalOffIota before any duality check
    m.pp.push_back({{0, 0}, {2, 1}});
    auto err = validate_mcut(m);
    REQUIRE(err);
    CHECK(err->kind == McutErrorKind::NotTotalOffIota);
  }
  SUBCASE("duplicated conclusion ancestor") {
    Mcut m = example_chain();
    m.iota[1] = m.iota[0];
    auto err = validate_mcut(m);
    REQUIRE(err);
    CHECK(err->kind == McutErrorKind::NotInjective);
  }
  SUBCASE("non-dual pair") {
    Mcut m;
    m.premises = {Sequent{{st.atom("a"), st.atom("b")}},
                  Sequent{{st.atom("b"), st.atom("d")}}};
    m.iota = {{0, 0}, {1, 1}};
    m.pp = {{{0, 1}, {1, 0}}};
    auto err = validate_mcut(m);
    REQUIRE(err);
    CHECK(err->kind == McutErrorKind::NotDual);
  }
  SUBCASE("two premises doubly linked form a cycle") {
    Mcut m;
    m.premises = {Sequent{{st.atom("a"), st.natom("a")}},
                  Sequent{{st.atom("a"), st.natom("a")}}};
    m.iota = {};
    m.pp = {{{0, 0}, {1, 1}}, {{0, 1}, {1, 0}}};
    auto err = validate_mcut(m);
    REQUIRE(err);
    CHECK(err->kind == McutErrorKind::NotTree);
  }
  SUBCASE("disconnected premises") {
    Mcut m;
    m.premises = {Sequent{{st.atom("a")}}, Sequent{{st.atom("b")}}};
    m.iota = {{0, 0}, {1, 0}};
    auto err = validate_mcut(m);
    REQUIRE(err);
    CHECK(err->kind == McutErrorKind::NotTree);
  }
}

TEST_CASE("multicut conditions are insensitive to premise order") {
  Mcut m = example_chain();
  // swap premises 0 and 2 with consistent reindexing
  Mcut swapped;
  swapped.premises = {m.premises[2], m.premises[1], m.premises[0]};
  auto fix = [](PremPos q) {
    q.prem = q.prem == 0 ? 2 : q.prem == 2 ? 0 : 1;
    return q;
  };
  for (auto q : m.iota) swapped.iota.push_back(fix(q));
  for (auto [a, b] : m.pp) swapped.pp.push_back({fix(a), fix(b)});
  CHECK(!validate_mcut(swapped).has_value());
}

TEST_CASE("context restriction reproduces the worked example") {
  Mcut m = example_chain();
  // restricting to ~b reaches the premises on both sides of its sequent
  auto r = restrict_context(m, PremPos{1, 0});
  CHECK(r == std::vector<std::uint32_t>{0, 2});
  // a is an ancestor of the conclusion, so its restriction is empty
  CHECK(restrict_context(m, PremPos{0, 0}).empty());
  // restriction of a list is the union of the singletons
  auto both = restrict_context(m, std::vector<PremPos>{{0, 0}, {1, 0}});
  CHECK(both == std::vector<std::uint32_t>{0, 2});
}

TEST_CASE("tree splitting partitions the premises") {
  Mcut m = example_chain();
  for (const auto& [a, b] : m.pp) {
    auto left = reach_without(m, a.prem, b.prem);
    auto right = reach_without(m, b.prem, a.prem);
    CHECK(left.size() + right.size() == m.premises.size());
    for (auto x : left)
      for (auto y : right) CHECK(x != y);
  }
}
