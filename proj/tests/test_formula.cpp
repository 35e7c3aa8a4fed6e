#include "doctest.h"

#include <random>

#include "mull/closure.hpp"
#include "mull/formula.hpp"
#include "mull/parse.hpp"

using namespace mull;

namespace {

FormulaId random_formula(std::mt19937_64& rng, int depth, int open_binders) {
  FormulaStore& st = store();
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 5 : 13);
  switch (pick(rng)) {
    case 0: return st.atom("a");
    case 1: return st.atom("b");
    case 2: return st.natom("a");
    case 3: return st.one();
    case 4: return st.bot();
    case 5:
      if (open_binders > 0) {
        std::uniform_int_distribution<int> v(0, open_binders - 1);
        return st.var(static_cast<std::uint32_t>(v(rng)));
      }
      return st.top();
    case 6: return st.par(random_formula(rng, depth - 1, open_binders),
                          random_formula(rng, depth - 1, open_binders));
    case 7: return st.tensor(random_formula(rng, depth - 1, open_binders),
                             random_formula(rng, depth - 1, open_binders));
    case 8: return st.plus(random_formula(rng, depth - 1, open_binders),
                           random_formula(rng, depth - 1, open_binders));
    case 9: return st.with(random_formula(rng, depth - 1, open_binders),
                           random_formula(rng, depth - 1, open_binders));
    case 10: return st.mu(random_formula(rng, depth - 1, open_binders + 1));
    case 11: return st.nu(random_formula(rng, depth - 1, open_binders + 1));
    case 12: return st.whynot(st.sig_id("k"), random_formula(rng, depth - 1, open_binders));
    default: return st.bang(st.sig_id("k"), random_formula(rng, depth - 1, open_binders));
  }
}

}  // namespace

TEST_CASE("negation follows the connective table") {
  FormulaStore& st = store();
  FormulaId a1 = st.atom("a1");
  FormulaId a2 = st.atom("a2");
  CHECK(st.negate(st.tensor(a1, a2)) == st.par(st.negate(a1), st.negate(a2)));
  CHECK(st.negate(st.with(a1, a2)) == st.plus(st.negate(a1), st.negate(a2)));
  CHECK(st.negate(st.bot()) == st.one());
  CHECK(st.negate(st.top()) == st.zero());
  CHECK(st.negate(st.var(0)) == st.var(0));
  SigId s = st.sig_id("k");
  CHECK(st.negate(st.bang(s, a1)) == st.whynot(s, st.negate(a1)));
  CHECK(st.negate(st.mu(st.var(0))) == st.nu(st.var(0)));
}

TEST_CASE("negation is an involution on random formulas") {
  std::mt19937_64 rng(0);
  for (int i = 0; i < 200; ++i) {
    FormulaId f = random_formula(rng, 5, 0);
    CHECK(store().negate(store().negate(f)) == f);
  }
}

TEST_CASE("negation commutes with unfolding") {
  std::mt19937_64 rng(7);
  FormulaStore& st = store();
  int tried = 0;
  while (tried < 100) {
    FormulaId body = random_formula(rng, 4, 1);
    FormulaId f = st.mu(body);
    if (!st.closed(f)) continue;
    ++tried;
    CHECK(st.negate(st.unfold(f)) == st.unfold(st.negate(f)));
  }
}

TEST_CASE("unfold substitutes the fixed point for the bound variable") {
  FormulaStore& st = store();
  SigId s = st.sig_id("k");
  // nu X. ![k] X unfolds to ![k] (nu X. ![k] X)
  FormulaId nux = st.nu(st.bang(s, st.var(0)));
  CHECK(st.unfold(nux) == st.bang(s, nux));
  // mu X. X unfolds to itself
  FormulaId muxx = st.mu(st.var(0));
  CHECK(st.unfold(muxx) == muxx);
  // the exponential encoding: ?^ A = mu X. (A + (bot + (X | X)))
  FormulaId a = st.atom("a");
  FormulaId enc = st.mu(st.plus(a, st.plus(st.bot(), st.par(st.var(0), st.var(0)))));
  CHECK(st.unfold(enc) == st.plus(a, st.plus(st.bot(), st.par(enc, enc))));
  CHECK_THROWS_AS(st.unfold(a), NotAFixedPoint);
}

TEST_CASE("closure of trivial and circular roots") {
  FormulaStore& st = store();
  FormulaId muxx = st.mu(st.var(0));
  auto t1 = ClosureTable::build({muxx});
  CHECK(t1.size() == 1);

  SigId s = st.sig_id("k");
  FormulaId nux = st.nu(st.bang(s, st.var(0)));
  auto t2 = ClosureTable::build({nux});
  REQUIRE(t2.size() == 2);
  CHECK(t2.contains(st.bang(s, nux)));
  CHECK(t2.priority(nux) < t2.priority(st.bang(s, nux)));
}

TEST_CASE("closure of the exponential encoding enumerates all components") {
  FormulaStore& st = store();
  FormulaId a = st.atom("a");
  FormulaId enc = st.mu(st.plus(a, st.plus(st.bot(), st.par(st.var(0), st.var(0)))));
  auto t = ClosureTable::build({enc});
  // enc, its unfolding, bot + (enc|enc), enc|enc, bot, a
  CHECK(t.size() == 6);
  CHECK(t.contains(a));
  CHECK(t.contains(st.bot()));
  CHECK(t.contains(st.par(enc, enc)));
  CHECK(t.priority(enc) < t.priority(st.unfold(enc)));
}

TEST_CASE("closure is idempotent and priorities respect the subterm order") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    FormulaId f = random_formula(rng, 4, 0);
    auto t = ClosureTable::build({f});
    auto t2 = ClosureTable::build(t.formulas());
    CHECK(t.formulas() == t2.formulas());
    for (FormulaId g : t.formulas()) {
      CHECK(t.contains(g));
      if (store().is_fixpoint(g)) CHECK(t.contains(store().unfold(g)));
    }
  }
}

TEST_CASE("closure obeys the cap") {
  FormulaStore& st = store();
  // a tower of pars grows the closure linearly; cap it below that
  FormulaId f = st.atom("deep");
  for (int i = 0; i < 64; ++i) f = st.par(f, st.atom("x" + std::to_string(i)));
  CHECK_THROWS_AS(ClosureTable::build({f}, 16), ClosureOverflow);
}

TEST_CASE("formula parse/print round-trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    FormulaId f = random_formula(rng, 5, 0);
    std::string text = store().show(f);
    CAPTURE(text);
    CHECK(parse_formula(text) == f);
  }
}

TEST_CASE("formula syntax accepts the documented forms") {
  FormulaStore& st = store();
  CHECK(parse_formula("a") == st.atom("a"));
  CHECK(parse_formula("~a") == st.natom("a"));
  CHECK(parse_formula("mu X. X") == st.mu(st.var(0)));
  CHECK(parse_formula("nu X. ![k] X") == st.nu(st.bang(st.sig_id("k"), st.var(0))));
  CHECK(parse_formula("(a * b) | c") ==
        st.par(st.tensor(st.atom("a"), st.atom("b")), st.atom("c")));
  CHECK(parse_formula("1 + bot") == st.plus(st.one(), st.bot()));
  CHECK(parse_formula("top & 0") == st.with(st.top(), st.zero()));
  CHECK(parse_formula("?f", std::string("k")) == st.whynot(st.sig_id("k"), st.atom("f")));
  CHECK_THROWS_AS(parse_formula("? a"), ParseError);
  CHECK_THROWS_AS(parse_formula("mu X"), ParseError);
}
