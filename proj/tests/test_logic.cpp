#include <doctest.h>

#include "dfo/evaluator.hpp"
#include "dfo/logic.hpp"
#include "dfo/parser.hpp"
#include "dfo/solver.hpp"
#include "fixtures.hpp"

using namespace dfo;

namespace {

// Unique leader, and every element's second value names the leader's first.
const char* kLeaderText =
    "(exists x. leader(x) & (forall y. !leader(y) | y = x)) & "
    "(forall y. exists x. leader(x) & rel(1,2,x,y))";

Signature sig2() {
  Signature sig;
  sig.predicates = {"leader", "p"};
  sig.dim = 2;
  return sig;
}

} // namespace

TEST_CASE("free variables") {
  CHECK(free_vars(mk_exists("x", mk_pred("leader", "x"))).empty());
  CHECK(free_vars(mk_rel(1, 2, "x", "y")) ==
        std::set<std::string>{"x", "y"});
  FormulaPtr loc =
      mk_loc(1, "x", mk_exists("y", mk_rel(2, 1, "x", "y")));
  CHECK(free_vars(loc) == std::set<std::string>{"x"});
}

TEST_CASE("fragment membership") {
  FormulaPtr leader = parse_formula(kLeaderText);
  CHECK(check_fragment(leader, sig2(), Fragment::dfo()).ok);
  auto violation =
      check_fragment(leader, sig2(), Fragment::existential_local(1));
  CHECK_FALSE(violation.ok);
  CHECK_FALSE(violation.violations.empty());

  // Renaming compatibility: every output value pair agrees on some input.
  FormulaPtr renaming = parse_formula(
      "exists x. loc[1](x){ forall y. !rel(2,2,x,y) | rel(1,1,x,y) }");
  CHECK(check_fragment(renaming, sig2(), Fragment::existential_local(1)).ok);
  CHECK_FALSE(
      check_fragment(renaming, sig2(), Fragment::existential_local(2)).ok);

  FormulaPtr negated_quantifier = mk_not(mk_exists("x", mk_eq("x", "x")));
  CHECK_FALSE(check_fragment(negated_quantifier, sig2(),
                             Fragment::existential_local(1))
                  .ok);
  CHECK(check_fragment(negated_quantifier, sig2(), Fragment::dfo()).ok);

  // dFO rejects the local modality; the local fragments demand a lone
  // subject variable in the body.
  FormulaPtr loc = mk_loc(1, "x", mk_pred("p", "x"));
  CHECK_FALSE(check_fragment(mk_exists("x", loc), sig2(), Fragment::dfo()).ok);
  FormulaPtr bad_body = mk_exists(
      "x", mk_exists("y", mk_loc(1, "x", mk_rel(1, 1, "x", "y"))));
  CHECK_FALSE(
      check_fragment(bad_body, sig2(), Fragment::existential_local(1)).ok);

  // Quantifier-free fragment: no outer quantifier at all.
  FormulaPtr qf = mk_and(mk_neq("x", "y"), mk_loc(2, "x", mk_pred("p", "x")));
  CHECK(check_fragment(qf, sig2(), Fragment::quantifier_free_local(2)).ok);
  CHECK_FALSE(check_fragment(mk_exists("x", qf), sig2(),
                             Fragment::quantifier_free_local(2))
                  .ok);

  // Unknown predicate / field index out of range.
  CHECK_FALSE(
      check_fragment(mk_exists("x", mk_pred("nope", "x")), sig2(),
                     Fragment::dfo())
          .ok);
  CHECK_FALSE(check_fragment(mk_exists("x", mk_rel(1, 3, "x", "x")), sig2(),
                             Fragment::dfo())
                  .ok);
}

TEST_CASE("dFO accepts exactly the modality-free formulas") {
  Rng rng(246);
  GenParams params;
  params.dim = 2;
  params.pred_count = 1;
  params.depth = 3;
  params.radius = 1;
  Signature sig;
  sig.predicates = {"p1"};
  sig.dim = 2;
  for (int t = 0; t < 200; ++t) {
    FormulaPtr f = random_formula(rng, params, Fragment::dfo());
    CHECK(check_fragment(f, sig, Fragment::dfo()).ok);
    // Grafting a modality anywhere breaks membership.
    FormulaPtr wrapped = mk_exists("q", mk_loc(1, "q", f->lhs ? f->lhs : f));
    FormulaPtr grafted = mk_and(f, wrapped);
    CHECK_FALSE(check_fragment(grafted, sig, Fragment::dfo()).ok);
  }
}

TEST_CASE("substitution") {
  CHECK(formula_equal(substitute(mk_eq("x", "y"), {{"x", "z"}}),
                      mk_eq("z", "y")));
  FormulaPtr bound = mk_exists("x", mk_eq("x", "y"));
  CHECK(formula_equal(substitute(bound, {{"x", "z"}}), bound));
  CHECK(formula_equal(
      substitute(mk_loc(1, "x", mk_pred("p", "x")), {{"x", "z"}}),
      mk_loc(1, "z", mk_pred("p", "z"))));

  // Capture: the binder is renamed before y moves under it.
  FormulaPtr capture = substitute(mk_exists("z", mk_eq("z", "y")),
                                  {{"y", "z"}});
  CHECK(capture->kind == NodeKind::Exists);
  CHECK(capture->var != "z");
  CHECK(formula_equal(capture->lhs, mk_eq(capture->var, "z")));

  // Simultaneous swap.
  FormulaPtr swapped = substitute(mk_rel(1, 2, "x", "y"),
                                  {{"x", "y"}, {"y", "x"}});
  CHECK(formula_equal(swapped, mk_rel(1, 2, "y", "x")));
}

TEST_CASE("prenex existential form") {
  FormulaPtr simple = parse_formula("exists x. loc[2](x){ p(x) }");
  PrenexExistential p1 = to_prenex_existential(simple, 2);
  CHECK(p1.vars == std::vector<std::string>{"x"});
  CHECK(formula_equal(p1.matrix, mk_loc(2, "x", mk_pred("p", "x"))));

  FormulaPtr conj = parse_formula(
      "(exists x. loc[2](x){ p(x) }) & (exists x. loc[2](x){ leader(x) })");
  PrenexExistential p2 = to_prenex_existential(conj, 2);
  REQUIRE(p2.vars.size() == 2);
  CHECK(p2.vars[0] == "x");
  CHECK(p2.vars[1] != "x");
  CHECK(formula_equal(
      p2.matrix, mk_and(mk_loc(2, "x", mk_pred("p", "x")),
                        mk_loc(2, p2.vars[1], mk_pred("leader", p2.vars[1])))));

  FormulaPtr pair = parse_formula(
      "exists x. exists y. x != y & loc[2](x){ p(x) }");
  PrenexExistential p3 = to_prenex_existential(pair, 2);
  CHECK(p3.vars == std::vector<std::string>{"x", "y"});
  CHECK(formula_equal(p3.matrix,
                      mk_and(mk_neq("x", "y"), mk_loc(2, "x", mk_pred("p", "x")))));

  CHECK_THROWS_AS(to_prenex_existential(parse_formula(kLeaderText), 1),
                  InputError);
}

TEST_CASE("prenex form preserves evaluation") {
  Rng rng(424242);
  GenParams params;
  params.max_size = 4;
  params.dim = 2;
  params.value_range = 4;
  params.pred_count = 1;
  params.depth = 2;
  params.radius = 2;
  for (int t = 0; t < 150; ++t) {
    FormulaPtr f = random_formula(rng, params, Fragment::existential_local(2));
    PrenexExistential prenex = to_prenex_existential(f, 2);
    FormulaPtr rebuilt = prenex.matrix;
    for (auto it = prenex.vars.rbegin(); it != prenex.vars.rend(); ++it)
      rebuilt = mk_exists(*it, rebuilt);
    DataStructure s = random_structure(rng, params);
    CHECK(evaluate_sentence(s, f) == evaluate_sentence(s, rebuilt));
  }
}

TEST_CASE("abbreviation elimination preserves evaluation") {
  FormulaPtr conj = mk_and(mk_eq("x", "x"), mk_eq("x", "x"));
  FormulaPtr lowered = eliminate_abbreviations(conj);
  CHECK(lowered->kind == NodeKind::Not);

  Rng rng(99);
  GenParams params;
  params.max_size = 4;
  params.dim = 2;
  params.value_range = 4;
  params.pred_count = 1;
  params.depth = 3;
  for (int t = 0; t < 200; ++t) {
    FormulaPtr f = random_formula(rng, params, Fragment::dfo());
    FormulaPtr g = eliminate_abbreviations(f);
    DataStructure s = random_structure(rng, params);
    CHECK(evaluate_sentence(s, f) == evaluate_sentence(s, g));
  }
}
