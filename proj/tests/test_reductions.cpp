#include <doctest.h>

#include "dfo/evaluator.hpp"
#include "dfo/parser.hpp"
#include "dfo/reductions.hpp"
#include "dfo/solver.hpp"
#include "fixtures.hpp"

using namespace dfo;
using test::sample6;

namespace {

Signature sig_p1(int dim) {
  Signature sig;
  sig.predicates = {"p1"};
  sig.dim = dim;
  return sig;
}

std::set<std::string> members(const DataStructure& s, const std::string& pred) {
  return s.predicate_members(pred);
}

} // namespace

TEST_CASE("abstraction at a single center") {
  DataStructure s = sample6();
  Abstraction abs = abstract_r2(s, {"a"});
  const DataStructure& b = abs.structure;

  CHECK(b.dim() == 1);
  CHECK(b.universe() == s.universe());
  CHECK(members(b, "U_1_1_1") == std::set<std::string>{"a", "b"});
  CHECK(members(b, "U_1_2_2") == std::set<std::string>{"a", "c"});
  CHECK(members(b, "U_1_1_2") == std::set<std::string>{});
  CHECK(members(b, "U_1_2_1") == std::set<std::string>{"f"});

  // Survivors keep the value not shared with the center; the rest are fresh
  // and pairwise distinct.
  CHECK(b.value("b", 1) == 3);
  CHECK(b.value("c", 1) == 3);
  CHECK(b.value("f", 1) == 7);
  std::set<Value> fresh{b.value("a", 1), b.value("d", 1), b.value("e", 1)};
  CHECK(fresh.size() == 3);
  for (Value v : fresh) CHECK(v > 7);
}

TEST_CASE("abstraction corner cases") {
  DataStructure one({"z"}, 2, {4, 4}, {});
  Abstraction abs = abstract_r2(one, {"z"});
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      CHECK(members(abs.structure, OmegaPredicate{1, i, j}.name()) ==
            std::set<std::string>{"z"});
  CHECK(abs.structure.value("z", 1) > 4);

  DataStructure s = sample6();
  Abstraction two = abstract_r2(s, {"a", "d"});
  CHECK(members(two.structure, "U_2_1_1") == std::set<std::string>{"d"});
  CHECK(members(two.structure, "U_2_2_2") == std::set<std::string>{"d"});
  CHECK(members(two.structure, "U_2_1_2") == std::set<std::string>{});
  CHECK(members(two.structure, "U_2_2_1") == std::set<std::string>{});
  CHECK(two.structure.value("b", 1) == 3);
  CHECK(two.structure.value("c", 1) == 3);
  CHECK(two.structure.value("f", 1) == 7);
  std::set<Value> fresh{two.structure.value("a", 1), two.structure.value("d", 1),
                        two.structure.value("e", 1)};
  CHECK(fresh.size() == 3);

  CHECK_THROWS_AS(abstract_r2(pad(s, 1), {"a"}), InputError);
  CHECK_THROWS_AS(abstract_r2(s, CenterTuple{}), InputError);
  CHECK_THROWS_AS(abstract_r2(s, {"zz"}), InputError);

  DataStructure colliding({"a"}, 2, {1, 2},
                          {{"U_1_1_1", std::vector<bool>{false}}});
  CHECK_THROWS_AS(abstract_r2(colliding, {"a"}), InputError);
}

TEST_CASE("radius-1 abstraction") {
  DataStructure s = sample6();
  Abstraction abs = abstract_r1(s, {"a"});
  CHECK(abs.structure.dim() == 0);
  CHECK(members(abs.structure, "U_1_1_1") == std::set<std::string>{"a", "b"});
  CHECK(members(abs.structure, "U_1_2_2") == std::set<std::string>{"a", "c"});
  CHECK(members(abs.structure, "U_1_1_2") == std::set<std::string>{});
  CHECK(members(abs.structure, "U_1_2_1") == std::set<std::string>{"f"});

  Abstraction padded = abstract_r1(pad(s, 1), {"a"});
  CHECK(members(padded.structure, "U_1_3_3") ==
        std::set<std::string>(s.universe().begin(), s.universe().end()));

  DataStructure one({"z"}, 1, {9}, {});
  Abstraction small = abstract_r1(one, {"z"});
  CHECK(members(small.structure, "U_1_1_1") == std::set<std::string>{"z"});
  CHECK_THROWS_AS(abstract_r1(DataStructure({"z"}, 0, {}, {}), {"z"}),
                  InputError);
}

TEST_CASE("translation identities") {
  Signature sigma = sig_p1(2);

  // Equalities between centers pass through untouched.
  FormulaPtr eq = mk_eq("x1", "x2");
  CHECK(formula_equal(translate_r2(eq, 2, sigma), eq));
  FormulaPtr neq = mk_neq("x1", "x2");
  CHECK(formula_equal(translate_r2(neq, 2, sigma), neq));

  // Inside a modality, predicates and equalities are untouched as well.
  FormulaPtr pred_body = mk_loc(2, "x1", mk_pred("p1", "x1"));
  CHECK(formula_equal(translate_r2(pred_body, 1, sigma), mk_pred("p1", "x1")));
  FormulaPtr exists_eq =
      mk_loc(2, "x1", mk_exists("y", mk_eq("y", "x1")));
  CHECK(formula_equal(translate_r2(exists_eq, 1, sigma),
                      mk_exists("y", mk_eq("y", "x1"))));

  FormulaPtr pred_r1 = mk_loc(1, "x1", mk_pred("p1", "x1"));
  CHECK(formula_equal(translate_r1(pred_r1, 1, 3, sigma), mk_pred("p1", "x1")));
}

TEST_CASE("translated data atoms split by field agreement") {
  Signature sigma = sig_p1(2);
  // Same field: three zones.
  FormulaPtr same = translate_r2(mk_loc(2, "x1", mk_rel(1, 1, "x1", "x1")), 1,
                                 sigma);
  REQUIRE(same->kind == NodeKind::Or);
  REQUIRE(same->lhs->kind == NodeKind::Or);
  // Distinct fields: the out-of-ball zone is impossible and is dropped.
  FormulaPtr cross = translate_r2(mk_loc(2, "x1", mk_rel(1, 2, "x1", "x1")), 1,
                                  sigma);
  REQUIRE(cross->kind == NodeKind::Or);
  CHECK(cross->lhs->kind == NodeKind::And);

  FormulaPtr cross_r1 =
      translate_r1(mk_loc(1, "x1", mk_rel(1, 2, "x1", "x1")), 1, 2, sigma);
  CHECK(cross_r1->kind == NodeKind::And); // single zone, no disjunction

  // The radius-2 translation speaks only rel(1,1,·,·); radius-1 none at all.
  struct Scan {
    bool only_11 = true, any_rel = false;
    void walk(const FormulaPtr& g) {
      if (!g) return;
      if (g->kind == NodeKind::Rel) {
        any_rel = true;
        if (g->i != 1 || g->j != 1) only_11 = false;
      }
      walk(g->lhs);
      walk(g->rhs);
    }
  };
  Scan scan2;
  scan2.walk(same);
  CHECK(scan2.only_11);
  Scan scan1;
  scan1.walk(translate_r1(mk_loc(1, "x1", mk_rel(1, 1, "x1", "x1")), 1, 2,
                          sigma));
  CHECK_FALSE(scan1.any_rel);
}

TEST_CASE("translation agreement on the six-element sample") {
  DataStructure s = sample6();
  Signature sigma;
  sigma.dim = 2;

  FormulaPtr matrix = mk_loc(
      2, "x1",
      mk_exists("y", mk_and(mk_rel(2, 1, "x1", "y"), mk_neq("y", "x1"))));
  Interpretation at_a = Interpretation{}.extend("x1", "a");
  CHECK(evaluate(s, matrix, at_a));

  Abstraction abs = abstract_r2(s, {"a"});
  FormulaPtr translated = translate_r2(matrix, 1, sigma);
  CHECK(evaluate(abs.structure, translated, at_a));

  FormulaPtr matrix_r1 = mk_loc(
      1, "x1",
      mk_exists("y", mk_and(mk_rel(1, 1, "x1", "y"), mk_neq("y", "x1"))));
  CHECK(evaluate(s, matrix_r1, at_a));
  Abstraction abs1 = abstract_r1(s, {"a"});
  CHECK(evaluate(abs1.structure, translate_r1(matrix_r1, 1, 2, sigma), at_a));
}

TEST_CASE("well-formedness formula") {
  DataStructure s = sample6();
  Abstraction abs = abstract_r2(s, {"a"});
  CHECK(is_well_formed(abs.structure, {"a"}));

  // Reflexivity broken: the center is not in its own sharing set.
  DataStructure bad = abs.structure;
  bad.set_predicate("U_1_1_1", bad.index_of("a"), false);
  CHECK_FALSE(is_well_formed(bad, {"a"}));

  // Uniqueness broken: two unlabeled elements share the data value.
  DataStructure dup = abs.structure;
  dup.set_value(dup.index_of("d"), 1, dup.value("e", 1));
  CHECK_FALSE(is_well_formed(dup, {"a"}));

  CHECK_THROWS_AS(is_well_formed(sample6(), {"a"}), InputError);
  DataStructure missing({"a"}, 1, {1}, {});
  CHECK_THROWS_AS(is_well_formed(missing, {"a"}), InputError);

  // Radius-1 analogue: abstractions satisfy it, reflexivity is necessary.
  Abstraction abs1 = abstract_r1(s, {"a"});
  CHECK(is_well_formed_r1(abs1.structure, {"a"}, 2));
  DataStructure bad1 = abs1.structure;
  bad1.set_predicate("U_1_2_2", bad1.index_of("a"), false);
  CHECK_FALSE(is_well_formed_r1(bad1, {"a"}, 2));

  // Radius-1 well-formedness with an explicit transitivity violation:
  // b shares the first center's value and c extends it, but the second
  // center's copy of the premise lacks the conclusion.
  std::map<std::string, std::vector<bool>> preds;
  auto add = [&](const std::string& name, std::vector<bool> bits) {
    preds[name] = std::move(bits);
  };
  // Universe {b, c}; centers both b; D = 2.
  for (int p = 1; p <= 2; ++p)
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j) add(OmegaPredicate{p, i, j}.name(), {false, false});
  auto set = [&](int p, int i, int j, int elem) {
    preds[OmegaPredicate{p, i, j}.name()][elem] = true;
  };
  set(1, 1, 1, 0); // reflexivity for center 1
  set(1, 2, 2, 0);
  set(2, 1, 1, 0); // reflexivity for center 2 (same element)
  set(2, 2, 2, 0);
  set(1, 1, 2, 1); // c in U_1_1_2
  // missing: c in U_2_1_2 even though b is in U_2_1_1
  DataStructure tran_violation({"b", "c"}, 0, {}, preds);
  CHECK_FALSE(is_well_formed_r1(tran_violation, {"b", "b"}, 2));
  // Adding the conclusion everywhere the premise demands repairs it.
  set(2, 1, 2, 1);
  DataStructure repaired({"b", "c"}, 0, {}, preds);
  CHECK(is_well_formed_r1(repaired, {"b", "b"}, 2));
}

TEST_CASE("reconstruction rebuilds the single-center abstraction") {
  DataStructure s = sample6();
  Abstraction abs = abstract_r2(s, {"a"});
  DataStructure rebuilt = reconstruct_r2(abs.structure, {"a"});

  CHECK(rebuilt.dim() == 2);
  CHECK(rebuilt.universe() == s.universe());
  CHECK(rebuilt.predicates().empty());
  // The center classes and survivors reproduce the sharing pattern.
  CHECK(rebuilt.value("a", 1) == rebuilt.value("b", 1));
  CHECK(rebuilt.value("a", 2) == rebuilt.value("c", 2));
  CHECK(rebuilt.value("a", 2) == rebuilt.value("f", 1));
  CHECK(rebuilt.value("b", 2) == rebuilt.value("c", 1));
  CHECK(rebuilt.value("a", 1) != rebuilt.value("a", 2));
  // f's second value stays private.
  for (int e = 0; e < rebuilt.size(); ++e)
    for (int f = 1; f <= 2; ++f)
      if (!(e == rebuilt.index_of("f") && f == 2))
        CHECK(rebuilt.value("f", 2) != rebuilt.value(e, f));
  // d and e collapse onto the shared out-of-range value.
  CHECK(rebuilt.value("d", 1) == rebuilt.value("d", 2));
  CHECK(rebuilt.value("d", 1) == rebuilt.value("e", 1));
  CHECK(rebuilt.value("e", 1) == rebuilt.value("e", 2));

  Abstraction again = abstract_r2(rebuilt, {"a"});
  CHECK(data_equivalent(again.structure, abs.structure));

  DataStructure bad = abs.structure;
  bad.set_predicate("U_1_1_1", bad.index_of("a"), false);
  CHECK_THROWS_AS(reconstruct_r2(bad, {"a"}), InputError);
}

TEST_CASE("reconstruction round trip on random abstractions") {
  Rng rng(5150);
  GenParams params;
  params.max_size = 5;
  params.dim = 2;
  params.value_range = 6;
  params.pred_count = 1;
  for (int t = 0; t < 300; ++t) {
    DataStructure s = random_structure(rng, params);
    CenterTuple centers;
    int n = rng.between(1, 2);
    for (int k = 0; k < n; ++k)
      centers.centers.push_back(s.elem_name(rng.below(s.size())));
    Abstraction abs = abstract_r2(s, centers);
    REQUIRE(is_well_formed(abs.structure, centers));
    DataStructure rebuilt = reconstruct_r2(abs.structure, centers);
    Abstraction again = abstract_r2(rebuilt, centers);
    CHECK(data_equivalent(again.structure, abs.structure));

    Abstraction abs1 = abstract_r1(s, centers);
    REQUIRE(is_well_formed_r1(abs1.structure, centers, 2));
    DataStructure rebuilt1 = reconstruct_r1(abs1.structure, centers, 2);
    CHECK(data_equivalent(abstract_r1(rebuilt1, centers).structure,
                          abs1.structure));
  }
}

TEST_CASE("whole-sentence reductions") {
  FormulaPtr phi = parse_formula("exists x. loc[2](x){ rel(1,1,x,x) }");
  FormulaPtr reduced = reduce_r2d2(phi);
  REQUIRE(reduced->kind == NodeKind::Exists);
  CHECK(reduced->var == "x1");
  CHECK(free_vars(reduced).empty());
  Signature target;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      target.predicates.insert(OmegaPredicate{1, i, j}.name());
  target.dim = 1;
  CHECK(check_fragment(reduced, target, Fragment::dfo()).ok);
  CHECK(bounded_sat(reduced, target, 1, 2).verdict == Verdict::Sat);

  CHECK_THROWS_AS(
      reduce_r2d2(parse_formula(
          "(exists x. leader(x) & (forall y. !leader(y) | y = x))")),
      InputError);

  FormulaPtr contradiction = parse_formula("exists x. x != x");
  FormulaPtr reduced_unsat = reduce_r2d2(contradiction);
  Signature sig_unsat;
  sig_unsat.dim = 1;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      sig_unsat.predicates.insert(OmegaPredicate{1, i, j}.name());
  CHECK(bounded_sat(reduced_unsat, sig_unsat, 1, 3).verdict ==
        Verdict::UnsatUpToBound);
  CHECK(bounded_sat(contradiction, Signature{{}, 2}, 2, 3).verdict ==
        Verdict::UnsatUpToBound);

  FormulaPtr phi_r1 =
      parse_formula("exists x. loc[1](x){ exists y. rel(1,1,x,y) & y != x }");
  FormulaPtr reduced_r1 = reduce_r1(phi_r1, 2);
  Signature target1;
  target1.dim = 0;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      target1.predicates.insert(OmegaPredicate{1, i, j}.name());
  CHECK(check_fragment(reduced_r1, target1, Fragment::dfo()).ok);
  CHECK(bounded_sat(reduced_r1, target1, 0, 2).verdict == Verdict::Sat);
}

TEST_CASE("reduction output size stays polynomial") {
  Rng rng(64738);
  GenParams params;
  params.dim = 2;
  params.pred_count = 1;
  params.depth = 2;
  params.radius = 2;
  const int K = 512;
  for (int t = 0; t < 100; ++t) {
    FormulaPtr phi = random_formula(rng, params, Fragment::existential_local(2));
    int n = static_cast<int>(to_prenex_existential(phi, 2).vars.size());
    if (n < 1) continue;
    FormulaPtr reduced = reduce_r2d2(phi);
    CHECK(node_count(reduced) <=
          K * n * n * node_count(phi) + K * n * n);
  }
}

TEST_CASE("adding every value pair") {
  DataStructure s = sample6();
  DataStructure g = add_ge(s);
  CHECK(g.size() == 6 + 7 * 7);
  CHECK(g.predicate_members("ge").size() == 49);
  for (const auto& id : s.universe()) {
    CHECK_FALSE(g.in_predicate("ge", id));
    CHECK(g.value(id, 1) == s.value(id, 1));
  }
  CHECK(data_equivalent(view(g, "a", 3), g));
  CHECK(data_equivalent(view(g, g.elem_name(20), 3), g));

  DataStructure one({"z"}, 2, {4, 4}, {});
  CHECK(add_ge(one).size() == 2);

  CHECK_THROWS_AS(add_ge(g), InputError);        // ge already present
  CHECK_THROWS_AS(add_ge(pad(s, 1)), InputError); // not 2-data
}

TEST_CASE("dropping the value pairs") {
  DataStructure s = sample6();
  CHECK(minus_ge(add_ge(s)) == s);

  DataStructure empty_ge({"a", "b"}, 2, {1, 2, 3, 4},
                         {{"ge", {false, false}}});
  DataStructure kept = minus_ge(empty_ge);
  CHECK(kept.universe() == empty_ge.universe());
  CHECK_FALSE(kept.has_predicate("ge"));

  DataStructure all_ge({"a"}, 2, {1, 2}, {{"ge", {true}}});
  CHECK_THROWS_AS(minus_ge(all_ge), InputError);
  CHECK_THROWS_AS(minus_ge(s), InputError); // no ge predicate at all
}

TEST_CASE("relativization and the radius-3 embedding") {
  FormulaPtr exists_sigma = parse_formula("exists x. p1(x)");
  CHECK(serialize_formula(relativize(exists_sigma)) ==
        "exists x. !ge(x) & p1(x)");
  FormulaPtr atom = mk_pred("p1", "x");
  CHECK(formula_equal(relativize(atom), atom));
  CHECK_THROWS_AS(relativize(parse_formula("exists x. ge(x)")), InputError);
  CHECK_THROWS_AS(relativize(parse_formula("exists x. loc[1](x){ p1(x) }")),
                  InputError);

  FormulaPtr embedded = embed_r3(exists_sigma);
  REQUIRE(embedded->kind == NodeKind::Exists);
  REQUIRE(embedded->lhs->kind == NodeKind::Loc);
  CHECK(embedded->lhs->radius == 3);
  CHECK(formula_equal(embedded->lhs->lhs, relativize(exists_sigma)));
}

TEST_CASE("radius-3 embedding preserves bounded satisfiability") {
  Signature sig;
  sig.predicates = {"p1", "ge"};
  sig.dim = 2;

  FormulaPtr phi = parse_formula("exists x. p1(x)");
  SolveResult embedded = bounded_sat(embed_r3(phi), sig, 2, 2);
  REQUIRE(embedded.verdict == Verdict::Sat);
  CHECK(evaluate_sentence(*embedded.witness, embed_r3(phi)));

  // A model of the source lifts to a model of the embedding by adding the
  // value pairs.
  Signature source_sig;
  source_sig.predicates = {"p1"};
  source_sig.dim = 2;
  SolveResult source = bounded_sat(phi, source_sig, 2, 2);
  REQUIRE(source.verdict == Verdict::Sat);
  CHECK(evaluate_sentence(add_ge(*source.witness), embed_r3(phi)));

  Signature ge_only;
  ge_only.predicates = {"ge"};
  ge_only.dim = 2;
  SolveResult impossible =
      bounded_sat(embed_r3(parse_formula("exists x. x != x")), ge_only, 2, 5);
  CHECK(impossible.verdict == Verdict::UnsatUpToBound);
  CHECK(impossible.bound == 5);
}

TEST_CASE("padding embedding") {
  FormulaPtr trivial = parse_formula("exists x. x = x");
  FormulaPtr embedded = embed_pad(trivial, 2, 2);
  REQUIRE(embedded->kind == NodeKind::Exists);
  REQUIRE(embedded->lhs->kind == NodeKind::Loc);
  CHECK(embedded->lhs->radius == 2);
  CHECK(formula_equal(embedded->lhs->lhs, trivial));

  CHECK_THROWS_AS(embed_pad(trivial, 3, 2), InputError);
  CHECK_THROWS_AS(embed_pad(trivial, 2, 3), InputError);
  CHECK_THROWS_AS(
      embed_pad(parse_formula("exists x. loc[2](x){ x = x }"), 2, 2),
      InputError);
}
