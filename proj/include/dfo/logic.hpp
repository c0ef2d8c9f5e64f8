#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dfo/errors.hpp"
#include "dfo/structures.hpp"

namespace dfo {

/// Formula nodes. And/Forall are first-class (the usual abbreviations) and
/// can be eliminated on demand; `x != y` is represented as Not(Eq).
/// Loc(r, x, body) evaluates `body` over the radius-r view of the element
/// bound to x; the body's free variable x refers to that subject.
enum class NodeKind { Pred, Rel, Eq, Or, And, Not, Exists, Forall, Loc };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  NodeKind kind = NodeKind::Eq;
  std::string name;     // Pred: predicate name
  int i = 0, j = 0;     // Rel: field indices (1-based)
  int radius = 0;       // Loc
  std::string var;      // Pred/Eq/Rel first variable; binder variable
  std::string var2;     // Eq/Rel second variable
  FormulaPtr lhs, rhs;  // children (lhs only for Not/Exists/Forall/Loc)
};

FormulaPtr mk_pred(std::string name, std::string x);
FormulaPtr mk_rel(int i, int j, std::string x, std::string y);
FormulaPtr mk_eq(std::string x, std::string y);
FormulaPtr mk_neq(std::string x, std::string y); // Not(Eq)
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_not(FormulaPtr a);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b); // Or(Not(a), b)
FormulaPtr mk_exists(std::string x, FormulaPtr body);
FormulaPtr mk_forall(std::string x, FormulaPtr body);
FormulaPtr mk_loc(int radius, std::string x, FormulaPtr body);
/// Left fold of a nonempty list with Or / And.
FormulaPtr mk_or_all(const std::vector<FormulaPtr>& parts);
FormulaPtr mk_and_all(const std::vector<FormulaPtr>& parts);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
int node_count(const FormulaPtr& f);

std::set<std::string> free_vars(const FormulaPtr& f);
/// All variable names occurring anywhere (free or bound).
std::set<std::string> all_vars(const FormulaPtr& f);

/// Predicate alphabet and number of data fields a formula may mention.
struct Signature {
  std::set<std::string> predicates;
  int dim = 0;
};

Signature signature_of(const DataStructure& s);

enum class FragmentKind { DFO, LocalFO, ExistentialLocal, QuantifierFreeLocal };

/// Fragment selector; radius is ignored for DFO.
struct Fragment {
  FragmentKind kind = FragmentKind::DFO;
  int radius = 0;

  static Fragment dfo() { return {FragmentKind::DFO, 0}; }
  static Fragment local_fo(int r) { return {FragmentKind::LocalFO, r}; }
  static Fragment existential_local(int r) {
    return {FragmentKind::ExistentialLocal, r};
  }
  static Fragment quantifier_free_local(int r) {
    return {FragmentKind::QuantifierFreeLocal, r};
  }
};

struct FragmentCheck {
  bool ok = true;
  std::vector<std::string> violations; // each names the offending subterm

  explicit operator bool() const { return ok; }
};

/// Grammar conformance over the given signature.
///   DFO: no local modality.
///   LocalFO(r): outer layer is =, ∨, ∧, ¬, ∃, ∀ and Loc; every Loc has
///     radius r and a DFO body with at most one free variable, the subject.
///   ExistentialLocal(r): additionally no outer ∀, outer ¬ only on equalities,
///     and no bare Pred/Rel outside a modality.
///   QuantifierFreeLocal(r): additionally no outer ∃.
FragmentCheck check_fragment(const FormulaPtr& f, const Signature& sig,
                             const Fragment& fragment);

/// Simultaneous substitution of variables on free occurrences; alpha-renames
/// binders when a substituted name would be captured. The subject of a Loc
/// is rewritten together with its body occurrences.
FormulaPtr substitute(const FormulaPtr& f,
                      const std::map<std::string, std::string>& renaming);

struct PrenexExistential {
  std::vector<std::string> vars;
  FormulaPtr matrix;
};

/// Pulls every outer existential to the front, renaming apart as needed.
/// Input must pass check_fragment for ExistentialLocal(r); the matrix passes
/// QuantifierFreeLocal(r).
PrenexExistential to_prenex_existential(const FormulaPtr& f, int radius);

/// Rewrites And into Or/Not and Forall into Not/Exists/Not, everywhere
/// (including Loc bodies).
FormulaPtr eliminate_abbreviations(const FormulaPtr& f);

} // namespace dfo
