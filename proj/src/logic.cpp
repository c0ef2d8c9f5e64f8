#include "dfo/logic.hpp"

#include <algorithm>

namespace dfo {

// Defined in parser.cpp; used here for diagnostics only.
std::string serialize_formula(const FormulaPtr& f);

namespace {

FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

} // namespace

FormulaPtr mk_pred(std::string name, std::string x) {
  Formula f;
  f.kind = NodeKind::Pred;
  f.name = std::move(name);
  f.var = std::move(x);
  return node(std::move(f));
}

FormulaPtr mk_rel(int i, int j, std::string x, std::string y) {
  Formula f;
  f.kind = NodeKind::Rel;
  f.i = i;
  f.j = j;
  f.var = std::move(x);
  f.var2 = std::move(y);
  return node(std::move(f));
}

FormulaPtr mk_eq(std::string x, std::string y) {
  Formula f;
  f.kind = NodeKind::Eq;
  f.var = std::move(x);
  f.var2 = std::move(y);
  return node(std::move(f));
}

FormulaPtr mk_neq(std::string x, std::string y) {
  return mk_not(mk_eq(std::move(x), std::move(y)));
}

FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = NodeKind::Or;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return node(std::move(f));
}

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = NodeKind::And;
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return node(std::move(f));
}

FormulaPtr mk_not(FormulaPtr a) {
  Formula f;
  f.kind = NodeKind::Not;
  f.lhs = std::move(a);
  return node(std::move(f));
}

FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
  return mk_or(mk_not(std::move(a)), std::move(b));
}

FormulaPtr mk_exists(std::string x, FormulaPtr body) {
  Formula f;
  f.kind = NodeKind::Exists;
  f.var = std::move(x);
  f.lhs = std::move(body);
  return node(std::move(f));
}

FormulaPtr mk_forall(std::string x, FormulaPtr body) {
  Formula f;
  f.kind = NodeKind::Forall;
  f.var = std::move(x);
  f.lhs = std::move(body);
  return node(std::move(f));
}

FormulaPtr mk_loc(int radius, std::string x, FormulaPtr body) {
  Formula f;
  f.kind = NodeKind::Loc;
  f.radius = radius;
  f.var = std::move(x);
  f.lhs = std::move(body);
  return node(std::move(f));
}

FormulaPtr mk_or_all(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw InputError("mk_or_all: empty disjunction");
  FormulaPtr acc = parts[0];
  for (size_t k = 1; k < parts.size(); ++k) acc = mk_or(acc, parts[k]);
  return acc;
}

FormulaPtr mk_and_all(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) throw InputError("mk_and_all: empty conjunction");
  FormulaPtr acc = parts[0];
  for (size_t k = 1; k < parts.size(); ++k) acc = mk_and(acc, parts[k]);
  return acc;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->i != b->i ||
      a->j != b->j || a->radius != b->radius || a->var != b->var ||
      a->var2 != b->var2)
    return false;
  return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
}

int node_count(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + node_count(f->lhs) + node_count(f->rhs);
}

namespace {

void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (f->kind) {
    case NodeKind::Pred:
      if (!bound.count(f->var)) out.insert(f->var);
      break;
    case NodeKind::Rel:
    case NodeKind::Eq:
      if (!bound.count(f->var)) out.insert(f->var);
      if (!bound.count(f->var2)) out.insert(f->var2);
      break;
    case NodeKind::Or:
    case NodeKind::And:
      collect_free(f->lhs, bound, out);
      collect_free(f->rhs, bound, out);
      break;
    case NodeKind::Not:
      collect_free(f->lhs, bound, out);
      break;
    case NodeKind::Exists:
    case NodeKind::Forall: {
      bool was = bound.count(f->var) != 0;
      bound.insert(f->var);
      collect_free(f->lhs, bound, out);
      if (!was) bound.erase(f->var);
      break;
    }
    case NodeKind::Loc:
      // The subject is a free occurrence; the body is read under the same
      // interpretation, so its variables (including the subject name) count.
      if (!bound.count(f->var)) out.insert(f->var);
      collect_free(f->lhs, bound, out);
      break;
  }
}

} // namespace

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

namespace {

void collect_all(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f) return;
  if (!f->var.empty()) out.insert(f->var);
  if (!f->var2.empty()) out.insert(f->var2);
  collect_all(f->lhs, out);
  collect_all(f->rhs, out);
}

} // namespace

std::set<std::string> all_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  collect_all(f, out);
  return out;
}

Signature signature_of(const DataStructure& s) {
  Signature sig;
  sig.dim = s.dim();
  for (const auto& [name, members] : s.predicates()) sig.predicates.insert(name);
  return sig;
}

namespace {

struct FragmentChecker {
  const Signature& sig;
  const Fragment& frag;
  FragmentCheck result;

  void violation(const std::string& why, const FormulaPtr& where) {
    result.ok = false;
    result.violations.push_back(why + ": " + serialize_formula(where));
  }

  void check_signature_atom(const FormulaPtr& f) {
    if (f->kind == NodeKind::Pred && !sig.predicates.count(f->name))
      violation("predicate not in signature", f);
    if (f->kind == NodeKind::Rel &&
        (f->i < 1 || f->i > sig.dim || f->j < 1 || f->j > sig.dim))
      violation("relation field index out of range", f);
  }

  // The body of a local modality: plain DFO over the signature.
  void check_dfo(const FormulaPtr& f) {
    switch (f->kind) {
      case NodeKind::Pred:
      case NodeKind::Rel:
        check_signature_atom(f);
        break;
      case NodeKind::Eq:
        break;
      case NodeKind::Or:
      case NodeKind::And:
        check_dfo(f->lhs);
        check_dfo(f->rhs);
        break;
      case NodeKind::Not:
        check_dfo(f->lhs);
        break;
      case NodeKind::Exists:
      case NodeKind::Forall:
        check_dfo(f->lhs);
        break;
      case NodeKind::Loc:
        violation("local modality not allowed here", f);
        break;
    }
  }

  void check_outer(const FormulaPtr& f) {
    bool existential = frag.kind == FragmentKind::ExistentialLocal ||
                       frag.kind == FragmentKind::QuantifierFreeLocal;
    switch (f->kind) {
      case NodeKind::Pred:
      case NodeKind::Rel:
        if (frag.kind != FragmentKind::DFO)
          violation("atomic data formula outside a local modality", f);
        check_signature_atom(f);
        break;
      case NodeKind::Eq:
        break;
      case NodeKind::Or:
      case NodeKind::And:
        check_outer(f->lhs);
        check_outer(f->rhs);
        break;
      case NodeKind::Not:
        if (existential && f->lhs->kind != NodeKind::Eq) {
          violation("negation restricted to equalities here", f);
          break;
        }
        check_outer(f->lhs);
        break;
      case NodeKind::Exists:
        if (frag.kind == FragmentKind::QuantifierFreeLocal) {
          violation("quantifier not allowed in the quantifier-free fragment",
                    f);
          break;
        }
        check_outer(f->lhs);
        break;
      case NodeKind::Forall:
        if (existential) {
          violation("universal quantifier not allowed here", f);
          break;
        }
        check_outer(f->lhs);
        break;
      case NodeKind::Loc: {
        if (frag.kind == FragmentKind::DFO) {
          violation("local modality not allowed in dFO", f);
          break;
        }
        if (f->radius != frag.radius)
          violation("local modality radius differs from the fragment radius",
                    f);
        auto fv = free_vars(f->lhs);
        fv.erase(f->var);
        if (!fv.empty())
          violation("local modality body has a free variable other than its "
                    "subject",
                    f);
        check_dfo(f->lhs);
        break;
      }
    }
  }
};

} // namespace

FragmentCheck check_fragment(const FormulaPtr& f, const Signature& sig,
                             const Fragment& fragment) {
  FragmentChecker checker{sig, fragment, {}};
  if (fragment.kind == FragmentKind::DFO)
    checker.check_dfo(f);
  else
    checker.check_outer(f);
  return checker.result;
}

namespace {

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  if (!used.count(base)) {
    used.insert(base);
    return base;
  }
  for (int k = 2;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!used.count(candidate)) {
      used.insert(candidate);
      return candidate;
    }
  }
}

std::string apply(const std::map<std::string, std::string>& renaming,
                  const std::string& v) {
  auto it = renaming.find(v);
  return it == renaming.end() ? v : it->second;
}

FormulaPtr subst(const FormulaPtr& f,
                 const std::map<std::string, std::string>& renaming) {
  if (renaming.empty()) return f;
  switch (f->kind) {
    case NodeKind::Pred:
      return mk_pred(f->name, apply(renaming, f->var));
    case NodeKind::Rel:
      return mk_rel(f->i, f->j, apply(renaming, f->var),
                    apply(renaming, f->var2));
    case NodeKind::Eq:
      return mk_eq(apply(renaming, f->var), apply(renaming, f->var2));
    case NodeKind::Or:
      return mk_or(subst(f->lhs, renaming), subst(f->rhs, renaming));
    case NodeKind::And:
      return mk_and(subst(f->lhs, renaming), subst(f->rhs, renaming));
    case NodeKind::Not:
      return mk_not(subst(f->lhs, renaming));
    case NodeKind::Exists:
    case NodeKind::Forall: {
      auto inner = renaming;
      inner.erase(f->var);
      // Rename the binder when a substituted value would be captured.
      auto fv = free_vars(f->lhs);
      bool capture = false;
      for (const auto& [from, to] : inner)
        if (to == f->var && fv.count(from)) capture = true;
      std::string binder = f->var;
      FormulaPtr body = f->lhs;
      if (capture) {
        std::set<std::string> used = all_vars(f);
        for (const auto& [from, to] : inner) {
          used.insert(from);
          used.insert(to);
        }
        binder = fresh_name(f->var + "_", used);
        body = subst(body, {{f->var, binder}});
      }
      body = subst(body, inner);
      return f->kind == NodeKind::Exists ? mk_exists(binder, body)
                                         : mk_forall(binder, body);
    }
    case NodeKind::Loc:
      // Not a binder: the body is read under the same interpretation, so the
      // subject occurrences inside are rewritten along with the subject.
      return mk_loc(f->radius, apply(renaming, f->var), subst(f->lhs, renaming));
  }
  throw InputError("unreachable formula kind");
}

} // namespace

FormulaPtr substitute(const FormulaPtr& f,
                      const std::map<std::string, std::string>& renaming) {
  return subst(f, renaming);
}

namespace {

struct PrenexState {
  std::set<std::string> used;
  std::set<std::string> avoid; // free vars of the whole formula
  std::vector<std::string> vars;

  FormulaPtr pull(const FormulaPtr& f) {
    switch (f->kind) {
      case NodeKind::Exists: {
        std::string v = f->var;
        FormulaPtr body = f->lhs;
        bool taken =
            std::find(vars.begin(), vars.end(), v) != vars.end() ||
            avoid.count(v);
        if (taken) {
          std::string renamed = fresh_name(v, used);
          body = substitute(body, {{v, renamed}});
          v = renamed;
        }
        vars.push_back(v);
        return pull(body);
      }
      case NodeKind::Or: {
        FormulaPtr left = pull(f->lhs); // collect left-to-right
        return mk_or(left, pull(f->rhs));
      }
      case NodeKind::And: {
        FormulaPtr left = pull(f->lhs);
        return mk_and(left, pull(f->rhs));
      }
      default:
        return f;
    }
  }
};

} // namespace

// Signature containing exactly what the formula itself mentions, so the
// prenex gate checks grammar shape without requiring a caller signature.
static Signature mentioned_signature(const FormulaPtr& f) {
  Signature sig;
  struct Collect {
    Signature* sig;
    void walk(const FormulaPtr& g) {
      if (!g) return;
      if (g->kind == NodeKind::Pred) sig->predicates.insert(g->name);
      if (g->kind == NodeKind::Rel) sig->dim = std::max({sig->dim, g->i, g->j});
      walk(g->lhs);
      walk(g->rhs);
    }
  };
  Collect{&sig}.walk(f);
  return sig;
}

PrenexExistential to_prenex_existential(const FormulaPtr& f, int radius) {
  // The fragment gate guarantees that no quantifier hides under a negation,
  // so pulling existentials out of ∨/∧ is sound once bound variables are
  // renamed apart.
  auto check = check_fragment(f, mentioned_signature(f),
                              Fragment::existential_local(radius));
  if (!check.ok)
    throw InputError("not in the existential local fragment: " +
                     check.violations.front());

  PrenexState state;
  state.used = all_vars(f);
  state.avoid = free_vars(f);
  FormulaPtr matrix = state.pull(f);
  return PrenexExistential{std::move(state.vars), std::move(matrix)};
}

FormulaPtr eliminate_abbreviations(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Pred:
    case NodeKind::Rel:
    case NodeKind::Eq:
      return f;
    case NodeKind::Or:
      return mk_or(eliminate_abbreviations(f->lhs),
                   eliminate_abbreviations(f->rhs));
    case NodeKind::And:
      return mk_not(mk_or(mk_not(eliminate_abbreviations(f->lhs)),
                          mk_not(eliminate_abbreviations(f->rhs))));
    case NodeKind::Not:
      return mk_not(eliminate_abbreviations(f->lhs));
    case NodeKind::Exists:
      return mk_exists(f->var, eliminate_abbreviations(f->lhs));
    case NodeKind::Forall:
      return mk_not(
          mk_exists(f->var, mk_not(eliminate_abbreviations(f->lhs))));
    case NodeKind::Loc:
      return mk_loc(f->radius, f->var, eliminate_abbreviations(f->lhs));
  }
  throw InputError("unreachable formula kind");
}

} // namespace dfo
