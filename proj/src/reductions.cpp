#include "dfo/reductions.hpp"

#include <algorithm>
#include <numeric>

#include "dfo/evaluator.hpp"

namespace dfo {

std::string OmegaPredicate::name() const {
  return "U_" + std::to_string(p) + "_" + std::to_string(i) + "_" +
         std::to_string(j);
}

std::optional<OmegaPredicate> OmegaPredicate::parse(const std::string& name) {
  if (name.rfind("U_", 0) != 0) return std::nullopt;
  int parts[3];
  size_t pos = 2;
  for (int k = 0; k < 3; ++k) {
    size_t end = k < 2 ? name.find('_', pos) : name.size();
    if (end == std::string::npos || end == pos) return std::nullopt;
    const std::string digits = name.substr(pos, end - pos);
    if (digits.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    parts[k] = std::stoi(digits);
    pos = end + 1;
  }
  return OmegaPredicate{parts[0], parts[1], parts[2]};
}

std::vector<std::string> center_vars(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int p = 1; p <= n; ++p) out.push_back("x" + std::to_string(p));
  return out;
}

namespace {

void check_centers(const DataStructure& s, const CenterTuple& centers) {
  if (centers.n() == 0) throw InputError("center tuple must be nonempty");
  for (const auto& c : centers.centers) s.index_of(c);
}

// Σ must not already contain an U_p_i_j within the ranges this abstraction
// introduces.
void check_omega_collision(const DataStructure& s, int n, int dim) {
  for (const auto& [name, members] : s.predicates()) {
    auto omega = OmegaPredicate::parse(name);
    if (omega && omega->p >= 1 && omega->p <= n && omega->i >= 1 &&
        omega->i <= dim && omega->j >= 1 && omega->j <= dim)
      throw InputError("predicate name collides with the enriched alphabet: " +
                       name);
  }
}

std::map<std::string, std::vector<bool>> omega_predicates(
    const DataStructure& s, const CenterTuple& centers, int dim) {
  std::map<std::string, std::vector<bool>> preds = s.predicates();
  for (int p = 1; p <= centers.n(); ++p) {
    int center = s.index_of(centers.centers[p - 1]);
    for (int i = 1; i <= dim; ++i) {
      for (int j = 1; j <= dim; ++j) {
        std::vector<bool> members(s.size(), false);
        for (int b = 0; b < s.size(); ++b)
          members[b] = s.value(center, i) == s.value(b, j);
        preds.emplace(OmegaPredicate{p, i, j}.name(), std::move(members));
      }
    }
  }
  return preds;
}

} // namespace

Abstraction abstract_r2(const DataStructure& s, const CenterTuple& centers) {
  if (s.dim() != 2) throw InputError("abstract_r2 requires a 2-data structure");
  check_centers(s, centers);
  check_omega_collision(s, centers.n(), 2);

  std::set<Value> center_values = values_of(s, centers.centers);
  Value fresh = 0;
  for (Value v : s.all_values()) fresh = std::max(fresh, v);
  ++fresh;

  std::vector<Value> data;
  data.reserve(s.size());
  for (int b = 0; b < s.size(); ++b) {
    bool first_in = center_values.count(s.value(b, 1)) != 0;
    bool second_in = center_values.count(s.value(b, 2)) != 0;
    if (first_in && !second_in)
      data.push_back(s.value(b, 2));
    else if (!first_in && second_in)
      data.push_back(s.value(b, 1));
    else
      data.push_back(fresh++);
  }

  DataStructure out(s.universe(), 1, std::move(data),
                    omega_predicates(s, centers, 2));
  return Abstraction{std::move(out), centers};
}

Abstraction abstract_r1(const DataStructure& s, const CenterTuple& centers) {
  if (s.dim() < 1)
    throw InputError("abstract_r1 requires at least one data value");
  check_centers(s, centers);
  check_omega_collision(s, centers.n(), s.dim());
  DataStructure out(s.universe(), 0, {}, omega_predicates(s, centers, s.dim()));
  return Abstraction{std::move(out), centers};
}

namespace {

FormulaPtr omega_atom(int p, int i, int j, const std::string& var) {
  return mk_pred(OmegaPredicate{p, i, j}.name(), var);
}

// (y,j) lies in the radius-1 ball of the p-th center.
FormulaPtr ball1(int p, int j, int dim, const std::string& y) {
  std::vector<FormulaPtr> parts;
  for (int i = 1; i <= dim; ++i) parts.push_back(omega_atom(p, i, j, y));
  return mk_or_all(parts);
}

// Some field of y lies in the radius-1 ball, i.e. y is in the radius-2 ball.
FormulaPtr ball2(int p, int dim, const std::string& y) {
  std::vector<FormulaPtr> parts;
  for (int j = 1; j <= dim; ++j) parts.push_back(ball1(p, j, dim, y));
  return mk_or_all(parts);
}

FormulaPtr ball2_minus_1(int p, int j, const std::string& y) {
  return mk_and(ball2(p, 2, y), mk_not(ball1(p, j, 2, y)));
}

// Both fields in the radius-1 ball and sharing one of the p-th center's
// values.
FormulaPtr phi_r1(int p, int j, int k, const std::string& y,
                  const std::string& z) {
  std::vector<FormulaPtr> shared;
  for (int i = 1; i <= 2; ++i)
    shared.push_back(mk_and(omega_atom(p, i, j, y), omega_atom(p, i, k, z)));
  return mk_and_all({ball1(p, j, 2, y), ball1(p, k, 2, z), mk_or_all(shared)});
}

// Both fields in the second shell: equal surviving values, or both matching
// some center value.
FormulaPtr phi_r2(int p, int j, int k, int n, const std::string& y,
                  const std::string& z) {
  std::vector<FormulaPtr> shared;
  shared.push_back(mk_rel(1, 1, y, z));
  for (int pp = 1; pp <= n; ++pp)
    for (int l = 1; l <= 2; ++l)
      shared.push_back(
          mk_and(omega_atom(pp, l, j, y), omega_atom(pp, l, k, z)));
  return mk_and_all(
      {ball2_minus_1(p, j, y), ball2_minus_1(p, k, z), mk_or_all(shared)});
}

// Both fields outside the radius-2 ball: only the same slot matches itself.
// Empty (falsum, dropped by the caller) when j != k.
std::optional<FormulaPtr> phi_rgt2(int p, int j, int k, const std::string& y,
                                   const std::string& z) {
  if (j != k) return std::nullopt;
  return mk_and_all(
      {mk_not(ball2(p, 2, y)), mk_not(ball2(p, 2, z)), mk_eq(y, z)});
}

FormulaPtr psi_r1(int p, int j, int k, int dim, const std::string& y,
                  const std::string& z) {
  std::vector<FormulaPtr> shared;
  for (int i = 1; i <= dim; ++i)
    shared.push_back(mk_and(omega_atom(p, i, j, y), omega_atom(p, i, k, z)));
  return mk_and_all(
      {ball1(p, j, dim, y), ball1(p, k, dim, z), mk_or_all(shared)});
}

// Only the specific fields j and k must lie outside the radius-1 ball:
// membership is per field here, unlike the radius-2 shell where sharing any
// value pulls in every field of the element.
std::optional<FormulaPtr> psi_rgt1(int p, int j, int k, int dim,
                                   const std::string& y,
                                   const std::string& z) {
  if (j != k) return std::nullopt;
  return mk_and_all({mk_not(ball1(p, j, dim, y)),
                     mk_not(ball1(p, k, dim, z)), mk_eq(y, z)});
}

enum class Radius { Two, One };

struct Translator {
  Radius radius;
  int n = 0;
  int dim = 2; // source dimension (radius one); fixed to 2 for radius two
  const std::vector<std::string>* centers = nullptr;

  int center_index(const std::string& var) const {
    auto it = std::find(centers->begin(), centers->end(), var);
    if (it == centers->end())
      throw InputError("local modality subject is not a center variable: " +
                       var);
    return static_cast<int>(it - centers->begin()) + 1;
  }

  FormulaPtr data_atom(int p, const Formula& f) const {
    std::vector<FormulaPtr> cases;
    if (radius == Radius::Two) {
      cases.push_back(phi_r1(p, f.i, f.j, f.var, f.var2));
      cases.push_back(phi_r2(p, f.i, f.j, n, f.var, f.var2));
      if (auto tail = phi_rgt2(p, f.i, f.j, f.var, f.var2))
        cases.push_back(*tail);
    } else {
      cases.push_back(psi_r1(p, f.i, f.j, dim, f.var, f.var2));
      if (auto tail = psi_rgt1(p, f.i, f.j, dim, f.var, f.var2))
        cases.push_back(*tail);
    }
    return mk_or_all(cases);
  }

  // Inside a modality centered at position p.
  FormulaPtr inner(int p, const FormulaPtr& f) const {
    switch (f->kind) {
      case NodeKind::Pred:
        return f;
      case NodeKind::Eq:
        return f;
      case NodeKind::Rel:
        return data_atom(p, *f);
      case NodeKind::Or:
        return mk_or(inner(p, f->lhs), inner(p, f->rhs));
      case NodeKind::And:
        return mk_and(inner(p, f->lhs), inner(p, f->rhs));
      case NodeKind::Not:
        return mk_not(inner(p, f->lhs));
      case NodeKind::Exists:
        return mk_exists(f->var, inner(p, f->lhs));
      case NodeKind::Forall:
        return mk_forall(f->var, inner(p, f->lhs));
      case NodeKind::Loc:
        throw InputError("nested local modality");
    }
    throw InputError("unreachable formula kind");
  }

  FormulaPtr outer(const FormulaPtr& f) const {
    switch (f->kind) {
      case NodeKind::Eq:
        return f;
      case NodeKind::Or:
        return mk_or(outer(f->lhs), outer(f->rhs));
      case NodeKind::And:
        return mk_and(outer(f->lhs), outer(f->rhs));
      case NodeKind::Not:
        return mk_not(outer(f->lhs));
      case NodeKind::Loc:
        return inner(center_index(f->var), f->lhs);
      default:
        throw InputError("matrix is not quantifier free");
    }
  }
};

void check_matrix(const FormulaPtr& matrix,
                  const std::vector<std::string>& centers, int radius, int dim,
                  const Signature& sigma) {
  Signature sig = sigma;
  sig.dim = dim;
  auto check =
      check_fragment(matrix, sig, Fragment::quantifier_free_local(radius));
  if (!check.ok)
    throw InputError("matrix not in the quantifier-free local fragment: " +
                     check.violations.front());
  for (const auto& v : free_vars(matrix))
    if (std::find(centers.begin(), centers.end(), v) == centers.end())
      throw InputError("matrix variable is not a center variable: " + v);
}

} // namespace

FormulaPtr translate_r2(const FormulaPtr& matrix,
                        const std::vector<std::string>& centers,
                        const Signature& sigma) {
  check_matrix(matrix, centers, 2, 2, sigma);
  Translator t{Radius::Two, static_cast<int>(centers.size()), 2, &centers};
  return t.outer(matrix);
}

FormulaPtr translate_r2(const FormulaPtr& matrix, int n, const Signature& sigma) {
  auto names = center_vars(n);
  return translate_r2(matrix, names, sigma);
}

FormulaPtr translate_r1(const FormulaPtr& matrix,
                        const std::vector<std::string>& centers, int dim,
                        const Signature& sigma) {
  if (dim < 1) throw InputError("translate_r1 requires at least one value");
  check_matrix(matrix, centers, 1, dim, sigma);
  Translator t{Radius::One, static_cast<int>(centers.size()), dim, &centers};
  return t.outer(matrix);
}

FormulaPtr translate_r1(const FormulaPtr& matrix, int n, int dim,
                        const Signature& sigma) {
  auto names = center_vars(n);
  return translate_r1(matrix, names, dim, sigma);
}

namespace {

FormulaPtr transitivity(int n, int dim) {
  std::vector<FormulaPtr> clauses;
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      for (int i = 1; i <= dim; ++i)
        for (int j = 1; j <= dim; ++j)
          for (int k = 1; k <= dim; ++k)
            for (int l = 1; l <= dim; ++l)
              clauses.push_back(mk_implies(
                  mk_and_all({omega_atom(p, i, j, "y"), omega_atom(p, i, l, "z"),
                              omega_atom(q, k, j, "y")}),
                  omega_atom(q, k, l, "z")));
  return mk_forall("y", mk_forall("z", mk_and_all(clauses)));
}

FormulaPtr reflexivity(int n, int dim) {
  std::vector<FormulaPtr> parts;
  auto names = center_vars(n);
  for (int p = 1; p <= n; ++p)
    for (int i = 1; i <= dim; ++i)
      parts.push_back(omega_atom(p, i, i, names[p - 1]));
  return mk_and_all(parts);
}

FormulaPtr uniqueness(int n) {
  std::vector<FormulaPtr> covered, uncovered;
  for (int j = 1; j <= 2; ++j) {
    std::vector<FormulaPtr> any;
    for (int p = 1; p <= n; ++p)
      for (int i = 1; i <= 2; ++i) any.push_back(omega_atom(p, i, j, "y"));
    covered.push_back(mk_or_all(any));
    for (int p = 1; p <= n; ++p)
      for (int i = 1; i <= 2; ++i)
        uncovered.push_back(mk_not(omega_atom(p, i, j, "y")));
  }
  FormulaPtr fresh_valued = mk_or(mk_and_all(covered), mk_and_all(uncovered));
  FormulaPtr unique = mk_forall(
      "z", mk_implies(mk_rel(1, 1, "y", "z"), mk_eq("y", "z")));
  return mk_forall("y", mk_implies(fresh_valued, unique));
}

} // namespace

FormulaPtr build_phi_wf(int n) {
  if (n < 1) throw InputError("center count must be positive");
  return mk_and_all({transitivity(n, 2), reflexivity(n, 2), uniqueness(n)});
}

FormulaPtr build_psi_wf(int n, int dim) {
  if (n < 1) throw InputError("center count must be positive");
  if (dim < 1) throw InputError("dimension must be positive");
  return mk_and(transitivity(n, dim), reflexivity(n, dim));
}

namespace {

void check_omega_present(const DataStructure& b, int n, int dim) {
  for (int p = 1; p <= n; ++p)
    for (int i = 1; i <= dim; ++i)
      for (int j = 1; j <= dim; ++j) {
        std::string name = OmegaPredicate{p, i, j}.name();
        if (!b.has_predicate(name))
          throw InputError("missing enriched predicate: " + name);
      }
}

Interpretation bind_centers(const CenterTuple& centers) {
  Interpretation interp;
  auto names = center_vars(centers.n());
  for (int p = 0; p < centers.n(); ++p)
    interp = interp.extend(names[p], centers.centers[p]);
  return interp;
}

// Union-find over the (p,i) center-field slots.
struct SlotClasses {
  int dim;
  std::vector<int> parent;

  SlotClasses(const DataStructure& b, const CenterTuple& centers, int dim_)
      : dim(dim_), parent(static_cast<size_t>(centers.n()) * dim_) {
    std::iota(parent.begin(), parent.end(), 0);
    for (int p = 1; p <= centers.n(); ++p)
      for (int q = 1; q <= centers.n(); ++q) {
        int target = b.index_of(centers.centers[q - 1]);
        for (int i = 1; i <= dim; ++i)
          for (int j = 1; j <= dim; ++j)
            if (b.in_predicate(OmegaPredicate{p, i, j}.name(), target))
              unite(slot(p, i), slot(q, j));
      }
  }

  int slot(int p, int i) const { return (p - 1) * dim + (i - 1); }

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

bool is_well_formed(const DataStructure& b, const CenterTuple& centers) {
  if (b.dim() != 1)
    throw InputError("well-formedness is defined on 1-data structures");
  check_centers(b, centers);
  check_omega_present(b, centers.n(), 2);
  return evaluate(b, build_phi_wf(centers.n()), bind_centers(centers));
}

bool is_well_formed_r1(const DataStructure& b, const CenterTuple& centers,
                       int dim) {
  if (b.dim() != 0)
    throw InputError("radius-1 well-formedness is defined on 0-data structures");
  check_centers(b, centers);
  check_omega_present(b, centers.n(), dim);
  return evaluate(b, build_psi_wf(centers.n(), dim), bind_centers(centers));
}

namespace {

// Shared by both reconstructions: assign one fresh value per slot class,
// starting after every value already present.
struct ClassValues {
  SlotClasses classes;
  std::vector<Value> value_of_slot;
  Value next;

  ClassValues(const DataStructure& b, const CenterTuple& centers, int dim)
      : classes(b, centers, dim), value_of_slot(static_cast<size_t>(centers.n()) * dim, -1) {
    Value max_present = 0;
    for (Value v : b.all_values()) max_present = std::max(max_present, v);
    next = max_present + 1;
    std::vector<Value> root_value(static_cast<size_t>(centers.n()) * dim, -1);
    for (int s = 0; s < static_cast<int>(value_of_slot.size()); ++s) {
      int root = classes.find(s);
      if (root_value[root] < 0) root_value[root] = next++;
      value_of_slot[s] = root_value[root];
    }
  }

  Value get(int p, int i) { return value_of_slot[classes.slot(p, i)]; }
};

std::map<std::string, std::vector<bool>> strip_omega(const DataStructure& b,
                                                     int n, int dim) {
  std::map<std::string, std::vector<bool>> preds;
  for (const auto& [name, members] : b.predicates()) {
    auto omega = OmegaPredicate::parse(name);
    bool introduced = omega && omega->p >= 1 && omega->p <= n &&
                      omega->i >= 1 && omega->i <= dim && omega->j >= 1 &&
                      omega->j <= dim;
    if (!introduced) preds.emplace(name, members);
  }
  return preds;
}

} // namespace

DataStructure reconstruct_r2(const DataStructure& b, const CenterTuple& centers) {
  if (!is_well_formed(b, centers))
    throw InputError("reconstruct_r2 requires a well-formed input");
  int n = centers.n();
  ClassValues classes(b, centers, 2);
  Value d_out = classes.next;

  std::vector<Value> data;
  data.reserve(static_cast<size_t>(b.size()) * 2);
  for (int e = 0; e < b.size(); ++e) {
    for (int j = 1; j <= 2; ++j) {
      std::optional<Value> from_class;
      bool other_covered = false;
      for (int p = 1; p <= n && !from_class; ++p)
        for (int i = 1; i <= 2; ++i)
          if (b.in_predicate(OmegaPredicate{p, i, j}.name(), e)) {
            from_class = classes.get(p, i);
            break;
          }
      for (int p = 1; p <= n && !other_covered; ++p)
        for (int i = 1; i <= 2; ++i)
          if (b.in_predicate(OmegaPredicate{p, i, 3 - j}.name(), e)) {
            other_covered = true;
            break;
          }
      if (from_class)
        data.push_back(*from_class);
      else if (other_covered)
        data.push_back(b.value(e, 1));
      else
        data.push_back(d_out);
    }
  }
  return DataStructure(b.universe(), 2, std::move(data), strip_omega(b, n, 2));
}

DataStructure reconstruct_r1(const DataStructure& b, const CenterTuple& centers,
                             int dim) {
  if (!is_well_formed_r1(b, centers, dim))
    throw InputError("reconstruct_r1 requires a well-formed input");
  int n = centers.n();
  ClassValues classes(b, centers, dim);
  Value d_out = classes.next;

  std::vector<Value> data;
  data.reserve(static_cast<size_t>(b.size()) * dim);
  for (int e = 0; e < b.size(); ++e) {
    for (int j = 1; j <= dim; ++j) {
      std::optional<Value> from_class;
      for (int p = 1; p <= n && !from_class; ++p)
        for (int i = 1; i <= dim; ++i)
          if (b.in_predicate(OmegaPredicate{p, i, j}.name(), e)) {
            from_class = classes.get(p, i);
            break;
          }
      data.push_back(from_class ? *from_class : d_out);
    }
  }
  return DataStructure(b.universe(), dim, std::move(data),
                       strip_omega(b, n, dim));
}

namespace {

FormulaPtr reduce_common(const FormulaPtr& sentence, int radius, int dim) {
  if (!free_vars(sentence).empty())
    throw InputError("reduction requires a sentence");

  PrenexExistential prenex = to_prenex_existential(sentence, radius);
  int n = static_cast<int>(prenex.vars.size());
  if (n == 0) throw InputError("reduction requires at least one quantifier");

  auto names = center_vars(n);
  std::map<std::string, std::string> renaming;
  for (int k = 0; k < n; ++k) renaming[prenex.vars[k]] = names[k];
  FormulaPtr matrix = substitute(prenex.matrix, renaming);

  Signature sigma;
  struct Collect {
    Signature* sig;
    void walk(const FormulaPtr& g) {
      if (!g) return;
      if (g->kind == NodeKind::Pred) sig->predicates.insert(g->name);
      walk(g->lhs);
      walk(g->rhs);
    }
  };
  Collect{&sigma}.walk(sentence);
  for (const auto& name : sigma.predicates) {
    auto omega = OmegaPredicate::parse(name);
    if (omega && omega->p >= 1 && omega->p <= n && omega->i >= 1 &&
        omega->i <= dim && omega->j >= 1 && omega->j <= dim)
      throw InputError("predicate name collides with the enriched alphabet: " +
                       name);
  }

  FormulaPtr translated = radius == 2
                              ? translate_r2(matrix, names, sigma)
                              : translate_r1(matrix, names, dim, sigma);
  FormulaPtr wf =
      radius == 2 ? build_phi_wf(n) : build_psi_wf(n, dim);
  FormulaPtr body = mk_and(translated, wf);
  for (int k = n - 1; k >= 0; --k) body = mk_exists(names[k], body);
  return body;
}

} // namespace

FormulaPtr reduce_r2d2(const FormulaPtr& sentence) {
  return reduce_common(sentence, 2, 2);
}

FormulaPtr reduce_r1(const FormulaPtr& sentence, int dim) {
  if (dim < 1) throw InputError("reduce_r1 requires at least one value");
  return reduce_common(sentence, 1, dim);
}

DataStructure add_ge(const DataStructure& s) {
  if (s.dim() != 2) throw InputError("add_ge requires a 2-data structure");
  if (s.has_predicate("ge"))
    throw InputError("predicate ge is already in use");

  std::set<Value> vals = s.all_values();
  std::vector<std::string> universe = s.universe();
  std::vector<Value> data;
  data.reserve((universe.size() + vals.size() * vals.size()) * 2);
  for (int e = 0; e < s.size(); ++e) {
    data.push_back(s.value(e, 1));
    data.push_back(s.value(e, 2));
  }
  std::vector<std::string> pair_names;
  for (Value d1 : vals) {
    for (Value d2 : vals) {
      std::string name =
          "ge_" + std::to_string(d1) + "_" + std::to_string(d2);
      while (s.has_elem(name) ||
             std::find(pair_names.begin(), pair_names.end(), name) !=
                 pair_names.end())
        name += "_";
      pair_names.push_back(name);
      universe.push_back(name);
      data.push_back(d1);
      data.push_back(d2);
    }
  }

  std::map<std::string, std::vector<bool>> preds;
  for (const auto& [name, members] : s.predicates()) {
    std::vector<bool> extended = members;
    extended.resize(universe.size(), false);
    preds.emplace(name, std::move(extended));
  }
  std::vector<bool> ge(universe.size(), false);
  for (size_t k = s.universe().size(); k < universe.size(); ++k) ge[k] = true;
  preds.emplace("ge", std::move(ge));
  return DataStructure(std::move(universe), 2, std::move(data),
                       std::move(preds));
}

DataStructure minus_ge(const DataStructure& s) {
  if (s.dim() != 2) throw InputError("minus_ge requires a 2-data structure");
  if (!s.has_predicate("ge"))
    throw InputError("minus_ge requires the ge predicate");

  std::vector<int> kept;
  for (int e = 0; e < s.size(); ++e)
    if (!s.in_predicate("ge", e)) kept.push_back(e);
  if (kept.empty())
    throw InputError("minus_ge would produce an empty universe");

  std::vector<std::string> universe;
  std::vector<Value> data;
  for (int e : kept) {
    universe.push_back(s.elem_name(e));
    data.push_back(s.value(e, 1));
    data.push_back(s.value(e, 2));
  }
  std::map<std::string, std::vector<bool>> preds;
  for (const auto& [name, members] : s.predicates()) {
    if (name == "ge") continue;
    std::vector<bool> restricted;
    restricted.reserve(kept.size());
    for (int e : kept) restricted.push_back(members[e]);
    preds.emplace(name, std::move(restricted));
  }
  return DataStructure(std::move(universe), 2, std::move(data),
                       std::move(preds));
}

FormulaPtr relativize(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Pred:
      if (f->name == "ge")
        throw InputError("relativize requires ge outside the signature");
      return f;
    case NodeKind::Rel:
    case NodeKind::Eq:
      return f;
    case NodeKind::Or:
      return mk_or(relativize(f->lhs), relativize(f->rhs));
    case NodeKind::And:
      return mk_and(relativize(f->lhs), relativize(f->rhs));
    case NodeKind::Not:
      return mk_not(relativize(f->lhs));
    case NodeKind::Exists:
      return mk_exists(
          f->var, mk_and(mk_not(mk_pred("ge", f->var)), relativize(f->lhs)));
    case NodeKind::Forall:
      // The dual of the existential clause.
      return mk_forall(f->var,
                       mk_or(mk_pred("ge", f->var), relativize(f->lhs)));
    case NodeKind::Loc:
      throw InputError("relativize is defined on dFO formulas");
  }
  throw InputError("unreachable formula kind");
}

FormulaPtr embed_r3(const FormulaPtr& sentence) {
  if (!free_vars(sentence).empty())
    throw InputError("embed_r3 requires a sentence");
  return mk_exists("x", mk_loc(3, "x", relativize(sentence)));
}

FormulaPtr embed_pad(const FormulaPtr& sentence, int k, int target_radius) {
  if (target_radius != 2 || (k != 1 && k != 2))
    throw InputError("unsupported embedding: need k in {1,2} and radius 2");
  if (!free_vars(sentence).empty())
    throw InputError("embed_pad requires a sentence");
  Signature sig;
  sig.dim = k;
  struct Collect {
    Signature* sig;
    void walk(const FormulaPtr& g) {
      if (!g) return;
      if (g->kind == NodeKind::Pred) sig->predicates.insert(g->name);
      walk(g->lhs);
      walk(g->rhs);
    }
  };
  Collect{&sig}.walk(sentence);
  auto check = check_fragment(sentence, sig, Fragment::dfo());
  if (!check.ok)
    throw InputError("embed_pad requires a dFO sentence over k values: " +
                     check.violations.front());
  return mk_exists("x", mk_loc(2, "x", sentence));
}

} // namespace dfo
