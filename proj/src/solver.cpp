#include "dfo/solver.hpp"

#include <algorithm>
#include <chrono>

#include "dfo/evaluator.hpp"
#include "dfo/reductions.hpp"

namespace dfo {

namespace {

std::vector<std::string> default_universe(int size) {
  std::vector<std::string> out;
  out.reserve(size);
  for (int e = 1; e <= size; ++e) out.push_back("e" + std::to_string(e));
  return out;
}

Signature mentioned_signature(const FormulaPtr& f) {
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

std::optional<int> loc_radius(const FormulaPtr& f) {
  if (!f) return std::nullopt;
  if (f->kind == NodeKind::Loc) return f->radius;
  if (auto r = loc_radius(f->lhs)) return r;
  return loc_radius(f->rhs);
}

} // namespace

StructureEnumerator::StructureEnumerator(std::vector<std::string> predicates,
                                         int dim, int size)
    : preds_(std::move(predicates)),
      dim_(dim),
      size_(size),
      rgs_(static_cast<size_t>(dim) * size, 0),
      pred_bits_(preds_.size() * static_cast<size_t>(size), false) {
  if (size_ < 1) throw InputError("enumeration size must be positive");
  if (dim_ < 0) throw InputError("dimension must be nonnegative");
  std::sort(preds_.begin(), preds_.end());
  std::map<std::string, std::vector<bool>> pred_map;
  for (const auto& p : preds_)
    pred_map.emplace(p, std::vector<bool>(size_, false));
  current_ = DataStructure(default_universe(size_), dim_,
                           std::vector<Value>(rgs_.size(), 1), pred_map);
  load();
}

bool StructureEnumerator::advance_predicates() {
  // Binary odometer over the flattened membership bits.
  for (size_t k = pred_bits_.size(); k-- > 0;) {
    if (!pred_bits_[k]) {
      pred_bits_[k] = true;
      return true;
    }
    pred_bits_[k] = false;
  }
  return false;
}

bool StructureEnumerator::advance_values() {
  // Lexicographically next restricted-growth string: grow the rightmost slot
  // that may grow, reset the suffix.
  int m = static_cast<int>(rgs_.size());
  for (int t = m - 1; t >= 1; --t) {
    int max_prefix = 0;
    for (int u = 0; u < t; ++u) max_prefix = std::max(max_prefix, rgs_[u]);
    if (rgs_[t] <= max_prefix) {
      ++rgs_[t];
      for (int u = t + 1; u < m; ++u) rgs_[u] = 0;
      return true;
    }
  }
  return false;
}

void StructureEnumerator::load() {
  for (size_t slot = 0; slot < rgs_.size(); ++slot)
    current_.set_value(static_cast<int>(slot) / dim_,
                       static_cast<int>(slot) % dim_ + 1, rgs_[slot] + 1);
  for (size_t p = 0; p < preds_.size(); ++p)
    for (int e = 0; e < size_; ++e)
      current_.set_predicate(preds_[p], e,
                             pred_bits_[p * static_cast<size_t>(size_) + e]);
}

const DataStructure* StructureEnumerator::next() {
  if (done_) return nullptr;
  if (first_) {
    first_ = false;
    return &current_;
  }
  if (!advance_predicates() && !advance_values()) {
    done_ = true;
    return nullptr;
  }
  load();
  return &current_;
}

SolveResult bounded_sat(const FormulaPtr& sentence, const Signature& sigma,
                        int dim, int max_size) {
  if (max_size < 1) throw InputError("bound must be positive");
  if (!free_vars(sentence).empty())
    throw InputError("bounded_sat requires a sentence");
  Signature sig = sigma;
  sig.dim = dim;
  auto radius = loc_radius(sentence);
  auto check = check_fragment(
      sentence, sig,
      radius ? Fragment::local_fo(*radius) : Fragment::dfo());
  if (!check.ok)
    throw InputError("sentence outside dFO/local FO: " +
                     check.violations.front());

  auto start = std::chrono::steady_clock::now();
  SolveResult result;
  result.bound = max_size;
  std::vector<std::string> preds(sig.predicates.begin(), sig.predicates.end());
  Interpretation empty;
  for (int size = 1; size <= max_size; ++size) {
    StructureEnumerator stream(preds, dim, size);
    while (const DataStructure* candidate = stream.next()) {
      ++result.stats.structures_checked;
      if (evaluate(*candidate, sentence, empty)) {
        result.verdict = Verdict::Sat;
        result.witness = *candidate;
        result.bound = size;
        result.stats.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        return result;
      }
    }
  }
  result.verdict = Verdict::UnsatUpToBound;
  result.stats.seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  return result;
}

namespace {

// Splits `exists x1..xn. body` produced by the reductions.
std::pair<std::vector<std::string>, FormulaPtr> strip_prenex(
    const FormulaPtr& f) {
  std::vector<std::string> vars;
  FormulaPtr body = f;
  while (body->kind == NodeKind::Exists) {
    vars.push_back(body->var);
    body = body->lhs;
  }
  return {std::move(vars), std::move(body)};
}

// Finds elements for the prenex variables that satisfy the matrix in the
// witness; guaranteed to exist when the witness satisfies the sentence.
std::optional<CenterTuple> recover_centers(const DataStructure& witness,
                                           const std::vector<std::string>& vars,
                                           const FormulaPtr& body) {
  int n = static_cast<int>(vars.size());
  std::vector<int> pick(n, 0);
  while (true) {
    Interpretation interp;
    for (int k = 0; k < n; ++k)
      interp = interp.extend(vars[k], witness.elem_name(pick[k]));
    if (evaluate(witness, body, interp)) {
      std::vector<std::string> centers;
      for (int k = 0; k < n; ++k) centers.push_back(witness.elem_name(pick[k]));
      return CenterTuple(centers);
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == witness.size() - 1) pick[k--] = 0;
    if (k < 0) return std::nullopt;
    ++pick[k];
  }
}

} // namespace

SolveResult solve_existential_local(const FormulaPtr& sentence, int dim,
                                    SolveStrategy strategy, int max_size) {
  Signature sig = mentioned_signature(sentence);
  if (sig.dim > dim)
    throw InputError("formula mentions field " + std::to_string(sig.dim) +
                     " beyond dimension " + std::to_string(dim));
  sig.dim = dim;
  int radius = loc_radius(sentence).value_or(1);
  auto check =
      check_fragment(sentence, sig, Fragment::existential_local(radius));
  if (!check.ok)
    throw InputError("sentence outside the existential local fragment: " +
                     check.violations.front());

  if (strategy == SolveStrategy::Direct)
    return bounded_sat(sentence, sig, dim, max_size);

  if (!(radius == 1 || (radius == 2 && dim == 2)))
    throw InputError(
        "via_reduction supports radius 1 (any dimension) or radius 2 with "
        "two values; got radius " +
        std::to_string(radius) + " with " + std::to_string(dim) + " values");

  FormulaPtr reduced =
      radius == 2 ? reduce_r2d2(sentence) : reduce_r1(sentence, dim);
  int target_dim = radius == 2 ? 1 : 0;
  SolveResult target =
      bounded_sat(reduced, mentioned_signature(reduced), target_dim, max_size);
  if (target.verdict == Verdict::UnsatUpToBound) return target;

  auto [vars, body] = strip_prenex(reduced);
  auto centers = recover_centers(*target.witness, vars, body);
  if (!centers)
    throw InputError("internal: no center assignment in the target witness");
  DataStructure model = radius == 2
                            ? reconstruct_r2(*target.witness, *centers)
                            : reconstruct_r1(*target.witness, *centers, dim);
  if (!evaluate_sentence(model, sentence))
    throw InputError("internal: reconstructed witness fails the sentence");
  SolveResult result = target;
  result.witness = std::move(model);
  return result;
}

// ---- random generation -----------------------------------------------------

namespace {

std::vector<std::string> pred_names(int count) {
  std::vector<std::string> out;
  for (int k = 1; k <= count; ++k) out.push_back("p" + std::to_string(k));
  return out;
}

struct FormulaGen {
  Rng& rng;
  const GenParams& params;
  int counter = 0;

  std::string fresh_var() { return "v" + std::to_string(++counter); }

  FormulaPtr atom(const std::vector<std::string>& scope) {
    int which = rng.below(params.pred_count > 0 ? 3 : 2);
    const std::string& x = scope[rng.below(static_cast<int>(scope.size()))];
    const std::string& y = scope[rng.below(static_cast<int>(scope.size()))];
    switch (which) {
      case 0:
        return mk_eq(x, y);
      case 1:
        if (params.dim >= 1)
          return mk_rel(rng.between(1, params.dim), rng.between(1, params.dim),
                        x, y);
        return mk_eq(x, y);
      default:
        return mk_pred("p" + std::to_string(rng.between(1, params.pred_count)),
                       x);
    }
  }

  FormulaPtr dfo(int depth, std::vector<std::string>& scope) {
    if (scope.empty()) {
      std::string v = fresh_var();
      scope.push_back(v);
      FormulaPtr body = dfo(depth > 0 ? depth - 1 : 0, scope);
      scope.pop_back();
      return rng.percent(70) ? mk_exists(v, body) : mk_forall(v, body);
    }
    if (depth <= 0) return atom(scope);
    switch (rng.below(6)) {
      case 0: {
        std::string v = fresh_var();
        scope.push_back(v);
        FormulaPtr body = dfo(depth - 1, scope);
        scope.pop_back();
        return mk_exists(v, body);
      }
      case 1: {
        std::string v = fresh_var();
        scope.push_back(v);
        FormulaPtr body = dfo(depth - 1, scope);
        scope.pop_back();
        return mk_forall(v, body);
      }
      case 2:
        return mk_or(dfo(depth - 1, scope), dfo(depth - 1, scope));
      case 3:
        return mk_and(dfo(depth - 1, scope), dfo(depth - 1, scope));
      case 4:
        return mk_not(dfo(depth - 1, scope));
      default:
        return atom(scope);
    }
  }

  FormulaPtr loc_atom(const std::vector<std::string>& scope) {
    const std::string& subject =
        scope[rng.below(static_cast<int>(scope.size()))];
    std::vector<std::string> body_scope{subject};
    FormulaPtr body = dfo(params.depth, body_scope);
    return mk_loc(params.radius, subject, body);
  }

  FormulaPtr qf(int depth, const std::vector<std::string>& scope) {
    if (depth <= 0 || rng.percent(35)) {
      switch (rng.below(4)) {
        case 0: {
          const std::string& x = scope[rng.below(static_cast<int>(scope.size()))];
          const std::string& y = scope[rng.below(static_cast<int>(scope.size()))];
          return mk_eq(x, y);
        }
        case 1: {
          const std::string& x = scope[rng.below(static_cast<int>(scope.size()))];
          const std::string& y = scope[rng.below(static_cast<int>(scope.size()))];
          return mk_neq(x, y);
        }
        default:
          return loc_atom(scope);
      }
    }
    return rng.percent(50) ? mk_and(qf(depth - 1, scope), qf(depth - 1, scope))
                           : mk_or(qf(depth - 1, scope), qf(depth - 1, scope));
  }

  FormulaPtr existential(int depth, std::vector<std::string>& scope) {
    if (scope.empty()) {
      std::string v = fresh_var();
      scope.push_back(v);
      FormulaPtr body = existential(depth > 0 ? depth - 1 : 0, scope);
      scope.pop_back();
      return mk_exists(v, body);
    }
    if (depth <= 0) return qf(1, scope);
    switch (rng.below(4)) {
      case 0: {
        std::string v = fresh_var();
        scope.push_back(v);
        FormulaPtr body = existential(depth - 1, scope);
        scope.pop_back();
        return mk_exists(v, body);
      }
      case 1:
        return mk_and(existential(depth - 1, scope),
                      existential(depth - 1, scope));
      case 2:
        return mk_or(existential(depth - 1, scope),
                     existential(depth - 1, scope));
      default:
        return qf(depth, scope);
    }
  }
};

} // namespace

DataStructure random_structure(Rng& rng, const GenParams& params) {
  int size = rng.between(1, params.max_size);
  std::vector<std::string> universe = default_universe(size);
  std::vector<Value> values;
  values.reserve(static_cast<size_t>(size) * params.dim);
  for (int k = 0; k < size * params.dim; ++k)
    values.push_back(rng.between(1, params.value_range));
  std::map<std::string, std::vector<bool>> preds;
  for (const auto& name : pred_names(params.pred_count)) {
    std::vector<bool> members(size, false);
    for (int e = 0; e < size; ++e) members[e] = rng.percent(40);
    preds.emplace(name, std::move(members));
  }
  return DataStructure(std::move(universe), params.dim, std::move(values),
                       std::move(preds));
}

DataStructure random_structure(const GenParams& params) {
  Rng rng(params.seed);
  return random_structure(rng, params);
}

FormulaPtr random_formula(Rng& rng, const GenParams& params,
                          const Fragment& kind) {
  FormulaGen gen{rng, params};
  std::vector<std::string> scope;
  switch (kind.kind) {
    case FragmentKind::DFO:
      return gen.dfo(params.depth, scope);
    case FragmentKind::ExistentialLocal:
      return gen.existential(params.depth, scope);
    case FragmentKind::QuantifierFreeLocal:
      return random_qf_matrix(rng, params, 1);
    case FragmentKind::LocalFO: {
      // Existential shell is a subset of local FO; good enough for tests.
      return gen.existential(params.depth, scope);
    }
  }
  throw InputError("unreachable fragment kind");
}

FormulaPtr random_formula(const GenParams& params, const Fragment& kind) {
  Rng rng(params.seed);
  return random_formula(rng, params, kind);
}

FormulaPtr random_qf_matrix(Rng& rng, const GenParams& params, int n) {
  FormulaGen gen{rng, params};
  std::vector<std::string> scope = center_vars(n);
  return gen.qf(2, scope);
}

} // namespace dfo
