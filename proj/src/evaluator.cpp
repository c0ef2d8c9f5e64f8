#include "dfo/evaluator.hpp"

#include <map>
#include <memory>

namespace dfo {

namespace {

struct ViewCache;

struct ViewEntry {
  DataStructure structure;
  std::unique_ptr<ViewCache> cache;
};

// One cache per structure being evaluated; nested views get their own.
struct ViewCache {
  std::map<std::pair<int, int>, ViewEntry> views;
};

using Env = std::vector<std::pair<std::string, int>>;

int lookup(const Env& env, const std::string& var) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == var) return it->second;
  throw InputError("unbound variable: " + var);
}

// A view only changes data values, so a modality body that never touches a
// data atom (at any depth) evaluates identically on the base structure.
bool mentions_rel(const Formula& f) {
  if (f.kind == NodeKind::Rel) return true;
  if (f.lhs && mentions_rel(*f.lhs)) return true;
  return f.rhs && mentions_rel(*f.rhs);
}

bool eval(const DataStructure& s, const Formula& f, Env& env, ViewCache& cache) {
  switch (f.kind) {
    case NodeKind::Pred:
      return s.in_predicate(f.name, lookup(env, f.var));
    case NodeKind::Rel:
      return s.value(lookup(env, f.var), f.i) ==
             s.value(lookup(env, f.var2), f.j);
    case NodeKind::Eq:
      return lookup(env, f.var) == lookup(env, f.var2);
    case NodeKind::Or:
      return eval(s, *f.lhs, env, cache) || eval(s, *f.rhs, env, cache);
    case NodeKind::And:
      return eval(s, *f.lhs, env, cache) && eval(s, *f.rhs, env, cache);
    case NodeKind::Not:
      return !eval(s, *f.lhs, env, cache);
    case NodeKind::Exists: {
      env.emplace_back(f.var, 0);
      bool found = false;
      for (int e = 0; e < s.size() && !found; ++e) {
        env.back().second = e;
        found = eval(s, *f.lhs, env, cache);
      }
      env.pop_back();
      return found;
    }
    case NodeKind::Forall: {
      env.emplace_back(f.var, 0);
      bool all = true;
      for (int e = 0; e < s.size() && all; ++e) {
        env.back().second = e;
        all = eval(s, *f.lhs, env, cache);
      }
      env.pop_back();
      return all;
    }
    case NodeKind::Loc: {
      int center = lookup(env, f.var);
      if (!mentions_rel(*f.lhs)) return eval(s, *f.lhs, env, cache);
      auto key = std::make_pair(center, f.radius);
      auto it = cache.views.find(key);
      if (it == cache.views.end()) {
        ViewEntry entry{view(s, s.elem_name(center), f.radius),
                        std::make_unique<ViewCache>()};
        it = cache.views.emplace(key, std::move(entry)).first;
      }
      return eval(it->second.structure, *f.lhs, env, *it->second.cache);
    }
  }
  throw InputError("unreachable formula kind");
}

} // namespace

bool evaluate(const DataStructure& s, const FormulaPtr& f,
              const Interpretation& interp) {
  Env env;
  env.reserve(interp.bindings().size() + 8);
  for (const auto& [var, elem] : interp.bindings())
    env.emplace_back(var, s.index_of(elem));
  ViewCache cache;
  return eval(s, *f, env, cache);
}

bool evaluate_sentence(const DataStructure& s, const FormulaPtr& f) {
  if (!free_vars(f).empty())
    throw InputError("evaluate_sentence requires a closed formula");
  return evaluate(s, f, Interpretation{});
}

} // namespace dfo
