#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dfo/logic.hpp"
#include "dfo/structures.hpp"

namespace dfo {

/// Variable-to-element binding. Persistent: extend returns a new map and the
/// newest binding of a name wins, matching I[x/a].
class Interpretation {
public:
  Interpretation() = default;

  Interpretation extend(const std::string& var, const std::string& elem) const {
    Interpretation out = *this;
    out.binds_.emplace_back(var, elem);
    return out;
  }

  std::optional<std::string> lookup(const std::string& var) const {
    for (auto it = binds_.rbegin(); it != binds_.rend(); ++it)
      if (it->first == var) return it->second;
    return std::nullopt;
  }

  const std::vector<std::pair<std::string, std::string>>& bindings() const {
    return binds_;
  }

private:
  std::vector<std::pair<std::string, std::string>> binds_;
};

/// Model checking against the satisfaction relation; Loc(r, x, body) holds
/// iff body holds over the radius-r view of I(x). Views are memoized per
/// (center, radius) for the duration of one call.
bool evaluate(const DataStructure& s, const FormulaPtr& f,
              const Interpretation& interp);

/// evaluate with the empty interpretation; rejects formulas with free
/// variables.
bool evaluate_sentence(const DataStructure& s, const FormulaPtr& f);

} // namespace dfo
