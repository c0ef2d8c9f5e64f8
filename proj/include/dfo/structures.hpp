#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dfo/errors.hpp"

namespace dfo {

/// Data values. Only equality between values is ever observable, so any
/// model over an infinite value domain can be renamed into machine integers.
using Value = long long;

/// An (element, field) pair; the vertices of the data graph. Fields are
/// 1-based to match the usual subscript convention.
struct FieldRef {
  std::string elem;
  int field = 1;

  friend bool operator==(const FieldRef&, const FieldRef&) = default;
  friend auto operator<=>(const FieldRef&, const FieldRef&) = default;
};

/// A finite universe of named elements, each carrying `dim` data values and
/// a set of unary predicate memberships.
///
/// Invariants (checked on construction):
///   - universe nonempty, element ids pairwise distinct;
///   - every element carries exactly `dim` nonnegative values;
///   - every predicate membership vector covers exactly the universe.
///
/// Instances are treated as immutable once shared; the mutators exist for
/// builders (parser, enumerator, transformations) that fill in a fresh copy.
class DataStructure {
public:
  DataStructure() = default;
  DataStructure(std::vector<std::string> universe, int dimension,
                std::vector<Value> values,
                std::map<std::string, std::vector<bool>> predicates);

  int size() const { return static_cast<int>(universe_.size()); }
  int dim() const { return dim_; }
  const std::vector<std::string>& universe() const { return universe_; }

  bool has_elem(const std::string& id) const;
  /// Index of `id` in universe order; throws InputError if unknown.
  int index_of(const std::string& id) const;
  const std::string& elem_name(int idx) const { return universe_[idx]; }

  /// Value of 1-based `field` carried by the element. Throws InputError on a
  /// field index outside 1..dim or an unknown element.
  Value value(int elem_idx, int field) const;
  Value value(const std::string& id, int field) const;
  void set_value(int elem_idx, int field, Value v);

  const std::map<std::string, std::vector<bool>>& predicates() const {
    return predicates_;
  }
  bool has_predicate(const std::string& name) const;
  bool in_predicate(const std::string& name, int elem_idx) const;
  bool in_predicate(const std::string& name, const std::string& id) const;
  std::set<std::string> predicate_members(const std::string& name) const;
  void declare_predicate(const std::string& name);
  void set_predicate(const std::string& name, int elem_idx, bool member);

  /// All values carried by any element.
  std::set<Value> all_values() const;

  friend bool operator==(const DataStructure&, const DataStructure&) = default;

private:
  std::vector<std::string> universe_;
  int dim_ = 0;
  std::vector<Value> values_; // flat, size() * dim_, row per element
  std::map<std::string, std::vector<bool>> predicates_;
  std::map<std::string, int> index_;

  void check_field(int field) const;
};

/// The graph on (element, field) pairs: ((a,i),(b,j)) is an edge iff a = b
/// or the i-th value of a equals the j-th value of b. Vertex ids are
/// elem_index * dim + (field - 1).
struct DataGraph {
  int dim = 0;
  std::vector<std::string> elems;
  std::vector<std::vector<int>> adj; // symmetric; self loops not stored

  int vertex_count() const { return static_cast<int>(elems.size()) * dim; }
  int vertex_id(const FieldRef& v) const;
  FieldRef field_ref(int vertex) const;
  /// Edge test per the definition: reflexive on same-element pairs.
  bool has_edge(const FieldRef& u, const FieldRef& v) const;
};

struct Ball {
  std::string center;
  int radius = 0;
  std::set<FieldRef> members;
};

/// f_i(a) = f_j(b)?
bool rel(const DataStructure& a_struct, int i, int j, const std::string& a,
         const std::string& b);

/// { f_i(a) | a in elems, i in 1..dim }
std::set<Value> values_of(const DataStructure& s,
                          const std::vector<std::string>& elems);

DataGraph data_graph(const DataStructure& s);

/// BFS shortest-path length in the data graph; nullopt when disconnected.
std::optional<int> distance(const DataStructure& s, const FieldRef& u,
                            const FieldRef& v);

/// All (b,j) within distance r of some field of `center`.
Ball ball(const DataStructure& s, const std::string& center, int radius);

/// Closed-form radius-1/2 ball membership for 2-data structures:
/// r=1: exists i with f_i(a)=f_j(b); r=2: exists i,k with f_i(a)=f_k(b).
/// Kept separate from the BFS path so the two can be tested against each
/// other.
bool ball_membership_2dv(const DataStructure& s, const std::string& a,
                         const std::string& b, int j, int r);

/// Copy of `s` where every field outside the radius-r ball around `center`
/// is overwritten with a fresh value. Fresh values are consecutive integers
/// starting at max(Val(s))+1, assigned in (universe order, field order), so
/// outputs are reproducible; callers compare views with data_equivalent.
DataStructure view(const DataStructure& s, const std::string& center,
                   int radius);

/// Append k extra fields, constantly 0 on every element.
DataStructure pad(const DataStructure& s, int extra_fields);

/// Same universe, dimension and predicates, and the same value-equality
/// partition over (element, field) slots.
bool data_equivalent(const DataStructure& a, const DataStructure& b);

/// DOT rendering of the data graph; same-element edges are dashed.
std::string to_dot(const DataStructure& s);

} // namespace dfo
