#include "dfo/structures.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dfo {

DataStructure::DataStructure(std::vector<std::string> universe, int dimension,
                             std::vector<Value> values,
                             std::map<std::string, std::vector<bool>> predicates)
    : universe_(std::move(universe)),
      dim_(dimension),
      values_(std::move(values)),
      predicates_(std::move(predicates)) {
  if (universe_.empty()) throw InputError("universe must be nonempty");
  if (dim_ < 0) throw InputError("dimension must be nonnegative");
  if (values_.size() != universe_.size() * static_cast<size_t>(dim_))
    throw InputError("every element must carry exactly " +
                     std::to_string(dim_) + " values");
  for (Value v : values_)
    if (v < 0) throw InputError("data values must be nonnegative");
  for (int i = 0; i < static_cast<int>(universe_.size()); ++i) {
    if (!index_.emplace(universe_[i], i).second)
      throw InputError("duplicate element id: " + universe_[i]);
  }
  for (auto& [name, members] : predicates_) {
    if (members.size() != universe_.size())
      throw InputError("predicate " + name + " does not cover the universe");
  }
}

bool DataStructure::has_elem(const std::string& id) const {
  return index_.count(id) != 0;
}

int DataStructure::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown element: " + id);
  return it->second;
}

void DataStructure::check_field(int field) const {
  if (field < 1 || field > dim_)
    throw InputError("field index " + std::to_string(field) +
                     " out of range 1.." + std::to_string(dim_));
}

Value DataStructure::value(int elem_idx, int field) const {
  check_field(field);
  if (elem_idx < 0 || elem_idx >= size())
    throw InputError("element index out of range");
  return values_[static_cast<size_t>(elem_idx) * dim_ + (field - 1)];
}

Value DataStructure::value(const std::string& id, int field) const {
  return value(index_of(id), field);
}

void DataStructure::set_value(int elem_idx, int field, Value v) {
  check_field(field);
  if (v < 0) throw InputError("data values must be nonnegative");
  values_[static_cast<size_t>(elem_idx) * dim_ + (field - 1)] = v;
}

bool DataStructure::has_predicate(const std::string& name) const {
  return predicates_.count(name) != 0;
}

bool DataStructure::in_predicate(const std::string& name, int elem_idx) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw InputError("unknown predicate: " + name);
  return it->second[elem_idx];
}

bool DataStructure::in_predicate(const std::string& name,
                                 const std::string& id) const {
  return in_predicate(name, index_of(id));
}

std::set<std::string> DataStructure::predicate_members(
    const std::string& name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw InputError("unknown predicate: " + name);
  std::set<std::string> out;
  for (int i = 0; i < size(); ++i)
    if (it->second[i]) out.insert(universe_[i]);
  return out;
}

void DataStructure::declare_predicate(const std::string& name) {
  predicates_.emplace(name, std::vector<bool>(universe_.size(), false));
}

void DataStructure::set_predicate(const std::string& name, int elem_idx,
                                  bool member) {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) throw InputError("unknown predicate: " + name);
  it->second[elem_idx] = member;
}

std::set<Value> DataStructure::all_values() const {
  return std::set<Value>(values_.begin(), values_.end());
}

bool rel(const DataStructure& s, int i, int j, const std::string& a,
         const std::string& b) {
  return s.value(a, i) == s.value(b, j);
}

std::set<Value> values_of(const DataStructure& s,
                          const std::vector<std::string>& elems) {
  std::set<Value> out;
  for (const auto& id : elems) {
    int e = s.index_of(id);
    for (int f = 1; f <= s.dim(); ++f) out.insert(s.value(e, f));
  }
  return out;
}

int DataGraph::vertex_id(const FieldRef& v) const {
  if (v.field < 1 || v.field > dim)
    throw InputError("field index " + std::to_string(v.field) +
                     " out of range 1.." + std::to_string(dim));
  auto it = std::find(elems.begin(), elems.end(), v.elem);
  if (it == elems.end()) throw InputError("unknown element: " + v.elem);
  return static_cast<int>(it - elems.begin()) * dim + (v.field - 1);
}

FieldRef DataGraph::field_ref(int vertex) const {
  return FieldRef{elems[vertex / dim], vertex % dim + 1};
}

bool DataGraph::has_edge(const FieldRef& u, const FieldRef& v) const {
  int a = vertex_id(u), b = vertex_id(v);
  if (u.elem == v.elem) return true;
  const auto& nbrs = adj[a];
  return std::find(nbrs.begin(), nbrs.end(), b) != nbrs.end();
}

DataGraph data_graph(const DataStructure& s) {
  DataGraph g;
  g.dim = s.dim();
  g.elems = s.universe();
  int m = g.vertex_count();
  g.adj.assign(m, {});
  for (int u = 0; u < m; ++u) {
    int ue = u / g.dim, uf = u % g.dim + 1;
    for (int v = u + 1; v < m; ++v) {
      int ve = v / g.dim, vf = v % g.dim + 1;
      if (ue == ve || s.value(ue, uf) == s.value(ve, vf)) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
      }
    }
  }
  return g;
}

namespace {

// BFS distances from the given sources; -1 marks unreachable vertices.
std::vector<int> bfs_distances(const DataGraph& g, const std::vector<int>& sources) {
  std::vector<int> dist(g.vertex_count(), -1);
  std::deque<int> queue;
  for (int s : sources) {
    if (dist[s] == -1) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.adj[u]) {
      if (dist[v] == -1) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

} // namespace

std::optional<int> distance(const DataStructure& s, const FieldRef& u,
                            const FieldRef& v) {
  DataGraph g = data_graph(s);
  int a = g.vertex_id(u), b = g.vertex_id(v);
  auto dist = bfs_distances(g, {a});
  if (dist[b] < 0) return std::nullopt;
  return dist[b];
}

Ball ball(const DataStructure& s, const std::string& center, int radius) {
  int c = s.index_of(center);
  Ball out{center, radius, {}};
  if (s.dim() == 0) return out;
  DataGraph g = data_graph(s);
  std::vector<int> sources;
  for (int f = 0; f < s.dim(); ++f) sources.push_back(c * s.dim() + f);
  auto dist = bfs_distances(g, sources);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (dist[v] >= 0 && dist[v] <= radius) out.members.insert(g.field_ref(v));
  return out;
}

bool ball_membership_2dv(const DataStructure& s, const std::string& a,
                         const std::string& b, int j, int r) {
  if (s.dim() != 2)
    throw InputError("ball_membership_2dv requires a 2-data structure");
  if (r != 1 && r != 2) throw InputError("radius must be 1 or 2");
  int ai = s.index_of(a), bi = s.index_of(b);
  if (j < 1 || j > 2) throw InputError("field index out of range 1..2");
  if (r == 1) {
    // (b,j) is at distance <= 1 iff some field of a matches field j of b.
    if (a == b) return true;
    return s.value(ai, 1) == s.value(bi, j) || s.value(ai, 2) == s.value(bi, j);
  }
  // Radius 2: any shared value between a and b pulls both fields of b in.
  if (a == b) return true;
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 2; ++k)
      if (s.value(ai, i) == s.value(bi, k)) return true;
  return false;
}

DataStructure view(const DataStructure& s, const std::string& center,
                   int radius) {
  Ball b = ball(s, center, radius);
  std::vector<bool> inside(static_cast<size_t>(s.size()) * s.dim(), false);
  for (const auto& fr : b.members)
    inside[static_cast<size_t>(s.index_of(fr.elem)) * s.dim() + fr.field - 1] =
        true;

  Value fresh = 0;
  for (auto v : s.all_values()) fresh = std::max(fresh, v);
  ++fresh;

  DataStructure out = s;
  for (int e = 0; e < s.size(); ++e)
    for (int f = 1; f <= s.dim(); ++f)
      if (!inside[static_cast<size_t>(e) * s.dim() + f - 1])
        out.set_value(e, f, fresh++);
  return out;
}

DataStructure pad(const DataStructure& s, int extra_fields) {
  if (extra_fields < 0) throw InputError("extra field count must be >= 0");
  int d = s.dim() + extra_fields;
  std::vector<Value> values;
  values.reserve(static_cast<size_t>(s.size()) * d);
  for (int e = 0; e < s.size(); ++e) {
    for (int f = 1; f <= s.dim(); ++f) values.push_back(s.value(e, f));
    for (int f = 0; f < extra_fields; ++f) values.push_back(0);
  }
  return DataStructure(s.universe(), d, std::move(values), s.predicates());
}

bool data_equivalent(const DataStructure& a, const DataStructure& b) {
  if (a.universe() != b.universe() || a.dim() != b.dim()) return false;
  if (a.predicates() != b.predicates()) return false;
  int m = a.size() * a.dim();
  auto slot = [&](const DataStructure& s, int t) {
    return s.value(t / s.dim(), t % s.dim() + 1);
  };
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v)
      if ((slot(a, u) == slot(a, v)) != (slot(b, u) == slot(b, v)))
        return false;
  return true;
}

std::string to_dot(const DataStructure& s) {
  DataGraph g = data_graph(s);
  std::ostringstream out;
  out << "graph datagraph {\n";
  for (int v = 0; v < g.vertex_count(); ++v) {
    FieldRef fr = g.field_ref(v);
    out << "  \"" << fr.elem << "." << fr.field << "\" [label=\"" << fr.elem
        << "." << fr.field << "=" << s.value(fr.elem, fr.field) << "\"];\n";
  }
  for (int u = 0; u < g.vertex_count(); ++u) {
    FieldRef fu = g.field_ref(u);
    for (int v : g.adj[u]) {
      if (v <= u) continue;
      FieldRef fv = g.field_ref(v);
      out << "  \"" << fu.elem << "." << fu.field << "\" -- \"" << fv.elem
          << "." << fv.field << "\"";
      if (fu.elem == fv.elem) out << " [style=dashed]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

} // namespace dfo
