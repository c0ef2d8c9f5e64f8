#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfo/logic.hpp"
#include "dfo/structures.hpp"

namespace dfo {

/// Ordered tuple of center elements. Repetitions are allowed; positions, not
/// element names, index the enriched predicates.
struct CenterTuple {
  std::vector<std::string> centers;

  CenterTuple() = default;
  CenterTuple(std::initializer_list<std::string> list) : centers(list) {}
  explicit CenterTuple(std::vector<std::string> list)
      : centers(std::move(list)) {}

  int n() const { return static_cast<int>(centers.size()); }
};

/// Enriched-alphabet predicate `U_p_i_j`: the j-th value of a member equals
/// the i-th value of the p-th center.
struct OmegaPredicate {
  int p = 1;
  int i = 1;
  int j = 1;

  std::string name() const;
  static std::optional<OmegaPredicate> parse(const std::string& name);
};

/// A lower-dimensional structure over Σ ∪ Ω_n paired with its centers.
struct Abstraction {
  DataStructure structure;
  CenterTuple centers;
};

/// Canonical prenex variable names x1..xn; these are the center variables
/// every translation and well-formedness formula refers to.
std::vector<std::string> center_vars(int n);

// ---- radius 2, two data values -> one data value --------------------------

/// Collapses a 2-data structure to one value per element: the predicates
/// U_p_i_j record which values are shared with the centers; the surviving
/// value is the one not among the centers' values, or a fresh one when both
/// or neither are.
Abstraction abstract_r2(const DataStructure& s, const CenterTuple& centers);

/// Source-to-source translation of a quantifier-free radius-2 matrix over
/// the centers into plain dFO over the enriched 1-data alphabet. Every data
/// atom inside a modality becomes a three-zone case split; the only relation
/// in the output is rel(1,1,·,·).
FormulaPtr translate_r2(const FormulaPtr& matrix,
                        const std::vector<std::string>& centers,
                        const Signature& sigma);
FormulaPtr translate_r2(const FormulaPtr& matrix, int n, const Signature& sigma);

/// Transitivity ∧ reflexivity(x1..xn) ∧ uniqueness over the Ω_n alphabet;
/// free variables x1..xn.
FormulaPtr build_phi_wf(int n);

/// Whether (b, centers) is the image of some 2-data structure: evaluates
/// the well-formedness conjunction at the centers.
bool is_well_formed(const DataStructure& b, const CenterTuple& centers);

/// Inverse of abstract_r2 on well-formed inputs: rebuilds a 2-data structure
/// whose abstraction has the same universe, predicates and value partition
/// as b. Center-class values come from a union-find over (p,i) pairs; all
/// remaining uncovered fields share one out-of-range value.
DataStructure reconstruct_r2(const DataStructure& b, const CenterTuple& centers);

/// Whole-sentence reduction: prenex, rename the prenex variables to x1..xn,
/// translate the matrix, conjoin the well-formedness formula and requantify.
/// The result is satisfiable over 1-data structures iff the input is over
/// 2-data structures.
FormulaPtr reduce_r2d2(const FormulaPtr& sentence);

// ---- radius 1, any number of data values -> zero data values --------------

/// Radius-1 analogue: only the sharing predicates survive; no data at all.
Abstraction abstract_r1(const DataStructure& s, const CenterTuple& centers);

FormulaPtr translate_r1(const FormulaPtr& matrix,
                        const std::vector<std::string>& centers, int dim,
                        const Signature& sigma);
FormulaPtr translate_r1(const FormulaPtr& matrix, int n, int dim,
                        const Signature& sigma);

/// Transitivity ∧ reflexivity; no uniqueness clause is needed without data.
FormulaPtr build_psi_wf(int n, int dim);

bool is_well_formed_r1(const DataStructure& b, const CenterTuple& centers,
                       int dim);

DataStructure reconstruct_r1(const DataStructure& b, const CenterTuple& centers,
                             int dim);

/// Reduction from the radius-1 existential fragment over dim values to dFO
/// over the enriched 0-data alphabet.
FormulaPtr reduce_r1(const FormulaPtr& sentence, int dim);

// ---- embeddings ------------------------------------------------------------

/// Adds one ge-labeled element per pair of values present in s; afterwards
/// every radius-3 view equals the whole structure.
DataStructure add_ge(const DataStructure& s);

/// Drops the ge-labeled elements and the ge predicate.
DataStructure minus_ge(const DataStructure& s);

/// Relativizes quantifiers to non-ge elements.
FormulaPtr relativize(const FormulaPtr& f);

/// dFO over 2 values into the radius-3 existential fragment:
/// exists x. loc[3](x){ relativize(f) }.
FormulaPtr embed_r3(const FormulaPtr& sentence);

/// dFO over k in {1,2} values into the radius-2 existential fragment over
/// k+1 values: exists x. loc[2](x){ f }, read over padded structures.
FormulaPtr embed_pad(const FormulaPtr& sentence, int k, int target_radius);

} // namespace dfo
