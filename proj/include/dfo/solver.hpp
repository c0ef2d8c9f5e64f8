#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfo/logic.hpp"
#include "dfo/structures.hpp"

namespace dfo {

/// Deterministic splitmix64 stream; the same seed yields the same stream on
/// every platform (std distributions are not portable, so we roll our own
/// uniform picks).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in 0..n-1 (n >= 1).
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  /// Uniform in lo..hi inclusive.
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }

  /// True with probability percent/100.
  bool percent(int p) { return below(100) < p; }

  /// Independent stream for a derived task (suite trial, worker, ...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x5851f42d4c957f2dull * (index + 1)));
    return mix.next();
  }

private:
  std::uint64_t state_;
};

enum class Verdict { Sat, UnsatUpToBound };

struct SolveStats {
  std::uint64_t structures_checked = 0;
  double seconds = 0.0;
};

struct SolveResult {
  Verdict verdict = Verdict::UnsatUpToBound;
  std::optional<DataStructure> witness;
  int bound = 0; // maximum universe size searched
  SolveStats stats;
};

/// Streams every universe-size-n structure over the alphabet, one
/// representative per data-equivalence class: value tuples are
/// restricted-growth strings (values stay within 1..dim*n), enumerated
/// lexicographically, with all predicate memberships for each tuple.
class StructureEnumerator {
public:
  StructureEnumerator(std::vector<std::string> predicates, int dim, int size);

  /// The next structure, or nullptr when exhausted. The pointee is reused
  /// between calls; copy it to keep it.
  const DataStructure* next();

private:
  std::vector<std::string> preds_;
  int dim_;
  int size_;
  std::vector<int> rgs_;          // 0-based partition labels, slot-major
  std::vector<bool> pred_bits_;   // flattened membership odometer
  DataStructure current_;
  bool first_ = true;
  bool done_ = false;

  bool advance_values();
  bool advance_predicates();
  void load();
};

/// Scans universe sizes 1..max_size in enumeration order and returns the
/// first witness, or UNSAT relative to the bound. The verdict is
/// bound-relative by design; no small-model bound is assumed.
SolveResult bounded_sat(const FormulaPtr& sentence, const Signature& sigma,
                        int dim, int max_size);

enum class SolveStrategy { Direct, ViaReduction };

/// Satisfiability for the radius-r existential fragments. Direct evaluates
/// candidate structures with local semantics; ViaReduction translates to the
/// lower-dimensional target first (radius 2 needs exactly two values; radius
/// 1 works for any dimension) and maps SAT witnesses back through the
/// reconstruction, so the returned witness always satisfies the input.
SolveResult solve_existential_local(const FormulaPtr& sentence, int dim,
                                    SolveStrategy strategy, int max_size);

struct GenParams {
  int max_size = 4;
  int dim = 2;
  int value_range = 8;
  int pred_count = 1;
  int depth = 3;
  int radius = 2;
  std::uint64_t seed = 0;
};

/// Deterministic generators; every output passes validation / the fragment
/// check for the requested kind.
DataStructure random_structure(const GenParams& params);
DataStructure random_structure(Rng& rng, const GenParams& params);
FormulaPtr random_formula(const GenParams& params, const Fragment& kind);
FormulaPtr random_formula(Rng& rng, const GenParams& params,
                          const Fragment& kind);
/// Quantifier-free local matrix with free variables x1..xn.
FormulaPtr random_qf_matrix(Rng& rng, const GenParams& params, int n);

} // namespace dfo
