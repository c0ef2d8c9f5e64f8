#include "dfo/suites.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "dfo/evaluator.hpp"
#include "dfo/parser.hpp"
#include "dfo/reductions.hpp"
#include "dfo/solver.hpp"

namespace dfo {

namespace {

using TrialFn = std::function<std::optional<std::string>(Rng&)>;

SuiteReport drive(const std::string& name, int trials, std::uint64_t seed,
                  int jobs, const TrialFn& trial_fn) {
  SuiteReport report{name, trials, {}};
  if (trials <= 0) return report;
  jobs = std::max(1, jobs);

  auto run_range = [&](int from, int step, std::vector<SuiteFailure>& out) {
    for (int t = from; t < trials; t += step) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
      std::optional<std::string> failure;
      try {
        failure = trial_fn(rng);
      } catch (const std::exception& e) {
        failure = std::string("exception: ") + e.what();
      }
      if (failure) out.push_back({t, *failure});
    }
  };

  if (jobs == 1) {
    run_range(0, 1, report.failures);
  } else {
    std::vector<std::vector<SuiteFailure>> parts(jobs);
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back(run_range, w, jobs, std::ref(parts[w]));
    for (auto& w : workers) w.join();
    for (auto& part : parts)
      report.failures.insert(report.failures.end(), part.begin(), part.end());
    std::sort(report.failures.begin(), report.failures.end(),
              [](const SuiteFailure& a, const SuiteFailure& b) {
                return a.trial < b.trial;
              });
  }
  return report;
}

CenterTuple random_centers(Rng& rng, const DataStructure& s, int max_n) {
  int n = rng.between(1, max_n);
  std::vector<std::string> centers;
  for (int k = 0; k < n; ++k)
    centers.push_back(s.elem_name(rng.below(s.size())));
  return CenterTuple(centers);
}

Interpretation bind_centers(const CenterTuple& centers) {
  Interpretation interp;
  auto names = center_vars(centers.n());
  for (int p = 0; p < centers.n(); ++p)
    interp = interp.extend(names[p], centers.centers[p]);
  return interp;
}

std::string describe_instance(const DataStructure& s,
                              const CenterTuple& centers) {
  return serialize_with_centers(s, centers.centers);
}

// Zone of (elem, field) relative to a ball pair: 1 inside the inner ball,
// 2 in the shell, 3 outside.
int zone(const Ball& inner, const Ball& outer, const FieldRef& fr) {
  if (inner.members.count(fr)) return 1;
  if (outer.members.count(fr)) return 2;
  return 3;
}

// ---- lemma1: closed-form ball membership vs BFS ----------------------------

std::optional<std::string> trial_lemma1(Rng& rng) {
  GenParams params;
  params.max_size = 6;
  params.dim = 2;
  params.value_range = 8;
  params.pred_count = 0;
  DataStructure s = random_structure(rng, params);
  for (int a = 0; a < s.size(); ++a) {
    for (int r = 1; r <= 2; ++r) {
      Ball b = ball(s, s.elem_name(a), r);
      for (int e = 0; e < s.size(); ++e) {
        for (int j = 1; j <= 2; ++j) {
          bool closed =
              ball_membership_2dv(s, s.elem_name(a), s.elem_name(e), j, r);
          bool bfs = b.members.count(FieldRef{s.elem_name(e), j}) != 0;
          if (closed != bfs) {
            std::ostringstream why;
            why << "closed-form membership " << closed << " vs BFS " << bfs
                << " for center " << s.elem_name(a) << ", element "
                << s.elem_name(e) << ", field " << j << ", radius " << r
                << "\n"
                << serialize_structure(s);
            return why.str();
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---- lemma2: the five radius-2 view cases ----------------------------------

std::optional<std::string> trial_lemma2(Rng& rng) {
  GenParams params;
  params.max_size = 5;
  params.dim = 2;
  params.value_range = 6;
  params.pred_count = 1;
  DataStructure s = random_structure(rng, params);
  CenterTuple centers = random_centers(rng, s, 2);
  Abstraction abs = abstract_r2(s, centers);

  for (int p = 1; p <= centers.n(); ++p) {
    const std::string& center = centers.centers[p - 1];
    DataStructure v = view(s, center, 2);
    Ball b1 = ball(s, center, 1);
    Ball b2 = ball(s, center, 2);
    for (int be = 0; be < s.size(); ++be) {
      for (int ce = 0; ce < s.size(); ++ce) {
        for (int j = 1; j <= 2; ++j) {
          for (int k = 1; k <= 2; ++k) {
            FieldRef bf{s.elem_name(be), j}, cf{s.elem_name(ce), k};
            bool actual = v.value(be, j) == v.value(ce, k);
            int zb = zone(b1, b2, bf), zc = zone(b1, b2, cf);
            bool expected = false;
            if (zb == 1 && zc == 1) {
              for (int i = 1; i <= 2; ++i)
                expected = expected ||
                           (abs.structure.in_predicate(
                                OmegaPredicate{p, i, j}.name(), be) &&
                            abs.structure.in_predicate(
                                OmegaPredicate{p, i, k}.name(), ce));
            } else if (zb == 2 && zc == 2) {
              expected = abs.structure.value(be, 1) == abs.structure.value(ce, 1);
              for (int pp = 1; pp <= centers.n() && !expected; ++pp)
                for (int l = 1; l <= 2; ++l)
                  expected = expected ||
                             (abs.structure.in_predicate(
                                  OmegaPredicate{pp, l, j}.name(), be) &&
                              abs.structure.in_predicate(
                                  OmegaPredicate{pp, l, k}.name(), ce));
            } else if (zb == 3 && zc == 3) {
              expected = be == ce && j == k;
            } else {
              expected = false; // mixed zones never share a value in the view
            }
            if (actual != expected) {
              std::ostringstream why;
              why << "case (" << zb << "," << zc << ") for center position "
                  << p << ": view relation " << actual << " vs predicted "
                  << expected << " at (" << bf.elem << "," << j << ")/("
                  << cf.elem << "," << k << ")\n"
                  << describe_instance(s, centers);
              return why.str();
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---- lemma3 / lemma6: translation agreement --------------------------------

std::optional<std::string> trial_translation(Rng& rng, int radius) {
  GenParams params;
  params.max_size = 5;
  params.dim = radius == 2 ? 2 : rng.between(1, 3);
  params.value_range = 6;
  params.pred_count = 1;
  params.depth = 3;
  params.radius = radius;
  int n = rng.between(1, 3);
  FormulaPtr matrix = random_qf_matrix(rng, params, n);
  DataStructure s = random_structure(rng, params);
  CenterTuple centers;
  for (int k = 0; k < n; ++k)
    centers.centers.push_back(s.elem_name(rng.below(s.size())));

  Signature sigma;
  sigma.predicates.insert("p1");
  sigma.dim = params.dim;

  Interpretation interp = bind_centers(centers);
  bool lhs = evaluate(s, matrix, interp);
  FormulaPtr translated = radius == 2
                              ? translate_r2(matrix, n, sigma)
                              : translate_r1(matrix, n, params.dim, sigma);
  Abstraction abs = radius == 2 ? abstract_r2(s, centers)
                                : abstract_r1(s, centers);
  bool rhs = evaluate(abs.structure, translated, interp);
  if (lhs != rhs) {
    std::ostringstream why;
    why << "source satisfaction " << lhs << " vs abstraction satisfaction "
        << rhs << "\nmatrix: " << serialize_formula(matrix) << "\n"
        << describe_instance(s, centers);
    return why.str();
  }

  if (radius == 1) {
    // Well-formedness forward and reconstruction round trip, radius 1.
    if (!is_well_formed_r1(abs.structure, centers, params.dim))
      return "abstraction fails the radius-1 well-formedness formula\n" +
             describe_instance(s, centers);
    DataStructure rebuilt = reconstruct_r1(abs.structure, centers, params.dim);
    Abstraction again = abstract_r1(rebuilt, centers);
    if (!data_equivalent(again.structure, abs.structure))
      return "reconstruction round trip differs\n" +
             describe_instance(s, centers);
  }
  return std::nullopt;
}

std::optional<std::string> trial_lemma3(Rng& rng) {
  return trial_translation(rng, 2);
}

std::optional<std::string> trial_lemma6(Rng& rng) {
  return trial_translation(rng, 1);
}

// ---- lemma4: well-formedness forward / reconstruction backward -------------

// Injective, order-preserving rename of the single data value; keeps the
// partition but moves the concrete labels.
DataStructure rename_values(Rng& rng, const DataStructure& b) {
  std::set<Value> present = b.all_values();
  std::map<Value, Value> renaming;
  Value next = rng.between(0, 4);
  for (Value v : present) {
    renaming[v] = next;
    next += rng.between(1, 4);
  }
  DataStructure out = b;
  for (int e = 0; e < b.size(); ++e)
    for (int f = 1; f <= b.dim(); ++f)
      out.set_value(e, f, renaming[b.value(e, f)]);
  return out;
}

std::optional<std::string> trial_lemma4(Rng& rng) {
  GenParams params;
  params.max_size = 5;
  params.dim = 2;
  params.value_range = 6;
  params.pred_count = 1;
  DataStructure s = random_structure(rng, params);
  CenterTuple centers = random_centers(rng, s, 2);
  Abstraction abs = abstract_r2(s, centers);

  if (!is_well_formed(abs.structure, centers))
    return "abstraction fails the well-formedness formula\n" +
           describe_instance(s, centers);

  DataStructure renamed = rename_values(rng, abs.structure);
  if (!is_well_formed(renamed, centers))
    return "well-formedness is not invariant under value renaming\n" +
           describe_instance(renamed, centers);
  DataStructure rebuilt = reconstruct_r2(renamed, centers);
  Abstraction again = abstract_r2(rebuilt, centers);
  if (!data_equivalent(again.structure, renamed)) {
    std::ostringstream why;
    why << "reconstruction round trip differs\ninput:\n"
        << describe_instance(renamed, centers) << "reconstructed:\n"
        << serialize_structure(rebuilt) << "re-abstracted:\n"
        << serialize_structure(again.structure);
    return why.str();
  }

  // Organic well-formed inputs, not just abstraction images: sample random
  // enriched structures until one passes the well-formedness formula.
  for (int attempt = 0; attempt < 200; ++attempt) {
    int size = rng.between(1, 3);
    std::vector<std::string> universe;
    for (int e = 1; e <= size; ++e)
      universe.push_back("e" + std::to_string(e));
    std::vector<Value> data;
    for (int e = 0; e < size; ++e) data.push_back(rng.between(1, 3));
    std::map<std::string, std::vector<bool>> preds;
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j) {
        std::vector<bool> bits(size, false);
        for (int e = 0; e < size; ++e) bits[e] = rng.percent(40);
        preds.emplace(OmegaPredicate{1, i, j}.name(), std::move(bits));
      }
    DataStructure candidate(universe, 1, data, preds);
    CenterTuple one{candidate.elem_name(rng.below(size))};
    if (!is_well_formed(candidate, one)) continue;
    DataStructure model = reconstruct_r2(candidate, one);
    if (!data_equivalent(abstract_r2(model, one).structure, candidate)) {
      std::ostringstream why;
      why << "sampled well-formed input does not round trip\n"
          << describe_instance(candidate, one) << "reconstructed:\n"
          << serialize_structure(model);
      return why.str();
    }
    break;
  }
  return std::nullopt;
}

// ---- lemma5: the radius-1 view cases ---------------------------------------

std::optional<std::string> trial_lemma5(Rng& rng) {
  GenParams params;
  params.max_size = 5;
  params.dim = rng.between(1, 3);
  params.value_range = 6;
  params.pred_count = 1;
  int dim = params.dim;
  DataStructure s = random_structure(rng, params);
  CenterTuple centers = random_centers(rng, s, 2);
  Abstraction abs = abstract_r1(s, centers);

  for (int p = 1; p <= centers.n(); ++p) {
    const std::string& center = centers.centers[p - 1];
    DataStructure v = view(s, center, 1);
    Ball b1 = ball(s, center, 1);
    for (int be = 0; be < s.size(); ++be) {
      for (int ce = 0; ce < s.size(); ++ce) {
        for (int j = 1; j <= dim; ++j) {
          for (int k = 1; k <= dim; ++k) {
            bool actual = v.value(be, j) == v.value(ce, k);
            bool b_in = b1.members.count(FieldRef{s.elem_name(be), j}) != 0;
            bool c_in = b1.members.count(FieldRef{s.elem_name(ce), k}) != 0;
            bool expected;
            if (b_in && c_in) {
              expected = false;
              for (int i = 1; i <= dim; ++i)
                expected = expected ||
                           (abs.structure.in_predicate(
                                OmegaPredicate{p, i, j}.name(), be) &&
                            abs.structure.in_predicate(
                                OmegaPredicate{p, i, k}.name(), ce));
            } else if (!b_in && !c_in) {
              expected = be == ce && j == k;
            } else {
              expected = false;
            }
            if (actual != expected) {
              std::ostringstream why;
              why << "radius-1 case at center position " << p
                  << ": view relation " << actual << " vs predicted "
                  << expected << " at (" << s.elem_name(be) << "," << j
                  << ")/(" << s.elem_name(ce) << "," << k << ")\n"
                  << describe_instance(s, centers);
              return why.str();
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---- lemma7: adding value pairs collapses every radius-3 view ---------------

std::optional<std::string> trial_lemma7(Rng& rng) {
  GenParams params;
  params.max_size = 4;
  params.dim = 2;
  params.value_range = 6;
  params.pred_count = 1;
  DataStructure s = random_structure(rng, params);
  DataStructure g = add_ge(s);
  for (int e = 0; e < g.size(); ++e) {
    if (!data_equivalent(view(g, g.elem_name(e), 3), g)) {
      return "radius-3 view differs from the whole structure at center " +
             g.elem_name(e) + "\n" + serialize_structure(s);
    }
  }
  return std::nullopt;
}

// ---- lemma8: relativization ------------------------------------------------

std::optional<std::string> trial_lemma8(Rng& rng) {
  GenParams params;
  params.max_size = 4;
  params.dim = 2;
  params.value_range = 5;
  params.pred_count = 1;
  params.depth = 3;
  DataStructure a = random_structure(rng, params);
  FormulaPtr phi = random_formula(rng, params, Fragment::dfo());
  FormulaPtr rel_phi = relativize(phi);

  bool lhs = evaluate_sentence(a, phi);
  bool rhs = evaluate_sentence(add_ge(a), rel_phi);
  if (lhs != rhs) {
    std::ostringstream why;
    why << "satisfaction " << lhs << " differs after adding value pairs ("
        << rhs << ")\nsentence: " << serialize_formula(phi) << "\n"
        << serialize_structure(a);
    return why.str();
  }

  // Second direction: an arbitrary structure carrying ge, not everywhere.
  DataStructure b0 = random_structure(rng, params);
  std::vector<bool> ge(b0.size(), false);
  for (int e = 0; e < b0.size(); ++e) ge[e] = rng.percent(40);
  ge[rng.below(b0.size())] = false;
  auto preds = b0.predicates();
  preds.emplace("ge", ge);
  DataStructure b(b0.universe(), 2,
                  [&] {
                    std::vector<Value> vals;
                    for (int e = 0; e < b0.size(); ++e)
                      for (int f = 1; f <= 2; ++f)
                        vals.push_back(b0.value(e, f));
                    return vals;
                  }(),
                  preds);
  bool lhs2 = evaluate_sentence(minus_ge(b), phi);
  bool rhs2 = evaluate_sentence(b, rel_phi);
  if (lhs2 != rhs2) {
    std::ostringstream why;
    why << "satisfaction after dropping ge " << lhs2
        << " differs from relativized satisfaction " << rhs2
        << "\nsentence: " << serialize_formula(phi) << "\n"
        << serialize_structure(b);
    return why.str();
  }
  return std::nullopt;
}

// ---- pad: satisfiability transfer into one more value ----------------------

std::optional<std::string> trial_pad(Rng& rng) {
  int k = rng.between(1, 2);
  GenParams params;
  params.dim = k;
  params.pred_count = 1;
  params.depth = 3;
  FormulaPtr phi = random_formula(rng, params, Fragment::dfo());
  int bound = k == 1 ? 4 : 3;

  Signature sigma;
  sigma.predicates.insert("p1");
  SolveResult source = bounded_sat(phi, sigma, k, bound);
  SolveResult target = bounded_sat(embed_pad(phi, k, 2), sigma, k + 1, bound);
  if (source.verdict != target.verdict) {
    std::ostringstream why;
    why << "verdicts differ at bound " << bound << " (source "
        << (source.verdict == Verdict::Sat ? "SAT" : "UNSAT") << ", embedded "
        << (target.verdict == Verdict::Sat ? "SAT" : "UNSAT")
        << ")\nsentence: " << serialize_formula(phi);
    return why.str();
  }
  if (source.verdict == Verdict::Sat &&
      source.witness->size() != target.witness->size()) {
    std::ostringstream why;
    why << "witness sizes differ: " << source.witness->size() << " vs "
        << target.witness->size() << "\nsentence: " << serialize_formula(phi);
    return why.str();
  }
  return std::nullopt;
}

// ---- strategy: direct vs via-reduction agreement ----------------------------

std::optional<std::string> trial_strategy(Rng& rng) {
  // Decidable zones: radius 2 with two values, radius 1 with up to three.
  bool radius2 = rng.percent(50);
  int dim = radius2 ? 2 : rng.between(1, 3);
  int radius = radius2 ? 2 : 1;

  GenParams params;
  params.dim = dim;
  params.radius = radius;
  params.pred_count = 1;
  params.depth = 2;

  // Keep the prenex width small; the enriched alphabet grows with it and the
  // bound table below keeps the target scans at desk scale.
  FormulaPtr phi;
  int n = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    phi = random_formula(rng, params, Fragment::existential_local(radius));
    n = static_cast<int>(to_prenex_existential(phi, radius).vars.size());
    int max_n = (radius == 1 && dim == 3) ? 1 : 2;
    if (n >= 1 && n <= max_n) break;
    phi = nullptr;
  }
  if (!phi) return std::nullopt; // generator never settled; skip the trial

  int bound;
  if (radius == 2)
    bound = n == 1 ? 3 : 2;
  else if (dim == 1)
    bound = n == 1 ? 4 : 3;
  else if (dim == 2)
    bound = n == 1 ? 3 : 2;
  else
    bound = 2;

  SolveResult direct =
      solve_existential_local(phi, dim, SolveStrategy::Direct, bound);
  SolveResult reduced =
      solve_existential_local(phi, dim, SolveStrategy::ViaReduction, bound);
  if (direct.verdict != reduced.verdict) {
    std::ostringstream why;
    why << "strategy verdicts differ at bound " << bound << " (direct "
        << (direct.verdict == Verdict::Sat ? "SAT" : "UNSAT")
        << ", via reduction "
        << (reduced.verdict == Verdict::Sat ? "SAT" : "UNSAT")
        << ")\nsentence: " << serialize_formula(phi) << "\nradius " << radius
        << ", dimension " << dim;
    return why.str();
  }
  if (direct.verdict == Verdict::Sat) {
    if (direct.witness->size() != reduced.witness->size()) {
      std::ostringstream why;
      why << "witness sizes differ: direct " << direct.witness->size()
          << " vs via reduction " << reduced.witness->size()
          << "\nsentence: " << serialize_formula(phi);
      return why.str();
    }
    if (!evaluate_sentence(*direct.witness, phi) ||
        !evaluate_sentence(*reduced.witness, phi)) {
      return "a SAT witness fails re-evaluation\nsentence: " +
             serialize_formula(phi);
    }
  }
  return std::nullopt;
}

} // namespace

std::vector<std::string> suite_names() {
  return {"lemma1", "lemma2", "lemma3", "lemma4", "lemma5",
          "lemma6", "lemma7", "lemma8", "pad",    "strategy"};
}

SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed,
                      int jobs) {
  static const std::map<std::string, TrialFn> suites = {
      {"lemma1", trial_lemma1}, {"lemma2", trial_lemma2},
      {"lemma3", trial_lemma3}, {"lemma4", trial_lemma4},
      {"lemma5", trial_lemma5}, {"lemma6", trial_lemma6},
      {"lemma7", trial_lemma7}, {"lemma8", trial_lemma8},
      {"pad", trial_pad},       {"strategy", trial_strategy},
  };
  auto it = suites.find(name);
  if (it == suites.end()) throw InputError("unknown suite: " + name);
  return drive(name, trials, seed, jobs, it->second);
}

std::string format_report(const SuiteReport& report) {
  std::ostringstream out;
  out << "SUITE " << report.name << " trials=" << report.trials
      << " failures=" << report.failures.size() << "\n";
  for (const auto& failure : report.failures) {
    out << "FAILURE trial=" << failure.trial << "\n"
        << failure.description << "\n";
  }
  return out.str();
}

} // namespace dfo
