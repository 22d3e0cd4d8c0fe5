// Batch command-line interface for the additive-basis engine: parse set
// literals, run order verdicts, audits, and searches, and emit JSON or TSV.
//
// Exit codes: 0 success, 2 precondition violation, 3 verification failure,
// 4 parse error (set literals and command line alike).  Output is
// deterministic for a fixed seed.  ADDBASIS_THREADS sets the worker count
// of the bundled verification suite; every other command is single-threaded
// orchestration.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "addbasis/basis.hpp"
#include "addbasis/density.hpp"
#include "addbasis/fpt.hpp"
#include "addbasis/parse.hpp"
#include "addbasis/structure.hpp"
#include "addbasis/verify.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace addbasis;

// Everything the subcommands read.  Options not used by the parsed
// subcommand keep their defaults.
struct RunConfig {
  std::string t_lit;     // --T semigroup literal
  std::string a_lit;     // --A set literal
  std::string b_lit;     // --B set literal
  std::string s_lit;     // --S set literal
  std::string f_lit;     // --F finite element-list literal
  std::string elem_lit;  // --b single element literal
  std::string audit_mode;
  std::string search_kind;
  int64_t h = 0;
  int64_t k = 1;
  int64_t kmax = 1;
  int64_t pmax = 4;
  int64_t wmax = 8;
  int64_t cutoff = 3;
  int64_t samples = 20000;
  int64_t battery_samples = 50;
  uint64_t seed = 1;
  int64_t p = 2;
  int64_t r = 1;
  int64_t degree = 0;
  bool json = false;
  bool tsv = false;
};

int env_threads() {
  int threads = int(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads > 8) threads = 8;
  if (const char* env = std::getenv("ADDBASIS_THREADS")) {
    try {
      threads = std::max(1, std::min(64, std::stoi(env)));
    } catch (...) {
      std::cerr << "ignoring unparsable ADDBASIS_THREADS\n";
    }
  }
  return threads;
}

void emit(const ordered_json& j, const RunConfig& cfg) {
  if (cfg.tsv) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& v = it.value();
      std::cout << it.key() << '\t'
                << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  } else {
    std::cout << j.dump() << '\n';
  }
}

SemigroupT carrier(const RunConfig& cfg) {
  return validate_semigroup(parse_set(cfg.t_lit));
}

// --b accepts a bare element literal ("7", "(1,0)"); wrap it into a
// one-element set literal for the parser.
GroupElement parse_one_element(const std::string& text,
                               const AmbientGroup& amb) {
  std::vector<GroupElement> es;
  try {
    es = parse_elements(text, amb);
  } catch (const addbasis::ParseError&) {
    es = parse_elements("{" + text + "}", amb);
  }
  if (es.size() != 1)
    throw PreconditionError("--b must name exactly one element");
  return es[0];
}

ordered_json elements_json(const std::vector<GroupElement>& es,
                           const AmbientGroup& amb) {
  ordered_json a = ordered_json::array();
  for (const auto& e : es) a.push_back(element_literal(e, amb));
  return a;
}

ordered_json families_json(const std::vector<std::vector<GroupElement>>& fs,
                           const AmbientGroup& amb) {
  ordered_json a = ordered_json::array();
  for (const auto& f : fs) a.push_back(elements_json(f, amb));
  return a;
}

int cmd_order(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  PeriodicSet a = parse_set(cfg.a_lit);
  BasisReport rep = ord_star(a, t);
  ordered_json j;
  if (rep.is_basis) {
    j["verdict"] = "basis";
    j["order"] = rep.order;
    if (!rep.exceptional_set.empty())
      j["exceptional"] = elements_json(rep.exceptional_set, a.ambient());
  } else {
    j["verdict"] = "not_basis";
    j["reason"] = rep.reason == BasisReport::Reason::proper_subgroup
                      ? "proper_subgroup"
                      : "no_positive_tail";
    if (rep.subgroup) j["subgroup"] = rep.subgroup->as_periodic().to_string();
  }
  emit(j, cfg);
  return 0;
}

int cmd_sumset(const RunConfig& cfg) {
  PeriodicSet a = parse_set(cfg.a_lit);
  if (!cfg.b_lit.empty() && cfg.h > 0)
    throw PreconditionError("sumset takes --B or --h, not both");
  PeriodicSet result = PeriodicSet::empty(a.ambient());
  if (!cfg.b_lit.empty()) {
    result = minkowski_sum(a, parse_set(cfg.b_lit));
  } else if (cfg.h > 0) {
    result = h_fold(a, cfg.h);
  } else {
    throw PreconditionError("sumset needs --B or --h");
  }
  ordered_json j;
  j["sum"] = result.to_string();
  emit(j, cfg);
  return 0;
}

int cmd_essential(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  PeriodicSet a = parse_set(cfg.a_lit);
  EssentialFamily fam = essential_subsets(a, t, cfg.kmax);
  ordered_json j;
  j["reservoir"] = elements_json(fam.reservoir.elements, a.ambient());
  j["essentials"] = families_json(fam.essentials, a.ambient());
  j["count_by_size"] = fam.count_by_size;
  j["kmax"] = fam.k_max;
  emit(j, cfg);
  return 0;
}

int cmd_regular(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  PeriodicSet a = parse_set(cfg.a_lit);
  std::vector<GroupElement> f = parse_elements(cfg.f_lit, a.ambient());
  ordered_json j;
  j["removed"] = elements_json(f, a.ambient());
  j["regular"] = erdos_graham(a, f, t);
  emit(j, cfg);
  return 0;
}

int cmd_remove(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  PeriodicSet a = parse_set(cfg.a_lit);
  std::vector<GroupElement> f = parse_elements(cfg.f_lit, a.ambient());
  RemovalEntry entry = removal_order(a, f, t);
  ordered_json j;
  j["removed"] = elements_json(entry.removed, a.ambient());
  j["regular"] = entry.regular;
  if (entry.order)
    j["order"] = *entry.order;
  else
    j["order"] = nullptr;
  emit(j, cfg);
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  StructureReport rep = structure_decompose(t);
  const AmbientGroup& amb = t.ambient();
  ordered_json j;
  if (rep.kind == StructureReport::Kind::group) {
    j["kind"] = "group";
  } else {
    j["kind"] = "cofinite_to";
    j["torsion"] = rep.torsion;
    j["x"] = element_literal(rep.x, amb);
    j["R"] = elements_json(rep.R, amb);
    j["sym_diff"] = elements_json(rep.sym_diff, amb);
  }
  emit(j, cfg);
  return 0;
}

int cmd_grothendieck(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  Subgroup g = grothendieck(t);
  ordered_json j;
  j["group"] = g.as_periodic().to_string();
  emit(j, cfg);
  return 0;
}

int cmd_density(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  PeriodicSet s = parse_set(cfg.s_lit);
  Rational d = natural_density(s, t);
  if (!cfg.json && !cfg.tsv) {
    std::cout << d.to_string() << '\n';
    return 0;
  }
  ordered_json j;
  j["density"] = d.to_string();
  emit(j, cfg);
  return 0;
}

RemovalStudy certified_study(const RunConfig& cfg, const SemigroupT& t,
                             const PeriodicSet& a, int64_t k) {
  BasisReport rep = ord_star(a, t);
  if (!rep.is_basis) throw PreconditionError("A is not a basis of T");
  if (cfg.h > 0 && cfg.h != rep.order)
    throw PreconditionError("--h does not match the certified order " +
                            std::to_string(rep.order));
  return bound_audit(a, t, rep.order, k);
}

int cmd_audit(const RunConfig& cfg) {
  ordered_json j;
  if (cfg.audit_mode == "twobases") {
    SemigroupT t = carrier(cfg);
    PeriodicSet b_set = parse_set(cfg.b_lit);
    const AmbientGroup& amb = t.ambient();
    std::vector<GroupElement> f = parse_elements(cfg.f_lit, amb);
    GroupElement b = parse_one_element(cfg.elem_lit, amb);
    TwoBasesReport rep = twobases_audit(f, b_set, b, t);
    j["h1"] = rep.h1;
    j["h2"] = rep.h2 ? ordered_json(*rep.h2) : ordered_json(nullptr);
    j["h"] = rep.h ? ordered_json(*rep.h) : ordered_json(nullptr);
    j["ok"] = rep.ok;
  } else if (cfg.audit_mode == "nn") {
    SemigroupT t = carrier(cfg);
    PeriodicSet a = parse_set(cfg.a_lit);
    std::vector<GroupElement> f = parse_elements(cfg.f_lit, a.ambient());
    j["ok"] = lemma_nn_audit(a, f, t);
  } else if (cfg.audit_mode == "s1" || cfg.audit_mode == "x1") {
    SemigroupT t = carrier(cfg);
    PeriodicSet a = parse_set(cfg.a_lit);
    RemovalStudy study = certified_study(cfg, t, a, 1);
    j["h"] = study.h;
    j["entries"] = int64_t(study.entries.size());
    if (cfg.audit_mode == "s1") {
      j["ok"] = study.s1_ok;
      j["cap"] = study.s1_cap;
      j["bad_count"] = study.s1_bad_count;
    } else {
      j["ok"] = study.x1_ok;
      j["index_ok"] = study.index_ok;
    }
  } else if (cfg.audit_mode == "s2" || cfg.audit_mode == "x2") {
    SemigroupT t = carrier(cfg);
    PeriodicSet a = parse_set(cfg.a_lit);
    RemovalStudy study = certified_study(cfg, t, a, 2);
    j["h"] = study.h;
    j["entries"] = int64_t(study.entries.size());
    if (cfg.audit_mode == "s2") {
      j["checked"] = study.s2_checked;
      j["ok"] = study.s2_ok;
      j["pairs"] = study.s2_pair_count;
      j["cap"] = study.s2_cap;
      if (study.max_singleton_order)
        j["max_singleton_order"] = *study.max_singleton_order;
    } else {
      j["ok"] = study.x2_ok;
      j["index_ok"] = study.index_ok;
    }
  } else {  // density-lemmas
    DensityBattery b = density_lemma_battery(cfg.battery_samples, cfg.seed);
    j["target"] = b.target;
    j["runs"] = b.runs;
    j["violations"] = b.violations();
    j["fired_prehistoric"] = b.fired_pre;
    j["fired_low_density"] = b.fired_low;
    j["fired_translate_cover"] = b.hyp_nn;
    j["complete"] = b.complete;
    emit(j, cfg);
    return b.violations() == 0 ? 0 : 3;
  }
  emit(j, cfg);
  return 0;
}

int cmd_search(const RunConfig& cfg) {
  SemigroupT t = carrier(cfg);
  if (cfg.h < 1) throw PreconditionError("search needs --h >= 1");
  SearchBudget budget{cfg.pmax, cfg.wmax, cfg.cutoff, cfg.samples, cfg.seed};
  WitnessReport rep = witness_search(t, cfg.h, cfg.k, budget);
  const AmbientGroup& amb = t.ambient();
  ordered_json j;
  if (cfg.search_kind == "X") {
    j["found"] = rep.best_removal.has_value();
    if (rep.best_removal) {
      const RemovalWitness& w = *rep.best_removal;
      j["basis"] = w.a.to_string();
      j["order"] = w.order;
      j["removed"] = elements_json(w.removed, amb);
      j["removal_order"] = w.removal_order;
      j["exceptional"] = elements_json(w.exceptional_set, amb);
    }
  } else {  // E
    j["found"] = rep.best_essential.has_value();
    if (rep.best_essential) {
      const EssentialWitness& w = *rep.best_essential;
      j["basis"] = w.a.to_string();
      j["order"] = w.order;
      j["count"] = w.count;
      j["essentials"] = families_json(w.essentials, amb);
    }
  }
  j["candidates_screened"] = rep.candidates_screened;
  j["bases_found"] = rep.bases_found;
  emit(j, cfg);
  return 0;
}

int cmd_fpt_verify(const RunConfig& cfg) {
  int64_t degree = cfg.degree > 0 ? cfg.degree : cfg.r * cfg.h + 2;
  int64_t count = essential_hyperplane_count(cfg.p, cfg.r, cfg.h, degree);
  int64_t recheck = essential_hyperplane_count(cfg.p, cfg.r, cfg.h, degree + 2);
  ordered_json j;
  j["p"] = cfg.p;
  j["r"] = cfg.r;
  j["h"] = cfg.h;
  j["degree"] = degree;
  j["count"] = count;
  j["stable"] = count == recheck;
  emit(j, cfg);
  return 0;
}

int cmd_verify_paper() {
  int failed = run_acceptance(std::cout, env_threads());
  return failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{
      "verdicts, audits, and searches for additive bases of translatable "
      "semigroups"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  app.add_flag("--json", cfg.json, "structured JSON output (default)");
  app.add_flag("--tsv", cfg.tsv, "tab-separated key/value output");

  auto sub = [&](const std::string& name, const std::string& desc) {
    CLI::App* sc = app.add_subcommand(name, desc);
    sc->set_help_flag("--help", "print help");
    sc->fallthrough();
    return sc;
  };
  auto add_T = [&](CLI::App* sc) {
    sc->add_option("--T", cfg.t_lit, "semigroup literal")->required();
  };
  auto add_A = [&](CLI::App* sc) {
    sc->add_option("--A", cfg.a_lit, "set literal")->required();
  };

  CLI::App* sc_order = sub("order", "order of A as a basis of T");
  add_T(sc_order);
  add_A(sc_order);

  CLI::App* sc_sumset =
      sub("sumset", "Minkowski sum A+B or the h-fold sum hA");
  add_A(sc_sumset);
  sc_sumset->add_option("--B", cfg.b_lit, "second set literal");
  sc_sumset->add_option("--h", cfg.h, "fold count");

  CLI::App* sc_essential = sub(
      "essential", "reservoir and essential subsets of A up to size kmax");
  add_T(sc_essential);
  add_A(sc_essential);
  sc_essential->add_option("--kmax", cfg.kmax, "maximum subset size")
      ->check(CLI::PositiveNumber);

  CLI::App* sc_regular = sub(
      "regular", "is the finite subset F regular for the basis A of T");
  add_T(sc_regular);
  add_A(sc_regular);
  sc_regular->add_option("--F", cfg.f_lit, "finite element list")->required();

  CLI::App* sc_remove =
      sub("remove", "order of A \\ F over T, when finite");
  add_T(sc_remove);
  add_A(sc_remove);
  sc_remove->add_option("--F", cfg.f_lit, "finite element list")->required();

  CLI::App* sc_classify =
      sub("classify", "structure decomposition of T");
  add_T(sc_classify);

  CLI::App* sc_groth =
      sub("grothendieck", "difference group of T");
  add_T(sc_groth);

  CLI::App* sc_density =
      sub("density", "natural density of S inside T");
  add_T(sc_density);
  sc_density->add_option("--S", cfg.s_lit, "set literal")->required();

  CLI::App* sc_audit = sub("audit", "lemma and cap audits");
  sc_audit
      ->add_option("mode", cfg.audit_mode,
                   "twobases | nn | s1 | s2 | x1 | x2 | density-lemmas")
      ->required()
      ->check(CLI::IsMember(
          {"twobases", "nn", "s1", "s2", "x1", "x2", "density-lemmas"}));
  sc_audit->add_option("--T", cfg.t_lit, "semigroup literal");
  sc_audit->add_option("--A", cfg.a_lit, "set literal");
  sc_audit->add_option("--B", cfg.b_lit, "periodic part literal (twobases)");
  sc_audit->add_option("--F", cfg.f_lit, "finite element list");
  sc_audit->add_option("--b", cfg.elem_lit, "base element (twobases)");
  sc_audit->add_option("--h", cfg.h, "expected order (cross-checked)");
  sc_audit->add_option("--samples", cfg.battery_samples,
                       "instances per lemma (density-lemmas)");
  sc_audit->add_option("--seed", cfg.seed, "random seed (density-lemmas)");

  CLI::App* sc_search = sub(
      "search", "search for extremal removal (X) or essential-count (E) witnesses");
  sc_search->add_option("kind", cfg.search_kind, "E | X")
      ->required()
      ->check(CLI::IsMember({"E", "X"}));
  add_T(sc_search);
  sc_search->add_option("--h", cfg.h, "basis order to target")->required();
  sc_search->add_option("--k", cfg.k, "removal/essential subset size");
  sc_search->add_option("--pmax", cfg.pmax, "max tail period");
  sc_search->add_option("--wmax", cfg.wmax, "max window width");
  sc_search->add_option("--cutoff", cfg.cutoff,
                        "exhaustive window popcount cutoff");
  sc_search->add_option("--samples", cfg.samples, "random window samples");
  sc_search->add_option("--seed", cfg.seed, "random seed");

  CLI::App* sc_fpt = sub(
      "fpt-verify", "verified essential hyperplane-complement count over F_p[t]");
  sc_fpt->add_option("--p", cfg.p, "characteristic (prime)")->required();
  sc_fpt->add_option("--r", cfg.r, "block width exponent")->required();
  sc_fpt->add_option("--h", cfg.h, "target order")->required();
  sc_fpt->add_option("--D", cfg.degree, "truncation degree (default r*h+2)");

  CLI::App* sc_verify = sub(
      "verify-paper", "run the bundled verification suite; nonzero exit on any failure");
  (void)sc_verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }

  try {
    if (*sc_order) return cmd_order(cfg);
    if (*sc_sumset) return cmd_sumset(cfg);
    if (*sc_essential) return cmd_essential(cfg);
    if (*sc_regular) return cmd_regular(cfg);
    if (*sc_remove) return cmd_remove(cfg);
    if (*sc_classify) return cmd_classify(cfg);
    if (*sc_groth) return cmd_grothendieck(cfg);
    if (*sc_density) return cmd_density(cfg);
    if (*sc_audit) return cmd_audit(cfg);
    if (*sc_search) return cmd_search(cfg);
    if (*sc_fpt) return cmd_fpt_verify(cfg);
    if (*sc_verify) return cmd_verify_paper();
  } catch (const addbasis::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 4;
  } catch (const addbasis::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return 2;
  } catch (const addbasis::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return 3;
  } catch (const addbasis::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 3;
  }
  return 0;
}
