#include "pfg/report.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "pfg/catalog.hpp"
#include "pfg/group_ops.hpp"

namespace pfg {

using json = nlohmann::ordered_json;

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    case Status::HypothesesNotMet: return "hypotheses_not_met";
    case Status::BudgetExceeded: return "budget_exceeded";
  }
  return "fail";
}

namespace {

json checks_json(const CheckRecord& r) {
  json out = json::array();
  for (const auto& c : r.checks) {
    json j{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    if (!c.witness.empty()) j["witness"] = c.witness;
    out.push_back(std::move(j));
  }
  return out;
}

Status of(const CheckRecord& r) { return r.passed() ? Status::Pass : Status::Fail; }

std::string fail_suffix(const CheckRecord& r) {
  auto f = r.first_failure();
  return f ? " first failure: " + f->name : "";
}

json orders(const std::vector<Subgroup>& chain) {
  json out = json::array();
  for (const auto& s : chain) out.push_back(s.size());
  return out;
}

// Coordinate of a two-factor group equal to s, or -1.
int coordinate_of(const Subgroup& s) {
  const auto& g = s.parent();
  if (g->structure().factors.size() != 2) return -1;
  for (unsigned c = 0; c < 2; ++c)
    if (coordinate_subgroup(g, c) == s) return static_cast<int>(c);
  return -1;
}

json coordinate_json(const Subgroup& s) {
  int c = coordinate_of(s);
  return c < 0 ? json(nullptr) : json(c);
}

json limit_json(const LimitDiagnostics& l) {
  return json{{"limit_injective", l.limit_injective},
              {"verified_depth", l.verified_depth},
              {"vanishing_level", l.vanishing_level},
              {"image_indices", l.image_indices},
              {"image_open", l.image_open},
              {"image_index_bound", l.image_index_bound},
              {"witness", l.witness}};
}

void contraction_record(AnalysisRecord& r, const Endomorphism& phi) {
  auto rep = contraction(phi);
  auto a = verify_theorem_A(phi, rep);
  CheckRecord all = rep.checks;
  all.append(a);
  r.details = json{{"order", phi.group()->order()},
                   {"con", rep.con.size()},
                   {"stable_image", rep.stable_image.size()},
                   {"depth", rep.depth},
                   {"kernel_chain", orders(rep.kernel_chain)},
                   {"image_chain", orders(rep.image_chain)},
                   {"con_coordinate", coordinate_json(rep.con)},
                   {"stable_coordinate", coordinate_json(rep.stable_image)},
                   {"con_elements", rep.con.elements()},
                   {"checks", checks_json(all)}};
  r.status = of(all);
  r.summary = "|Con|=" + std::to_string(rep.con.size()) + " |stable|=" + std::to_string(rep.stable_image.size()) +
              " depth=" + std::to_string(rep.depth) + fail_suffix(all);
}

void theorem_a_tower(AnalysisRecord& r, const TowerBuild& tb) {
  auto rep = levelwise_contraction(tb.tower, tb.family);
  json levels = json::array();
  std::string con_list, st_list;
  bool ok = true;
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    const auto& c = rep.levels[k];
    const auto& a = rep.theorem_a[k];
    ok = ok && a.passed() && c.checks.passed();
    CheckRecord all = c.checks;
    all.append(a);
    json lv{{"level", k + 1},
            {"order", tb.tower.levels[k]->order()},
            {"con", c.con.size()},
            {"stable_image", c.stable_image.size()},
            {"depth", c.depth},
            {"con_coordinate", coordinate_json(c.con)},
            {"stable_coordinate", coordinate_json(c.stable_image)},
            {"checks", checks_json(all)}};
    if (k + 1 < rep.levels.size()) {
      const auto& co = rep.coherence[k];
      lv["projection_inclusion"] = co.projection_inclusion;
      lv["projection_equality"] = co.projection_equality;
      lv["stable_projection_equality"] = co.stable_projection_equality;
    }
    levels.push_back(std::move(lv));
    con_list += (k ? "," : "") + std::to_string(c.con.size());
    st_list += (k ? "," : "") + std::to_string(c.stable_image.size());
  }
  ok = ok && rep.inclusions_hold();
  r.details = json{{"tower", tb.tower.label}, {"levels", std::move(levels)}, {"limit", limit_json(rep.limit)}};
  r.status = ok ? Status::Pass : Status::Fail;
  r.summary = "|Con|=" + con_list + " |stable|=" + st_list;
}

void theorem_b(AnalysisRecord& r, const TowerBuild& tb) {
  auto rep = verify_theorem_B_tower(tb.tower, {tb.family});
  json ol = json::array();
  for (std::size_t k = 0; k < rep.o_lambda.size(); ++k) {
    const auto& o = rep.o_lambda[k];
    ol.push_back(json{{"level", k + 1},
                      {"order", o.subgroup.size()},
                      {"nilpotent", o.nilpotency.is_nilpotent},
                      {"class", o.nilpotency.nilpotency_class ? json(*o.nilpotency.nilpotency_class) : json(nullptr)},
                      {"iterate_vanishes", static_cast<bool>(rep.iterate_vanishes[k])}});
  }
  json limits = json::array();
  for (const auto& l : rep.limits) limits.push_back(limit_json(l));
  r.details = json{{"tower", tb.tower.label},
                   {"hypotheses_met", rep.hypotheses_met},
                   {"hypothesis_witness", rep.hypothesis_witness},
                   {"part_i", to_string(rep.part_i)},
                   {"part_ii", to_string(rep.part_ii)},
                   {"limits", std::move(limits)},
                   {"o_lambda", std::move(ol)},
                   {"checks", checks_json(rep.checks)}};
  if (!rep.hypotheses_met) r.status = Status::HypothesesNotMet;
  else if (rep.part_i == Verdict::Fail || rep.part_ii == Verdict::Fail) r.status = Status::Fail;
  else r.status = Status::Pass;
  r.summary = "(i) " + std::string(to_string(rep.part_i)) + ", (ii) " + std::string(to_string(rep.part_ii));
}

void record_checks(AnalysisRecord& r, const CheckRecord& c, json extra = json::object()) {
  extra["checks"] = checks_json(c);
  r.details = std::move(extra);
  r.status = of(c);
  r.summary = std::to_string(c.checks.size()) + " checks" + fail_suffix(c);
}

void shrinkind_sweep(AnalysisRecord& r, const GroupPtr& g, const Endomorphism& phi, std::uint64_t seed,
                     std::size_t budget) {
  auto cat = enumerate_subgroups(g, g->order(), budget);
  std::vector<Subgroup> ks = cat.entries;
  std::size_t sampled = 0;
  if (!cat.complete) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(g->order() - 1));
    for (int i = 0; i < 64; ++i) {
      std::vector<Elem> gens{pick(rng), pick(rng)};
      ks.push_back(closure(g, gens));
      ++sampled;
    }
  }
  std::size_t violations = 0, equalities = 0;
  json witness = nullptr;
  for (const auto& k : ks) {
    auto c = shrinkind_check(phi, k);
    if (auto e = c.find("equality_implies_coverage"); e && e->detail != "strict inequality") ++equalities;
    if (!c.passed()) {
      if (!violations) witness = k.elements();
      ++violations;
    }
  }
  r.details = json{{"subgroups", ks.size()},
                   {"catalog_complete", cat.complete},
                   {"sampled", sampled},
                   {"equality_cases", equalities},
                   {"violations", violations},
                   {"witness", witness}};
  r.status = violations ? Status::Fail : Status::Pass;
  r.summary = std::to_string(ks.size()) + " subgroups, " + std::to_string(violations) + " violations";
}

void hom_search_record(AnalysisRecord& r, const HomSearchResult& h, bool subgroup_target) {
  json sw = nullptr;
  if (h.simple_witness) {
    const auto& w = *h.simple_witness;
    sw = json{{"minimal_order", w.minimal.size()},
              {"k_order", w.k.size()},
              {"k_elements", w.k.elements()},
              {"quotient_order", w.k.index()},
              {"quotient_simple", w.quotient_simple},
              {"embeddings_into_k", w.embeddings_into_k}};
  }
  r.details = json{{"count", h.count}, {"witnesses", h.witnesses.size()}, {"nodes", h.nodes}, {"simple_witness", sw}};
  if (h.count > 0 || !subgroup_target) {
    r.status = Status::Pass;
  } else {
    bool ok = h.simple_witness && h.simple_witness->quotient_simple && h.simple_witness->embeddings_into_k == 0;
    r.status = ok ? Status::Pass : Status::Fail;
  }
  r.summary = "count=" + std::to_string(h.count);
  if (h.simple_witness)
    r.summary += " K order " + std::to_string(h.simple_witness->k.size()) + ", G/K order " +
                 std::to_string(h.simple_witness->k.index());
}

json profile_json(const CountProfile& p) {
  json out = json::object();
  for (const auto& [idx, n] : p.counts) out[std::to_string(idx)] = n;
  return out;
}

std::string profile_text(const CountProfile& p) {
  std::string s;
  for (const auto& [idx, n] : p.counts) s += (s.empty() ? "" : " ") + std::to_string(idx) + ":" + std::to_string(n);
  return s;
}

// The default node budget counts closure steps; homomorphism search keeps its
// own larger default unless a budget was set explicitly.
std::size_t search_budget(std::size_t budget) {
  return budget == kDefaultNodeBudget ? kDefaultSearchBudget : budget;
}

void execute(AnalysisRecord& r, const ResolvedAnalysis& a, std::uint64_t seed, std::size_t budget) {
  const auto& k = a.kind;
  const auto& args = a.args;
  auto G = [&](std::size_t i) { return std::get<GroupPtr>(args[i]); };
  auto E = [&](std::size_t i) { return Endomorphism(std::get<GroupHom>(args[i])); };
  auto S = [&](std::size_t i) -> const EndoSemigroup& { return std::get<EndoSemigroup>(args[i]); };
  auto K = [&](std::size_t i) -> const Subgroup& { return std::get<Subgroup>(args[i]); };
  auto P = [&](std::size_t i) -> const PrimeSet& { return std::get<PrimeSet>(args[i]); };
  auto O = [&](std::size_t i) -> const AutoSet& { return std::get<AutoSet>(args[i]); };
  auto T = [&](std::size_t i) -> const TowerBuild& { return *std::get<TowerPtr>(args[i]); };

  if (k == "contraction" || (k == "theorem_a" && std::holds_alternative<GroupPtr>(args[0]))) {
    contraction_record(r, E(args.size() - 1));
  } else if (k == "theorem_a") {
    theorem_a_tower(r, T(0));
  } else if (k == "theorem_b") {
    theorem_b(r, T(0));
  } else if (k == "splitthm") {
    auto rep = semigroup_contraction(S(1));
    record_checks(r, verify_splitthm(S(1)),
                  json{{"con", rep.con.size()}, {"stable_image", rep.stable_image.size()}, {"depth", rep.depth}});
    r.summary = "|Con|=" + std::to_string(rep.con.size()) + " |stable|=" + std::to_string(rep.stable_image.size()) +
                " " + r.summary;
  } else if (k == "regulation") {
    record_checks(r, verify_regulation(S(1), O(2)), json{{"omega", O(2).maps().size()}});
  } else if (k == "tfrelstab2") {
    record_checks(r, tfrelstab_ii_check(S(1), O(2)), json{{"omega", O(2).maps().size()}});
  } else if (k == "shrinkind") {
    if (args.size() == 3) record_checks(r, shrinkind_check(E(1), K(2)), json{{"k_order", K(2).size()}});
    else shrinkind_sweep(r, G(0), E(1), seed, budget);
  } else if (k == "o_pi") {
    auto s = o_pi(G(0), P(1));
    r.details = json{{"primes", std::vector<std::uint64_t>(P(1).begin(), P(1).end())},
                     {"order", s.size()},
                     {"index", s.index()},
                     {"elements", s.elements()}};
    r.status = Status::Pass;
    r.summary = "|O^pi|=" + std::to_string(s.size()) + " index " + std::to_string(s.index());
  } else if (k == "fewprimes") {
    std::vector<GroupHom> embeddings;
    if (args.size() == 2) {
      embeddings.push_back(std::get<GroupHom>(args[0]));
    } else {
      HomSearchOptions opts;
      opts.witness_cap = 16;
      opts.budget = search_budget(budget);
      embeddings = enumerate_homs(G(0), G(1), opts).witnesses;
    }
    if (embeddings.empty()) {
      r.status = Status::Skipped;
      r.details = json{{"embeddings", 0}};
      r.summary = "no injective homomorphism to check";
      return;
    }
    CheckRecord all;
    for (std::size_t i = 0; i < embeddings.size(); ++i)
      all.append(fewprimes_check(embeddings[i], P(args.size() - 1)), "embedding[" + std::to_string(i) + "].");
    record_checks(r, all, json{{"embeddings", embeddings.size()}});
  } else if (k == "hom_search") {
    HomSearchOptions opts;
    opts.budget = search_budget(budget);
    if (std::holds_alternative<Subgroup>(args[1])) hom_search_record(r, hom_search(G(0), K(1), opts), true);
    else hom_search_record(r, hom_search(G(0), G(1), opts), false);
  } else if (k == "typef") {
    auto n = std::get<std::uint64_t>(args[1]);
    if (std::holds_alternative<TowerPtr>(args[0])) {
      auto p = typeF_profile(T(0).tower, n, budget);
      json lv = json::array();
      std::string text;
      for (std::size_t i = 0; i < p.levels.size(); ++i) {
        lv.push_back(profile_json(p.levels[i]));
        text += (i ? " | " : "") + profile_text(p.levels[i]);
      }
      r.details = json{{"n", n}, {"levels", std::move(lv)}, {"stabilized", p.stabilized}, {"complete", p.complete}};
      r.status = !p.complete ? Status::BudgetExceeded : p.stabilized ? Status::Pass : Status::Fail;
      r.summary = text + (p.stabilized ? " (stabilized)" : " (not stabilized)");
    } else {
      auto p = count_profile(G(0), n, budget);
      r.details = json{{"n", n}, {"profile", profile_json(p)}, {"complete", p.complete}};
      r.status = p.complete ? Status::Pass : Status::BudgetExceeded;
      r.summary = profile_text(p);
    }
  } else if (k == "o_lambda") {
    auto o = o_lambda(S(1));
    r.details = json{{"order", o.subgroup.size()},
                     {"nilpotent", o.nilpotency.is_nilpotent},
                     {"class", o.nilpotency.nilpotency_class ? json(*o.nilpotency.nilpotency_class) : json(nullptr)},
                     {"elements", o.subgroup.elements()}};
    r.status = Status::Pass;
    r.summary = "|O_L|=" + std::to_string(o.subgroup.size()) + (o.nilpotency.is_nilpotent ? " nilpotent" : " not nilpotent");
  } else if (k == "lambdareslem") {
    record_checks(r, lambdareslem_check(K(1), P(2)), json{{"h_order", K(1).size()}});
  } else {
    fail(ErrorKind::ParamOutOfRange, "unknown analysis '" + k + "'");
  }
}

}  // namespace

AnalysisRecord run_analysis(const ResolvedAnalysis& a, std::uint64_t seed, std::size_t node_budget) {
  AnalysisRecord r;
  r.kind = a.kind;
  r.target = a.target;
  try {
    execute(r, a, seed, node_budget);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::SearchBudgetExceeded: r.status = Status::BudgetExceeded; break;
      case ErrorKind::PreconditionPrimes: r.status = Status::Skipped; break;
      default: r.status = Status::Fail;
    }
    r.details = json{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"witness", e.witness()}};
    r.summary = e.what();
  }
  return r;
}

Report run(const Scenario& sc, const RunConfig& cfg) {
  Report rep;
  rep.scenario = sc.options.label;
  rep.seed = cfg.seed;
  const std::size_t n = sc.analyses.size();
  rep.analyses.resize(n);
  const std::size_t budget = cfg.node_budget.value_or(sc.options.node_budget);
  OrderGuardScope guard(sc.options.order_guard);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      auto t0 = std::chrono::steady_clock::now();
      rep.analyses[i] = run_analysis(sc.analyses[i], cfg.seed + i, budget);
      if (cfg.timing)
        rep.analyses[i].ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, n));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rep;
}

json to_json(const Report& r) {
  json analyses = json::array();
  for (const auto& a : r.analyses)
    analyses.push_back(json{{"kind", a.kind},
                            {"target", a.target},
                            {"status", to_string(a.status)},
                            {"details", a.details},
                            {"ms", a.ms ? json(*a.ms) : json(nullptr)}});
  return json{{"scenario", r.scenario}, {"analyses", std::move(analyses)}, {"version", r.version}, {"seed", r.seed}};
}

std::string emit(const Report& r, Format f) {
  if (f == Format::Json) return to_json(r).dump(2) + "\n";
  std::vector<std::array<std::string, 5>> rows{{"#", "kind", "target", "status", "summary"}};
  for (std::size_t i = 0; i < r.analyses.size(); ++i) {
    const auto& a = r.analyses[i];
    std::string status(to_string(a.status));
    std::transform(status.begin(), status.end(), status.begin(), [](unsigned char c) { return std::toupper(c); });
    std::string summary = a.summary;
    if (a.ms) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " (%.1f ms)", *a.ms);
      summary += buf;
    }
    rows.push_back({std::to_string(i + 1), a.kind, a.target, status, summary});
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : rows)
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  out << "scenario: " << (r.scenario.empty() ? "(unnamed)" : r.scenario) << "  version " << r.version << "  seed "
      << r.seed << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < 4; ++c) out << row[c] << std::string(width[c] - row[c].size() + 2, ' ');
    out << row[4] << "\n";
  }
  return out.str();
}

int exit_code(const Report& r) {
  return std::any_of(r.analyses.begin(), r.analyses.end(), [](const AnalysisRecord& a) { return a.status == Status::Fail; })
             ? 1
             : 0;
}

std::string demo_scenario(std::uint64_t p, std::size_t depth) {
  return "set label = \"units_semidirect(" + std::to_string(p) + ") depth " + std::to_string(depth) + "\"\n" +
         "tower T = units_semidirect(" + std::to_string(p) + ") depth " + std::to_string(depth) + "\n" +
         "analyze theorem_a(T)\n"
         "analyze theorem_b(T)\n"
         "analyze typef(T, 2)\n";
}

}  // namespace pfg
