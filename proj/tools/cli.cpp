#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "markoff/census.hpp"
#include "markoff/certify.hpp"
#include "markoff/chebyshev.hpp"
#include "markoff/flow.hpp"
#include "markoff/polydisk.hpp"

namespace markoff::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json triple(const std::array<Residue, 3>& t) { return json::array({t[0], t[1], t[2]}); }
json signed_triple(const SurfacePoint& pt) {
  return json::array({pt.x.signed_residue(), pt.y.signed_residue(), pt.z.signed_residue()});
}

json check_json(const std::string& name, const CheckReport& r) {
  json j;
  j["name"] = name;
  j["pass"] = r.pass;
  j["checked"] = r.checked;
  j["first_failure"] = r.first_failure;
  return j;
}

GroupScope scope_of(const RunConfig& c) {
  if (c.gens == "gamma") return GroupScope::gamma;
  if (c.gens == "aut") return GroupScope::aut;
  throw UsageError("--gens must be gamma or aut");
}

CensusOptions census_options(const RunConfig& c) {
  CensusOptions o;
  o.workers = c.workers;
  return o;
}

json header(const RunConfig& c, const PadicInt& D) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = c.command;
  json alphabet = json::array();
  for (Letter l : kAllLetters) alphabet.push_back(std::string(letter_name(l)));
  j["generator_alphabet"] = alphabet;
  j["p"] = c.p;
  j["k"] = c.k;
  j["D"] = D.residue();
  j["D_expr"] = c.d;
  return j;
}

struct Payload {
  json body;
  bool pass = true;
  std::string csv;
};

Payload cmd_census(const RunConfig& c, const PadicInt& D) {
  Payload out;
  const GroupScope scope = scope_of(c);
  const auto opts = census_options(c);
  CountReport count = count_points(c.p, c.k, D, opts);
  OrbitPartition part = orbits(c.p, c.k, D, scope, opts);
  out.body["generators"] = part.generators;
  out.body["count"] = count.count;
  out.body["formula"] = count.formula ? json(*count.formula) : json(nullptr);
  out.body["formula_holds"] = count.formula_holds();
  out.body["orbit_sizes"] = part.sizes();
  out.body["transitive"] = part.transitive();
  const bool divisibility_applies = c.p % 4 == 3 && c.p > 3 && D.mod_p_power(c.k) == 0;
  if (divisibility_applies) {
    DivisibilityReport div = check_orbit_divisibility(c.p, c.k, D, opts);
    out.body["divisibility"] = div.pass;
    out.pass = div.pass;
  } else {
    out.body["divisibility"] = nullptr;
  }
  out.pass = out.pass && count.formula_holds();
  return out;
}

Payload cmd_orbits(const RunConfig& c, const PadicInt& D) {
  Payload out;
  OrbitPartition part = orbits(c.p, c.k, D, scope_of(c), census_options(c));
  out.body["generators"] = part.generators;
  out.body["total"] = part.total;
  out.body["transitive"] = part.transitive();
  json list = json::array();
  std::ostringstream csv;
  csv << "orbit,size,x,y,z\n";
  for (std::size_t i = 0; i < part.orbits.size(); ++i) {
    const Orbit& o = part.orbits[i];
    list.push_back({{"size", o.size}, {"representative", triple(o.representative)}});
    csv << i << ',' << o.size << ',' << o.representative[0] << ',' << o.representative[1] << ','
        << o.representative[2] << '\n';
  }
  out.body["orbits"] = list;
  out.csv = csv.str();
  return out;
}

Payload cmd_identities(const RunConfig& c) {
  Payload out;
  const std::uint64_t p = c.p;
  const int K = c.k;
  json suites = json::array();
  auto add = [&](const std::string& name, const CheckReport& r) {
    suites.push_back(check_json(name, r));
    out.pass = out.pass && r.pass;
  };

  CheckReport rec;
  DensePoly t0 = chebyshev_T(0, p, K), t1 = chebyshev_T(1, p, K);
  DensePoly u0 = chebyshev_U(0, p, K), u1 = chebyshev_U(1, p, K);
  for (long n = 2; n <= 200; ++n) {
    DensePoly t2 = chebyshev_T(n, p, K), u2 = chebyshev_U(n, p, K);
    rec.record(t2 == t1.shift() - t0 && u2 == u1.shift() - u0, "recurrence at N=" + std::to_string(n));
    rec.record(chebyshev_T(-n, p, K) == t2 && chebyshev_U(-n - 2, p, K) == (-1) * u2,
               "symmetry at N=" + std::to_string(n));
    t0 = t1, t1 = t2, u0 = u1, u1 = u2;
  }
  add("recurrences-and-symmetries", rec);

  CheckReport entries;
  std::vector<PadicInt> xs;
  for (std::uint64_t r = 0; r < p; ++r) xs.emplace_back(p, K, static_cast<std::int64_t>(r));
  for (const auto& x : xs) {
    for (std::uint64_t n = 0; n <= 200; ++n) {
      Mat2 m = companion_power(x, n);
      const long N = static_cast<long>(n);
      entries.record(m.a11 == eval_U(N, x) && m.a12 == -eval_U(N - 1, x) && m.a21 == eval_U(N - 1, x) &&
                         m.a22 == -eval_U(N - 2, x) && m.det().residue() == 1,
                     "companion entries at x=" + x.to_string() + ", N=" + std::to_string(n));
    }
  }
  add("companion-power-entries", entries);
  add("power-sum", verify_power_sum_identity(p, K, xs));

  if (K >= 3) {
    std::mt19937_64 rng(p);
    std::vector<PadicInt> us(xs);
    std::uniform_int_distribution<std::int64_t> pick(0, static_cast<std::int64_t>(p * p) - 1);
    for (int i = 0; i < 100; ++i) us.emplace_back(p, K, pick(rng));
    CheckReport est;
    for (const auto& x0 : xs) {
      if (p <= 3 && border_sign(x0) != 0) continue;
      est.merge(verify_companion_estimates(x0, us));
    }
    add("companion-estimates", est);
  }
  out.body["suites"] = suites;
  return out;
}

Vec2 bend(const Vec2& w) {
  const std::uint64_t p = w[0].prime();
  PadicInt pp(p, w[0].precision(), static_cast<std::int64_t>(p));
  return {w[0] + pp * (w[1] * w[1] + 1), w[1] + pp * w[0] * w[1] * 3};
}

Payload cmd_flow_check(const RunConfig& c, const PadicInt& D) {
  Payload out;
  const std::uint64_t p = c.p;
  const int k_out = c.k;
  const int inner = flow_input_precision(p, k_out);
  const int wide = std::max({flow_input_precision(p, inner), flow_input_precision(p, k_out, 2 * k_out + 4)}) + 1;
  modular::prime_power(p, wide);  // throws when the samples cannot be represented
  std::mt19937_64 rng(p * 1000 + static_cast<std::uint64_t>(k_out));
  const auto probes = residue_probes(p, 2);
  json maps = json::array();

  auto suite = [&](const std::string& label, const PointMap& f, int k, int prec, int n_iter, int n_samples) {
    std::uniform_int_distribution<Residue> pick(0, modular::prime_power(p, prec) - 1);
    auto vec = [&] { return Vec2{PadicInt::from_residue(p, prec, pick(rng)), PadicInt::from_residue(p, prec, pick(rng))}; };
    std::uniform_int_distribution<std::int64_t> tpick(0, 1'000'000'000);
    std::vector<Vec2> ws;
    std::vector<FlowSample> p2, trunc;
    std::vector<AdditivitySample> adds;
    for (int i = 0; i < 3; ++i) ws.push_back(vec());
    for (int i = 0; i < n_samples; ++i) {
      p2.push_back({PadicInt(p, 2, tpick(rng)), vec()});
      trunc.push_back({PadicInt(p, k, tpick(rng)), vec()});
      adds.push_back({PadicInt(p, k, tpick(rng)), PadicInt(p, inner, tpick(rng)), vec()});
    }
    json m;
    m["map"] = label;
    m["k_out"] = k;
    json checks = json::array();
    auto add = [&](const std::string& name, const CheckReport& r) {
      checks.push_back(check_json(name, r));
      out.pass = out.pass && r.pass;
    };
    add("iterates", verify_flow_iterates(f, ws, n_iter, k));
    if (prec >= flow_input_precision(p, inner)) add("additivity", verify_flow_additivity(f, adds, k));
    add("mod-p2", verify_flow_mod_p2(f, p2));
    if (prec >= flow_input_precision(p, k, 2 * k + 4)) add("truncation", verify_flow_truncation(f, trunc, k, 4));
    m["checks"] = checks;
    maps.push_back(m);
  };

  suite("u + p(v^2 + 1), v + 3puv", PointMap::identity_mod_p(p, bend, probes), k_out, wide, 20, 50);

  // A conjugated stabilizer from the certification pipeline, when one exists.
  if (c.k >= 3 && p > 3) {
    MinimalityCertificate cert = certify_minimal_polydisk(p, c.k, D);
    if (cert.pass) {
      const PadicInt d = D.truncate(c.k);
      auto lift = [&](Residue r) { return PadicInt::from_residue(p, c.k, r); };
      SurfacePoint base = SurfacePoint::make(lift(cert.base[0]), lift(cert.base[1]), lift(cert.base[2]), d);
      PolydiskChart chart = PolydiskChart::parametrize(base);
      if (cert.recentred) chart = recentre(chart);
      PointMap f = chart_point_map(chart, AutWord::parse(cert.subdisk_f));
      suite("chart " + cert.subdisk_f, f, 2, chart.chart_precision(), 6, 10);
    } else {
      out.body["chart_map"] = "unavailable: " + cert.failure;
    }
  }
  out.body["maps"] = maps;
  return out;
}

bool lemma_applies(const SurfacePoint& b, ExpansionLemma l) {
  if (!partials(b)[0].is_unit()) return false;
  switch (l) {
    case ExpansionLemma::parab_f:
      return border_sign(b.x) != 0;
    case ExpansionLemma::g_and_h:
      return border_sign(b.y) == 0 && border_sign(b.z) == 0;
    case ExpansionLemma::nonpara_f:
      return border_sign(b.x) == 0;
  }
  return false;
}

Payload cmd_expansions(const RunConfig& c, const PadicInt& D) {
  Payload out;
  if (c.k < 3) throw UsageError("expansions need --k >= 3");
  std::vector<ExpansionLemma> lemmas;
  if (c.lemma == "all") {
    lemmas = {ExpansionLemma::parab_f, ExpansionLemma::g_and_h, ExpansionLemma::nonpara_f};
  } else if (auto l = parse_lemma(c.lemma)) {
    lemmas = {*l};
  } else {
    throw UsageError("--lemma must be parab-f, g-and-h, nonpara-f or all");
  }
  PointSet pts = enumerate_points(c.p, 1, D);
  json charts = json::array();
  for (auto lemma : lemmas) {
    std::optional<SurfacePoint> base;
    try {
      SurfacePoint s = find_special_point(c.p, c.k, D);
      if (lemma_applies(s, lemma)) base = s;
    } catch (const MathError&) {
    }
    for (std::size_t i = 0; !base && i < pts.size(); ++i) {
      SurfacePoint s = lift_residue_point(c.p, c.k, pts.decode(pts.codes[i]), D);
      if (lemma_applies(s, lemma)) base = s;
    }
    json entry;
    entry["lemma"] = std::string(lemma_name(lemma));
    if (!base) {
      entry["skipped"] = "no point of X_D*(Z/p) satisfies the lemma's residue conditions";
      charts.push_back(entry);
      continue;
    }
    PolydiskChart chart = PolydiskChart::parametrize(*base);
    auto samples = expansion_samples(c.p, chart.chart_precision(), 100, c.p);
    ExpansionReport r = verify_stabilizer_expansions(chart, lemma, samples);
    entry["base"] = signed_triple(*base);
    json consts = json::object();
    for (const auto& [name, value] : r.constants) consts[name] = value;
    entry["constants"] = consts;
    entry["samples"] = samples.size();
    entry["pass"] = r.main.pass;
    entry["checked"] = r.main.checked;
    entry["first_failure"] = r.main.first_failure;
    if (r.alternative) {
      entry["alternative_z_reading"] = {{"pass", r.alternative->pass}, {"checked", r.alternative->checked}};
    }
    out.pass = out.pass && r.main.pass;
    charts.push_back(entry);
  }
  out.body["proxy"] = "pointwise on all residues mod p and 100 random residues mod p^2";
  out.body["charts"] = charts;
  return out;
}

Payload cmd_certify(const RunConfig& c, const PadicInt& D) {
  Payload out;
  CertifyOptions opts;
  opts.budget_words = c.budget_words;
  opts.optimized_exponent = c.optimized_exponent;
  MinimalityCertificate cert = certify_minimal_polydisk(c.p, c.k, D, opts);
  out.body["certificate"] = json::parse(certificate_to_json(cert));
  // Replay re-derives a completed certificate; a failed one has nothing to replay.
  out.body["replay"] = cert.pass ? json(replay_certificate(cert).pass) : json(nullptr);
  out.pass = cert.pass;
  return out;
}

Payload cmd_xd_check(const RunConfig& c, const PadicInt& D) {
  Payload out;
  XDReport r = check_XD(c.p, c.k, D, c.budget_words);
  out.body["found"] = r.found;
  out.body["points_checked"] = r.points_checked;
  out.body["words_checked"] = r.words_checked;
  if (r.found) {
    out.body["witness"] = {{"point", r.witness_point}, {"word", r.witness_word}, {"value_mod_p2", r.value_mod_p2}};
  }
  MinimalityCertificate cert = certify_minimal_polydisk(c.p, c.k, D);
  out.body["certify_passes"] = cert.pass;
  out.body["note"] = "exploratory: a negative result is a valid outcome";
  return out;
}

Payload cmd_catalog(const RunConfig& c, const PadicInt& D) {
  Payload out;
  std::vector<CatalogCase> cases;
  if (c.catalog_case == "all") {
    cases = {CatalogCase::sqrtD, CatalogCase::d4_cage, CatalogCase::d2, CatalogCase::d3_sqrt2, CatalogCase::golden};
  } else if (auto cc = parse_catalog_case(c.catalog_case)) {
    cases = {*cc};
  } else {
    throw UsageError("--case must be sqrtD, D4-cage, D2, D3-sqrt2, golden or all");
  }
  json list = json::array();
  for (auto cc : cases) {
    json j;
    j["case"] = std::string(catalog_case_name(cc));
    try {
      json entries = json::array();
      for (const auto& e : finite_orbit_catalog(c.p, c.k, cc, D.signed_residue())) {
        entries.push_back({{"label", e.label},
                           {"point", e.point},
                           {"D", e.D},
                           {"expected", e.expected ? json(*e.expected) : json(nullptr)},
                           {"gamma_size", e.gamma_size},
                           {"aut_size", e.aut_size},
                           {"gamma_size_by_precision", e.gamma_size_by_precision},
                           {"matches", e.matches()},
                           {"note", e.note}});
        out.pass = out.pass && e.matches();
      }
      j["available"] = true;
      j["entries"] = entries;
    } catch (const MathError& e) {
      j["available"] = false;
      j["reason"] = e.what();
    }
    list.push_back(j);
  }
  out.body["cases"] = list;
  return out;
}

void validate(const RunConfig& c) {
  if (c.p < 3 || !modular::is_prime(c.p)) throw UsageError("--p must be an odd prime");
  if (c.k < 1) throw UsageError("--k must be positive");
  if (c.budget_words < 1) throw UsageError("--budget-words must be positive");
  if (c.workers < 1) throw UsageError("--workers must be positive");
  modular::prime_power(c.p, c.k);
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    validate(config);
    RunConfig c = config;
    if (c.command == "catalog" && c.d == "0") c.d = "1";  // the sqrtD case needs a square
    const PadicInt D = parse_d_expression(c.d, c.p, c.k);
    json report = header(c, D);
    Payload payload;
    if (c.command == "census") {
      payload = cmd_census(c, D);
    } else if (c.command == "orbits") {
      payload = cmd_orbits(c, D);
    } else if (c.command == "identities") {
      payload = cmd_identities(c);
    } else if (c.command == "flow-check") {
      payload = cmd_flow_check(c, D);
    } else if (c.command == "expansions") {
      payload = cmd_expansions(c, D);
    } else if (c.command == "certify") {
      payload = cmd_certify(c, D);
    } else if (c.command == "xd-check") {
      payload = cmd_xd_check(c, D);
    } else if (c.command == "catalog") {
      payload = cmd_catalog(c, D);
    } else {
      throw UsageError("unknown command '" + c.command + "'");
    }
    for (auto& [key, value] : payload.body.items()) report[key] = value;
    report["verdict"] = payload.pass ? "pass" : "fail";
    result.report = report.dump(2);
    result.csv = payload.csv;
    result.exit_code = payload.pass ? kExitPass : kExitMathFailure;
  } catch (const UsageError& e) {
    result.exit_code = kExitUsage;
    result.error = e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = kExitUsage;
    result.error = e.what();
  } catch (const BudgetError& e) {
    result.exit_code = kExitUsage;
    result.error = e.what();
  } catch (const MathError& e) {
    result.exit_code = kExitUsage;
    result.error = e.what();
  }
  return result;
}

void write_outputs(const RunConfig& config, const RunResult& result) {
  if (!result.report.empty()) {
    if (config.out.empty()) {
      std::cout << result.report << '\n';
    } else {
      std::ofstream f(config.out);
      if (!f) throw std::runtime_error("cannot write " + config.out);
      f << result.report << '\n';
    }
  }
  if (!config.csv.empty() && !result.csv.empty()) {
    std::ofstream f(config.csv);
    if (!f) throw std::runtime_error("cannot write " + config.csv);
    f << result.csv;
  }
}

}  // namespace markoff::cli
