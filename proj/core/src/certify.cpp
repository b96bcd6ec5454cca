#include "markoff/certify.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "markoff/census.hpp"
#include "markoff/chebyshev.hpp"
#include "markoff/flow.hpp"

namespace markoff {

namespace {

using json = nlohmann::ordered_json;

struct PairSpec {
  Letter a, b;
  int coord;  // coordinate whose companion matrix the pair raises to a power
};
constexpr std::array<PairSpec, 3> kPairs = {{{Letter::sy, Letter::sz, 0}, {Letter::sz, Letter::sx, 1},
                                             {Letter::sx, Letter::sy, 2}}};

std::array<Residue, 3> residues(const SurfacePoint& pt) { return {pt.x.residue(), pt.y.residue(), pt.z.residue()}; }

SurfacePoint from_residues(std::uint64_t p, int K, const std::array<Residue, 3>& r, const PadicInt& D) {
  return SurfacePoint::make(PadicInt::from_residue(p, K, r[0]), PadicInt::from_residue(p, K, r[1]),
                            PadicInt::from_residue(p, K, r[2]), D);
}

std::optional<StrictMove> try_move(const SurfacePoint& pt, const AutWord& w, const char* source) {
  if (w.empty()) return std::nullopt;
  DistClass d = dist(pt, apply_word(w, pt, GroupScope::gamma));
  if (d.exponent == 1 && !d.indistinguishable()) return StrictMove{w, d, source};
  return std::nullopt;
}

// The power of a Vieta pair that stabilizes the level 1 polydisk of pt.
AutWord stabilizing_power(const SurfacePoint& pt, const PairSpec& pair) {
  const std::uint64_t p = pt.prime();
  if (border_sign(pt.coord(pair.coord)) != 0) return pair_power(pair.a, pair.b, p);
  return pair_power(pair.a, pair.b, (p * p - 1) / 4);
}

std::uint64_t half_exponent(const PadicInt& centre_coord, bool optimized) {
  const std::uint64_t p = centre_coord.prime();
  if (!optimized) return (p * p - 1) / 4;
  std::uint64_t r = rotation_order(centre_coord);
  return r % 2 == 0 ? r / 2 : r;
}

json triple_json(const std::array<Residue, 3>& t) { return json::array({t[0], t[1], t[2]}); }
json pair_json(const std::array<Residue, 2>& t) { return json::array({t[0], t[1]}); }

Vec2 vec_at(std::uint64_t p, int k, const std::array<Residue, 2>& r) {
  return {PadicInt(p, k, static_cast<std::int64_t>(r[0])), PadicInt(p, k, static_cast<std::int64_t>(r[1]))};
}

struct SubdiskResult {
  MinimalityDet det;
};

MinimalityDet run_subdisk(const PolydiskChart& chart, const std::string& kind, const std::string& f_word,
                          const std::string& g_word, const std::array<Residue, 2>& witness) {
  PointMap f = chart_point_map(chart, AutWord::parse(f_word));
  PointMap g = chart_point_map(chart, AutWord::parse(g_word));
  Vec2 w0 = vec_at(chart.prime(), chart.chart_precision(), witness);
  if (kind == "twisted") return twisted_minimality_det(f, g, w0);
  return local_minimality_det(f, g, w0);
}

std::array<Residue, 2> vec_residues(const Vec2& v) { return {v[0].residue(), v[1].residue()}; }

}  // namespace

SurfacePoint lift_residue_point(std::uint64_t p, int K, const Triple& t, const PadicInt& D) {
  std::array<PadicInt, 3> c{PadicInt(p, K, static_cast<std::int64_t>(t[0])),
                            PadicInt(p, K, static_cast<std::int64_t>(t[1])),
                            PadicInt(p, K, static_cast<std::int64_t>(t[2]))};
  auto d = partials(c[0], c[1], c[2]);
  int s = 0;
  while (s < 3 && !d[s].is_unit()) ++s;
  if (s == 3) throw MathError("singular point");
  const PadicInt& a = c[(s + 1) % 3];
  const PadicInt& b = c[(s + 2) % 3];
  const PadicInt coeffs[] = {a * a + b * b - D, -(a * b), PadicInt(p, K, 1)};
  c[s] = newton_solve(coeffs, c[s]);
  return SurfacePoint::make(c[0], c[1], c[2], D);
}

std::vector<AutWord> gamma_words(int max_len) {
  std::vector<AutWord> out{AutWord{}};
  std::vector<std::vector<Letter>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : layer) {
      for (auto l : kVietaLetters) {
        if (!w.empty() && w.back() == l) continue;
        auto ext = w;
        ext.push_back(l);
        out.emplace_back(ext);
        next.push_back(std::move(ext));
      }
    }
    layer = std::move(next);
  }
  return out;
}

SurfacePoint find_special_point(std::uint64_t p, int precision, const PadicInt& D) {
  if (p <= 3) throw MathError("no special point recipe: p must exceed 3");
  const PadicInt d = D.truncate(std::min(precision, D.precision()));
  auto n = [&](std::int64_t v) { return PadicInt(p, d.precision(), v); };
  const PadicInt dm4 = d - 4;
  if (p == 5 && d.mod_p_power(1) == 3) {
    return SurfacePoint::make(sqrt(dm4), n(2), n(0), d);
  }
  if (legendre(dm4) != 1) throw MathError("no special point recipe: (D-4/p) != 1");
  const PadicInt r = sqrt(dm4);
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(p); ++t) {
    PadicInt y = r + t;
    PadicInt z = n(t);
    bool ok = !(y * y - 4).truncate(1).is_zero() && !(z * z - 4).truncate(1).is_zero() &&
              !(n(4) - z * y).truncate(1).is_zero();
    if (ok) return SurfacePoint::make(n(2), y, z, d);
  }
  throw MathError("no special point recipe: every t is excluded");
}

StrictMove strict_move_search(const SurfacePoint& pt, int budget) {
  if (pt.precision() < 2) throw MathError("strict move search needs precision >= 2");
  for (const auto& pair : kPairs) {
    if (border_sign(pt.coord(pair.coord)) == 0) continue;
    if (auto m = try_move(pt, stabilizing_power(pt, pair), "pair-power")) return *m;
  }
  for (const auto& pair : kPairs) {
    if (border_sign(pt.coord(pair.coord)) != 0) continue;
    if (auto m = try_move(pt, stabilizing_power(pt, pair), "pair-power")) return *m;
  }
  for (const auto& alpha : gamma_words(std::min(budget, 3))) {
    if (alpha.empty()) continue;
    SurfacePoint moved = apply_word(alpha, pt, GroupScope::gamma);
    for (const auto& pair : kPairs) {
      AutWord w = alpha.inverse() * stabilizing_power(moved, pair) * alpha;
      if (auto m = try_move(pt, w, "conjugated-power")) return *m;
    }
  }
  for (const auto& w : gamma_words(budget)) {
    if (auto m = try_move(pt, w, "word-search")) return *m;
  }
  throw MathError("no strict move found within " + std::to_string(budget) + " letters");
}

ResidualReport residual_transitivity(const PolydiskChart& chart, std::span<const AutWord> gens,
                                     const std::optional<AutWord>& extra) {
  const std::size_t n = chart.prime() * chart.prime();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::vector<AutWord> all(gens.begin(), gens.end());
  if (extra) all.push_back(*extra);
  for (const auto& w : all) {
    auto table = chart_table_mod_p(chart, w);
    for (std::size_t i = 0; i < n; ++i) parent[find(i)] = find(table[i]);
  }
  std::vector<std::uint64_t> sizes(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++sizes[find(i)];
  ResidualReport out;
  for (auto s : sizes) {
    if (s) out.orbit_sizes.push_back(s);
  }
  std::sort(out.orbit_sizes.rbegin(), out.orbit_sizes.rend());
  out.transitive = out.orbit_sizes.size() == 1;
  return out;
}

MinimalityCertificate certify_minimal_polydisk(std::uint64_t p, int K, const PadicInt& D,
                                               const CertifyOptions& opts) {
  MinimalityCertificate cert;
  cert.p = p;
  cert.K = K;
  const PadicInt d = D.truncate(std::min(K, D.precision()));
  cert.D = d.residue();
  std::string stage = "hypotheses";
  try {
    if (p <= 3) throw MathError("certification needs p > 3");
    if (K < 3) throw MathError("certification needs K >= 3");
    if (d.precision() < K) throw MathError("D is known to fewer than K digits");
    if (p == 5 && d.mod_p_power(1) == 3) {
      cert.route = "p5-exceptional";
    } else if (legendre(d - 4) == 1) {
      cert.route = "special-point";
    } else if (d.mod_p_power(2) == 0) {
      cert.route = "d-zero";
    } else {
      throw MathError("parameters outside the theorem: need D = 0 mod p^2 or (D-4/p) = 1");
    }

    stage = "base-point";
    SurfacePoint base = [&] {
      if (cert.route != "d-zero") return find_special_point(p, K, d);
      PointSet pts = enumerate_points(p, 1, d);
      for (auto code : pts.codes) {
        Triple t = pts.decode(code);
        SurfacePoint pt = lift_residue_point(p, K, t, d);
        if (partials(pt)[0].is_unit() && border_sign(pt.y) == 0 && border_sign(pt.z) == 0) return pt;
      }
      throw MathError("no point with a unit x-partial and y, z away from +-2");
    }();
    cert.base = residues(base);

    stage = "chart";
    PolydiskChart chart = PolydiskChart::parametrize(base, Coord::x);
    if (cert.route != "p5-exceptional") {
      chart = recentre(chart);
      cert.recentred = true;
    }
    cert.centre = residues(chart.base());

    stage = "strict-move";
    StrictMove move = strict_move_search(chart.base(), opts.budget_words);
    cert.strict_word = move.word.to_string();
    cert.strict_exponent = move.dist.exponent;
    cert.strict_source = move.source;
    cert.strict_image = residues(apply_word(move.word, chart.base()));

    stage = "residual-transitivity";
    if (cert.route == "p5-exceptional") {
      cert.residual_words = {"(sy sz)^5", "(sz sx)^5", "(sx sy)^6"};
      cert.subdisk_kind = "twisted";
      cert.subdisk_f = "(sz sx)^25";
      cert.subdisk_g = "(sx sy)^6";
      cert.witness = {0, 0};
    } else {
      const std::uint64_t eg = half_exponent(chart.base().y, opts.optimized_exponent);
      const std::uint64_t eh = half_exponent(chart.base().z, opts.optimized_exponent);
      cert.residual_words = {pair_power(Letter::sz, Letter::sx, eg).to_string(),
                             pair_power(Letter::sx, Letter::sy, eh).to_string()};
      cert.subdisk_kind = "local";
      cert.subdisk_f = pair_power(Letter::sz, Letter::sx, eg * p).to_string();
      cert.subdisk_g = pair_power(Letter::sx, Letter::sy, eh * p).to_string();
      cert.witness = {1, 1};
    }
    cert.residual_words.push_back(cert.strict_word);
    std::vector<AutWord> words;
    for (const auto& w : cert.residual_words) words.push_back(AutWord::parse(w));
    ResidualReport residual = residual_transitivity(chart, words);
    cert.residual_orbit_sizes = residual.orbit_sizes;
    cert.residual_transitive = residual.transitive;
    if (!residual.transitive) throw MathError("chart maps are not transitive on (Z/p)^2");

    stage = "minimal-subdisk";
    MinimalityDet det = run_subdisk(chart, cert.subdisk_kind, cert.subdisk_f, cert.subdisk_g, cert.witness);
    cert.col1 = vec_residues(det.col1);
    cert.col2 = vec_residues(det.col2);
    cert.det = det.det.residue();
    cert.det_unit = det.unit;
    if (!det.unit) throw MathError("minimality determinant is not a unit");

    cert.pass = true;
  } catch (const std::exception& e) {
    cert.pass = false;
    cert.failed_stage = stage;
    cert.failure = e.what();
  }
  return cert;
}

std::string certificate_to_json(const MinimalityCertificate& c, int indent) {
  json j;
  j["p"] = c.p;
  j["K"] = c.K;
  j["D"] = c.D;
  j["route"] = c.route;
  j["base_point"] = triple_json(c.base);
  j["chart"] = {{"solved", "x"}, {"centre", triple_json(c.centre)}, {"recentred", c.recentred}};
  j["strict_move"] = {{"word", c.strict_word},
                      {"dist_exponent", c.strict_exponent},
                      {"source", c.strict_source},
                      {"image", triple_json(c.strict_image)}};
  j["residual"] = {{"words", c.residual_words},
                   {"orbit_sizes", c.residual_orbit_sizes},
                   {"transitive", c.residual_transitive}};
  j["minimal_subdisk"] = {{"kind", c.subdisk_kind}, {"f", c.subdisk_f},           {"g", c.subdisk_g},
                          {"witness", pair_json(c.witness)}, {"col1", pair_json(c.col1)}, {"col2", pair_json(c.col2)},
                          {"det", c.det},           {"unit", c.det_unit}};
  j["verdict"] = c.pass ? "pass" : "fail";
  j["failed_stage"] = c.failed_stage;
  j["failure"] = c.failure;
  return j.dump(indent);
}

MinimalityCertificate certificate_from_json(const std::string& text) {
  json j = json::parse(text);
  MinimalityCertificate c;
  c.p = j.at("p").get<std::uint64_t>();
  c.K = j.at("K").get<int>();
  c.D = j.at("D").get<Residue>();
  c.route = j.at("route").get<std::string>();
  c.base = j.at("base_point").get<std::array<Residue, 3>>();
  const auto& chart = j.at("chart");
  c.centre = chart.at("centre").get<std::array<Residue, 3>>();
  c.recentred = chart.at("recentred").get<bool>();
  const auto& sm = j.at("strict_move");
  c.strict_word = sm.at("word").get<std::string>();
  c.strict_exponent = sm.at("dist_exponent").get<int>();
  c.strict_source = sm.at("source").get<std::string>();
  c.strict_image = sm.at("image").get<std::array<Residue, 3>>();
  const auto& rs = j.at("residual");
  c.residual_words = rs.at("words").get<std::vector<std::string>>();
  c.residual_orbit_sizes = rs.at("orbit_sizes").get<std::vector<std::uint64_t>>();
  c.residual_transitive = rs.at("transitive").get<bool>();
  const auto& md = j.at("minimal_subdisk");
  c.subdisk_kind = md.at("kind").get<std::string>();
  c.subdisk_f = md.at("f").get<std::string>();
  c.subdisk_g = md.at("g").get<std::string>();
  c.witness = md.at("witness").get<std::array<Residue, 2>>();
  c.col1 = md.at("col1").get<std::array<Residue, 2>>();
  c.col2 = md.at("col2").get<std::array<Residue, 2>>();
  c.det = md.at("det").get<Residue>();
  c.det_unit = md.at("unit").get<bool>();
  c.pass = j.at("verdict").get<std::string>() == "pass";
  c.failed_stage = j.at("failed_stage").get<std::string>();
  c.failure = j.at("failure").get<std::string>();
  return c;
}

CheckReport replay_certificate(const MinimalityCertificate& c) {
  CheckReport report;
  try {
    const PadicInt D = PadicInt::from_residue(c.p, c.K, c.D);
    SurfacePoint base = from_residues(c.p, c.K, c.base, D);
    PolydiskChart chart = PolydiskChart::parametrize(base, Coord::x);
    if (c.recentred) chart = recentre(chart);
    report.record(residues(chart.base()) == c.centre, "chart centre differs");

    AutWord gamma = AutWord::parse(c.strict_word);
    SurfacePoint img = apply_word(gamma, chart.base(), GroupScope::gamma);
    report.record(dist(chart.base(), img).exponent == c.strict_exponent, "strict move distance differs");
    report.record(residues(img) == c.strict_image, "strict move image differs");

    std::vector<AutWord> words;
    for (const auto& w : c.residual_words) words.push_back(AutWord::parse(w));
    ResidualReport residual = residual_transitivity(chart, words);
    report.record(residual.orbit_sizes == c.residual_orbit_sizes, "residual orbit sizes differ");
    report.record(residual.transitive == c.residual_transitive, "residual verdict differs");

    MinimalityDet det = run_subdisk(chart, c.subdisk_kind, c.subdisk_f, c.subdisk_g, c.witness);
    report.record(vec_residues(det.col1) == c.col1 && vec_residues(det.col2) == c.col2, "subdisk columns differ");
    report.record(det.det.residue() == c.det && det.unit == c.det_unit, "subdisk determinant differs");

    bool verdict = c.strict_exponent == 1 && c.residual_transitive && c.det_unit;
    report.record(verdict == c.pass, "overall verdict is inconsistent with the recorded stages");
  } catch (const std::exception& e) {
    report.record(false, std::string("replay failed: ") + e.what());
  }
  return report;
}

XDReport check_XD(std::uint64_t p, int K, const PadicInt& D, int budget, const std::optional<SurfacePoint>& start) {
  if (K < 3) throw MathError("the XD check needs K >= 3");
  const PadicInt d = D.truncate(std::min(K, D.precision()));
  std::vector<SurfacePoint> pts;
  if (start) {
    pts.push_back(start->truncate(std::min(K, start->precision())));
  } else {
    PointSet set = enumerate_points(p, 1, d);
    for (auto code : set.codes) pts.push_back(lift_residue_point(p, K, set.decode(code), d));
  }
  const auto words = gamma_words(budget);
  const Residue target = d.mod_p_power(2);
  XDReport out;
  for (const auto& pt : pts) {
    ++out.points_checked;
    for (const auto& alpha : words) {
      ++out.words_checked;
      SurfacePoint q = apply_word(alpha, pt, GroupScope::gamma);
      PadicInt v = eval_P(chebyshev_Tp(q.x), chebyshev_Tp(q.y), chebyshev_Tp(q.z));
      if (v.mod_p_power(2) != target) {
        out.found = true;
        out.witness_point = {pt.x.signed_residue(), pt.y.signed_residue(), pt.z.signed_residue()};
        out.witness_word = alpha.to_string();
        out.value_mod_p2 = static_cast<std::int64_t>(v.mod_p_power(2));
        return out;
      }
    }
  }
  return out;
}

}  // namespace markoff
