#include "markoff/polydisk.hpp"

#include <random>

#include "markoff/chebyshev.hpp"

namespace markoff {

namespace {

SurfacePoint with_coords(const SurfacePoint& like, Coord solved, const std::array<int, 2>& free, const PadicInt& s,
                         const PadicInt& a, const PadicInt& b) {
  std::array<const PadicInt*, 3> slots{};
  slots[static_cast<int>(solved)] = &s;
  slots[free[0]] = &a;
  slots[free[1]] = &b;
  return SurfacePoint{*slots[0], *slots[1], *slots[2], like.D};
}

bool congruent_vec(const Vec2& a, const Vec2& b, int k) { return a[0].congruent(b[0], k) && a[1].congruent(b[1], k); }

std::string vec_str(const Vec2& a) {
  return "(" + std::to_string(a[0].residue()) + ", " + std::to_string(a[1].residue()) + ")";
}

PadicInt num(const PadicInt& like, std::int64_t v) { return PadicInt(like.prime(), like.precision(), v); }

}  // namespace

std::string_view coord_name(Coord c) {
  switch (c) {
    case Coord::x:
      return "x";
    case Coord::y:
      return "y";
    case Coord::z:
      return "z";
  }
  return "?";
}

PolydiskChart::PolydiskChart(SurfacePoint base, Coord solved) : base_(std::move(base)), solved_(solved) {
  switch (solved) {
    case Coord::x:
      free_ = {1, 2};
      break;
    case Coord::y:
      free_ = {0, 2};
      break;
    case Coord::z:
      free_ = {0, 1};
      break;
  }
}

PolydiskChart PolydiskChart::parametrize(const SurfacePoint& base, Coord solved) {
  if (base.precision() < 2) throw MathError("a chart needs point precision >= 2");
  auto d = partials(base);
  if (!d[static_cast<int>(solved)].is_unit()) {
    throw MathError("no chart: partial in " + std::string(coord_name(solved)) + " vanishes mod p");
  }
  return PolydiskChart(base, solved);
}

PadicInt PolydiskChart::xi(const PadicInt& a, const PadicInt& b) const {
  const int k = std::min(a.precision(), b.precision());
  const PadicInt D = base_.D.truncate(std::min(k, base_.D.precision()));
  // s^2 - (ab) s + (a^2 + b^2 - D) = 0, whichever coordinate s is.
  const PadicInt coeffs[] = {a * a + b * b - D, -(a * b), num(a, 1)};
  return newton_solve(coeffs, base_.coord(static_cast<int>(solved_)));
}

SurfacePoint PolydiskChart::psi(const Vec2& uv) const {
  const int k = precision();
  PadicInt a = base_.coord(free_[0]) + mul_by_p_power(uv[0], 1);
  PadicInt b = base_.coord(free_[1]) + mul_by_p_power(uv[1], 1);
  a = a.truncate(std::min(a.precision(), k));
  b = b.truncate(std::min(b.precision(), k));
  return with_coords(base_, solved_, free_, xi(a, b), a, b);
}

bool PolydiskChart::contains(const SurfacePoint& pt) const {
  for (int i = 0; i < 3; ++i) {
    if (!pt.coord(i).congruent(base_.coord(i), 1)) return false;
  }
  return true;
}

Vec2 PolydiskChart::psi_inverse(const SurfacePoint& pt) const {
  if (!contains(pt)) throw MathError("leaves polydisk");
  const int k = std::min(pt.precision(), precision());
  auto chart_coord = [&](int i) { return div_by_p_power((pt.coord(i) - base_.coord(i)).truncate(k), 1); };
  return {chart_coord(free_[0]), chart_coord(free_[1])};
}

Vec2 chart_apply(const PolydiskChart& chart, const AutWord& w, const Vec2& uv) {
  return chart.psi_inverse(apply_word(w, chart.psi(uv)));
}

PointMap chart_point_map(const PolydiskChart& chart, const AutWord& w) {
  const std::uint64_t p = chart.prime();
  const int k = chart.chart_precision();
  MapFn fn = [chart, w](const Vec2& uv) { return chart_apply(chart, w, uv); };
  auto at = [&](std::int64_t u, std::int64_t v) { return fn(Vec2{PadicInt(p, k, u), PadicInt(p, k, v)}); };
  Vec2 b = at(0, 0);
  Vec2 e1 = at(1, 0), e2 = at(0, 1);
  Mat2 A{(e1[0] - b[0]).truncate(1), (e2[0] - b[0]).truncate(1), (e1[1] - b[1]).truncate(1),
         (e2[1] - b[1]).truncate(1)};
  Vec2 b1{b[0].truncate(1), b[1].truncate(1)};
  auto probes = residue_probes(p, k);
  if (A == Mat2::identity(p, 1) && b1[0].is_zero() && b1[1].is_zero()) {
    return PointMap::identity_mod_p(p, std::move(fn), probes);
  }
  return PointMap::affine_mod_p(p, std::move(fn), A, b1, probes);
}

std::vector<std::uint32_t> chart_table_mod_p(const PolydiskChart& chart, const AutWord& w) {
  const std::uint64_t p = chart.prime();
  std::vector<std::uint32_t> table;
  table.reserve(p * p);
  for (const auto& uv : residue_probes(p, chart.chart_precision())) {
    Vec2 img = chart_apply(chart, w, uv);
    table.push_back(static_cast<std::uint32_t>(img[0].mod_p_power(1) * p + img[1].mod_p_power(1)));
  }
  return table;
}

PolydiskChart recentre(const PolydiskChart& chart) {
  const auto free = chart.free_coords();
  const PadicInt& a0 = chart.base().coord(free[0]);
  const PadicInt& b0 = chart.base().coord(free[1]);
  if (border_sign(a0) != 0 || border_sign(b0) != 0) {
    throw MathError("recentre needs the free coordinates away from +-2 mod p");
  }
  PadicInt a1 = fixed_point_Tp(a0), b1 = fixed_point_Tp(b0);
  SurfacePoint moved = with_coords(chart.base(), chart.solved(), free, chart.xi(a1, b1), a1, b1);
  return PolydiskChart::parametrize(moved, chart.solved());
}

std::vector<Vec2> expansion_samples(std::uint64_t p, int precision, int n_random, std::uint64_t seed) {
  auto out = residue_probes(p, precision);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(0, static_cast<std::int64_t>(p * p) - 1);
  for (int i = 0; i < n_random; ++i) {
    out.push_back({PadicInt(p, precision, dist(rng)), PadicInt(p, precision, dist(rng))});
  }
  return out;
}

CheckReport verify_xi_expansion(const PolydiskChart& chart, std::span<const Vec2> samples) {
  if (chart.precision() < 2) throw MathError("xi expansion needs precision >= 2");
  CheckReport report;
  const auto free = chart.free_coords();
  const int s = static_cast<int>(chart.solved());
  auto d = partials(chart.base());
  PadicInt inv = invert(d[s]);
  const PadicInt& s0 = chart.base().coord(s);
  for (const auto& uv : samples) {
    PadicInt pu = mul_by_p_power(uv[0], 1), pv = mul_by_p_power(uv[1], 1);
    PadicInt lhs = chart.psi(uv).coord(s);
    PadicInt rhs = s0 - d[free[0]] * inv * pu - d[free[1]] * inv * pv;
    report.record(lhs.congruent(rhs, 2), "xi expansion fails at " + vec_str(uv));
  }
  return report;
}

std::string_view lemma_name(ExpansionLemma l) {
  switch (l) {
    case ExpansionLemma::parab_f:
      return "parab-f";
    case ExpansionLemma::g_and_h:
      return "g-and-h";
    case ExpansionLemma::nonpara_f:
      return "nonpara-f";
  }
  return "?";
}

std::optional<ExpansionLemma> parse_lemma(std::string_view s) {
  for (auto l : {ExpansionLemma::parab_f, ExpansionLemma::g_and_h, ExpansionLemma::nonpara_f}) {
    if (lemma_name(l) == s) return l;
  }
  return std::nullopt;
}

ExpansionReport verify_stabilizer_expansions(const PolydiskChart& chart, ExpansionLemma lemma,
                                             std::span<const Vec2> samples) {
  if (chart.solved() != Coord::x) throw MathError("expansion lemmas are stated for charts solving x");
  if (chart.precision() < 3) throw MathError("expansion lemmas need point precision >= 3");
  const SurfacePoint& b = chart.base();
  const std::uint64_t p = b.prime();
  const std::uint64_t n = (p * p - 1) / 2;
  const PadicInt N = num(b.x, static_cast<std::int64_t>(n));
  const auto [px, py, pz] = partials(b);
  ExpansionReport out;

  switch (lemma) {
    case ExpansionLemma::parab_f: {
      if (border_sign(b.x) == 0) throw MathError("parab-f needs x0 = +-2 mod p");
      const AutWord f = pair_power(Letter::sy, Letter::sz, p);
      const Vec2 shift{py, -pz};
      out.constants = {{"translation_u", shift[0].truncate(1).signed_residue()},
                       {"translation_v", shift[1].truncate(1).signed_residue()}};
      for (const auto& uv : samples) {
        Vec2 got = chart_apply(chart, f, uv);
        Vec2 want{uv[0] + shift[0], uv[1] + shift[1]};
        out.main.record(congruent_vec(got, want, 1), "parab-f at " + vec_str(uv) + ": " + vec_str(got));
      }
      break;
    }
    case ExpansionLemma::g_and_h: {
      if (border_sign(b.y) != 0) throw MathError("g-and-h needs y0 != +-2 mod p");
      if (border_sign(b.z) != 0) throw MathError("g-and-h needs z0 != +-2 mod p");
      const PadicInt y1 = fixed_point_Tp(b.y), z1 = fixed_point_Tp(b.z);
      const PadicInt dy = div_by_p_power(b.y - y1, 1), dz = div_by_p_power(b.z - z1, 1);
      const PadicInt c1 = -(N * px * invert(b.y * b.y - 4));
      const PadicInt c2 = N * px * invert(b.z * b.z - 4);
      const PadicInt pc1 = c1 * static_cast<std::int64_t>(p), pc2 = c2 * static_cast<std::int64_t>(p);
      out.constants = {{"c1", c1.truncate(1).signed_residue()}, {"c2", c2.truncate(1).signed_residue()}};
      const AutWord g = pair_power(Letter::sz, Letter::sx, n / 2);
      const AutWord h = pair_power(Letter::sx, Letter::sy, n / 2);
      const AutWord gp = g.power(p), hp = h.power(p);
      CheckReport alt;
      for (const auto& uv : samples) {
        const auto& [u, v] = uv;
        Vec2 gv = chart_apply(chart, g, uv);
        out.main.record(congruent_vec(gv, Vec2{u, v + c1 * u + dy * c1}, 1), "g mod p at " + vec_str(uv));
        Vec2 hv = chart_apply(chart, h, uv);
        out.main.record(congruent_vec(hv, Vec2{u + c2 * v + dz * c2, v}, 1), "h mod p at " + vec_str(uv));
        Vec2 gpv = chart_apply(chart, gp, uv);
        out.main.record(congruent_vec(gpv, Vec2{u, v + pc1 * u + dy * pc1}, 2), "g^p mod p^2 at " + vec_str(uv));
        alt.record(congruent_vec(gpv, Vec2{u, v + pc1 * u + dz * pc1}, 2),
                   "g^p mod p^2 with (z0-z1)/p at " + vec_str(uv));
        Vec2 hpv = chart_apply(chart, hp, uv);
        out.main.record(congruent_vec(hpv, Vec2{u + pc2 * v + dz * pc2, v}, 2), "h^p mod p^2 at " + vec_str(uv));
      }
      out.alternative = alt;
      break;
    }
    case ExpansionLemma::nonpara_f: {
      if (border_sign(b.x) != 0) throw MathError("nonpara-f needs x0 != +-2 mod p");
      const PadicInt x1 = fixed_point_Tp(b.x);
      const PadicInt dx = div_by_p_power(b.x - x1, 1);
      const PadicInt c0 = N * invert(b.x * b.x - 4);
      const Vec2 w1{-(c0 * pz), c0 * py};
      const PadicInt m = -invert(px);
      const Vec2 w2{m * py, m * pz};
      const AutWord f = pair_power(Letter::sy, Letter::sz, n / 2);
      for (const auto& uv : samples) {
        const auto& [u, v] = uv;
        PadicInt dot = w2[0] * u + w2[1] * v + dx;
        Vec2 want{u + w1[0] * dot, v + w1[1] * dot};
        Vec2 got = chart_apply(chart, f, uv);
        out.main.record(congruent_vec(got, want, 1), "nonpara-f at " + vec_str(uv) + ": " + vec_str(got) + " vs " +
                                                          vec_str(want));
      }
      break;
    }
  }
  return out;
}

}  // namespace markoff
