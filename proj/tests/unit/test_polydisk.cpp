#include <random>

#include "doctest.h"
#include "markoff/certify.hpp"
#include "markoff/census.hpp"
#include "markoff/chebyshev.hpp"
#include "markoff/polydisk.hpp"

using namespace markoff;

namespace {

SurfacePoint point333(int K) {
  PadicInt t(7, K, 3);
  return SurfacePoint::make(t, t, t, PadicInt(7, K, 0));
}

bool same(const Vec2& a, const Vec2& b) { return a[0] == b[0] && a[1] == b[1]; }

}  // namespace

TEST_CASE("chart through (3,3,3) mod 7") {
  PolydiskChart chart = PolydiskChart::parametrize(point333(4));
  CHECK(chart.chart_precision() == 3);
  Vec2 origin{PadicInt(7, 3, 0), PadicInt(7, 3, 0)};
  CHECK(chart.psi(origin) == chart.base());

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> pick(0, 342);
  for (int i = 0; i < 100; ++i) {
    Vec2 uv{PadicInt(7, 3, pick(rng)), PadicInt(7, 3, pick(rng))};
    SurfacePoint pt = chart.psi(uv);
    REQUIRE(eval_P(pt.x, pt.y, pt.z) == pt.D);
    REQUIRE(same(chart.psi_inverse(pt), uv));
  }
  auto samples = expansion_samples(7, 3, 100, 1);
  CHECK(samples.size() == 149);
  auto r = verify_xi_expansion(chart, samples);
  CHECK_MESSAGE(r.pass, r.first_failure);
  // slopes -P_y/P_x = -P_z/P_x = -1 at (3,3,3)
  PadicInt u(7, 3, 1), zero(7, 3, 0);
  SurfacePoint moved = chart.psi({u, zero});
  CHECK(moved.x.congruent(PadicInt(7, 4, 3 - 7), 2));
}

TEST_CASE("charts need a unit partial") {
  // (1, 1, 2) on D = 4: P_x = P_y = 0 but P_z = 3
  PadicInt one(7, 3, 1), two(7, 3, 2);
  SurfacePoint pt = SurfacePoint::make(one, one, two, PadicInt(7, 3, 4));
  CHECK_THROWS_WITH_AS(PolydiskChart::parametrize(pt), "no chart: partial in x vanishes mod p", MathError);
  PolydiskChart zc = PolydiskChart::parametrize(pt, Coord::z);
  CHECK(zc.free_coords() == std::array<int, 2>{0, 1});
  Vec2 uv{PadicInt(7, 2, 3), PadicInt(7, 2, 20)};
  SurfacePoint q = zc.psi(uv);
  CHECK(eval_P(q.x, q.y, q.z) == q.D);
  CHECK(same(zc.psi_inverse(q), uv));
}

TEST_CASE("chart_apply") {
  PolydiskChart chart = PolydiskChart::parametrize(point333(4));
  Vec2 uv{PadicInt(7, 3, 5), PadicInt(7, 3, 40)};
  CHECK(same(chart_apply(chart, AutWord{}, uv), uv));
  AutWord stab = pair_power(Letter::sy, Letter::sz, 12);
  CHECK_NOTHROW(chart_apply(chart, stab, uv));
  CHECK_THROWS_WITH_AS(chart_apply(chart, AutWord::parse("sx"), uv), "leaves polydisk", MathError);
  AutWord other = pair_power(Letter::sz, Letter::sx, 12);
  CHECK(same(chart_apply(chart, stab * other, uv), chart_apply(chart, stab, chart_apply(chart, other, uv))));

  auto base = find_special_point(5, 4, PadicInt(5, 4, 3));
  PolydiskChart border = PolydiskChart::parametrize(base);
  CHECK(border_sign(base.y) == 1);
  Vec2 w{PadicInt(5, 3, 7), PadicInt(5, 3, 2)};
  CHECK_NOTHROW(chart_apply(border, pair_power(Letter::sz, Letter::sx, 5), w));
}

TEST_CASE("recentring") {
  PolydiskChart chart = PolydiskChart::parametrize(point333(4));
  PolydiskChart once = recentre(chart);
  PolydiskChart twice = recentre(once);
  CHECK(once.base() == twice.base());
  CHECK(chebyshev_Tp(once.base().y) == once.base().y);
  CHECK(chebyshev_Tp(once.base().z) == once.base().z);
  CHECK(once.contains(chart.base()));

  // y0 = 1 is already fixed by T_7
  PadicInt x(7, 4, 0), y(7, 4, 1), z(7, 4, 3);
  SurfacePoint pt = SurfacePoint::make(x, y, z, eval_P(x, y, z));
  CHECK(recentre(PolydiskChart::parametrize(pt)).base().y.residue() == 1);
}

TEST_CASE("parabolic expansion at the p = 5 special point") {
  const std::uint64_t p = 5;
  const int K = 4;
  SurfacePoint base = find_special_point(p, K, PadicInt(p, K, 3));
  PolydiskChart chart = PolydiskChart::parametrize(base);
  auto samples = expansion_samples(p, chart.chart_precision(), 100, 2);
  ExpansionReport r = verify_stabilizer_expansions(chart, ExpansionLemma::parab_f, samples);
  CHECK_MESSAGE(r.main.pass, r.main.first_failure);
  // (P_y, -P_z) = (4, 2 sqrt(D-4)) with sqrt(-1) = 2 mod 5
  REQUIRE(r.constants.size() == 2);
  CHECK(modular::reduce(r.constants[0].second, p) == 4);
  CHECK(modular::reduce(r.constants[1].second, p) == 4);
  CHECK_THROWS_WITH_AS(verify_stabilizer_expansions(chart, ExpansionLemma::nonpara_f, samples),
                       "nonpara-f needs x0 != +-2 mod p", MathError);
  CHECK_THROWS_WITH_AS(verify_stabilizer_expansions(chart, ExpansionLemma::g_and_h, samples),
                       "g-and-h needs y0 != +-2 mod p", MathError);
}

TEST_CASE("g and h expansions on the certified p = 7 chart") {
  MinimalityCertificate cert = certify_minimal_polydisk(7, 4, PadicInt(7, 4, 0));
  REQUIRE(cert.pass);
  const PadicInt D(7, 4, 0);
  SurfacePoint base = SurfacePoint::make(PadicInt::from_residue(7, 4, cert.base[0]),
                                         PadicInt::from_residue(7, 4, cert.base[1]),
                                         PadicInt::from_residue(7, 4, cert.base[2]), D);
  for (bool centred : {false, true}) {
    PolydiskChart chart = PolydiskChart::parametrize(base);
    if (centred) chart = recentre(chart);
    auto samples = expansion_samples(7, chart.chart_precision(), 100, 3);
    ExpansionReport r = verify_stabilizer_expansions(chart, ExpansionLemma::g_and_h, samples);
    CHECK_MESSAGE(r.main.pass, r.main.first_failure);
    REQUIRE(r.alternative.has_value());
    auto nf = verify_stabilizer_expansions(chart, ExpansionLemma::nonpara_f, samples);
    CHECK_MESSAGE(nf.main.pass, nf.main.first_failure);
    for (const auto& [name, value] : r.constants) CHECK(modular::reduce(value, 7) != 0);
  }
}

TEST_CASE("lemma names round-trip") {
  for (auto l : {ExpansionLemma::parab_f, ExpansionLemma::g_and_h, ExpansionLemma::nonpara_f}) {
    CHECK(parse_lemma(lemma_name(l)) == l);
  }
  CHECK_FALSE(parse_lemma("gh").has_value());
}
