#include <random>

#include "doctest.h"
#include "markoff/flow.hpp"

using namespace markoff;

namespace {

constexpr std::uint64_t kP = 5;
constexpr int kWide = 12;

// A polynomial map congruent to the identity mod p.
Vec2 bend(const Vec2& w) {
  const PadicInt& u = w[0];
  const PadicInt& v = w[1];
  PadicInt p(kP, u.precision(), static_cast<std::int64_t>(kP));
  return {u + p * (v * v + 1), v + p * u * v};
}

PointMap bend_map() {
  auto probes = residue_probes(kP, 2);
  return PointMap::identity_mod_p(kP, bend, probes);
}

Vec2 translate(const Vec2& w, std::int64_t a, std::int64_t b) {
  const std::int64_t p = static_cast<std::int64_t>(kP);
  return {w[0] + p * a, w[1] + p * b};
}

Vec2 random_vec(std::mt19937_64& rng, int k) {
  std::uniform_int_distribution<std::int64_t> pick(0, 1'000'000'000);
  return {PadicInt(kP, k, pick(rng)), PadicInt(kP, k, pick(rng))};
}

}  // namespace

TEST_CASE("declared classes are verified at construction") {
  auto probes = residue_probes(kP, 2);
  CHECK(PointMap::identity_mod_p(kP, [](const Vec2& w) { return translate(w, 2, 3); }, probes).kind() ==
        PointMap::Kind::identity_mod_p);
  auto shift = [](const Vec2& w) { return Vec2{w[0] + 1, w[1]}; };
  CHECK_THROWS_AS(PointMap::identity_mod_p(kP, shift, probes), MathError);
  CHECK_THROWS_AS(PointMap::affine_mod_p(kP, shift, Mat2::from_ints(kP, 1, 1, 0, 0, 0),
                                         Vec2{PadicInt(kP, 1, 1), PadicInt(kP, 1, 0)}, probes),
                  MathError);
}

TEST_CASE("flow at integer times") {
  PointMap f = bend_map();
  std::mt19937_64 rng(1);
  Vec2 w = random_vec(rng, kWide);
  const int k = 4;
  Vec2 zero = mahler_flow(f, PadicInt(kP, k, 0), w, k);
  CHECK(zero[0] == w[0].truncate(k));
  CHECK(zero[1] == w[1].truncate(k));
  Vec2 it = w;
  for (int n = 0; n <= 20; ++n) {
    Vec2 phi = mahler_flow(f, PadicInt(kP, k, n), w, k);
    REQUIRE(phi[0] == it[0].truncate(k));
    REQUIRE(phi[1] == it[1].truncate(k));
    it = f(it);
  }
  Vec2 back = mahler_flow(f, PadicInt(kP, k, -1), w, k);
  Vec2 fwd = f(Vec2{back[0], back[1]});
  CHECK(fwd[0] == w[0].truncate(k));
  CHECK(fwd[1] == w[1].truncate(k));
}

TEST_CASE("flow preconditions") {
  PointMap f = bend_map();
  Vec2 w{PadicInt(kP, 3, 1), PadicInt(kP, 3, 2)};
  CHECK_THROWS_AS(mahler_flow(f, PadicInt(kP, 4, 1), w, 4), MathError);
  auto probes = residue_probes(kP, 2);
  auto shear = [](const Vec2& x) { return Vec2{x[0] + x[1], x[1]}; };
  PointMap g = PointMap::affine_mod_p(kP, shear, Mat2::from_ints(kP, 1, 1, 1, 0, 1),
                                      Vec2{PadicInt(kP, 1, 0), PadicInt(kP, 1, 0)}, probes);
  Vec2 wide{PadicInt(kP, kWide, 1), PadicInt(kP, kWide, 2)};
  CHECK_THROWS_AS(mahler_flow(g, PadicInt(kP, 4, 1), wide, 4), MathError);
}

TEST_CASE("flow suites") {
  PointMap f = bend_map();
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> pick(0, 1'000'000'000);
  std::vector<Vec2> ws;
  std::vector<FlowSample> samples;
  std::vector<AdditivitySample> adds;
  for (int i = 0; i < 5; ++i) ws.push_back(random_vec(rng, kWide));
  for (int i = 0; i < 200; ++i) samples.push_back({PadicInt(kP, 2, pick(rng)), random_vec(rng, kWide)});
  samples.push_back({PadicInt(kP, 2, 1), ws[0]});
  samples.push_back({PadicInt(kP, 2, static_cast<std::int64_t>(kP)), ws[1]});
  for (int i = 0; i < 50; ++i) adds.push_back({PadicInt(kP, kWide, pick(rng)), PadicInt(kP, kWide, pick(rng)), random_vec(rng, kWide)});

  auto iterates = verify_flow_iterates(f, ws, 20, 4);
  CHECK_MESSAGE(iterates.pass, iterates.first_failure);
  auto p2 = verify_flow_mod_p2(f, samples);
  CHECK_MESSAGE(p2.pass, p2.first_failure);
  auto add = verify_flow_additivity(f, adds, 3);
  CHECK_MESSAGE(add.pass, add.first_failure);
  std::vector<FlowSample> wide;
  for (int i = 0; i < 20; ++i) wide.push_back({PadicInt(kP, 4, pick(rng)), random_vec(rng, kWide)});
  auto trunc = verify_flow_truncation(f, wide, 4, 4);
  CHECK_MESSAGE(trunc.pass, trunc.first_failure);
}

TEST_CASE("newton inverse") {
  auto probes = residue_probes(kP, 2);
  Mat2 A = Mat2::from_ints(kP, 1, 2, 1, 1, 1);
  Vec2 b{PadicInt(kP, 1, 3), PadicInt(kP, 1, 4)};
  auto g = [](const Vec2& w) {
    PadicInt p(kP, w[0].precision(), static_cast<std::int64_t>(kP));
    return Vec2{w[0] * 2 + w[1] + 3 + p * w[0] * w[0], w[0] + w[1] + 4 + p * w[1] * w[1] * w[1]};
  };
  PointMap gm = PointMap::affine_mod_p(kP, g, A, b, probes);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    Vec2 y = random_vec(rng, 6);
    Vec2 x = newton_inverse(gm, y);
    Vec2 gx = g(x);
    REQUIRE(gx[0] == y[0]);
    REQUIRE(gx[1] == y[1]);
    Vec2 xy = newton_inverse(gm, g(y));
    REQUIRE(xy[0] == y[0]);
    REQUIRE(xy[1] == y[1]);
  }

  auto exact = [](const Vec2& w) { return Vec2{w[0] * 2 + w[1] + 3, w[0] + w[1] + 4}; };
  PointMap em = PointMap::affine_mod_p(kP, exact, A, b, probes);
  Vec2 y{PadicInt(kP, 5, 17), PadicInt(kP, 5, 99)};
  Vec2 x = newton_inverse(em, y);
  // A^-1 (y - b) with A^-1 = [[1,-1],[-1,2]]
  CHECK(x[0] == PadicInt(kP, 5, (17 - 3) - (99 - 4)));
  CHECK(x[1] == PadicInt(kP, 5, -(17 - 3) + 2 * (99 - 4)));

  PointMap f = bend_map();
  Vec2 w = random_vec(rng, kWide);
  Vec2 via_flow = mahler_flow(f, PadicInt(kP, 4, -1), w, 4);
  Vec2 via_newton = newton_inverse(f, Vec2{w[0].truncate(4), w[1].truncate(4)});
  CHECK(via_flow[0] == via_newton[0]);
  CHECK(via_flow[1] == via_newton[1]);
}

TEST_CASE("minimality determinants") {
  auto probes = residue_probes(kP, 2);
  PointMap tx = PointMap::identity_mod_p(kP, [](const Vec2& w) { return translate(w, 1, 0); }, probes);
  PointMap ty = PointMap::identity_mod_p(kP, [](const Vec2& w) { return translate(w, 0, 1); }, probes);
  Vec2 w0{PadicInt(kP, 3, 0), PadicInt(kP, 3, 0)};
  MinimalityDet d = local_minimality_det(tx, ty, w0);
  CHECK(d.det.residue() == 1);
  CHECK(d.unit);
  CHECK_FALSE(local_minimality_det(tx, tx, w0).unit);
  CHECK(local_minimality_det(tx, tx, w0).det.is_zero());
  CHECK_THROWS_AS(local_minimality_det(tx, ty, Vec2{PadicInt(kP, 1, 0), PadicInt(kP, 1, 0)}), MathError);

  PointMap id = PointMap::affine_mod_p(kP, [](const Vec2& w) { return w; }, Mat2::identity(kP, 1),
                                       Vec2{PadicInt(kP, 1, 0), PadicInt(kP, 1, 0)}, probes);
  CHECK(twisted_minimality_det(tx, id, w0).det.is_zero());
  PointMap shear = PointMap::affine_mod_p(kP, [](const Vec2& w) { return Vec2{w[0] + w[1], w[1]}; },
                                          Mat2::from_ints(kP, 1, 1, 1, 0, 1),
                                          Vec2{PadicInt(kP, 1, 0), PadicInt(kP, 1, 0)}, probes);
  MinimalityDet t = twisted_minimality_det(tx, shear, w0);
  CHECK(t.det.is_zero());
  CHECK_FALSE(t.unit);
  PointMap lower = PointMap::affine_mod_p(kP, [](const Vec2& w) { return Vec2{w[0], w[0] + w[1]}; },
                                          Mat2::from_ints(kP, 1, 1, 0, 1, 1),
                                          Vec2{PadicInt(kP, 1, 0), PadicInt(kP, 1, 0)}, probes);
  CHECK(twisted_minimality_det(tx, lower, w0).unit);
}
