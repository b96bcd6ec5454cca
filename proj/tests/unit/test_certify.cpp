#include "doctest.h"
#include "markoff/certify.hpp"
#include "markoff/census.hpp"
#include "markoff/chebyshev.hpp"

using namespace markoff;

TEST_CASE("special points") {
  SurfacePoint s13 = find_special_point(13, 3, PadicInt(13, 3, 0));
  CHECK(s13.x.residue() == 2);
  CHECK(border_sign(s13.y) == 0);
  CHECK(border_sign(s13.z) == 0);
  CHECK(!(PadicInt(13, 3, 4) - s13.y * s13.z).truncate(1).is_zero());

  SurfacePoint s5 = find_special_point(5, 3, PadicInt(5, 3, 3));
  CHECK(s5.x.residue() % 5 == 2);
  CHECK((s5.x * s5.x).residue() == PadicInt(5, 3, -1).residue());
  CHECK(s5.y.residue() == 2);
  CHECK(s5.z.residue() == 0);

  // D = 0 mod 5: sqrt(-4) = 1 and t = 0 is admissible
  SurfacePoint s50 = find_special_point(5, 3, PadicInt(5, 3, 0));
  CHECK(s50.z.residue() == 0);

  CHECK_THROWS_WITH_AS(find_special_point(7, 3, PadicInt(7, 3, 0)), doctest::Contains("no special point recipe"),
                       MathError);
  CHECK_THROWS_WITH_AS(find_special_point(3, 3, PadicInt(3, 3, 1)), doctest::Contains("no special point recipe"),
                       MathError);
}

TEST_CASE("gamma words") {
  auto words = gamma_words(3);
  CHECK(words.size() == 1 + 3 + 6 + 12);
  CHECK(words.front().empty());
  for (std::size_t i = 1; i < words.size(); ++i) CHECK(words[i - 1].size() <= words[i].size());
}

TEST_CASE("strict moves") {
  SurfacePoint s13 = find_special_point(13, 3, PadicInt(13, 3, 0));
  StrictMove m = strict_move_search(s13);
  CHECK(m.word == AutWord::parse("(sy sz)^13"));
  CHECK(m.dist.exponent == 1);
  CHECK(m.dist.to_string() == "p^-1");

  PointSet pts = enumerate_points(7, 1, PadicInt(7, 3, 0));
  for (std::size_t i = 0; i < pts.size(); i += 5) {
    SurfacePoint pt = lift_residue_point(7, 3, pts.decode(pts.codes[i]), PadicInt(7, 3, 0));
    StrictMove mv = strict_move_search(pt);
    CHECK(dist(pt, apply_word(mv.word, pt)).exponent == 1);
  }
  CHECK(dist(s13, apply_word(AutWord{}, s13)).indistinguishable());
  CHECK(strict_move_search(s13, 0).source == "pair-power");

  // the finite orbit of (1,1,1) at D = 2 has no two points congruent mod 7
  PadicInt one(7, 3, 1);
  SurfacePoint finite = SurfacePoint::make(one, one, one, PadicInt(7, 3, 2));
  CHECK_THROWS_WITH_AS(strict_move_search(finite, 6), doctest::Contains("no strict move found"), MathError);
}

TEST_CASE("residual transitivity on the recentred p = 7 chart") {
  MinimalityCertificate cert = certify_minimal_polydisk(7, 3, PadicInt(7, 3, 0));
  REQUIRE(cert.pass);
  const PadicInt D(7, 3, 0);
  SurfacePoint base = SurfacePoint::make(PadicInt::from_residue(7, 3, cert.base[0]),
                                         PadicInt::from_residue(7, 3, cert.base[1]),
                                         PadicInt::from_residue(7, 3, cert.base[2]), D);
  PolydiskChart chart = recentre(PolydiskChart::parametrize(base));
  std::vector<AutWord> pair{AutWord::parse(cert.residual_words[0]), AutWord::parse(cert.residual_words[1])};
  ResidualReport two = residual_transitivity(chart, pair);
  CHECK_FALSE(two.transitive);
  CHECK(two.orbit_sizes == std::vector<std::uint64_t>{48, 1});
  ResidualReport full = residual_transitivity(chart, pair, AutWord::parse(cert.strict_word));
  CHECK(full.transitive);
  std::vector<AutWord> ident{AutWord{}};
  CHECK(residual_transitivity(chart, ident).orbit_sizes.size() == 49);
  std::vector<AutWord> bad{AutWord::parse("sx")};
  CHECK_THROWS_AS(residual_transitivity(chart, bad), MathError);
}

TEST_CASE("certification routes") {
  struct Case {
    std::uint64_t p;
    std::int64_t D;
    const char* route;
  };
  for (Case c : {Case{7, 0, "d-zero"}, Case{11, 0, "d-zero"}, Case{13, 0, "special-point"},
                 Case{5, 3, "p5-exceptional"}, Case{7, 5, "special-point"}}) {
    MinimalityCertificate cert = certify_minimal_polydisk(c.p, 3, PadicInt(c.p, 3, c.D));
    CHECK_MESSAGE(cert.pass, cert.failure);
    CHECK(cert.route == c.route);
    CHECK(cert.strict_exponent == 1);
    CHECK(cert.residual_transitive);
    CHECK(cert.det_unit);
    CHECK(cert.failed_stage.empty());
    CheckReport replay = replay_certificate(cert);
    CHECK_MESSAGE(replay.pass, replay.first_failure);
  }
  MinimalityCertificate p5 = certify_minimal_polydisk(5, 3, PadicInt(5, 3, 3));
  CHECK(p5.subdisk_kind == "twisted");
  CHECK(p5.subdisk_f == "(sz sx)^25");
  CHECK(p5.subdisk_g == "(sx sy)^6");
  CHECK(p5.det % 5 == 2);
}

TEST_CASE("the local determinant at the witness is c1 c2 uv") {
  MinimalityCertificate cert = certify_minimal_polydisk(13, 3, PadicInt(13, 3, 0));
  REQUIRE(cert.pass);
  CHECK(cert.subdisk_kind == "local");
  CHECK(cert.witness == std::array<Residue, 2>{1, 1});
  CHECK(cert.det % 13 != 0);
}

TEST_CASE("certification outside the hypotheses fails with a named stage") {
  // (D - 4 / 7) = (6 / 7) = -1 and D is not 0 mod 49
  MinimalityCertificate c = certify_minimal_polydisk(7, 3, PadicInt(7, 3, 3));
  CHECK_FALSE(c.pass);
  CHECK(c.failed_stage == "hypotheses");
  MinimalityCertificate three = certify_minimal_polydisk(3, 3, PadicInt(3, 3, 0));
  CHECK_FALSE(three.pass);
  MinimalityCertificate shallow = certify_minimal_polydisk(7, 2, PadicInt(7, 2, 0));
  CHECK_FALSE(shallow.pass);
  CHECK(replay_certificate(c).checked > 0);
}

TEST_CASE("optimized exponents also certify") {
  CertifyOptions opts;
  opts.optimized_exponent = true;
  MinimalityCertificate cert = certify_minimal_polydisk(13, 3, PadicInt(13, 3, 0), opts);
  CHECK_MESSAGE(cert.pass, cert.failure);
  CHECK(replay_certificate(cert).pass);
}

TEST_CASE("certificates serialize deterministically") {
  MinimalityCertificate cert = certify_minimal_polydisk(11, 3, PadicInt(11, 3, 0));
  std::string a = certificate_to_json(cert);
  std::string b = certificate_to_json(certify_minimal_polydisk(11, 3, PadicInt(11, 3, 0)));
  CHECK(a == b);
  MinimalityCertificate back = certificate_from_json(a);
  CHECK(back == cert);
  CHECK(certificate_to_json(back) == a);
  CHECK(replay_certificate(back).pass);

  MinimalityCertificate tampered = cert;
  tampered.det = (tampered.det + 1) % 121;
  CHECK_FALSE(replay_certificate(tampered).pass);
  tampered = cert;
  tampered.strict_word = "(sy sz)^2";
  CHECK_FALSE(replay_certificate(tampered).pass);
}

TEST_CASE("XD check") {
  XDReport r = check_XD(7, 3, PadicInt(7, 3, 1), 2);
  CHECK(r.points_checked > 0);
  if (r.found) CHECK(r.value_mod_p2 != 1);

  // along the finite orbit of (1,1,1) at D = 2 the condition cannot hold
  PadicInt one(7, 4, 1);
  SurfacePoint start = SurfacePoint::make(one, one, one, PadicInt(7, 4, 2));
  XDReport orbit = check_XD(7, 4, PadicInt(7, 4, 2), 4, start);
  CHECK_FALSE(orbit.found);
  CHECK(orbit.points_checked == 1);
  CHECK_THROWS_AS(check_XD(7, 2, PadicInt(7, 2, 0), 2), MathError);
}
