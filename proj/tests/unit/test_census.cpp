#include <algorithm>
#include <cstdlib>

#include "doctest.h"
#include "markoff/census.hpp"

using namespace markoff;

namespace {

PadicInt d(std::uint64_t p, std::int64_t v, int K = 4) { return PadicInt(p, K, v); }

CensusOptions mode(EnumerationMode m) {
  CensusOptions o;
  o.mode = m;
  return o;
}

}  // namespace

TEST_CASE("point counts for D = 0") {
  // p = 5 is 1 mod 4, where the count is p^2 + 3p rather than p(p - 3)
  CountReport five = count_points(5, 1, d(5, 0));
  CHECK(five.count == 40);
  CHECK_FALSE(five.formula.has_value());
  for (auto [p, want] : {std::pair{7ULL, 28ULL}, {11ULL, 88ULL}, {19ULL, 304ULL}}) {
    CountReport r = count_points(p, 1, d(p, 0));
    CHECK(r.count == want);
    REQUIRE(r.formula.has_value());
    CHECK(*r.formula == want);
    CHECK(r.formula_holds());
  }
  // p = 1 mod 4 is outside the formula
  CHECK_FALSE(count_points(13, 1, d(13, 0)).formula.has_value());
}

TEST_CASE("lifted enumeration agrees with the brute scan") {
  struct Case {
    std::uint64_t p;
    int k;
    std::int64_t D;
  };
  for (Case c : {Case{3, 2, 0}, Case{5, 2, 0}, Case{5, 2, 3}, Case{7, 2, 0}, Case{7, 2, 5}, Case{5, 3, 1}}) {
    PointSet brute = enumerate_points(c.p, c.k, d(c.p, c.D), mode(EnumerationMode::brute));
    PointSet lift = enumerate_points(c.p, c.k, d(c.p, c.D), mode(EnumerationMode::lift));
    CHECK(brute.codes == lift.codes);
    std::uint64_t base = count_points(c.p, 1, d(c.p, c.D)).count;
    CHECK(lift.size() == base * modular::prime_power(c.p, 2 * (c.k - 1)));
  }
  CHECK(enumerate_points(7, 2, d(7, 0)).size() == 1372);
}

TEST_CASE("every enumerated point is on the surface") {
  PointSet pts = enumerate_points(5, 1, d(5, 1));
  CHECK(pts.size() > 0);
  for (auto code : pts.codes) {
    Triple t = pts.decode(code);
    CHECK(pts.encode(t) == code);
    CHECK(is_point(d(5, t[0], 1), d(5, t[1], 1), d(5, t[2], 1), d(5, 1, 1)));
    CHECK(pts.index_of(code).has_value());
  }
  CHECK_FALSE(pts.index_of(0).has_value());
}

TEST_CASE("worker count does not change the point set") {
  CensusOptions one, four;
  four.workers = 4;
  CHECK(enumerate_points(11, 2, d(11, 0), one).codes == enumerate_points(11, 2, d(11, 0), four).codes);
}

TEST_CASE("orbits") {
  OrbitPartition aut = orbits(7, 1, d(7, 0), GroupScope::aut);
  CHECK(aut.transitive());
  CHECK(aut.total == 28);
  CHECK(aut.sizes() == std::vector<std::uint64_t>{28});
  CHECK(check_transitivity(7, 1, d(7, 0), GroupScope::aut));

  PointSet pts = enumerate_points(7, 1, d(7, 0));
  std::vector<Letter> just_sx{Letter::sx};
  OrbitPartition small = orbits(pts, just_sx);
  CHECK_FALSE(small.transitive());
  for (const auto& o : small.orbits) CHECK(o.size <= 2);
  std::uint64_t sum = 0;
  for (const auto& o : small.orbits) sum += o.size;
  CHECK(sum == pts.size());

  // visiting order does not matter
  std::vector<Letter> fwd(kAllLetters.begin(), kAllLetters.end());
  std::vector<Letter> rev(kAllLetters.rbegin(), kAllLetters.rend());
  PointSet level2 = enumerate_points(7, 2, d(7, 3));
  OrbitPartition a = orbits(level2, fwd), b = orbits(level2, rev);
  CHECK(a.sizes() == b.sizes());
  for (std::size_t i = 0; i < a.orbits.size(); ++i) CHECK(a.orbits[i].representative == b.orbits[i].representative);
}

TEST_CASE("orbits reduce onto orbits") {
  // the reduction mod p of a Gamma-orbit at level 2 is a Gamma-orbit at level 1
  PointSet lvl1 = enumerate_points(7, 1, d(7, 3));
  PointSet lvl2 = enumerate_points(7, 2, d(7, 3));
  std::vector<Letter> gamma = generator_letters(GroupScope::gamma);
  OrbitPartition o1 = orbits(lvl1, gamma);
  OrbitPartition o2 = orbits(lvl2, gamma);
  for (const auto& orb : o2.orbits) {
    Triple r{orb.representative[0] % 7, orb.representative[1] % 7, orb.representative[2] % 7};
    bool found = false;
    for (const auto& low : o1.orbits) {
      // walk the low orbit from its representative
      std::vector<Triple> stack{low.representative};
      std::vector<std::uint64_t> seen{lvl1.encode(low.representative)};
      while (!stack.empty() && !found) {
        Triple t = stack.back();
        stack.pop_back();
        if (t == r) found = true;
        for (Letter g : gamma) {
          Triple n = apply_letter(g, t, 7);
          auto c = lvl1.encode(n);
          if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c), stack.push_back(n);
        }
      }
      if (found) {
        CHECK(orb.size % low.size == 0);
        break;
      }
    }
    CHECK(found);
  }
}

TEST_CASE("orbit divisibility") {
  DivisibilityReport r1 = check_orbit_divisibility(7, 1, d(7, 0));
  CHECK(r1.pass);
  CHECK(r1.modulus == 7);
  DivisibilityReport r2 = check_orbit_divisibility(7, 2, d(7, 0));
  CHECK(r2.pass);
  for (auto s : r2.sizes) CHECK(s % 49 == 0);
  CHECK_THROWS_AS(check_orbit_divisibility(13, 1, d(13, 0)), MathError);
  CHECK_THROWS_AS(check_orbit_divisibility(7, 2, d(7, 7)), MathError);
}

TEST_CASE("budgets") {
  CensusOptions tiny;
  tiny.max_memory = 1024;
  CHECK_THROWS_AS(enumerate_points(11, 2, d(11, 0), tiny), BudgetError);
  CHECK_THROWS_AS(enumerate_points(31, 3, d(31, 0), mode(EnumerationMode::brute)), BudgetError);
  setenv("MARKOFF_PADIC_MAX_MEM", "3M", 1);
  CHECK(memory_budget_from_env() == 3ULL << 20);
  setenv("MARKOFF_PADIC_MAX_MEM", "lots", 1);
  CHECK_THROWS_AS(memory_budget_from_env(), std::invalid_argument);
  unsetenv("MARKOFF_PADIC_MAX_MEM");
  CHECK(memory_budget_from_env() == 4ULL << 30);
}

TEST_CASE("finite orbit catalog") {
  auto d2 = finite_orbit_catalog(7, 4, CatalogCase::d2);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].gamma_size == 16);
  CHECK(d2[0].matches());
  auto sq = finite_orbit_catalog(7, 4, CatalogCase::d3_sqrt2);
  REQUIRE(sq.size() == 1);
  CHECK(sq[0].gamma_size == 12);
  auto golden = finite_orbit_catalog(11, 4, CatalogCase::golden);
  REQUIRE(golden.size() == 3);
  std::vector<std::uint64_t> sizes;
  for (const auto& e : golden) {
    sizes.push_back(e.gamma_size);
    CHECK(e.matches());
    // reduction can only merge points
    CHECK(std::is_sorted(e.gamma_size_by_precision.begin(), e.gamma_size_by_precision.end()));
  }
  CHECK(sizes == std::vector<std::uint64_t>{72, 40, 40});
  auto cage = finite_orbit_catalog(7, 4, CatalogCase::d4_cage);
  REQUIRE(cage.size() == 1);
  CHECK_FALSE(cage[0].expected.has_value());
  CHECK_THROWS_WITH_AS(finite_orbit_catalog(5, 4, CatalogCase::d3_sqrt2), "catalog case unavailable for this p",
                       MathError);
  for (auto c : {CatalogCase::sqrtD, CatalogCase::d4_cage, CatalogCase::d2, CatalogCase::d3_sqrt2, CatalogCase::golden}) {
    CHECK(parse_catalog_case(catalog_case_name(c)) == c);
  }
}
