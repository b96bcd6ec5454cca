#include <random>

#include "doctest.h"
#include "markoff/chebyshev.hpp"

using namespace markoff;

namespace {

std::vector<Residue> coeffs(std::uint64_t p, int K, std::initializer_list<std::int64_t> c) {
  std::vector<Residue> out;
  for (auto v : c) out.push_back(modular::reduce(v, modular::prime_power(p, K)));
  return out;
}

}  // namespace

TEST_CASE("small Chebyshev polynomials") {
  CHECK(chebyshev_T(0, 7, 3).residues() == coeffs(7, 3, {2}));
  CHECK(chebyshev_T(1, 7, 3).residues() == coeffs(7, 3, {0, 1}));
  CHECK(chebyshev_T(5, 7, 3).residues() == coeffs(7, 3, {0, 5, 0, -5, 0, 1}));
  CHECK(chebyshev_U(0, 7, 3).residues() == coeffs(7, 3, {1}));
  CHECK(chebyshev_U(-2, 7, 3).residues() == coeffs(7, 3, {-1}));
  CHECK_FALSE(chebyshev_U(-1, 7, 3).degree().has_value());
  CHECK(chebyshev_U(4, 101, 2).evaluate(PadicInt(101, 2, 3)).residue() == 55);
  CHECK_THROWS_AS(chebyshev_T(10001, 7, 3), MathError);
}

TEST_CASE("recurrences and symmetries up to degree 200") {
  for (std::uint64_t p : {5ULL, 13ULL}) {
    const int K = 3;
    DensePoly t_prev = chebyshev_T(0, p, K), t_cur = chebyshev_T(1, p, K);
    DensePoly u_prev = chebyshev_U(0, p, K), u_cur = chebyshev_U(1, p, K);
    for (long n = 2; n <= 200; ++n) {
      DensePoly t_next = chebyshev_T(n, p, K);
      DensePoly u_next = chebyshev_U(n, p, K);
      REQUIRE(t_next == t_cur.shift() - t_prev);
      REQUIRE(u_next == u_cur.shift() - u_prev);
      REQUIRE(chebyshev_T(-n, p, K) == t_next);
      REQUIRE(chebyshev_U(-n - 2, p, K) == (-1) * u_next);
      t_prev = t_cur, t_cur = t_next;
      u_prev = u_cur, u_cur = u_next;
    }
  }
}

TEST_CASE("companion powers") {
  const std::uint64_t p = 101;
  PadicInt x(p, 2, 3);
  CHECK(companion_power(x, 0) == Mat2::identity(p, 2));
  CHECK(companion_power(x, 1) == Mat2::from_ints(p, 2, 3, -1, 1, 0));
  CHECK(companion_power(x, 4) == Mat2::from_ints(p, 2, 55, -21, 21, -8));
}

TEST_CASE("companion power entries are U values and have determinant one") {
  std::mt19937_64 rng(5);
  const std::uint64_t p = 11;
  const int K = 3;
  std::uniform_int_distribution<std::int64_t> pick(0, 1330);
  for (int i = 0; i < 50; ++i) {
    PadicInt x(p, K, pick(rng));
    for (std::uint64_t n = 0; n <= 200; n += 7) {
      Mat2 c = companion_power(x, n);
      long N = static_cast<long>(n);
      REQUIRE(c.a11 == eval_U(N, x));
      REQUIRE(c.a12 == -eval_U(N - 1, x));
      REQUIRE(c.a21 == eval_U(N - 1, x));
      REQUIRE(c.a22 == -eval_U(N - 2, x));
      REQUIRE(c.det().residue() == 1);
      REQUIRE(c.trace() == eval_T(N, x));
    }
  }
}

TEST_CASE("companion derivative by finite differences") {
  const std::uint64_t p = 7;
  PadicInt two(p, 3, 2);
  Mat2 d = companion_derivative(two, 3, 1);
  CHECK(d.congruent(Mat2::from_ints(p, 3, 10, -4, 4, -1), 1));
  CHECK(companion_derivative_formula(two, 3).congruent(Mat2::from_ints(p, 3, 10, -4, 4, -1), 1));
  CHECK(companion_derivative(PadicInt(p, 3, 5), 0, 1).congruent(Mat2::zero(p, 3), 1));

  PadicInt one(p, 5, 1);
  Mat2 fd = companion_derivative(one, 6, 2);
  CHECK(fd.congruent(companion_derivative_formula(one, 6), 2));
  CHECK_THROWS_AS(companion_derivative(PadicInt(p, 2, 1), 6, 1), MathError);
}

TEST_CASE("T_p fixed points and rotation orders") {
  CHECK(fixed_point_Tp(PadicInt(7, 4, 2)).residue() == 2);
  CHECK(fixed_point_Tp(PadicInt(7, 4, 0)).residue() == 0);
  CHECK(fixed_point_Tp(PadicInt(7, 4, 1)).residue() == 1);
  CHECK(rotation_order(PadicInt(7, 4, 1)) == 6);
  CHECK(rotation_order(PadicInt(5, 4, 0)) == 4);
  CHECK_THROWS_WITH_AS(rotation_order(PadicInt(7, 4, -2)), "unipotent case", MathError);
}

TEST_CASE("fixed points are idempotent and independent of the seed lift") {
  for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
    const int K = 4;
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(p); ++r) {
      PadicInt x1 = fixed_point_Tp(PadicInt(p, K, r));
      REQUIRE(chebyshev_Tp(x1) == x1);
      REQUIRE(fixed_point_Tp(x1) == x1);
      for (std::int64_t j = 1; j < 4; ++j) {
        REQUIRE(fixed_point_Tp(PadicInt(p, K, r + j * static_cast<std::int64_t>(p))) == x1);
      }
      if (border_sign(x1) != 0) continue;
      std::uint64_t order = rotation_order(x1);
      REQUIRE(((p * p - 1) / 2) % order == 0);
      REQUIRE(companion_power(x1, order) == Mat2::identity(p, K));
      // -x1 is the trace of -zeta, whose order is tied to that of zeta
      std::uint64_t neg = rotation_order(-x1);
      REQUIRE(companion_power(-x1, 2 * order) == Mat2::identity(p, K));
      REQUIRE(companion_power(x1, 2 * neg) == Mat2::identity(p, K));
    }
  }
}

TEST_CASE("power sum identity") {
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    std::vector<PadicInt> xs;
    for (std::int64_t v = 0; v < 20; ++v) xs.emplace_back(p, 3, v * 37 + 1);
    CheckReport r = verify_power_sum_identity(p, 3, xs);
    CHECK_MESSAGE(r.pass, r.first_failure);
  }
  std::vector<PadicInt> none;
  CHECK(verify_power_sum_identity(7, 1, none).pass);
}

TEST_CASE("companion estimates at the documented bases") {
  std::vector<PadicInt> us;
  for (std::int64_t u = 0; u < 7; ++u) us.emplace_back(7, 4, u);
  CheckReport r = verify_companion_estimates(PadicInt(7, 4, 1), us);
  CHECK_MESSAGE(r.pass, r.first_failure);
  CHECK(companion_power(PadicInt(7, 3, 1), 24) == Mat2::identity(7, 3));

  PadicInt two(5, 3, 2);
  Mat2 rhs = Mat2::identity(5, 2) + PadicInt(5, 2, 5) * Mat2::from_ints(5, 2, 2, -2, 2, -2);
  CHECK(companion_power(two, 10).congruent(rhs, 2));
  CHECK(companion_power(PadicInt(5, 3, 2 + 5 * 3), 10).congruent(rhs, 2));
  std::vector<PadicInt> u5{PadicInt(5, 3, 0), PadicInt(5, 3, 3)};
  CHECK(verify_companion_estimates(two, u5).pass);
  CHECK_THROWS_AS(verify_companion_estimates(PadicInt(5, 2, 2), u5), MathError);
}
