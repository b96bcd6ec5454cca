#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "markoff/padic.hpp"

namespace markoff {

/// 2x2 matrix over Z_p at finite precision.
struct Mat2 {
  PadicInt a11, a12, a21, a22;

  static Mat2 identity(std::uint64_t p, int precision);
  static Mat2 zero(std::uint64_t p, int precision);
  static Mat2 from_ints(std::uint64_t p, int precision, std::int64_t a11, std::int64_t a12, std::int64_t a21,
                        std::int64_t a22);

  std::uint64_t prime() const { return a11.prime(); }
  int precision() const;

  PadicInt det() const { return a11 * a22 - a12 * a21; }
  PadicInt trace() const { return a11 + a22; }
  Mat2 truncate(int precision) const;
  /// Inverse; requires a unit determinant.
  Mat2 inverse() const;

  std::array<PadicInt, 2> apply(const std::array<PadicInt, 2>& v) const;

  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(const PadicInt& s, const Mat2& m);
  friend bool operator==(const Mat2& a, const Mat2& b);
  bool congruent(const Mat2& other, int k) const;
};

/// Dense univariate polynomial with coefficients in Z/p^K.
class DensePoly {
 public:
  DensePoly(std::uint64_t prime, int precision, std::vector<std::int64_t> coeffs);

  std::uint64_t prime() const noexcept { return prime_; }
  int precision() const noexcept { return precision_; }
  /// Degree, or nullopt for the zero polynomial (degree -infinity).
  std::optional<int> degree() const;
  PadicInt coeff(std::size_t i) const;
  const std::vector<Residue>& residues() const noexcept { return coeffs_; }

  PadicInt evaluate(const PadicInt& x) const;

  friend DensePoly operator+(const DensePoly& a, const DensePoly& b);
  friend DensePoly operator-(const DensePoly& a, const DensePoly& b);
  friend DensePoly operator*(std::int64_t s, const DensePoly& a);
  /// Multiplication by the variable x.
  DensePoly shift() const;
  friend bool operator==(const DensePoly& a, const DensePoly& b);

  /// x^n.
  static DensePoly monomial(std::uint64_t prime, int precision, int n);

 private:
  DensePoly(std::uint64_t prime, int precision, Residue modulus) : prime_(prime), precision_(precision), modulus_(modulus) {}
  void trim();

  std::uint64_t prime_;
  int precision_;
  Residue modulus_;
  std::vector<Residue> coeffs_;
};

inline constexpr long kDefaultDegreeCap = 10000;

/// Monic Chebyshev polynomial of the first kind: T_N(l + 1/l) = l^N + l^-N.
DensePoly chebyshev_T(long n, std::uint64_t p, int precision, long cap = kDefaultDegreeCap);
/// Second kind: U_N(l + 1/l) = (l^(N+1) - l^-(N+1)) / (l - 1/l).
DensePoly chebyshev_U(long n, std::uint64_t p, int precision, long cap = kDefaultDegreeCap);

/// Point evaluations in O(log N) via companion powers (T_N = trace C^N).
PadicInt eval_T(long n, const PadicInt& x);
PadicInt eval_U(long n, const PadicInt& x);

/// C(x) = [[x, -1], [1, 0]].
Mat2 companion(const PadicInt& x);
/// C(x)^N by binary exponentiation.
Mat2 companion_power(const PadicInt& x, std::uint64_t n);

/// C_N'(x) mod p^m as the p-adic difference quotient (C_N(x + p^m) - C_N(x)) / p^m.
/// Needs precision >= 2m + 1.
Mat2 companion_derivative(const PadicInt& x, std::uint64_t n, int m);

/// Closed form of C_N'(x): the Chebyshev expression when x^2 - 4 is a unit,
/// and the binomial matrix when x is exactly +2 or -2. Throws otherwise.
Mat2 companion_derivative_formula(const PadicInt& x, std::uint64_t n);

/// T_p(x). Reduces to x^p mod p and contracts each residue disk by 1/p.
PadicInt chebyshev_Tp(const PadicInt& x);

/// The unique x1 = x0 mod p with T_p(x1) = x1, by K - 1 contraction steps.
PadicInt fixed_point_Tp(const PadicInt& x0);

/// Smallest divisor r of (p^2 - 1)/2 with C(x1)^r = I at working precision.
/// x1 must be a T_p fixed point away from +-2 mod p.
std::uint64_t rotation_order(const PadicInt& x1);

/// Checks x^p = sum_j binom(p, j) T_{p-2j}(x) coefficientwise mod p^K, then
/// T_p = x^p mod p coefficientwise, then both sides at the sample points.
CheckReport verify_power_sum_identity(std::uint64_t p, int precision, std::span<const PadicInt> sample_xs);

/// Checks the estimates for C(x0 + p u)^N, N = (p^2-1)/2, and its p-th power
/// when x0 != +-2 mod p; otherwise the 2p and 2p^2 powers. Needs K >= 3.
CheckReport verify_companion_estimates(const PadicInt& x0, std::span<const PadicInt> sample_us);

/// +1 or -1 when x = +-2 mod p, 0 otherwise.
int border_sign(const PadicInt& x);

}  // namespace markoff
