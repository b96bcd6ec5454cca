#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace markoff {

/// Raised when a mathematical precondition fails (non-unit inverse, missing
/// square root, singular Newton step, ...). The message names the failure.
class MathError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

using Residue = std::uint64_t;

namespace modular {

// All moduli handled by the library stay below 2^62 so that sums never wrap
// and products fit in unsigned __int128.
inline constexpr Residue kMaxModulus = Residue{1} << 62;

__extension__ using Wide = unsigned __int128;
__extension__ using SignedWide = __int128;

inline Residue mul(Residue a, Residue b, Residue m) {
  return static_cast<Residue>((static_cast<Wide>(a) * b) % m);
}
inline Residue add(Residue a, Residue b, Residue m) {
  Residue s = a + b;
  return s >= m ? s - m : s;
}
inline Residue sub(Residue a, Residue b, Residue m) {
  return a >= b ? a - b : a + (m - b);
}
Residue pow(Residue base, std::uint64_t exp, Residue m);
/// Reduces a signed integer into [0, m).
Residue reduce(std::int64_t value, Residue m);
/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<Residue> inverse(Residue a, Residue m);
/// p^k, throwing MathError when the result would reach kMaxModulus.
Residue prime_power(std::uint64_t p, int k);
bool is_prime(std::uint64_t n);

}  // namespace modular

/// A p-adic integer known modulo p^K.
///
/// Values are immutable. Binary operations require a shared prime and produce
/// a result at the smaller of the two precisions, so digits lost to divisions
/// by p are never silently reinvented.
class PadicInt {
 public:
  /// The class of `value` modulo p^precision. `prime` must be an odd prime.
  PadicInt(std::uint64_t prime, int precision, std::int64_t value);

  /// Builds from a residue already in [0, p^precision).
  static PadicInt from_residue(std::uint64_t prime, int precision, Residue residue);

  std::uint64_t prime() const noexcept { return prime_; }
  int precision() const noexcept { return precision_; }
  Residue residue() const noexcept { return residue_; }
  Residue modulus() const noexcept { return modulus_; }

  /// Residue interpreted in (-p^K/2, p^K/2]; handy for printing small values.
  std::int64_t signed_residue() const noexcept;

  /// Truncation to fewer digits. Raising precision is not possible and throws.
  PadicInt truncate(int precision) const;
  /// Reinterprets the residue as an integer known to `precision` digits. Only
  /// meaningful when the caller knows the value is an exact integer (seeds,
  /// constants, lifts of residue classes).
  PadicInt lift(int precision) const;

  bool is_zero() const noexcept { return residue_ == 0; }
  bool is_unit() const noexcept { return residue_ % prime_ != 0; }
  /// Residue modulo p^k for k <= precision.
  Residue mod_p_power(int k) const;

  PadicInt operator-() const;
  friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator*(const PadicInt& a, const PadicInt& b);
  PadicInt operator+(std::int64_t k) const;
  PadicInt operator-(std::int64_t k) const;
  PadicInt operator*(std::int64_t k) const;

  /// Equality of the known digits at the common precision.
  friend bool operator==(const PadicInt& a, const PadicInt& b);
  bool congruent(const PadicInt& other, int k) const;

  std::string to_string() const;

 private:
  PadicInt(std::uint64_t prime, int precision, Residue modulus, Residue residue)
      : prime_(prime), precision_(precision), modulus_(modulus), residue_(residue) {}

  std::uint64_t prime_;
  int precision_;
  Residue modulus_;
  Residue residue_;
};

enum class ArithOp { add, sub, mul };

PadicInt arith(const PadicInt& a, const PadicInt& b, ArithOp op);

/// Largest v <= K with p^v | residue; nullopt stands for "at least K" (the
/// value is zero at working precision).
std::optional<int> valuation(const PadicInt& a);

PadicInt invert(const PadicInt& a);

/// a / p^m at precision K - m. Requires valuation(a) >= m and 0 < m < K.
PadicInt div_by_p_power(const PadicInt& a, int m);

/// p^m * a, known to precision K + m.
PadicInt mul_by_p_power(const PadicInt& a, int m);

/// Legendre symbol of the residue mod p; 0 for non-units.
int legendre(const PadicInt& a);

/// Square root of a unit quadratic residue. The branch is fixed by requiring
/// the root mod p to lie in [1, (p-1)/2].
PadicInt sqrt(const PadicInt& a);

/// Evaluates sum coeffs[i] x^i.
PadicInt eval_poly(std::span<const PadicInt> coeffs, const PadicInt& x);

/// Hensel/Newton root of sum coeffs[i] x^i lying over x0 mod p. The result is
/// known to the smallest coefficient precision. Throws "singular" when
/// F'(x0) is not a unit and "no root" when F(x0) is not 0 mod p.
PadicInt newton_solve(std::span<const PadicInt> coeffs, const PadicInt& x0);

/// Shared result type of the verifiers: pass/fail, how many cases ran and
/// the first discrepancy found.
struct CheckReport {
  bool pass = true;
  std::size_t checked = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++checked;
    if (!ok && pass) {
      pass = false;
      first_failure = what;
    }
  }
  void merge(const CheckReport& other) {
    checked += other.checked;
    if (!other.pass && pass) {
      pass = false;
      first_failure = other.first_failure;
    }
  }
};

}  // namespace markoff
