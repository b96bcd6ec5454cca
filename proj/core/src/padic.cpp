#include "markoff/padic.hpp"

#include <algorithm>
#include <sstream>

namespace markoff {

namespace modular {

Residue pow(Residue base, std::uint64_t exp, Residue m) {
  Residue result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul(result, base, m);
    base = mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

Residue reduce(std::int64_t value, Residue m) {
  if (value >= 0) return static_cast<Residue>(value) % m;
  // -(value + 1) avoids overflow at INT64_MIN.
  Residue neg = (static_cast<Residue>(-(value + 1)) + 1) % m;
  return neg == 0 ? 0 : m - neg;
}

std::optional<Residue> inverse(Residue a, Residue m) {
  modular::SignedWide old_r = static_cast<modular::SignedWide>(a % m), r = m;
  modular::SignedWide old_s = 1, s = 0;
  while (r != 0) {
    modular::SignedWide q = old_r / r;
    modular::SignedWide tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  modular::SignedWide inv = old_s % static_cast<modular::SignedWide>(m);
  if (inv < 0) inv += m;
  return static_cast<Residue>(inv);
}

Residue prime_power(std::uint64_t p, int k) {
  if (k < 0) throw MathError("negative exponent");
  Residue result = 1;
  for (int i = 0; i < k; ++i) {
    if (result > kMaxModulus / p) {
      throw MathError("modulus " + std::to_string(p) + "^" + std::to_string(k) +
                      " exceeds the supported range");
    }
    result *= p;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace modular

namespace {

void check_prime(std::uint64_t p) {
  if (p == 2) throw MathError("p = 2 is not supported");
  if (!modular::is_prime(p)) throw MathError(std::to_string(p) + " is not an odd prime");
}

void check_same_prime(const PadicInt& a, const PadicInt& b) {
  if (a.prime() != b.prime()) throw MathError("prime mismatch");
}

// Square root modulo an odd prime by Tonelli-Shanks. `a` must be a nonzero
// quadratic residue.
Residue tonelli_shanks(Residue a, std::uint64_t p) {
  if (p % 4 == 3) return modular::pow(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  Residue z = 2;
  while (modular::pow(z, (p - 1) / 2, p) != p - 1) ++z;
  Residue c = modular::pow(z, q, p);
  Residue r = modular::pow(a, (q + 1) / 2, p);
  Residue t = modular::pow(a, q, p);
  int m = s;
  while (t != 1) {
    int i = 0;
    Residue t2 = t;
    while (t2 != 1) {
      t2 = modular::mul(t2, t2, p);
      ++i;
    }
    Residue b = c;
    for (int j = 0; j < m - i - 1; ++j) b = modular::mul(b, b, p);
    r = modular::mul(r, b, p);
    c = modular::mul(b, b, p);
    t = modular::mul(t, c, p);
    m = i;
  }
  return r;
}

}  // namespace

PadicInt::PadicInt(std::uint64_t prime, int precision, std::int64_t value) : prime_(prime), precision_(precision) {
  check_prime(prime);
  if (precision < 1) throw MathError("precision must be positive");
  modulus_ = modular::prime_power(prime, precision);
  residue_ = modular::reduce(value, modulus_);
}

PadicInt PadicInt::from_residue(std::uint64_t prime, int precision, Residue residue) {
  PadicInt out(prime, precision, 0);
  if (residue >= out.modulus_) throw MathError("residue out of range");
  out.residue_ = residue;
  return out;
}

std::int64_t PadicInt::signed_residue() const noexcept {
  if (residue_ > modulus_ / 2) return -static_cast<std::int64_t>(modulus_ - residue_);
  return static_cast<std::int64_t>(residue_);
}

PadicInt PadicInt::truncate(int precision) const {
  if (precision > precision_) {
    throw MathError("cannot raise precision from " + std::to_string(precision_) + " to " +
                    std::to_string(precision));
  }
  if (precision < 1) throw MathError("precision must be positive");
  if (precision == precision_) return *this;
  Residue m = modular::prime_power(prime_, precision);
  return PadicInt(prime_, precision, m, residue_ % m);
}

PadicInt PadicInt::lift(int precision) const {
  if (precision <= precision_) return truncate(precision);
  Residue m = modular::prime_power(prime_, precision);
  return PadicInt(prime_, precision, m, residue_);
}

Residue PadicInt::mod_p_power(int k) const {
  if (k > precision_) throw MathError("requested digits beyond precision");
  return residue_ % modular::prime_power(prime_, k);
}

PadicInt PadicInt::operator-() const {
  return PadicInt(prime_, precision_, modulus_, residue_ == 0 ? 0 : modulus_ - residue_);
}

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
  check_same_prime(a, b);
  if (a.precision_ == b.precision_) {
    return PadicInt(a.prime_, a.precision_, a.modulus_, modular::add(a.residue_, b.residue_, a.modulus_));
  }
  const PadicInt& lo = a.precision_ < b.precision_ ? a : b;
  Residue m = lo.modulus_;
  return PadicInt(a.prime_, lo.precision_, m, modular::add(a.residue_ % m, b.residue_ % m, m));
}

PadicInt operator-(const PadicInt& a, const PadicInt& b) { return a + (-b); }

PadicInt operator*(const PadicInt& a, const PadicInt& b) {
  check_same_prime(a, b);
  const PadicInt& lo = a.precision_ <= b.precision_ ? a : b;
  Residue m = lo.modulus_;
  return PadicInt(a.prime_, lo.precision_, m, modular::mul(a.residue_ % m, b.residue_ % m, m));
}

PadicInt PadicInt::operator+(std::int64_t k) const {
  return PadicInt(prime_, precision_, modulus_, modular::add(residue_, modular::reduce(k, modulus_), modulus_));
}

PadicInt PadicInt::operator-(std::int64_t k) const {
  return PadicInt(prime_, precision_, modulus_, modular::sub(residue_, modular::reduce(k, modulus_), modulus_));
}

PadicInt PadicInt::operator*(std::int64_t k) const {
  return PadicInt(prime_, precision_, modulus_, modular::mul(residue_, modular::reduce(k, modulus_), modulus_));
}

bool operator==(const PadicInt& a, const PadicInt& b) {
  if (a.prime_ != b.prime_) return false;
  Residue m = std::min(a.modulus_, b.modulus_);
  return a.residue_ % m == b.residue_ % m;
}

bool PadicInt::congruent(const PadicInt& other, int k) const {
  check_same_prime(*this, other);
  if (k > std::min(precision_, other.precision_)) throw MathError("congruence beyond known precision");
  Residue m = modular::prime_power(prime_, k);
  return residue_ % m == other.residue_ % m;
}

std::string PadicInt::to_string() const {
  std::ostringstream os;
  os << residue_ << " (mod " << prime_ << "^" << precision_ << ")";
  return os.str();
}

PadicInt arith(const PadicInt& a, const PadicInt& b, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return a + b;
    case ArithOp::sub:
      return a - b;
    case ArithOp::mul:
      return a * b;
  }
  throw MathError("unknown arithmetic op");
}

std::optional<int> valuation(const PadicInt& a) {
  if (a.is_zero()) return std::nullopt;
  int v = 0;
  Residue r = a.residue();
  while (r % a.prime() == 0) {
    r /= a.prime();
    ++v;
  }
  return v;
}

PadicInt invert(const PadicInt& a) {
  if (!a.is_unit()) throw MathError("not invertible");
  auto inv = modular::inverse(a.residue(), a.modulus());
  return PadicInt::from_residue(a.prime(), a.precision(), *inv);
}

PadicInt div_by_p_power(const PadicInt& a, int m) {
  if (m <= 0 || m >= a.precision()) {
    throw MathError("division by p^" + std::to_string(m) + " needs 0 < m < precision");
  }
  auto v = valuation(a);
  if (v && *v < m) throw MathError("not divisible");
  Residue q = a.residue() / modular::prime_power(a.prime(), m);
  return PadicInt::from_residue(a.prime(), a.precision() - m, q);
}

PadicInt mul_by_p_power(const PadicInt& a, int m) {
  if (m < 0) throw MathError("negative shift");
  Residue modulus = modular::prime_power(a.prime(), a.precision() + m);
  Residue scale = modular::prime_power(a.prime(), m);
  return PadicInt::from_residue(a.prime(), a.precision() + m, modular::mul(a.residue(), scale, modulus));
}

int legendre(const PadicInt& a) {
  Residue r = a.residue() % a.prime();
  if (r == 0) return 0;
  return modular::pow(r, (a.prime() - 1) / 2, a.prime()) == 1 ? 1 : -1;
}

PadicInt sqrt(const PadicInt& a) {
  if (legendre(a) != 1) throw MathError("no square root");
  const std::uint64_t p = a.prime();
  Residue r0 = tonelli_shanks(a.residue() % p, p);
  if (r0 > (p - 1) / 2) r0 = p - r0;
  if (a.precision() == 1) return PadicInt::from_residue(p, 1, r0);
  // F(x) = x^2 - a, F'(r0) = 2 r0 is a unit.
  PadicInt seed = PadicInt::from_residue(p, 1, r0).lift(a.precision());
  const PadicInt coeffs[] = {-a, PadicInt(p, a.precision(), 0), PadicInt(p, a.precision(), 1)};
  return newton_solve(coeffs, seed);
}

PadicInt eval_poly(std::span<const PadicInt> coeffs, const PadicInt& x) {
  if (coeffs.empty()) return PadicInt(x.prime(), x.precision(), 0);
  PadicInt acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

PadicInt newton_solve(std::span<const PadicInt> coeffs, const PadicInt& x0) {
  if (coeffs.empty()) throw MathError("empty polynomial");
  int k = coeffs[0].precision();
  for (const auto& c : coeffs) {
    if (c.prime() != x0.prime()) throw MathError("prime mismatch");
    k = std::min(k, c.precision());
  }
  std::vector<PadicInt> deriv;
  for (std::size_t i = 1; i < coeffs.size(); ++i) deriv.push_back(coeffs[i] * static_cast<std::int64_t>(i));

  PadicInt x = PadicInt::from_residue(x0.prime(), 1, x0.mod_p_power(1)).lift(k);
  if (!eval_poly(coeffs, x).truncate(1).is_zero()) throw MathError("no root over the seed residue");
  if (!eval_poly(deriv, x).is_unit()) throw MathError("singular");

  // Quadratic convergence: the number of correct digits doubles per step.
  for (int correct = 1; correct < k; correct *= 2) {
    PadicInt fx = eval_poly(coeffs, x).truncate(k);
    if (fx.is_zero()) break;
    x = x - fx * invert(eval_poly(deriv, x).truncate(k));
  }
  return x.truncate(k);
}

}  // namespace markoff
