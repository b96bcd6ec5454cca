#include "markoff/chebyshev.hpp"

#include <algorithm>
#include <string>

namespace markoff {

namespace {

PadicInt constant(const PadicInt& like, std::int64_t v) { return PadicInt(like.prime(), like.precision(), v); }

// p * u truncated to at most `cap` digits.
PadicInt times_p(const PadicInt& u, int cap) {
  PadicInt pu = mul_by_p_power(u, 1);
  return pu.truncate(std::min(pu.precision(), cap));
}

Residue binom3(std::uint64_t n, Residue m) {
  if (n < 3) return 0;
  modular::Wide v = static_cast<modular::Wide>(n) * (n - 1) * (n - 2) / 6;
  return static_cast<Residue>(v % m);
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      if (d != n / d) out.push_back(n / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string mat_str(const Mat2& m) {
  return "[[" + std::to_string(m.a11.residue()) + "," + std::to_string(m.a12.residue()) + "],[" +
         std::to_string(m.a21.residue()) + "," + std::to_string(m.a22.residue()) + "]]";
}

}  // namespace

// ---------------------------------------------------------------- Mat2

Mat2 Mat2::identity(std::uint64_t p, int precision) { return from_ints(p, precision, 1, 0, 0, 1); }
Mat2 Mat2::zero(std::uint64_t p, int precision) { return from_ints(p, precision, 0, 0, 0, 0); }

Mat2 Mat2::from_ints(std::uint64_t p, int precision, std::int64_t a11, std::int64_t a12, std::int64_t a21,
                     std::int64_t a22) {
  return Mat2{PadicInt(p, precision, a11), PadicInt(p, precision, a12), PadicInt(p, precision, a21),
              PadicInt(p, precision, a22)};
}

int Mat2::precision() const {
  return std::min({a11.precision(), a12.precision(), a21.precision(), a22.precision()});
}

Mat2 Mat2::truncate(int k) const { return Mat2{a11.truncate(k), a12.truncate(k), a21.truncate(k), a22.truncate(k)}; }

Mat2 Mat2::inverse() const {
  PadicInt inv = invert(det());
  return Mat2{a22 * inv, -a12 * inv, -a21 * inv, a11 * inv};
}

std::array<PadicInt, 2> Mat2::apply(const std::array<PadicInt, 2>& v) const {
  return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return Mat2{a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22, a.a21 * b.a11 + a.a22 * b.a21,
              a.a21 * b.a12 + a.a22 * b.a22};
}
Mat2 operator+(const Mat2& a, const Mat2& b) {
  return Mat2{a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
Mat2 operator-(const Mat2& a, const Mat2& b) {
  return Mat2{a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
Mat2 operator*(const PadicInt& s, const Mat2& m) { return Mat2{s * m.a11, s * m.a12, s * m.a21, s * m.a22}; }
bool operator==(const Mat2& a, const Mat2& b) {
  return a.a11 == b.a11 && a.a12 == b.a12 && a.a21 == b.a21 && a.a22 == b.a22;
}
bool Mat2::congruent(const Mat2& o, int k) const {
  return a11.congruent(o.a11, k) && a12.congruent(o.a12, k) && a21.congruent(o.a21, k) && a22.congruent(o.a22, k);
}

// ---------------------------------------------------------------- DensePoly

DensePoly::DensePoly(std::uint64_t prime, int precision, std::vector<std::int64_t> coeffs)
    : prime_(prime), precision_(precision), modulus_(PadicInt(prime, precision, 0).modulus()) {
  coeffs_.reserve(coeffs.size());
  for (auto c : coeffs) coeffs_.push_back(modular::reduce(c, modulus_));
  trim();
}

void DensePoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::optional<int> DensePoly::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  return static_cast<int>(coeffs_.size()) - 1;
}

PadicInt DensePoly::coeff(std::size_t i) const {
  return PadicInt::from_residue(prime_, precision_, i < coeffs_.size() ? coeffs_[i] : 0);
}

PadicInt DensePoly::evaluate(const PadicInt& x) const {
  PadicInt acc(prime_, precision_, 0);
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeff(i);
  return acc;
}

DensePoly operator+(const DensePoly& a, const DensePoly& b) {
  if (a.prime_ != b.prime_ || a.precision_ != b.precision_) throw MathError("polynomial ring mismatch");
  DensePoly out(a.prime_, a.precision_, a.modulus_);
  out.coeffs_.assign(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    Residue x = i < a.coeffs_.size() ? a.coeffs_[i] : 0;
    Residue y = i < b.coeffs_.size() ? b.coeffs_[i] : 0;
    out.coeffs_[i] = modular::add(x, y, a.modulus_);
  }
  out.trim();
  return out;
}

DensePoly operator*(std::int64_t s, const DensePoly& a) {
  DensePoly out(a.prime_, a.precision_, a.modulus_);
  Residue sr = modular::reduce(s, a.modulus_);
  for (auto c : a.coeffs_) out.coeffs_.push_back(modular::mul(c, sr, a.modulus_));
  out.trim();
  return out;
}

DensePoly operator-(const DensePoly& a, const DensePoly& b) { return a + (-1) * b; }

DensePoly DensePoly::shift() const {
  DensePoly out(prime_, precision_, modulus_);
  if (coeffs_.empty()) return out;
  out.coeffs_.reserve(coeffs_.size() + 1);
  out.coeffs_.push_back(0);
  out.coeffs_.insert(out.coeffs_.end(), coeffs_.begin(), coeffs_.end());
  return out;
}

bool operator==(const DensePoly& a, const DensePoly& b) {
  return a.prime_ == b.prime_ && a.precision_ == b.precision_ && a.coeffs_ == b.coeffs_;
}

DensePoly DensePoly::monomial(std::uint64_t prime, int precision, int n) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(n) + 1, 0);
  c.back() = 1;
  return DensePoly(prime, precision, std::move(c));
}

// ---------------------------------------------------------------- Chebyshev

namespace {

DensePoly run_recurrence(DensePoly prev, DensePoly cur, long steps) {
  for (long i = 0; i < steps; ++i) {
    DensePoly next = cur.shift() - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

void check_cap(long n, long cap) {
  if (n > cap) throw MathError("degree " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
}

}  // namespace

DensePoly chebyshev_T(long n, std::uint64_t p, int precision, long cap) {
  if (n < 0) n = -n;
  check_cap(n, cap);
  DensePoly t0(p, precision, std::vector<std::int64_t>{2});
  if (n == 0) return t0;
  DensePoly t1(p, precision, std::vector<std::int64_t>{0, 1});
  return run_recurrence(t0, t1, n - 1);
}

DensePoly chebyshev_U(long n, std::uint64_t p, int precision, long cap) {
  if (n == -1) return DensePoly(p, precision, std::vector<std::int64_t>{});
  if (n < -1) return (-1) * chebyshev_U(-n - 2, p, precision, cap);
  check_cap(n, cap);
  DensePoly u0(p, precision, std::vector<std::int64_t>{1});
  if (n == 0) return u0;
  DensePoly u1(p, precision, std::vector<std::int64_t>{0, 1});
  return run_recurrence(u0, u1, n - 1);
}

Mat2 companion(const PadicInt& x) { return Mat2{x, constant(x, -1), constant(x, 1), constant(x, 0)}; }

Mat2 companion_power(const PadicInt& x, std::uint64_t n) {
  Mat2 result = Mat2::identity(x.prime(), x.precision());
  Mat2 base = companion(x);
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

PadicInt eval_T(long n, const PadicInt& x) {
  if (n < 0) n = -n;
  return companion_power(x, static_cast<std::uint64_t>(n)).trace();
}

PadicInt eval_U(long n, const PadicInt& x) {
  if (n == -1) return constant(x, 0);
  if (n < -1) return -eval_U(-n - 2, x);
  return companion_power(x, static_cast<std::uint64_t>(n)).a11;
}

Mat2 companion_derivative(const PadicInt& x, std::uint64_t n, int m) {
  if (m < 1 || x.precision() < 2 * m + 1) {
    throw MathError("companion_derivative needs precision >= 2m+1 (m=" + std::to_string(m) +
                    ", precision=" + std::to_string(x.precision()) + ")");
  }
  PadicInt step = PadicInt::from_residue(x.prime(), x.precision(), modular::prime_power(x.prime(), m));
  Mat2 diff = companion_power(x + step, n) - companion_power(x, n);
  auto q = [m](const PadicInt& e) { return div_by_p_power(e, m).truncate(m); };
  return Mat2{q(diff.a11), q(diff.a12), q(diff.a21), q(diff.a22)};
}

int border_sign(const PadicInt& x) {
  Residue r = x.mod_p_power(1);
  if (r == 2 % x.prime()) return 1;
  if (r == x.prime() - 2) return -1;
  return 0;
}

Mat2 companion_derivative_formula(const PadicInt& x, std::uint64_t n) {
  const std::uint64_t p = x.prime();
  const int k = x.precision();
  PadicInt disc = x * x - 4;
  if (disc.is_unit()) {
    PadicInt inv = invert(disc);
    long ln = static_cast<long>(n);
    PadicInt tn1 = eval_T(ln + 1, x), tn = eval_T(ln, x), tm1 = eval_T(ln - 1, x);
    PadicInt u = eval_U(ln - 1, x);
    Mat2 first{tn1, -tn, tn, -tm1};
    Mat2 second{constant(x, -2), x, -x, constant(x, 2)};
    return (inv * PadicInt(p, k, static_cast<std::int64_t>(n))) * first + (inv * u) * second;
  }
  int s = 0;
  if (x == PadicInt(p, k, 2)) s = 1;
  if (x == PadicInt(p, k, -2)) s = -1;
  if (s == 0) throw MathError("no closed form for C_N' at x = +-2 mod p unless x = +-2 exactly");
  Residue m = x.modulus();
  auto b = [&](std::uint64_t v) { return PadicInt::from_residue(p, k, binom3(v, m)); };
  PadicInt sign = constant(x, ((n + 1) % 2 == 0 || s == 1) ? 1 : -1);
  PadicInt sv = constant(x, s);
  Mat2 core{b(n + 2), -(sv * b(n + 1)), sv * b(n + 1), -b(n)};
  return sign * core;
}

PadicInt chebyshev_Tp(const PadicInt& x) { return eval_T(static_cast<long>(x.prime()), x); }

PadicInt fixed_point_Tp(const PadicInt& x0) {
  PadicInt x = x0;
  for (int i = 0; i + 1 < x0.precision(); ++i) x = chebyshev_Tp(x);
  return x;
}

std::uint64_t rotation_order(const PadicInt& x1) {
  if (border_sign(x1) != 0) throw MathError("unipotent case");
  const std::uint64_t p = x1.prime();
  const Mat2 id = Mat2::identity(p, x1.precision());
  for (auto r : divisors((p * p - 1) / 2)) {
    if (companion_power(x1, r) == id) return r;
  }
  throw MathError("not a trace of rational rotation at this precision");
}

CheckReport verify_power_sum_identity(std::uint64_t p, int precision, std::span<const PadicInt> sample_xs) {
  CheckReport report;
  const Residue m = modular::prime_power(p, precision);

  // Pascal row p mod p^K.
  std::vector<Residue> row{1};
  for (std::uint64_t i = 1; i <= p; ++i) {
    std::vector<Residue> next(row.size() + 1, 1);
    for (std::size_t j = 1; j < row.size(); ++j) next[j] = modular::add(row[j - 1], row[j], m);
    row = std::move(next);
  }

  DensePoly lhs = DensePoly::monomial(p, precision, static_cast<int>(p));
  DensePoly rhs(p, precision, std::vector<std::int64_t>{});
  for (std::uint64_t j = 0; j <= (p - 1) / 2; ++j) {
    rhs = rhs + static_cast<std::int64_t>(row[j]) * chebyshev_T(static_cast<long>(p - 2 * j), p, precision);
  }
  report.record(lhs == rhs, "x^p != sum binom(p,j) T_{p-2j} coefficientwise");

  DensePoly tp = chebyshev_T(static_cast<long>(p), p, precision);
  for (std::uint64_t i = 0; i <= p; ++i) {
    Residue want = i == p ? 1 : 0;
    report.record(tp.coeff(i).mod_p_power(1) == want,
                  "T_p coefficient " + std::to_string(i) + " differs from x^p mod p");
  }

  for (const auto& x : sample_xs) {
    PadicInt xp = constant(x, 1);
    for (std::uint64_t i = 0; i < p; ++i) xp = xp * x;
    PadicInt sum = constant(x, 0);
    for (std::uint64_t j = 0; j <= (p - 1) / 2; ++j) {
      sum = sum + PadicInt::from_residue(p, x.precision(), row[j] % x.modulus()) *
                      eval_T(static_cast<long>(p - 2 * j), x);
    }
    report.record(xp == sum, "power-sum identity fails at x = " + x.to_string());
  }
  return report;
}

CheckReport verify_companion_estimates(const PadicInt& x0, std::span<const PadicInt> sample_us) {
  const int k = x0.precision();
  if (k < 3) throw MathError("companion estimates need precision >= 3");
  const std::uint64_t p = x0.prime();
  CheckReport report;
  const Mat2 id = Mat2::identity(p, k);
  const int sign = border_sign(x0);

  if (sign == 0) {
    const std::uint64_t n = (p * p - 1) / 2;
    PadicInt x1 = fixed_point_Tp(x0);
    PadicInt c = PadicInt(p, k, static_cast<std::int64_t>(n)) * invert(x0 * x0 - 4);
    Mat2 shape{x0, constant(x0, -2), constant(x0, 2), -x0};
    for (const auto& u : sample_us) {
      PadicInt pu = times_p(u, k);
      PadicInt x = x0 + pu;
      PadicInt delta = x0 - x1 + pu;
      Mat2 lhs1 = companion_power(x, n);
      Mat2 rhs1 = id + (c * delta) * shape;
      report.record(lhs1.congruent(rhs1, 2), "C^N estimate mod p^2 fails at u=" + u.to_string() + ": " +
                                                 mat_str(lhs1) + " vs " + mat_str(rhs1));
      Mat2 lhs2 = companion_power(x, p * n);
      Mat2 rhs2 = id + (c * delta * p) * shape;
      report.record(lhs2.congruent(rhs2, 3), "C^(pN) estimate mod p^3 fails at u=" + u.to_string());
    }
  } else {
    if (p <= 3) throw MathError("parabolic estimates need p > 3");
    Mat2 shape{constant(x0, 2), -x0, x0, constant(x0, -2)};
    for (const auto& u : sample_us) {
      PadicInt x = x0 + times_p(u, k);
      Mat2 lhs1 = companion_power(x, 2 * p);
      Mat2 rhs1 = id + constant(x0, static_cast<std::int64_t>(p)) * shape;
      report.record(lhs1.congruent(rhs1, 2), "C^(2p) estimate mod p^2 fails at u=" + u.to_string() + ": " +
                                                 mat_str(lhs1) + " vs " + mat_str(rhs1));
      Mat2 lhs2 = companion_power(x, 2 * p * p);
      Mat2 rhs2 = id + constant(x0, static_cast<std::int64_t>(p * p)) * shape;
      report.record(lhs2.congruent(rhs2, 3), "C^(2p^2) estimate mod p^3 fails at u=" + u.to_string());
    }
  }
  return report;
}

}  // namespace markoff
