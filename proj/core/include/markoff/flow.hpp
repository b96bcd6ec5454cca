#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "markoff/chebyshev.hpp"
#include "markoff/padic.hpp"

namespace markoff {

using Vec2 = std::array<PadicInt, 2>;
using MapFn = std::function<Vec2(const Vec2&)>;

/// All pairs (a, b) with 0 <= a, b < p, as exact integers at `precision`.
std::vector<Vec2> residue_probes(std::uint64_t p, int precision);

/// A black-box analytic map Z_p^2 -> Z_p^2 together with its declared
/// reduction mod p: either the identity or an invertible affine map A w + b.
/// The declaration is checked on the supplied probes at construction.
class PointMap {
 public:
  enum class Kind { identity_mod_p, affine_mod_p };

  static PointMap identity_mod_p(std::uint64_t p, MapFn f, std::span<const Vec2> probes);
  static PointMap affine_mod_p(std::uint64_t p, MapFn f, const Mat2& A, const Vec2& b, std::span<const Vec2> probes);

  Vec2 operator()(const Vec2& w) const { return fn_(w); }
  Kind kind() const noexcept { return kind_; }
  std::uint64_t prime() const noexcept { return prime_; }
  const Mat2& linear() const noexcept { return A_; }
  const Vec2& offset() const noexcept { return b_; }

 private:
  PointMap(std::uint64_t p, MapFn f, Kind kind, Mat2 A, Vec2 b)
      : prime_(p), fn_(std::move(f)), kind_(kind), A_(std::move(A)), b_(std::move(b)) {}

  std::uint64_t prime_;
  MapFn fn_;
  Kind kind_;
  Mat2 A_;
  Vec2 b_;
};

/// Number of Mahler terms used by default for K_out output digits.
inline int default_flow_terms(int k_out) { return 2 * k_out; }
/// Input precision needed to produce K_out digits with `terms` terms:
/// K_out + val_p(terms!).
int flow_input_precision(std::uint64_t p, int k_out, std::optional<int> terms = std::nullopt);

/// Phi_f(t, w) mod p^K_out by the truncated Mahler series
/// sum_{j <= J} binom(t, j) Delta^j(w).
Vec2 mahler_flow(const PointMap& f, const PadicInt& t, const Vec2& w, int k_out,
                 std::optional<int> terms = std::nullopt);

struct FlowSample {
  PadicInt t;
  Vec2 w;
};

/// Phi(t, w) = w + (f(w) - w) t mod p^2 on every sample.
CheckReport verify_flow_mod_p2(const PointMap& f, std::span<const FlowSample> samples);
/// Phi(n, w) = f^n(w) for 0 <= n <= n_max.
CheckReport verify_flow_iterates(const PointMap& f, std::span<const Vec2> ws, int n_max, int k_out);
struct AdditivitySample {
  PadicInt s, t;
  Vec2 w;
};
/// Phi(s + t, w) = Phi(s, Phi(t, w)) at K_out. The inner flow is evaluated
/// with enough extra digits to feed the outer one.
CheckReport verify_flow_additivity(const PointMap& f, std::span<const AdditivitySample> samples, int k_out);
/// Output at K_out does not change when `extra` more terms are summed.
CheckReport verify_flow_truncation(const PointMap& f, std::span<const FlowSample> samples, int k_out, int extra);

/// x with f(x) = y, for f affine and invertible mod p. Each Newton step with
/// the constant Jacobian A gains one digit.
Vec2 newton_inverse(const PointMap& f, const Vec2& y);

struct MinimalityDet {
  Vec2 col1, col2;
  PadicInt det;
  bool unit = false;
};

/// det[(f(w0) - w0)/p, (g(w0) - w0)/p]; a unit certifies that <f, g> acts
/// minimally on w0 + (pZ_p)^2.
MinimalityDet local_minimality_det(const PointMap& f, const PointMap& g, const Vec2& w0);

/// det[(f(w0) - w0)/p, A (f(g^-1 w0) - g^-1 w0)/p] for f = id mod p and g
/// affine mod p with linear part A; a unit certifies minimality of
/// <f, g f g^-1> on w0 + (pZ_p)^2.
MinimalityDet twisted_minimality_det(const PointMap& f, const PointMap& g, const Vec2& w0);

}  // namespace markoff
