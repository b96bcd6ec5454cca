#include "markoff/flow.hpp"

#include <algorithm>
#include <string>

namespace markoff {

namespace {

Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
Vec2 add(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
Vec2 truncate(const Vec2& a, int k) { return {a[0].truncate(k), a[1].truncate(k)}; }
int precision(const Vec2& a) { return std::min(a[0].precision(), a[1].precision()); }

std::string vec_str(const Vec2& a) {
  return "(" + std::to_string(a[0].residue()) + ", " + std::to_string(a[1].residue()) + ")";
}

// Reinterprets entries (integers known mod p) at precision k. The mod-p data
// of a PointMap is only ever used through such lifts.
Mat2 lift(const Mat2& m, int k) { return Mat2{m.a11.lift(k), m.a12.lift(k), m.a21.lift(k), m.a22.lift(k)}; }
Vec2 lift(const Vec2& v, int k) { return {v[0].lift(k), v[1].lift(k)}; }

int vp_factorial(std::uint64_t p, std::uint64_t n) {
  int v = 0;
  for (std::uint64_t q = p; q <= n; q *= p) v += static_cast<int>(n / q);
  return v;
}

// Unit part of j! modulo p^k.
PadicInt factorial_unit_part(std::uint64_t p, int k, std::uint64_t j) {
  PadicInt acc(p, k, 1);
  for (std::uint64_t i = 2; i <= j; ++i) {
    std::uint64_t c = i;
    while (c % p == 0) c /= p;
    acc = acc * static_cast<std::int64_t>(c);
  }
  return acc;
}

Vec2 divide_by_p(const Vec2& a) { return {div_by_p_power(a[0], 1), div_by_p_power(a[1], 1)}; }

void require_identity(const PointMap& f, const char* what) {
  if (f.kind() != PointMap::Kind::identity_mod_p) {
    throw MathError(std::string(what) + " needs a map that is the identity mod p");
  }
}

}  // namespace

std::vector<Vec2> residue_probes(std::uint64_t p, int precision) {
  std::vector<Vec2> out;
  out.reserve(p * p);
  for (std::uint64_t a = 0; a < p; ++a) {
    for (std::uint64_t b = 0; b < p; ++b) {
      out.push_back({PadicInt(p, precision, static_cast<std::int64_t>(a)),
                     PadicInt(p, precision, static_cast<std::int64_t>(b))});
    }
  }
  return out;
}

PointMap PointMap::identity_mod_p(std::uint64_t p, MapFn f, std::span<const Vec2> probes) {
  for (const auto& w : probes) {
    Vec2 img = f(w);
    if (!img[0].congruent(w[0], 1) || !img[1].congruent(w[1], 1)) {
      throw MathError("map is not the identity mod p at " + vec_str(w) + " -> " + vec_str(img));
    }
  }
  return PointMap(p, std::move(f), Kind::identity_mod_p, Mat2::identity(p, 1),
                  Vec2{PadicInt(p, 1, 0), PadicInt(p, 1, 0)});
}

PointMap PointMap::affine_mod_p(std::uint64_t p, MapFn f, const Mat2& A, const Vec2& b, std::span<const Vec2> probes) {
  if (!A.truncate(1).det().is_unit()) throw MathError("linear part is not invertible mod p");
  for (const auto& w : probes) {
    Vec2 img = f(w);
    Vec2 want = add(A.truncate(1).apply(truncate(w, 1)), truncate(b, 1));
    if (!img[0].congruent(want[0], 1) || !img[1].congruent(want[1], 1)) {
      throw MathError("map differs from its declared affine part mod p at " + vec_str(w));
    }
  }
  return PointMap(p, std::move(f), Kind::affine_mod_p, A.truncate(1), truncate(b, 1));
}

int flow_input_precision(std::uint64_t p, int k_out, std::optional<int> terms) {
  int j = terms.value_or(default_flow_terms(k_out));
  return k_out + vp_factorial(p, static_cast<std::uint64_t>(j));
}

Vec2 mahler_flow(const PointMap& f, const PadicInt& t, const Vec2& w, int k_out, std::optional<int> terms) {
  require_identity(f, "mahler_flow");
  const std::uint64_t p = f.prime();
  const int J = terms.value_or(default_flow_terms(k_out));
  const int need = flow_input_precision(p, k_out, J);
  if (k_out < 1 || precision(w) < need || t.precision() < k_out) {
    throw MathError("insufficient input precision for the flow: need " + std::to_string(need) +
                    " digits in w and " + std::to_string(k_out) + " in t");
  }

  std::vector<Vec2> orbit{w};
  orbit.reserve(static_cast<std::size_t>(J) + 1);
  for (int i = 0; i < J; ++i) orbit.push_back(f(orbit.back()));
  if (!orbit[1][0].congruent(w[0], 1) || !orbit[1][1].congruent(w[1], 1)) {
    throw MathError("map is not the identity mod p along the orbit");
  }

  // Pascal rows for the forward differences.
  std::vector<std::vector<std::int64_t>> pascal{{1}};
  for (int j = 1; j <= J; ++j) {
    std::vector<std::int64_t> row(static_cast<std::size_t>(j) + 1, 1);
    for (int i = 1; i < j; ++i) row[i] = pascal[j - 1][i - 1] + pascal[j - 1][i];
    pascal.push_back(std::move(row));
  }

  Vec2 result = truncate(w, k_out);
  PadicInt falling = PadicInt(p, t.precision(), 1);
  for (int j = 1; j <= J; ++j) {
    falling = falling * (t - (j - 1));
    Vec2 delta{PadicInt(p, precision(w), 0), PadicInt(p, precision(w), 0)};
    for (int i = 0; i <= j; ++i) {
      std::int64_t c = ((j - i) % 2 == 0 ? 1 : -1) * pascal[j][i];
      delta = add(delta, Vec2{orbit[i][0] * c, orbit[i][1] * c});
    }
    int v = vp_factorial(p, static_cast<std::uint64_t>(j));
    if (v > 0) delta = {div_by_p_power(delta[0], v), div_by_p_power(delta[1], v)};
    PadicInt scale = falling.truncate(k_out) * invert(factorial_unit_part(p, k_out, static_cast<std::uint64_t>(j)));
    result = add(result, truncate(Vec2{delta[0] * scale, delta[1] * scale}, k_out));
  }
  return result;
}

CheckReport verify_flow_mod_p2(const PointMap& f, std::span<const FlowSample> samples) {
  CheckReport report;
  for (const auto& s : samples) {
    Vec2 lhs = mahler_flow(f, s.t.truncate(2), s.w, 2);
    Vec2 fw = f(s.w);
    Vec2 rhs = truncate(add(s.w, Vec2{(fw[0] - s.w[0]) * s.t, (fw[1] - s.w[1]) * s.t}), 2);
    report.record(lhs[0] == rhs[0] && lhs[1] == rhs[1],
                  "flow mod p^2 at t=" + s.t.to_string() + ", w=" + vec_str(s.w) + ": " + vec_str(lhs) +
                      " vs " + vec_str(rhs));
  }
  return report;
}

CheckReport verify_flow_iterates(const PointMap& f, std::span<const Vec2> ws, int n_max, int k_out) {
  CheckReport report;
  const std::uint64_t p = f.prime();
  for (const auto& w : ws) {
    Vec2 iter = w;
    for (int n = 0; n <= n_max; ++n) {
      Vec2 flow = mahler_flow(f, PadicInt(p, k_out, n), w, k_out);
      Vec2 want = truncate(iter, k_out);
      report.record(flow[0] == want[0] && flow[1] == want[1],
                    "Phi(" + std::to_string(n) + ", " + vec_str(w) + ") differs from the iterate");
      iter = f(iter);
    }
  }
  return report;
}

CheckReport verify_flow_additivity(const PointMap& f, std::span<const AdditivitySample> samples, int k_out) {
  CheckReport report;
  const std::uint64_t p = f.prime();
  const int inner_k = flow_input_precision(p, k_out);
  for (const auto& s : samples) {
    Vec2 direct = mahler_flow(f, (s.s + s.t).truncate(k_out), s.w, k_out);
    Vec2 inner = mahler_flow(f, s.t, s.w, inner_k);
    Vec2 nested = mahler_flow(f, s.s.truncate(k_out), inner, k_out);
    report.record(direct[0] == nested[0] && direct[1] == nested[1],
                  "flow additivity fails at s=" + s.s.to_string() + ", t=" + s.t.to_string());
  }
  return report;
}

CheckReport verify_flow_truncation(const PointMap& f, std::span<const FlowSample> samples, int k_out, int extra) {
  CheckReport report;
  const int J = default_flow_terms(k_out);
  for (const auto& s : samples) {
    Vec2 base = mahler_flow(f, s.t, s.w, k_out, J);
    Vec2 more = mahler_flow(f, s.t, s.w, k_out, J + extra);
    report.record(base[0] == more[0] && base[1] == more[1],
                  "extra Mahler terms change the flow at t=" + s.t.to_string());
  }
  return report;
}

Vec2 newton_inverse(const PointMap& f, const Vec2& y) {
  if (f.kind() != PointMap::Kind::affine_mod_p && f.kind() != PointMap::Kind::identity_mod_p) {
    throw MathError("unknown map class");
  }
  const int k = precision(y);
  Mat2 A = lift(f.linear(), k);
  Mat2 Ainv = A.inverse();
  Vec2 x = Ainv.apply(sub(y, lift(f.offset(), k)));
  for (int i = 0; i <= k; ++i) {
    Vec2 r = sub(f(x), y);
    if (r[0].truncate(k).is_zero() && r[1].truncate(k).is_zero()) break;
    x = truncate(sub(x, Ainv.apply(r)), k);
  }
  return truncate(x, k);
}

MinimalityDet local_minimality_det(const PointMap& f, const PointMap& g, const Vec2& w0) {
  require_identity(f, "local_minimality_det");
  require_identity(g, "local_minimality_det");
  if (precision(w0) < 2) throw MathError("minimality determinant needs precision >= 2");
  MinimalityDet out{divide_by_p(sub(f(w0), w0)), divide_by_p(sub(g(w0), w0)), PadicInt(f.prime(), 1, 0), false};
  out.det = out.col1[0] * out.col2[1] - out.col2[0] * out.col1[1];
  out.unit = out.det.is_unit();
  return out;
}

MinimalityDet twisted_minimality_det(const PointMap& f, const PointMap& g, const Vec2& w0) {
  require_identity(f, "twisted_minimality_det");
  if (precision(w0) < 2) throw MathError("minimality determinant needs precision >= 2");
  Vec2 col1 = divide_by_p(sub(f(w0), w0));
  Vec2 back = newton_inverse(g, w0);
  Vec2 moved = divide_by_p(sub(f(back), back));
  Vec2 col2 = lift(g.linear(), precision(moved)).apply(moved);
  MinimalityDet out{col1, col2, PadicInt(f.prime(), 1, 0), false};
  out.det = col1[0] * col2[1] - col2[0] * col1[1];
  out.unit = out.det.is_unit();
  return out;
}

}  // namespace markoff
