#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "markoff/flow.hpp"
#include "markoff/surface.hpp"

namespace markoff {

enum class Coord { x = 0, y = 1, z = 2 };

std::string_view coord_name(Coord c);

/// Parametrization of the level 1 polydisk through a base point,
///   Psi(u, v) = (xi(y0 + pu, z0 + pv), y0 + pu, z0 + pv)
/// when x is the solved coordinate (the other choices permute roles). Chart
/// coordinates carry one digit less than the points they describe.
class PolydiskChart {
 public:
  /// Throws MathError("no chart") when the partial in the solved direction is
  /// not a unit mod p.
  static PolydiskChart parametrize(const SurfacePoint& base, Coord solved = Coord::x);

  const SurfacePoint& base() const noexcept { return base_; }
  Coord solved() const noexcept { return solved_; }
  /// Indices of the two free coordinates, in increasing order.
  std::array<int, 2> free_coords() const noexcept { return free_; }
  std::uint64_t prime() const { return base_.prime(); }
  int precision() const { return base_.precision(); }
  int chart_precision() const { return base_.precision() - 1; }

  /// The solved coordinate over the given free coordinates (Newton on the
  /// surface equation seeded at the base).
  PadicInt xi(const PadicInt& a, const PadicInt& b) const;
  SurfacePoint psi(const Vec2& uv) const;
  /// Throws MathError("leaves polydisk") if pt is not congruent to the base.
  Vec2 psi_inverse(const SurfacePoint& pt) const;
  bool contains(const SurfacePoint& pt) const;

 private:
  PolydiskChart(SurfacePoint base, Coord solved);

  SurfacePoint base_;
  Coord solved_;
  std::array<int, 2> free_;
};

/// Psi^-1 (w . Psi(u, v)); throws "leaves polydisk" when w does not
/// stabilize the chart's polydisk.
Vec2 chart_apply(const PolydiskChart& chart, const AutWord& w, const Vec2& uv);

/// The conjugated word as a PointMap. Its reduction mod p is fitted from the
/// images of (0,0), (1,0), (0,1) and checked on all of (Z/p)^2; the result is
/// declared identity-mod-p when the fit is the identity.
PointMap chart_point_map(const PolydiskChart& chart, const AutWord& w);

/// Reduction mod p of the conjugated word on (Z/p)^2, indexed by u * p + v.
std::vector<std::uint32_t> chart_table_mod_p(const PolydiskChart& chart, const AutWord& w);

/// Moves the free coordinates to the T_p fixed points of their residue disks.
PolydiskChart recentre(const PolydiskChart& chart);

/// Every (u, v) mod p, followed by `n_random` uniform residues mod p^2, all at
/// the chart precision.
std::vector<Vec2> expansion_samples(std::uint64_t p, int precision, int n_random, std::uint64_t seed);

/// xi(y0 + pu, z0 + pv) = x0 - (P_y/P_x) pu - (P_z/P_x) pv mod p^2.
CheckReport verify_xi_expansion(const PolydiskChart& chart, std::span<const Vec2> samples);

enum class ExpansionLemma { parab_f, g_and_h, nonpara_f };

std::string_view lemma_name(ExpansionLemma l);
std::optional<ExpansionLemma> parse_lemma(std::string_view s);

struct ExpansionReport {
  CheckReport main;
  /// The g^p constant term is also tested with (z0 - z1)/p in place of
  /// (y0 - y1)/p; this outcome is informational.
  std::optional<CheckReport> alternative;
  /// Chart constants used: c1, c2 (g_and_h) or the translation (parab_f).
  std::vector<std::pair<std::string, std::int64_t>> constants;
};

/// Pointwise check of a stabilizer expansion on a chart solving for x.
/// Throws MathError naming the residue condition when a hypothesis fails.
ExpansionReport verify_stabilizer_expansions(const PolydiskChart& chart, ExpansionLemma lemma,
                                             std::span<const Vec2> samples);

}  // namespace markoff
