#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "markoff/polydisk.hpp"
#include "markoff/surface.hpp"

namespace markoff {

/// (2, t + sqrt(D-4), t) with the least admissible t when (D-4/p) = 1, or
/// (sqrt(D-4), 2, 0) when p = 5 and D = 3 mod 5. Throws "no special point
/// recipe" otherwise.
SurfacePoint find_special_point(std::uint64_t p, int precision, const PadicInt& D);

struct StrictMove {
  AutWord word;
  DistClass dist;
  /// "pair-power", "conjugated-power" or "word-search".
  std::string source;
};

/// A Gamma-word moving pt by exactly p^-1. Explicit power candidates come
/// first, then conjugates by short words, then every reduced word up to
/// `budget` letters. Throws "no strict move found" when all fail.
StrictMove strict_move_search(const SurfacePoint& pt, int budget = 8);

struct ResidualReport {
  bool transitive = false;
  std::vector<std::uint64_t> orbit_sizes;  ///< descending
};

/// Orbits on (Z/p)^2 of the chart reductions of gens (and extra, if given).
ResidualReport residual_transitivity(const PolydiskChart& chart, std::span<const AutWord> gens,
                                     const std::optional<AutWord>& extra = std::nullopt);

struct CertifyOptions {
  int budget_words = 8;
  /// Use the rotation order of the recentred coordinates instead of
  /// (p^2-1)/4 for the g and h exponents.
  bool optimized_exponent = false;
};

struct MinimalityCertificate {
  std::uint64_t p = 0;
  int K = 0;
  Residue D = 0;
  std::string route;  ///< "special-point", "d-zero" or "p5-exceptional"

  std::array<Residue, 3> base{};
  std::array<Residue, 3> centre{};
  bool recentred = false;

  std::string strict_word;
  int strict_exponent = 0;
  std::string strict_source;
  std::array<Residue, 3> strict_image{};

  std::vector<std::string> residual_words;
  std::vector<std::uint64_t> residual_orbit_sizes;
  bool residual_transitive = false;

  std::string subdisk_kind;  ///< "local" or "twisted"
  std::string subdisk_f, subdisk_g;
  std::array<Residue, 2> witness{};
  std::array<Residue, 2> col1{}, col2{};
  Residue det = 0;
  bool det_unit = false;

  bool pass = false;
  std::string failed_stage;  ///< empty on pass
  std::string failure;

  friend bool operator==(const MinimalityCertificate&, const MinimalityCertificate&) = default;
};

MinimalityCertificate certify_minimal_polydisk(std::uint64_t p, int K, const PadicInt& D,
                                               const CertifyOptions& opts = {});

/// Stable JSON rendering (fixed field order) and its inverse.
std::string certificate_to_json(const MinimalityCertificate& cert, int indent = 2);
MinimalityCertificate certificate_from_json(const std::string& text);

/// Recomputes every recorded value from the certificate's own data.
CheckReport replay_certificate(const MinimalityCertificate& cert);

struct XDReport {
  bool found = false;
  std::uint64_t points_checked = 0;
  std::uint64_t words_checked = 0;
  std::array<std::int64_t, 3> witness_point{};
  std::string witness_word;
  std::int64_t value_mod_p2 = 0;  ///< P(T_p(alpha . pt)) mod p^2 at the witness
};

/// Searches pt (every lifted mod-p point, or only `start`) and Gamma-words
/// alpha of length <= budget for P(T_p(alpha . pt)) != D mod p^2.
XDReport check_XD(std::uint64_t p, int K, const PadicInt& D, int budget,
                  const std::optional<SurfacePoint>& start = std::nullopt);

/// Lifts a nonsingular mod-p triple to precision K, solving for the first
/// coordinate whose partial is a unit and keeping the others as exact integers.
SurfacePoint lift_residue_point(std::uint64_t p, int K, const Triple& t, const PadicInt& D);

/// Every freely reduced Gamma-word of length <= max_len, shortest first.
std::vector<AutWord> gamma_words(int max_len);

}  // namespace markoff
