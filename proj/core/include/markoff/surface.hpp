#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "markoff/padic.hpp"

namespace markoff {

/// Generators of Aut(X_D*): the Vieta involutions, the double sign changes
/// (ex fixes x and negates y and z) and the coordinate transpositions.
enum class Letter : std::uint8_t { sx, sy, sz, ex, ey, ez, pxy, pyz, pzx };

inline constexpr std::array<Letter, 9> kAllLetters = {Letter::sx, Letter::sy, Letter::sz,  Letter::ex, Letter::ey,
                                                      Letter::ez, Letter::pxy, Letter::pyz, Letter::pzx};
inline constexpr std::array<Letter, 3> kVietaLetters = {Letter::sx, Letter::sy, Letter::sz};

std::string_view letter_name(Letter l);
std::optional<Letter> parse_letter(std::string_view token);
constexpr bool is_vieta(Letter l) { return l == Letter::sx || l == Letter::sy || l == Letter::sz; }

/// Which group an action is restricted to.
enum class GroupScope { gamma, aut };

/// A freely reduced word in the generators. Words compose like functions:
/// the rightmost letter acts first, so "sy sz" is s_y o s_z and acts on
/// (y, z) as C(x)^2.
class AutWord {
 public:
  AutWord() = default;
  explicit AutWord(std::vector<Letter> letters);

  /// Parses space separated letters with optional grouping and powers, for
  /// example "sx (sy sz)^13 sx".
  static AutWord parse(std::string_view text);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool gamma_only() const noexcept;

  AutWord inverse() const;
  AutWord power(std::uint64_t n) const;
  /// Text form; alternating runs are folded into "(a b)^n".
  std::string to_string() const;

  /// a * b is the composition a o b (b acts first).
  friend AutWord operator*(const AutWord& a, const AutWord& b);
  friend bool operator==(const AutWord& a, const AutWord& b) = default;

 private:
  std::vector<Letter> letters_;
};

/// (x0 x1)^n as a word, for the common stabilizer powers.
AutWord pair_power(Letter a, Letter b, std::uint64_t n);

struct SurfacePoint {
  PadicInt x, y, z, D;

  /// Validates the equation and nonsingularity; throws MathError otherwise.
  static SurfacePoint make(const PadicInt& x, const PadicInt& y, const PadicInt& z, const PadicInt& D);

  std::uint64_t prime() const { return x.prime(); }
  int precision() const;
  const PadicInt& coord(int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  SurfacePoint truncate(int k) const;

  friend bool operator==(const SurfacePoint& a, const SurfacePoint& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

PadicInt eval_P(const PadicInt& x, const PadicInt& y, const PadicInt& z);
/// (P_x, P_y, P_z) = (2x - yz, 2y - xz, 2z - xy).
std::array<PadicInt, 3> partials(const PadicInt& x, const PadicInt& y, const PadicInt& z);
inline std::array<PadicInt, 3> partials(const SurfacePoint& pt) { return partials(pt.x, pt.y, pt.z); }

bool is_point(const PadicInt& x, const PadicInt& y, const PadicInt& z, const PadicInt& D);

SurfacePoint apply_generator(Letter g, const SurfacePoint& pt, GroupScope scope = GroupScope::aut);
SurfacePoint apply_word(const AutWord& w, const SurfacePoint& pt, GroupScope scope = GroupScope::aut);

/// Distance class p^-exponent. exponent == precision means the points agree
/// at working precision ("at most p^-K"). Ordered by size of the distance.
struct DistClass {
  int exponent = 0;
  int precision = 0;

  bool indistinguishable() const noexcept { return exponent >= precision; }
  std::string to_string() const;

  friend std::strong_ordering operator<=>(const DistClass& a, const DistClass& b) { return b.exponent <=> a.exponent; }
  friend bool operator==(const DistClass& a, const DistClass& b) { return a.exponent == b.exponent; }
};

DistClass dist(const SurfacePoint& a, const SurfacePoint& b);

using Triple = std::array<Residue, 3>;

/// Coordinatewise residues mod p^level.
Triple reduce(const SurfacePoint& pt, int level);

/// The action of a letter on residues mod m (used by the orbit engine).
Triple apply_letter(Letter g, const Triple& t, Residue m);
/// Word action on residues mod m, rightmost letter first.
Triple apply_word(const AutWord& w, const Triple& t, Residue m);

}  // namespace markoff
