#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "markoff/surface.hpp"

namespace markoff {

/// A run would exceed the scan limit or the memory budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EnumerationMode { automatic, brute, lift };

struct CensusOptions {
  EnumerationMode mode = EnumerationMode::automatic;
  unsigned workers = 1;
  /// Memory budget in bytes; 0 reads MARKOFF_PADIC_MAX_MEM (default 4 GiB).
  std::uint64_t max_memory = 0;
};

/// Memory budget from MARKOFF_PADIC_MAX_MEM, accepting plain bytes or a
/// K/M/G suffix.
std::uint64_t memory_budget_from_env();

/// X_D*(Z/p^k) as a sorted vector of codes x + y p^k + z p^2k.
struct PointSet {
  std::uint64_t p = 0;
  int k = 0;
  Residue modulus = 0;
  Residue D = 0;
  std::vector<std::uint64_t> codes;

  std::uint64_t encode(const Triple& t) const { return t[0] + modulus * (t[1] + modulus * t[2]); }
  Triple decode(std::uint64_t c) const { return {c % modulus, (c / modulus) % modulus, c / (modulus * modulus)}; }
  std::size_t size() const noexcept { return codes.size(); }
  /// Position of a code, or nullopt when it is not a point.
  std::optional<std::size_t> index_of(std::uint64_t code) const;
};

/// Every triple mod p^k on the surface and nonsingular. k = 1 scans all
/// triples; k >= 2 lifts each mod-p point through its smooth fibre.
PointSet enumerate_points(std::uint64_t p, int k, const PadicInt& D, const CensusOptions& opts = {});

struct CountReport {
  std::uint64_t count = 0;
  /// Set when the p(p-3) formula applies (k = 1, p = 3 mod 4, D = 0 mod p).
  std::optional<std::uint64_t> formula;
  bool formula_holds() const { return !formula || *formula == count; }
};

CountReport count_points(std::uint64_t p, int k, const PadicInt& D, const CensusOptions& opts = {});

std::vector<Letter> generator_letters(GroupScope scope);
std::string generator_label(std::span<const Letter> gens);

struct Orbit {
  std::uint64_t size = 0;
  Triple representative{};
};

struct OrbitPartition {
  std::uint64_t p = 0;
  int k = 0;
  Residue D = 0;
  std::string generators;
  std::vector<Orbit> orbits;
  std::uint64_t total = 0;

  bool transitive() const { return orbits.size() == 1; }
  std::vector<std::uint64_t> sizes() const;
};

/// Breadth-first closure of the point set under the given letters. Orbits
/// are listed in order of their least code, which is the representative.
OrbitPartition orbits(const PointSet& points, std::span<const Letter> gens);
OrbitPartition orbits(std::uint64_t p, int k, const PadicInt& D, GroupScope scope, const CensusOptions& opts = {});

bool check_transitivity(std::uint64_t p, int k, const PadicInt& D, GroupScope scope, const CensusOptions& opts = {});

struct DivisibilityReport {
  bool pass = true;
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> sizes;
};

/// Every Gamma-orbit on X_D*(Z/p^k) has size divisible by p^k. Requires
/// p = 3 mod 4, p > 3 and D = 0 mod p^k.
DivisibilityReport check_orbit_divisibility(std::uint64_t p, int k, const PadicInt& D, const CensusOptions& opts = {});

enum class CatalogCase { sqrtD, d4_cage, d2, d3_sqrt2, golden };

std::string_view catalog_case_name(CatalogCase c);
std::optional<CatalogCase> parse_catalog_case(std::string_view s);

struct CatalogEntry {
  std::string label;
  std::vector<std::int64_t> point;  ///< signed residues mod p^K
  std::int64_t D = 0;               ///< signed residue mod p^K
  std::optional<std::uint64_t> expected;
  std::uint64_t gamma_size = 0;
  std::uint64_t aut_size = 0;
  /// Gamma-orbit sizes at precisions 1..K; a drop below the top value is a
  /// collapse under reduction.
  std::vector<std::uint64_t> gamma_size_by_precision;
  std::string note;

  bool matches() const { return !expected || *expected == gamma_size || *expected == aut_size; }
};

/// Finite orbits of the catalog at precision K. `sqrt_d_parameter` is the D
/// used by the sqrtD case. Throws "catalog case unavailable for this p" when
/// a needed square root is missing.
std::vector<CatalogEntry> finite_orbit_catalog(std::uint64_t p, int K, CatalogCase c,
                                               std::int64_t sqrt_d_parameter = 1);

}  // namespace markoff
