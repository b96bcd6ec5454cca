#include "markoff/census.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <unordered_set>

namespace markoff {

namespace {

constexpr std::uint64_t kBruteScanLimit = 200'000'000;
constexpr std::uint64_t kDefaultBudget = std::uint64_t{4} << 30;
constexpr std::uint64_t kCatalogOrbitCap = 2'000'000;

bool nonsingular(const Triple& t, Residue m, std::uint64_t p) {
  const Residue x = t[0], y = t[1], z = t[2];
  auto unit = [&](Residue a, Residue bc) { return modular::sub(modular::mul(2, a, m), bc, m) % p != 0; };
  return unit(x, modular::mul(y, z, m)) || unit(y, modular::mul(x, z, m)) || unit(z, modular::mul(x, y, m));
}

Residue eval_P_mod(const Triple& t, Residue m) {
  const Residue x = t[0], y = t[1], z = t[2];
  Residue s = modular::add(modular::add(modular::mul(x, x, m), modular::mul(y, y, m), m), modular::mul(z, z, m), m);
  return modular::sub(s, modular::mul(modular::mul(x, y, m), z, m), m);
}

// Runs body(shard) for shard in [0, workers) and concatenates the outputs.
template <typename Body>
std::vector<std::uint64_t> run_sharded(unsigned workers, Body body) {
  workers = std::max(1u, workers);
  std::vector<std::vector<std::uint64_t>> parts(workers);
  if (workers == 1) {
    parts[0] = body(0u, 1u);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&parts, &body, w, workers] { parts[w] = body(w, workers); });
    }
    for (auto& t : threads) t.join();
  }
  std::vector<std::uint64_t> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  return out;
}

PointSet brute_scan(std::uint64_t p, int k, Residue D, unsigned workers) {
  PointSet set{p, k, modular::prime_power(p, k), D, {}};
  const Residue m = set.modulus;
  set.codes = run_sharded(workers, [&set, m, p, D](unsigned shard, unsigned stride) {
    std::vector<std::uint64_t> out;
    for (Residue x = shard; x < m; x += stride) {
      for (Residue y = 0; y < m; ++y) {
        for (Residue z = 0; z < m; ++z) {
          Triple t{x, y, z};
          if (eval_P_mod(t, m) == D && nonsingular(t, m, p)) out.push_back(set.encode(t));
        }
      }
    }
    return out;
  });
  return set;
}

// Root of s^2 - ab s + (a^2 + b^2 - D) mod m lying over s0, by Newton steps.
Residue solve_fibre(Residue a, Residue b, Residue s0, Residue D, Residue m, int k) {
  const Residue ab = modular::mul(a, b, m);
  const Residue c = modular::sub(modular::add(modular::mul(a, a, m), modular::mul(b, b, m), m), D, m);
  Residue s = s0;
  for (int correct = 1; correct < k; correct *= 2) {
    Residue f = modular::add(modular::sub(modular::mul(s, s, m), modular::mul(ab, s, m), m), c, m);
    if (f == 0) break;
    Residue d = modular::sub(modular::mul(2, s, m), ab, m);
    s = modular::sub(s, modular::mul(f, *modular::inverse(d, m), m), m);
  }
  return s;
}

PointSet lift_scan(std::uint64_t p, int k, Residue D, unsigned workers) {
  PointSet base = brute_scan(p, 1, D % p, 1);
  PointSet set{p, k, modular::prime_power(p, k), D, {}};
  const Residue m = set.modulus;
  const Residue fibre = m / p;
  set.codes = run_sharded(workers, [&](unsigned shard, unsigned stride) {
    std::vector<std::uint64_t> out;
    for (auto code : base.codes) {
      Triple t0 = base.decode(code);
      if (t0[0] % stride != shard) continue;
      int s = 0;
      while (s < 3) {
        Triple probe = t0;
        Residue other = modular::mul(probe[(s + 1) % 3], probe[(s + 2) % 3], p);
        if (modular::sub(modular::mul(2, probe[s], p), other, p) != 0) break;
        ++s;
      }
      const int ia = (s + 1) % 3, ib = (s + 2) % 3;
      for (Residue i = 0; i < fibre; ++i) {
        for (Residue j = 0; j < fibre; ++j) {
          Triple t{};
          t[ia] = t0[ia] + p * i;
          t[ib] = t0[ib] + p * j;
          t[s] = solve_fibre(t[ia], t[ib], t0[s], D, m, k);
          out.push_back(set.encode(t));
        }
      }
    }
    return out;
  });
  return set;
}

std::uint64_t orbit_size(Triple start, Residue m, std::span<const Letter> gens, std::uint64_t cap) {
  auto code = [m](const Triple& t) { return t[0] + m * (t[1] + m * t[2]); };
  std::unordered_set<std::uint64_t> seen{code(start)};
  std::vector<Triple> stack{start};
  while (!stack.empty()) {
    Triple t = stack.back();
    stack.pop_back();
    for (auto g : gens) {
      Triple img = apply_letter(g, t, m);
      if (seen.insert(code(img)).second) {
        if (seen.size() > cap) throw BudgetError("catalog orbit exceeds " + std::to_string(cap) + " points");
        stack.push_back(img);
      }
    }
  }
  return seen.size();
}

}  // namespace

std::uint64_t memory_budget_from_env() {
  const char* raw = std::getenv("MARKOFF_PADIC_MAX_MEM");
  if (raw == nullptr || *raw == '\0') return kDefaultBudget;
  std::string s(raw);
  std::uint64_t scale = 1;
  switch (std::toupper(static_cast<unsigned char>(s.back()))) {
    case 'K':
      scale = 1ull << 10;
      break;
    case 'M':
      scale = 1ull << 20;
      break;
    case 'G':
      scale = 1ull << 30;
      break;
    default:
      break;
  }
  if (scale != 1) s.pop_back();
  try {
    return std::stoull(s) * scale;
  } catch (const std::exception&) {
    throw std::invalid_argument("MARKOFF_PADIC_MAX_MEM is not a size: " + std::string(raw));
  }
}

std::optional<std::size_t> PointSet::index_of(std::uint64_t code) const {
  auto it = std::lower_bound(codes.begin(), codes.end(), code);
  if (it == codes.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes.begin());
}

PointSet enumerate_points(std::uint64_t p, int k, const PadicInt& D, const CensusOptions& opts) {
  if (p == 2 || !modular::is_prime(p)) throw MathError(std::to_string(p) + " is not an odd prime");
  if (k < 1) throw MathError("level must be positive");
  if (D.prime() != p) throw MathError("prime mismatch");
  const Residue m = modular::prime_power(p, k);
  if (m >= (Residue{1} << 21)) throw BudgetError("p^k too large for the point encoding");
  const Residue d = D.mod_p_power(k);

  EnumerationMode mode = opts.mode;
  if (mode == EnumerationMode::automatic) mode = k == 1 ? EnumerationMode::brute : EnumerationMode::lift;

  const std::uint64_t budget = opts.max_memory ? opts.max_memory : memory_budget_from_env();
  // Upper bound: at most p + 1 points per (x, y) mod p, each with p^2(k-1) lifts,
  // eight bytes per code plus one visited byte during orbit searches.
  const std::uint64_t fibre = m / p;
  const long double estimate = static_cast<long double>(p) * p * (p + 1) * fibre * fibre * 9.0L;
  if (estimate > static_cast<long double>(budget)) {
    throw BudgetError("enumerating X_D*(Z/" + std::to_string(p) + "^" + std::to_string(k) + ") may need about " +
                      std::to_string(static_cast<std::uint64_t>(estimate)) + " bytes, over the budget of " +
                      std::to_string(budget) + "; raise MARKOFF_PADIC_MAX_MEM or lower --k");
  }
  if (mode == EnumerationMode::brute) {
    if (static_cast<long double>(m) * m * m > kBruteScanLimit) {
      throw BudgetError("brute scan of " + std::to_string(m) + "^3 triples is over the limit; use lift mode");
    }
    return brute_scan(p, k, d, opts.workers);
  }
  return k == 1 ? brute_scan(p, 1, d, opts.workers) : lift_scan(p, k, d, opts.workers);
}

CountReport count_points(std::uint64_t p, int k, const PadicInt& D, const CensusOptions& opts) {
  CountReport report;
  report.count = enumerate_points(p, k, D, opts).size();
  if (k == 1 && p % 4 == 3 && D.mod_p_power(1) == 0) report.formula = p * (p - 3);
  return report;
}

std::vector<Letter> generator_letters(GroupScope scope) {
  if (scope == GroupScope::gamma) return {kVietaLetters.begin(), kVietaLetters.end()};
  return {kAllLetters.begin(), kAllLetters.end()};
}

std::string generator_label(std::span<const Letter> gens) {
  std::string out;
  for (auto g : gens) {
    if (!out.empty()) out += ' ';
    out += letter_name(g);
  }
  return out;
}

std::vector<std::uint64_t> OrbitPartition::sizes() const {
  std::vector<std::uint64_t> out;
  out.reserve(orbits.size());
  for (const auto& o : orbits) out.push_back(o.size);
  return out;
}

OrbitPartition orbits(const PointSet& points, std::span<const Letter> gens) {
  OrbitPartition out{points.p, points.k, points.D, generator_label(gens), {}, points.size()};
  std::vector<std::uint8_t> visited(points.size(), 0);
  std::vector<std::uint32_t> stack;
  for (std::size_t start = 0; start < points.size(); ++start) {
    if (visited[start]) continue;
    Orbit orbit{0, points.decode(points.codes[start])};
    visited[start] = 1;
    stack.push_back(static_cast<std::uint32_t>(start));
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      ++orbit.size;
      Triple t = points.decode(points.codes[i]);
      for (auto g : gens) {
        auto j = points.index_of(points.encode(apply_letter(g, t, points.modulus)));
        if (!j) throw MathError("generator image left the point set");
        if (!visited[*j]) {
          visited[*j] = 1;
          stack.push_back(static_cast<std::uint32_t>(*j));
        }
      }
    }
    out.orbits.push_back(orbit);
  }
  return out;
}

OrbitPartition orbits(std::uint64_t p, int k, const PadicInt& D, GroupScope scope, const CensusOptions& opts) {
  auto gens = generator_letters(scope);
  return orbits(enumerate_points(p, k, D, opts), gens);
}

bool check_transitivity(std::uint64_t p, int k, const PadicInt& D, GroupScope scope, const CensusOptions& opts) {
  return orbits(p, k, D, scope, opts).transitive();
}

DivisibilityReport check_orbit_divisibility(std::uint64_t p, int k, const PadicInt& D, const CensusOptions& opts) {
  if (p % 4 != 3 || p <= 3) throw MathError("orbit divisibility needs p = 3 mod 4 and p > 3");
  if (D.mod_p_power(k) != 0) throw MathError("orbit divisibility needs D = 0 mod p^k");
  DivisibilityReport report;
  report.modulus = modular::prime_power(p, k);
  report.sizes = orbits(p, k, D, GroupScope::gamma, opts).sizes();
  for (auto s : report.sizes) report.pass = report.pass && s % report.modulus == 0;
  return report;
}

std::string_view catalog_case_name(CatalogCase c) {
  switch (c) {
    case CatalogCase::sqrtD:
      return "sqrtD";
    case CatalogCase::d4_cage:
      return "D4-cage";
    case CatalogCase::d2:
      return "D2";
    case CatalogCase::d3_sqrt2:
      return "D3-sqrt2";
    case CatalogCase::golden:
      return "golden";
  }
  return "?";
}

std::optional<CatalogCase> parse_catalog_case(std::string_view s) {
  for (auto c : {CatalogCase::sqrtD, CatalogCase::d4_cage, CatalogCase::d2, CatalogCase::d3_sqrt2,
                 CatalogCase::golden}) {
    if (catalog_case_name(c) == s) return c;
  }
  return std::nullopt;
}

std::vector<CatalogEntry> finite_orbit_catalog(std::uint64_t p, int K, CatalogCase c, std::int64_t sqrt_d_parameter) {
  if (K < 1) throw MathError("precision must be positive");
  auto n = [p, K](std::int64_t v) { return PadicInt(p, K, v); };
  auto need_root = [&](std::int64_t v) {
    if (legendre(n(v)) != 1) throw MathError("catalog case unavailable for this p");
    return sqrt(n(v));
  };

  struct Seed {
    std::string label;
    std::array<PadicInt, 3> pt;
    PadicInt D;
    std::optional<std::uint64_t> expected;
  };
  std::vector<Seed> seeds;
  switch (c) {
    case CatalogCase::d4_cage: {
      CatalogEntry info;
      info.label = "D4-cage";
      info.D = 4;
      info.note = "no representative point is named for D = 4 orbits outside the cage; informational only";
      return {info};
    }
    case CatalogCase::sqrtD: {
      PadicInt r = need_root(sqrt_d_parameter);
      seeds.push_back({"(0,0,sqrtD)", {n(0), n(0), r}, n(sqrt_d_parameter), 6});
      break;
    }
    case CatalogCase::d2:
      seeds.push_back({"(1,1,1)", {n(1), n(1), n(1)}, n(2), 16});
      break;
    case CatalogCase::d3_sqrt2: {
      PadicInt r = need_root(2);
      seeds.push_back({"(1,sqrt2,sqrt2)", {n(1), r, r}, n(3), 12});
      break;
    }
    case CatalogCase::golden: {
      PadicInt r5 = need_root(5);
      PadicInt half = invert(n(2));
      PadicInt phi = (r5 + 1) * half;
      PadicInt phi_inv = phi - 1;
      seeds.push_back({"(0,1/phi,phi)", {n(0), phi_inv, phi}, n(3), 72});
      seeds.push_back({"(phi,phi,phi)", {phi, phi, phi}, (r5 + 5) * half, 40});
      seeds.push_back({"(-1/phi,-1/phi,-1/phi)", {-phi_inv, -phi_inv, -phi_inv}, (n(5) - r5) * half, 40});
      break;
    }
  }

  const auto gamma = generator_letters(GroupScope::gamma);
  const auto aut = generator_letters(GroupScope::aut);
  std::vector<CatalogEntry> out;
  for (const auto& s : seeds) {
    if (!is_point(s.pt[0], s.pt[1], s.pt[2], s.D)) throw MathError("catalog point " + s.label + " is not on X_D*");
    CatalogEntry e;
    e.label = s.label;
    for (const auto& v : s.pt) e.point.push_back(v.signed_residue());
    e.D = s.D.signed_residue();
    e.expected = s.expected;
    const Residue m = modular::prime_power(p, K);
    Triple t{s.pt[0].residue(), s.pt[1].residue(), s.pt[2].residue()};
    e.gamma_size = orbit_size(t, m, gamma, kCatalogOrbitCap);
    e.aut_size = orbit_size(t, m, aut, kCatalogOrbitCap);
    for (int k = 1; k <= K; ++k) {
      Residue mk = modular::prime_power(p, k);
      e.gamma_size_by_precision.push_back(orbit_size({t[0] % mk, t[1] % mk, t[2] % mk}, mk, gamma, kCatalogOrbitCap));
    }
    if (e.expected) {
      if (*e.expected == e.gamma_size) {
        e.note = "matches the Gamma-orbit size";
      } else if (*e.expected == e.aut_size) {
        e.note = "matches the Aut-orbit size";
      } else {
        e.note = "differs from the expected size at this precision";
      }
    }
    if (e.gamma_size_by_precision.front() < e.gamma_size) e.note += "; the orbit collapses mod p";
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace markoff
