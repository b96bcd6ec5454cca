#include "markoff/surface.hpp"

#include <algorithm>
#include <cctype>

namespace markoff {

namespace {

constexpr std::array<std::string_view, 9> kNames = {"sx", "sy", "sz", "ex", "ey", "ez", "pxy", "pyz", "pzx"};

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == l) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

// Recursive descent over: word := item*, item := (letter | '(' word ')') ['^' n].
class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  std::vector<Letter> parse_all() {
    auto out = parse_word();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  std::vector<Letter> parse_word() {
    std::vector<Letter> out;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')') return out;
      std::vector<Letter> item;
      if (text_[pos_] == '(') {
        ++pos_;
        item = parse_word();
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
        ++pos_;
      } else {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        auto token = text_.substr(start, pos_ - start);
        auto l = parse_letter(token);
        if (!l) fail("unknown letter '" + std::string(token) + "'");
        item.push_back(*l);
      }
      std::uint64_t reps = 1;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '^') {
        ++pos_;
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("exponent expected after '^'");
        reps = std::stoull(std::string(text_.substr(start, pos_ - start)));
      }
      for (std::uint64_t r = 0; r < reps; ++r) {
        for (auto l : item) push_reduced(out, l);
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad word \"" + std::string(text_) + "\": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

PadicInt neg(const PadicInt& a) { return -a; }

}  // namespace

std::string_view letter_name(Letter l) { return kNames[static_cast<std::size_t>(l)]; }

std::optional<Letter> parse_letter(std::string_view token) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == lower) return static_cast<Letter>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- AutWord

AutWord::AutWord(std::vector<Letter> letters) {
  for (auto l : letters) push_reduced(letters_, l);
}

AutWord AutWord::parse(std::string_view text) {
  AutWord w;
  w.letters_ = WordParser(text).parse_all();
  return w;
}

bool AutWord::gamma_only() const noexcept {
  return std::all_of(letters_.begin(), letters_.end(), [](Letter l) { return is_vieta(l); });
}

AutWord AutWord::inverse() const {
  AutWord w;
  w.letters_.assign(letters_.rbegin(), letters_.rend());
  return w;
}

AutWord AutWord::power(std::uint64_t n) const {
  AutWord w;
  for (std::uint64_t i = 0; i < n; ++i) {
    for (auto l : letters_) push_reduced(w.letters_, l);
  }
  return w;
}

std::string AutWord::to_string() const {
  std::string out;
  auto emit = [&out](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  const auto& ls = letters_;
  std::size_t i = 0;
  while (i < ls.size()) {
    std::size_t reps = 1;
    if (i + 1 < ls.size()) {
      while (i + 2 * reps + 1 < ls.size() && ls[i + 2 * reps] == ls[i] && ls[i + 2 * reps + 1] == ls[i + 1]) ++reps;
    }
    if (reps >= 2) {
      emit("(" + std::string(letter_name(ls[i])) + " " + std::string(letter_name(ls[i + 1])) + ")^" +
           std::to_string(reps));
      i += 2 * reps;
    } else {
      emit(std::string(letter_name(ls[i])));
      ++i;
    }
  }
  return out;
}

AutWord operator*(const AutWord& a, const AutWord& b) {
  AutWord w = a;
  for (auto l : b.letters_) push_reduced(w.letters_, l);
  return w;
}

AutWord pair_power(Letter a, Letter b, std::uint64_t n) { return AutWord({a, b}).power(n); }

// ---------------------------------------------------------------- points

PadicInt eval_P(const PadicInt& x, const PadicInt& y, const PadicInt& z) { return x * x + y * y + z * z - x * y * z; }

std::array<PadicInt, 3> partials(const PadicInt& x, const PadicInt& y, const PadicInt& z) {
  return {x * 2 - y * z, y * 2 - x * z, z * 2 - x * y};
}

bool is_point(const PadicInt& x, const PadicInt& y, const PadicInt& z, const PadicInt& D) {
  if (!(eval_P(x, y, z) == D)) return false;
  auto d = partials(x, y, z);
  return d[0].is_unit() || d[1].is_unit() || d[2].is_unit();
}

SurfacePoint SurfacePoint::make(const PadicInt& x, const PadicInt& y, const PadicInt& z, const PadicInt& D) {
  if (!(eval_P(x, y, z) == D)) throw MathError("point does not satisfy the surface equation");
  auto d = partials(x, y, z);
  if (!(d[0].is_unit() || d[1].is_unit() || d[2].is_unit())) throw MathError("singular point");
  return SurfacePoint{x, y, z, D};
}

int SurfacePoint::precision() const { return std::min({x.precision(), y.precision(), z.precision()}); }

SurfacePoint SurfacePoint::truncate(int k) const {
  return SurfacePoint{x.truncate(k), y.truncate(k), z.truncate(k), D.truncate(std::min(k, D.precision()))};
}

SurfacePoint apply_generator(Letter g, const SurfacePoint& pt, GroupScope scope) {
  if (scope == GroupScope::gamma && !is_vieta(g)) {
    throw MathError("letter " + std::string(letter_name(g)) + " is outside the Vieta subgroup");
  }
  const auto& [x, y, z, D] = pt;
  switch (g) {
    case Letter::sx:
      return {y * z - x, y, z, D};
    case Letter::sy:
      return {x, x * z - y, z, D};
    case Letter::sz:
      return {x, y, x * y - z, D};
    case Letter::ex:
      return {x, neg(y), neg(z), D};
    case Letter::ey:
      return {neg(x), y, neg(z), D};
    case Letter::ez:
      return {neg(x), neg(y), z, D};
    case Letter::pxy:
      return {y, x, z, D};
    case Letter::pyz:
      return {x, z, y, D};
    case Letter::pzx:
      return {z, y, x, D};
  }
  throw MathError("unknown letter");
}

SurfacePoint apply_word(const AutWord& w, const SurfacePoint& pt, GroupScope scope) {
  SurfacePoint out = pt;
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) out = apply_generator(*it, out, scope);
  return out;
}

std::string DistClass::to_string() const {
  if (indistinguishable()) return "<=p^-" + std::to_string(precision);
  if (exponent == 0) return "1";
  return "p^-" + std::to_string(exponent);
}

DistClass dist(const SurfacePoint& a, const SurfacePoint& b) {
  int k = std::min(a.precision(), b.precision());
  int e = k;
  for (int i = 0; i < 3; ++i) {
    auto v = valuation((a.coord(i) - b.coord(i)).truncate(k));
    if (v) e = std::min(e, *v);
  }
  return DistClass{e, k};
}

Triple reduce(const SurfacePoint& pt, int level) {
  if (level < 1 || level > pt.precision()) throw MathError("reduction level out of range");
  return {pt.x.mod_p_power(level), pt.y.mod_p_power(level), pt.z.mod_p_power(level)};
}

Triple apply_letter(Letter g, const Triple& t, Residue m) {
  const Residue x = t[0], y = t[1], z = t[2];
  auto neg = [m](Residue a) { return a == 0 ? Residue{0} : m - a; };
  switch (g) {
    case Letter::sx:
      return {modular::sub(modular::mul(y, z, m), x, m), y, z};
    case Letter::sy:
      return {x, modular::sub(modular::mul(x, z, m), y, m), z};
    case Letter::sz:
      return {x, y, modular::sub(modular::mul(x, y, m), z, m)};
    case Letter::ex:
      return {x, neg(y), neg(z)};
    case Letter::ey:
      return {neg(x), y, neg(z)};
    case Letter::ez:
      return {neg(x), neg(y), z};
    case Letter::pxy:
      return {y, x, z};
    case Letter::pyz:
      return {x, z, y};
    case Letter::pzx:
      return {z, y, x};
  }
  throw MathError("unknown letter");
}

Triple apply_word(const AutWord& w, const Triple& t, Residue m) {
  Triple out = t;
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) out = apply_letter(*it, out, m);
  return out;
}

}  // namespace markoff
