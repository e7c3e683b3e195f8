#pragma once

// Exact coding of infinite paths on the rooted k-ary tree by t in [0,1]:
// the path i_1 i_2 ... corresponds to t = sum_n i_n / k^n.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hctree/errors.hpp"

namespace hctree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Digits = std::vector<int>;

class PathCode {
 public:
  PathCode(Rational t, int k) : t_(std::move(t)), k_(k) {
    if (k_ < 2) throw InvalidArgument("path code base k must be >= 2");
    if (t_ < 0 || t_ > 1) throw InvalidArgument("t must lie in [0,1]");
  }
  PathCode(std::int64_t num, std::int64_t den, int k) : PathCode(make(num, den), k) {}

  const Rational& t() const noexcept { return t_; }
  int k() const noexcept { return k_; }
  BigInt numerator() const { return boost::multiprecision::numerator(t_); }
  BigInt denominator() const { return boost::multiprecision::denominator(t_); }

  std::string str() const {
    return numerator().str() + "/" + denominator().str();
  }
  double to_double() const { return static_cast<double>(t_); }

  friend bool operator==(const PathCode& a, const PathCode& b) {
    return a.k_ == b.k_ && a.t_ == b.t_;
  }

 private:
  static Rational make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InvalidArgument("zero denominator");
    return Rational(BigInt(num), BigInt(den));
  }
  Rational t_;
  int k_;
};

inline char digit_char(int d) {
  return static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10));
}

inline int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  return -1;
}

// Value of a finite digit prefix, sum_{n<=N} d_n / k^n, exactly.
inline Rational digits_value(const Digits& digits, int k) {
  BigInt num = 0;
  BigInt den = 1;
  for (int d : digits) {
    num = num * k + d;
    den *= k;
  }
  return Rational(num, den);
}

// Grammar: "p/q" (or a bare integer) or "d:<digits>" (prefix, remaining digits 0).
inline PathCode parse_path_code(std::string_view text, int k) {
  if (k < 2 || k > 36) throw InvalidArgument("k must lie in [2,36] for digit strings");
  if (text.rfind("d:", 0) == 0) {
    Digits ds;
    for (char c : text.substr(2)) {
      const int d = digit_value(c);
      if (d < 0 || d >= k)
        throw InvalidArgument("bad digit '" + std::string(1, c) + "' for base " + std::to_string(k));
      ds.push_back(d);
    }
    return PathCode(digits_value(ds, k), k);
  }
  auto parse_big = [&](std::string_view s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
      throw InvalidArgument("bad rational '" + std::string(text) + "'");
    return BigInt(std::string(s));
  };
  const auto slash = text.find('/');
  BigInt num = parse_big(text.substr(0, slash));
  BigInt den = slash == std::string_view::npos ? BigInt(1) : parse_big(text.substr(slash + 1));
  if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
  return PathCode(Rational(num, den), k);
}

// First n digits of the greedy expansion. Points of Q_k get their terminating
// expansion; t = 1 is coded as all digits k-1.
inline Digits digits_of(const PathCode& code, std::size_t n) {
  const int k = code.k();
  Digits out;
  out.reserve(n);
  if (code.t() == 1) {
    out.assign(n, k - 1);
    return out;
  }
  BigInt num = code.numerator();
  const BigInt den = code.denominator();
  for (std::size_t i = 0; i < n; ++i) {
    num *= k;
    BigInt d = num / den;
    num -= d * den;
    out.push_back(static_cast<int>(d));
  }
  return out;
}

// t in (0,1) with a terminating base-k expansion.
inline bool is_in_Qk(const PathCode& code) {
  if (code.t() <= 0 || code.t() >= 1) return false;
  BigInt den = code.denominator();
  const BigInt k = code.k();
  for (BigInt g = boost::multiprecision::gcd(den, k); g != 1; g = boost::multiprecision::gcd(den, k))
    den /= g;
  return den == 1;
}

// Length N of the terminating expansion (last nonzero digit), t in Q_k.
inline std::size_t terminating_length(const PathCode& code) {
  if (!is_in_Qk(code)) throw InvalidArgument("t = " + code.str() + " is not in Q_k");
  BigInt num = code.numerator();
  const BigInt den = code.denominator();
  std::size_t n = 0;
  while (num != 0) {
    num = (num * code.k()) % den;
    ++n;
  }
  return n;
}

// The non-terminating expansion i_1 ... i_{N-1} (i_N - 1) (k-1) (k-1) ...
inline Digits second_representation(const PathCode& code, std::size_t n) {
  const std::size_t len = terminating_length(code);
  Digits out = digits_of(code, std::min(n, len));
  if (n >= len) out[len - 1] -= 1;
  out.resize(n, code.k() - 1);
  return out;
}

// A vertex of the rooted tree: the digit path from the root (empty = root).
struct Vertex {
  Digits digits;

  std::size_t level() const noexcept { return digits.size(); }
  std::string str() const {
    std::string s;
    for (int d : digits) s.push_back(digit_char(d));
    return s;
  }
  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline Vertex parse_vertex(std::string_view text, int k) {
  Vertex v;
  for (char c : text) {
    const int d = digit_value(c);
    if (d < 0 || d >= k) throw InvalidArgument("bad vertex digit '" + std::string(1, c) + "'");
    v.digits.push_back(d);
  }
  return v;
}

enum class Side { OnPath, Left, Right };

// Position of v relative to the path: on it, or in the subtree branching off
// to the left (smaller digit) or right at the first differing level.
inline Side branch_side(const Vertex& v, const Digits& path) {
  if (v.level() > path.size()) throw InvalidArgument("vertex deeper than the path prefix");
  for (std::size_t i = 0; i < v.level(); ++i) {
    if (v.digits[i] != path[i]) return v.digits[i] < path[i] ? Side::Left : Side::Right;
  }
  return Side::OnPath;
}

// points i / (n-1), i = 0..n-1
inline std::vector<PathCode> uniform_grid(std::size_t n, int k) {
  if (n < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<PathCode> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.emplace_back(Rational(BigInt(i), BigInt(n - 1)), k);
  return out;
}

}  // namespace hctree
