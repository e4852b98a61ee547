#pragma once

// Polynomials in the per-vertex intermediate fields a^v, b^v, c^v with
// Gaussian-rational coefficients, graded by the power of g = (2λ)^{1/4}.

#include "lve/errors.hpp"
#include "lve/exact.hpp"

#include <array>
#include <compare>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace lve {

enum class Channel : int { a = 0, b = 1, c = 2 };

inline constexpr std::array<Channel, 3> all_channels{Channel::a, Channel::b, Channel::c};

inline char channel_name(Channel s) { return "abc"[static_cast<int>(s)]; }

inline Channel parse_channel(char ch) {
  switch (ch) {
    case 'a': return Channel::a;
    case 'b': return Channel::b;
    case 'c': return Channel::c;
    default: throw ContractViolation(std::string("unknown channel '") + ch + "'");
  }
}

/// g^grade · Π (s^v)^{exponents[3v+s]}, vertices 0-based.
struct FieldMonomial {
  int grade = 0;
  std::vector<int> exponents;

  int& power(int vertex, Channel s) { return exponents[static_cast<std::size_t>(3 * vertex + static_cast<int>(s))]; }
  int power(int vertex, Channel s) const {
    return exponents[static_cast<std::size_t>(3 * vertex + static_cast<int>(s))];
  }
  int degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }
  auto operator<=>(const FieldMonomial&) const = default;
};

class FieldPolynomial {
 public:
  explicit FieldPolynomial(int vertices = 1) : vertices_(vertices) {
    if (vertices < 1) throw ContractViolation("field polynomial needs at least one vertex");
  }

  /// coefficient · g^grade · s^vertex.
  static FieldPolynomial field(int vertices, int vertex, Channel s, GaussRational coefficient = 1, int grade = 1) {
    FieldPolynomial p(vertices);
    FieldMonomial m = p.unit();
    m.grade = grade;
    m.power(vertex, s) = 1;
    p.add(m, coefficient);
    return p;
  }
  static FieldPolynomial constant(int vertices, GaussRational c) {
    FieldPolynomial p(vertices);
    p.add(p.unit(), std::move(c));
    return p;
  }

  int vertices() const { return vertices_; }
  const std::map<FieldMonomial, GaussRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  FieldMonomial unit() const { return {0, std::vector<int>(static_cast<std::size_t>(3 * vertices_), 0)}; }

  void add(const FieldMonomial& m, const GaussRational& c) {
    if (m.exponents.size() != static_cast<std::size_t>(3 * vertices_))
      throw ContractViolation("monomial does not match the vertex count");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  FieldPolynomial& operator+=(const FieldPolynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  friend FieldPolynomial operator+(FieldPolynomial x, const FieldPolynomial& y) { return x += y; }
  friend FieldPolynomial operator-(const FieldPolynomial& x, const FieldPolynomial& y) { return x + y * GaussRational(-1); }

  friend FieldPolynomial operator*(const FieldPolynomial& x, const GaussRational& s) {
    FieldPolynomial r(x.vertices_);
    for (const auto& [m, c] : x.terms_) r.add(m, c * s);
    return r;
  }

  friend FieldPolynomial operator*(const FieldPolynomial& x, const FieldPolynomial& y) {
    x.check_compatible(y);
    FieldPolynomial r(x.vertices_);
    for (const auto& [mx, cx] : x.terms_)
      for (const auto& [my, cy] : y.terms_) {
        FieldMonomial m{mx.grade + my.grade, mx.exponents};
        for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += my.exponents[i];
        r.add(m, cx * cy);
      }
    return r;
  }

  /// ∂/∂s^vertex; the grade is unchanged.
  FieldPolynomial derivative(int vertex, Channel s) const {
    if (vertex < 0 || vertex >= vertices_) throw ContractViolation("vertex out of range");
    FieldPolynomial r(vertices_);
    for (const auto& [m, c] : terms_) {
      const int e = m.power(vertex, s);
      if (e == 0) continue;
      FieldMonomial d = m;
      d.power(vertex, s) = e - 1;
      r.add(d, c * Rational(e));
    }
    return r;
  }

  FieldPolynomial grade_part(int grade) const {
    FieldPolynomial r(vertices_);
    for (const auto& [m, c] : terms_)
      if (m.grade == grade) r.add(m, c);
    return r;
  }

  /// Move the single-vertex polynomial onto `vertex` of an n-vertex space.
  FieldPolynomial placed_at(int vertex, int n) const {
    if (vertices_ != 1) throw ContractViolation("only single-vertex polynomials can be placed");
    FieldPolynomial r(n);
    for (const auto& [m, c] : terms_) {
      FieldMonomial p = r.unit();
      p.grade = m.grade;
      for (Channel s : all_channels) p.power(vertex, s) = m.power(0, s);
      r.add(p, c);
    }
    return r;
  }

  friend bool operator==(const FieldPolynomial&, const FieldPolynomial&) = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      os << (first ? "" : " + ") << "(" << c << ")";
      if (m.grade) os << "*g^" << m.grade;
      for (int v = 0; v < vertices_; ++v)
        for (Channel s : all_channels) {
          const int e = m.power(v, s);
          if (e == 0) continue;
          os << "*" << channel_name(s) << (v + 1);
          if (e > 1) os << "^" << e;
        }
      first = false;
    }
    return os.str();
  }

 private:
  void check_compatible(const FieldPolynomial& o) const {
    if (o.vertices_ != vertices_) throw ContractViolation("field polynomials over different vertex sets");
  }

  int vertices_;
  std::map<FieldMonomial, GaussRational> terms_;
};

}  // namespace lve
