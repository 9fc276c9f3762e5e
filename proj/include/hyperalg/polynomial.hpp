#ifndef HYPERALG_POLYNOMIAL_HPP
#define HYPERALG_POLYNOMIAL_HPP

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyperalg/hypercube.hpp"
#include "hyperalg/rational.hpp"

// Sparse multivariate polynomials over exact rationals in the transition
// variables a_{i;j} and history variables b_{i;j}.  Coefficients stay
// rational through generation; floats appear only at evaluation time.

namespace hyperalg {

enum class VarKind : std::uint8_t { A, B };

struct VarId {
  VarKind kind = VarKind::A;
  std::uint8_t L = 0;  // label length, for rendering
  Edge edge;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

inline VarId a_var(Edge e, int L) {
  if (!is_edge(e, L)) throw std::invalid_argument("not a hypercube edge");
  return VarId{VarKind::A, static_cast<std::uint8_t>(L), e};
}
inline VarId b_var(Edge e, int L) {
  if (!is_edge(e, L)) throw std::invalid_argument("not a hypercube edge");
  return VarId{VarKind::B, static_cast<std::uint8_t>(L), e};
}

inline std::string var_name(const VarId& v) {
  int L = v.L;
  return std::string(v.kind == VarKind::A ? "a" : "b") + "_" +
         node_label(v.edge.src, L) + "_" + node_label(v.edge.dst, L);
}

struct Monomial {
  std::map<VarId, int> exps;  // no zero exponents stored
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

  int degree() const {
    int d = 0;
    for (const auto& [v, e] : exps) d += e;
    return d;
  }
  bool is_constant() const { return exps.empty(); }
};

// Graded-lexicographic, larger monomials first so that map iteration starts
// at the leading term.
struct MonomialOrder {
  bool operator()(const Monomial& x, const Monomial& y) const {
    int dx = x.degree(), dy = y.degree();
    if (dx != dy) return dx > dy;
    auto ix = x.exps.begin(), iy = y.exps.begin();
    while (ix != x.exps.end() && iy != y.exps.end()) {
      if (ix->first != iy->first) return ix->first < iy->first;
      if (ix->second != iy->second) return ix->second > iy->second;
      ++ix;
      ++iy;
    }
    return false;  // equal
  }
};

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialOrder>;

  Polynomial() = default;
  explicit Polynomial(Rational c) {
    if (c != 0) terms_[Monomial{}] = std::move(c);
  }
  explicit Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial variable(VarId v) {
    Polynomial p;
    Monomial m;
    m.exps[v] = 1;
    p.terms_[m] = 1;
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  int degree() const {
    return terms_.empty() ? 0 : terms_.begin()->first.degree();
  }

  std::vector<VarId> variables() const {
    std::vector<VarId> vs;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.exps) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  void add_term(Monomial m, const Rational& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(std::move(m), c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial x, const Polynomial& y) {
    x += y;
    return x;
  }
  friend Polynomial operator-(Polynomial x, const Polynomial& y) {
    x -= y;
    return x;
  }
  friend Polynomial operator-(const Polynomial& x) {
    Polynomial r;
    for (const auto& [m, c] : x.terms_) r.terms_[m] = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& x, const Polynomial& y) {
    Polynomial r;
    for (const auto& [mx, cx] : x.terms_)
      for (const auto& [my, cy] : y.terms_) {
        Monomial m = mx;
        for (const auto& [v, e] : my.exps) m.exps[v] += e;
        r.add_term(std::move(m), cx * cy);
      }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Rational& s) const {
    Polynomial r;
    if (s == 0) return r;
    for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
    return r;
  }

  /// Replaces each bound variable by its polynomial.
  Polynomial substitute(const std::map<VarId, Polynomial>& bindings) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      Polynomial t(c);
      for (const auto& [v, e] : m.exps) {
        auto it = bindings.find(v);
        if (it == bindings.end()) {
          Monomial mv;
          mv.exps[v] = e;
          Polynomial pv;
          pv.terms_[mv] = 1;
          t *= pv;
        } else {
          for (int k = 0; k < e; ++k) t *= it->second;
        }
      }
      r += t;
    }
    return r;
  }

  Rational eval_exact(const std::map<VarId, Rational>& point) const {
    Rational acc = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (const auto& [v, e] : m.exps) {
        auto it = point.find(v);
        if (it == point.end())
          throw std::invalid_argument("unbound variable " + var_name(v));
        for (int k = 0; k < e; ++k) t *= it->second;
      }
      acc += t;
    }
    return acc;
  }

  /// binary64 evaluation, terms accumulated in canonical term order.
  double eval_double(const std::map<VarId, double>& point) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = to_double(c);
      for (const auto& [v, e] : m.exps) {
        auto it = point.find(v);
        if (it == point.end())
          throw std::invalid_argument("unbound variable " + var_name(v));
        for (int k = 0; k < e; ++k) t *= it->second;
      }
      acc += t;
    }
    return acc;
  }

  /// Formal partial derivatives for every variable occurring in the
  /// polynomial.
  std::map<VarId, Polynomial> gradient() const {
    std::map<VarId, Polynomial> g;
    for (const auto& [m, c] : terms_) {
      for (const auto& [v, e] : m.exps) {
        Monomial dm = m;
        if (e == 1)
          dm.exps.erase(v);
        else
          dm.exps[v] = e - 1;
        g[v].add_term(std::move(dm), c * e);
      }
    }
    for (auto it = g.begin(); it != g.end();)
      it = it->second.is_zero() ? g.erase(it) : std::next(it);
    return g;
  }

 private:
  TermMap terms_;
};

inline std::string to_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
      first = false;
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    bool coeff_shown = a != 1 || m.is_constant();
    if (coeff_shown) out << rational_to_string(a);
    bool need_star = coeff_shown;
    for (const auto& [v, e] : m.exps) {
      if (need_star) out << "*";
      out << var_name(v);
      if (e > 1) out << "^" << e;
      need_star = true;
    }
  }
  return out.str();
}

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& msg)
      : std::runtime_error("parse error at position " + std::to_string(pos) +
                           ": " + msg),
        position(pos) {}
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, int L) : text_(text), L_(L) {}

  Polynomial parse() {
    Polynomial p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int L_;  // 0 = infer from first variable

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  std::optional<char> peek() {
    skip_ws();
    return pos_ < text_.size() ? std::optional<char>(text_[pos_]) : std::nullopt;
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial parse_expr() {
    bool neg = false;
    if (consume('-'))
      neg = true;
    else
      consume('+');
    Polynomial p = parse_term();
    if (neg) p = -p;
    while (auto c = peek()) {
      if (*c == '+') {
        ++pos_;
        p += parse_term();
      } else if (*c == '-') {
        ++pos_;
        p -= parse_term();
      } else {
        break;
      }
    }
    return p;
  }

  Polynomial parse_term() {
    auto c = peek();
    if (!c) fail("expected term");
    Rational coeff = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(*c))) {
      coeff = parse_rational();
      have_coeff = true;
      if (consume('*')) {
        // explicit product with factors
      } else if (auto n = peek(); !n || (*n != 'a' && *n != 'b')) {
        return Polynomial(coeff);  // bare constant
      }
    }
    Polynomial p = parse_factor();
    while (consume('*')) p *= parse_factor();
    if (have_coeff) p = p.scaled(coeff);
    return p;
  }

  Rational parse_rational() {
    mpz_class num = parse_integer();
    if (consume('/')) {
      mpz_class den = parse_integer();
      if (den == 0) fail("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    return Rational(num);
  }

  mpz_class parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
  }

  Polynomial parse_factor() {
    auto c = peek();
    if (!c || (*c != 'a' && *c != 'b')) fail("expected variable");
    VarId v = parse_var();
    int e = 1;
    if (consume('^')) {
      mpz_class z = parse_integer();
      if (z <= 0 || z > 64) fail("exponent out of range");
      e = static_cast<int>(z.get_si());
    }
    Monomial m;
    m.exps[v] = e;
    Polynomial p;
    p.add_term(std::move(m), 1);
    return p;
  }

  VarId parse_var() {
    skip_ws();
    std::size_t start = pos_;
    VarKind kind = text_[pos_] == 'a' ? VarKind::A : VarKind::B;
    ++pos_;
    auto bits = [&]() -> std::string {
      if (pos_ >= text_.size() || text_[pos_] != '_')
        throw ParseError(pos_, "expected '_' in variable name");
      ++pos_;
      std::size_t s = pos_;
      while (pos_ < text_.size() && (text_[pos_] == '0' || text_[pos_] == '1'))
        ++pos_;
      if (pos_ == s) throw ParseError(pos_, "expected binary node label");
      return std::string(text_.substr(s, pos_ - s));
    };
    std::string src = bits(), dst = bits();
    if (L_ == 0) L_ = static_cast<int>(src.size());
    if (src.size() != static_cast<std::size_t>(L_) || dst.size() != src.size())
      throw ParseError(start, "node label length mismatch");
    Edge e{parse_node(src), parse_node(dst)};
    if (!is_edge(e, L_))
      throw ParseError(start, "unknown variable " + std::string(text_.substr(start, pos_ - start)) +
                                  " (not an acquisition edge)");
    return VarId{kind, static_cast<std::uint8_t>(L_), e};
  }
};

}  // namespace detail

/// Parses the polynomial grammar
///   expr := term (('+'|'-') term)*; term := [coeff ['*']] factor ('*' factor)*;
///   factor := var ['^' int]; coeff := int ['/' int]; var := ('a'|'b') '_' bits '_' bits.
/// L = 0 infers the dimension from the first variable.
inline Polynomial parse_polynomial(std::string_view text, int L = 0) {
  return detail::PolyParser(text, L).parse();
}

}  // namespace hyperalg

#endif  // HYPERALG_POLYNOMIAL_HPP
