#ifndef HYPERALG_RATIONAL_HPP
#define HYPERALG_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hyperalg {

using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Exact conversion; every binary64 value is a rational.
inline Rational rational_from_double(double x) { return Rational(x); }

/// Rounds to the nearest multiple of 10^-12, for exact-evaluation paths fed
/// with float input.
inline Rational snap_to_grid(double x) {
  mpz_class grid(1000000000000L);
  Rational q(x);
  q *= grid;
  mpz_class rounded;
  mpz_class num = q.get_num(), den = q.get_den();
  // round-half-away-from-zero of num/den
  mpz_class twice = 2 * num + (num >= 0 ? den : -den);
  mpz_fdiv_q(rounded.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  if (num < 0) {
    // recompute with ceiling so ties go away from zero
    mpz_class t = 2 * num - den;
    mpz_cdiv_q(rounded.get_mpz_t(), t.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  }
  Rational r(rounded, grid);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace hyperalg

#endif  // HYPERALG_RATIONAL_HPP
