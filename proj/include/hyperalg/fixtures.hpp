#ifndef HYPERALG_FIXTURES_HPP
#define HYPERALG_FIXTURES_HPP

#include <map>
#include <string>
#include <vector>

#include "hyperalg/dataset.hpp"
#include "hyperalg/polynomial.hpp"
#include "hyperalg/rational.hpp"

// Embedded reference data: a small three-feature dataset with a fully known
// solution variety, and a four-feature ovarian cancer dataset together with
// parameter fits reported by external accumulation-model tools (HyperLAU,
// HyperTraPS, HyperHMM) and by direct residual minimisation (ALG columns).

namespace hyperalg::fixtures {

/// L = 3, eight observed genotypes: 001 twice, 100 once, 101 five times.
inline Dataset toy_dataset() {
  return load_counts({{"001", 2}, {"100", 1}, {"101", 5}});
}

/// L = 3 sample list whose cross-section is empty on both states directly
/// below 011; closed per-state balance equations have no solution here.
inline std::vector<std::string> skewed_samples() {
  return {"000", "100", "011", "011", "111"};
}

/// The solution set for toy_dataset() splits into three components, each
/// parameterised by the free coordinates t = a_010_110, s = b_001_011,
/// u = b_010_110.  Returns the full ten-coordinate point of component 1..3.
inline std::map<VarId, Rational> toy_component(int which, const Rational& t,
                                               const Rational& s,
                                               const Rational& u) {
  auto var = [](const std::string& name) {
    return parse_polynomial(name, 3).variables().at(0);
  };
  std::map<VarId, Rational> p;
  auto set = [&](const char* n, Rational v) { p[var(n)] = std::move(v); };
  set("a_010_110", t);
  switch (which) {
    case 1:
      set("a_000_100", make_rational(1, 3));
      set("a_000_010", 0);
      set("a_001_101", 1);
      set("a_100_110", 0);
      set("b_001_101", make_rational(2, 3));
      set("b_001_011", s);
      set("b_010_110", u);
      set("b_011_111", 0);
      set("b_101_111", 1);
      break;
    case 2:
      set("a_000_100", make_rational(1, 8));
      set("a_000_010", 0);
      set("a_001_101", 1);
      set("a_100_110", 1);
      set("b_001_101", 1);
      set("b_001_011", s);
      set("b_010_110", 0);
      set("b_011_111", 0);
      set("b_101_111", make_rational(7, 8));
      break;
    case 3:
      set("a_000_100", make_rational(3, 4));
      set("a_000_010", 0);
      set("a_001_101", 0);
      set("a_100_110", 0);
      set("b_001_101", 0);
      set("b_001_011", 1);
      set("b_010_110", u);
      set("b_011_111", make_rational(1, 4));
      set("b_101_111", make_rational(3, 4));
      break;
    default:
      throw std::invalid_argument("component index must be 1, 2 or 3");
  }
  return p;
}

/// Exact sampling likelihood of each toy component (independent of t, s, u).
inline Rational toy_component_likelihood(int which) {
  switch (which) {
    case 1:
      return make_rational(4, 27);
    case 2:
      return make_rational(823543, 16777216);  // 7^7 / 8^8
    case 3:
      return make_rational(729, 65536);
    default:
      throw std::invalid_argument("component index must be 1, 2 or 3");
  }
}

/// A grevlex Groebner basis of the toy ideal, in the text grammar of
/// parse_polynomial.  Every element lies in the ideal spanned by the
/// generated system, so it must vanish on all three components.
inline std::vector<std::string> toy_groebner_basis() {
  return {
      "3*b_001_101 + 16*b_011_111 + 8*b_101_111 - 10",
      "a_100_110 + 8*b_011_111 + 8*b_101_111 - 8",
      "2*a_001_101 - a_100_110 - 8*b_101_111 + 6",
      "a_000_010",
      "8*a_000_100 + 5*b_001_101 - 6",
      "8*b_101_111^2 - b_011_111 - 15*b_101_111 + 7",
      "16*b_011_111*b_101_111 + 8*b_101_111^2 - 13*b_011_111 - "
      "15*b_101_111 + 7",
      "b_011_111^2 + b_011_111*b_101_111 - b_011_111",
      "b_010_110*b_011_111 + b_010_110*b_101_111 - b_010_110",
      "b_001_011*b_011_111 - b_011_111",
      "b_001_011*b_010_110*b_101_111 - b_001_011*b_010_110 - "
      "b_010_110*b_101_111 + b_010_110",
  };
}

/// Transition values reported by HyperLAU for the toy dataset.  The first
/// coordinate is the display-rounded 0.33; the exact fitted value is 1/3,
/// which is what the fiber computation expects.
inline std::map<VarId, double> toy_hyperlau_a() {
  auto var = [](const std::string& name) {
    return parse_polynomial(name, 3).variables().at(0);
  };
  return {
      {var("a_000_100"), 1.0 / 3.0}, {var("a_000_010"), 0.0},
      {var("a_001_101"), 1.0},       {var("a_010_110"), 0.6},
      {var("a_100_110"), 0.0},
  };
}

/// On the fiber over toy_hyperlau_a() the bound history coordinates are
/// b_001_101 = 2/3, b_011_111 = 0, b_101_111 = 1 (b_001_011 and b_010_110
/// stay free).
inline std::map<VarId, double> toy_hyperlau_fiber_bound() {
  auto var = [](const std::string& name) {
    return parse_polynomial(name, 3).variables().at(0);
  };
  return {{var("b_001_101"), 2.0 / 3.0},
          {var("b_011_111"), 0.0},
          {var("b_101_111"), 1.0}};
}

/// Ovarian cancer cross-section (87 samples, L = 4; features 8q+, 3q+, 5q-,
/// 4q-).  d0 and dfull set the unobserved counts of the empty and full
/// genotypes; the 57 inner counts are fixed.
inline Dataset ovarian_dataset(std::uint64_t d0 = 17, std::uint64_t dfull = 13) {
  std::vector<std::pair<std::string, std::uint64_t>> counts = {
      {"0001", 2}, {"0010", 3}, {"0011", 5}, {"0100", 2}, {"0101", 1},
      {"0110", 2}, {"0111", 1}, {"1000", 7}, {"1001", 3}, {"1010", 1},
      {"1011", 8}, {"1100", 12}, {"1101", 4}, {"1110", 6},
  };
  if (d0 > 0) counts.push_back({"0000", d0});
  if (dfull > 0) counts.push_back({"1111", dfull});
  return load_counts(counts);
}

struct ExternalFit {
  std::string name;
  double loglik_reference;             // natural-log likelihood of the fit
  std::map<std::string, double> values;  // parameter name -> fitted value
};

/// Six parameter tuples for the ovarian dataset: three external tools and
/// three residual-minimisation runs, each with 28 transition and 28 history
/// values (rounded to four decimals).
inline std::vector<ExternalFit> ovarian_fits() {
  static const char* rows[] = {
      "a_0000_1000", "a_0000_0100", "a_0000_0010", "a_0000_0001",
      "a_0001_1001", "a_0001_0101", "a_0001_0011", "a_0010_1010",
      "a_0010_0110", "a_0010_0011", "a_0011_1011", "a_0011_0111",
      "a_0100_1100", "a_0100_0110", "a_0100_0101", "a_0101_1101",
      "a_0101_0111", "a_0110_1110", "a_0110_0111", "a_1000_1100",
      "a_1000_1010", "a_1000_1001", "a_1001_1101", "a_1001_1011",
      "a_1010_1110", "a_1010_1011", "a_1100_1110", "a_1100_1101",
      "b_0001_1001", "b_0001_0101", "b_0001_0011", "b_0010_1010",
      "b_0010_0110", "b_0010_0011", "b_0011_1011", "b_0011_0111",
      "b_0100_1100", "b_0100_0110", "b_0100_0101", "b_0101_1101",
      "b_0101_0111", "b_0110_1110", "b_0110_0111", "b_0111_1111",
      "b_1000_1100", "b_1000_1010", "b_1000_1001", "b_1001_1101",
      "b_1001_1011", "b_1010_1110", "b_1010_1011", "b_1011_1111",
      "b_1100_1110", "b_1100_1101", "b_1101_1111", "b_1110_1111",
  };
  static const double cols[6][56] = {
      // HyperLAU
      {0.5024, 0.1398, 0.2157, 0.1421, 0.4973, 0.0468, 0.4559, 0.21,
       0.052,  0.738,  1,      0,      0.2425, 0.5212, 0.2363, 0.2365,
       0.7635, 0.7596, 0.2404, 0.8707, 0,      0.1293, 0,      1,
       0.0005, 0.9995, 0.558,  0.442,  0.5206, 0.1785, 0.2872, 1,
       0.1418, 0.7128, 0.5543, 0.0054, 0.0717, 0.8582, 0.8215, 0.0426,
       0.5939, 0.1945, 0.4005, 0.0515, 0.9283, 0,      0.4794, 0.0025,
       0.3353, 0.0014, 0.1104, 0.3992, 0.8041, 0.9549, 0.2202, 0.3291},
      // HyperTraPS
      {0.4684, 0.0771, 0.2561, 0.1984, 0.6125, 0.081,  0.3065, 0.0092,
       0.0006, 0.9902, 0.9538, 0.0462, 0.2878, 0.703,  0.0092, 0.309,
       0.691,  0.1093, 0.8907, 0.8249, 0.0733, 0.1018, 0.908,  0.092,
       0.0115, 0.9885, 0.9771, 0.0229, 0.7082, 1,      0.1874, 0.1257,
       0.0863, 0.8126, 0.8814, 0.2524, 0.0527, 0.9137, 0,      0.0192,
       0.1839, 0.0093, 0.5637, 0.0878, 0.9476, 0.8743, 0.2918, 0.9123,
       0.0557, 0,      0.0629, 0.3286, 0.9907, 0.0685, 0.1652, 0.4184},
      // HyperHMM
      {0.5013, 0.1432, 0.2133, 0.1422, 0.2438, 0.1703, 0.5859, 0.0761,
       0.2731, 0.6508, 0.9795, 0.0205, 0.7309, 0.1564, 0.1127, 0.5252,
       0.4748, 0.6199, 0.3801, 0.7483, 0.0559, 0.1958, 0.0177, 0.9823,
       0.0249, 0.9751, 0.5872, 0.4128, 0.2609, 0.5996, 0.3751, 0.3664,
       0.7221, 0.6249, 0.5562, 0.0847, 0.2182, 0.2779, 0.4004, 0.0956,
       0.3521, 0.1502, 0.5632, 0.0544, 0.7818, 0.6336, 0.7391, 0.0108,
       0.3335, 0.0035, 0.1103, 0.3914, 0.8463, 0.8936, 0.2216, 0.3326},
      // ALG1
      {0.5,    0.1429, 0.2143, 0.1428, 0.3248, 0.1631, 0.5121, 0.0928,
       0.1689, 0.7383, 0.8636, 0.1364, 0.6182, 0.2602, 0.1216, 0.5956,
       0.4044, 0.9595, 0.0405, 0.7678, 0.0482, 0.184,  0,      1,
       0.2136, 0.7864, 0.5363, 0.4637, 0.3353, 0.573,  0.3246, 0.4522,
       0.5315, 0.6754, 0.51,   0.6099, 0.187,  0.4685, 0.427,  0.1057,
       0.3264, 0.2247, 0.0637, 0.0504, 0.813,  0.5478, 0.6647, 0,
       0.3993, 0.0277, 0.0907, 0.3816, 0.7476, 0.8943, 0.2292, 0.3388},
      // ALG2
      {0.5,    0.1429, 0.2143, 0.1428, 0.2323, 0.1904, 0.5773, 0.0925,
       0.2348, 0.6727, 0.8622, 0.1378, 0.7047, 0.2044, 0.0909, 0.6762,
       0.3238, 0.9221, 0.0779, 0.7398, 0.0468, 0.2134, 0,      1,
       0.3635, 0.6365, 0.5317, 0.4683, 0.2372, 0.677,  0.3639, 0.4586,
       0.6328, 0.6361, 0.5156, 0.6193, 0.2139, 0.3672, 0.323,  0.1174,
       0.258,  0.2162, 0.1227, 0.0504, 0.7861, 0.5414, 0.7628, 0,
       0.4118, 0.0463, 0.0726, 0.3789, 0.7375, 0.8826, 0.2314, 0.3393},
      // ALG3
      {0.6652, 0.1466, 0.1175, 0.0707, 0,      0.065,  0.935,  0,
       0.1211, 0.8789, 0,      1,      0.4909, 0.3483, 0.1608, 0.0964,
       0.9036, 0.4012, 0.5988, 0.575,  0.0833, 0.3417, 0.0316, 0.9684,
       0.3799, 0.6201, 0.5781, 0.4219, 0,      0.1629, 0.421,  0,
       0.2178, 0.579,  0,      0.7449, 0.1584, 0.7822, 0.8371, 0.0135,
       0.1006, 0.0846, 0.1545, 0.2531, 0.8416, 1,      1,      0.0341,
       0.8941, 0.0671, 0.1059, 0.2358, 0.8483, 0.9524, 0.2014, 0.3097},
  };
  static const char* names[6] = {"HyperLAU", "HyperTraPS", "HyperHMM",
                                 "ALG1",     "ALG2",       "ALG3"};
  static const double loglik[6] = {-74.06, -76.33, -74.06,
                                   -74.19, -74.21, -78.96};
  std::vector<ExternalFit> fits;
  for (int c = 0; c < 6; ++c) {
    ExternalFit f;
    f.name = names[c];
    f.loglik_reference = loglik[c];
    for (int r = 0; r < 56; ++r) f.values[rows[r]] = cols[c][r];
    fits.push_back(std::move(f));
  }
  return fits;
}

/// Parameter name ("a_0000_1000") -> VarId.
inline VarId var_from_name(const std::string& name, int L = 0) {
  return parse_polynomial(name, L).variables().at(0);
}

}  // namespace hyperalg::fixtures

#endif  // HYPERALG_FIXTURES_HPP
