#ifndef HYPERALG_DYNAMICS_HPP
#define HYPERALG_DYNAMICS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "hyperalg/dataset.hpp"
#include "hyperalg/hypercube.hpp"
#include "hyperalg/polynomial.hpp"
#include "hyperalg/rational.hpp"

// Forward simulation of the accumulation process: reach probabilities R(i),
// the induced history parameters b_{i;j} = R(i) a_{i;j} / R(j), and synthetic
// dataset generation in exact (infinite-sample) and finite sampled form.

namespace hyperalg {

class TransitionModel {
 public:
  /// `a` binds every edge; outgoing sums must equal 1 per node (within `tol`
  /// when built from floats, exactly when `tol` is 0).
  TransitionModel(int L, std::map<Edge, Rational> a, double tol = 0.0)
      : L_(L), a_(std::move(a)) {
    check_dimension(L_);
    for (const Edge& e : all_edges(L_)) {
      auto it = a_.find(e);
      if (it == a_.end())
        throw std::invalid_argument("transition model missing edge " +
                                    node_label(e.src, L_) + "->" + node_label(e.dst, L_));
      if (it->second < 0 || it->second > 1)
        throw std::invalid_argument("transition parameter outside [0,1] on edge " +
                                    node_label(e.src, L_) + "->" + node_label(e.dst, L_));
    }
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L_); ++n) {
      NodeId node{n};
      if (level(node) == L_) continue;
      Rational sum = 0;
      for (const Edge& e : outgoing(node, L_)) sum += a_.at(e);
      if (tol == 0.0 ? sum != 1 : std::abs(to_double(sum) - 1.0) > tol)
        throw std::invalid_argument("outgoing transition parameters of node " +
                                    node_label(node, L_) + " do not sum to 1");
    }
  }

  static TransitionModel from_doubles(int L, const std::map<Edge, double>& a,
                                      double tol = 1e-12) {
    std::map<Edge, Rational> r;
    for (const auto& [e, v] : a) r[e] = rational_from_double(v);
    return TransitionModel(L, std::move(r), tol);
  }

  /// Completes a free-a assignment by the canonical parametrization: forced
  /// edges carry 1, the eliminated edge per node carries 1 - (sum of the
  /// node's free values).
  static TransitionModel from_free_a(int L, const std::map<VarId, Rational>& free_a) {
    auto el = canonical_eliminations(L);
    std::map<Edge, Rational> a;
    for (const Edge& e : el.forced_a) a[e] = 1;
    for (const Edge& e : el.free_a) {
      auto it = free_a.find(a_var(e, L));
      if (it == free_a.end())
        throw std::invalid_argument("missing value for " + var_name(a_var(e, L)));
      a[e] = it->second;
    }
    for (const Edge& e : el.eliminated_a) {
      Rational rest = 1;
      for (const Edge& s : outgoing(e.src, L))
        if (s.dst != e.dst) rest -= a.at(s);
      a[e] = rest;
    }
    return TransitionModel(L, std::move(a));
  }

  int dimension() const { return L_; }
  const Rational& a(Edge e) const { return a_.at(e); }
  const std::map<Edge, Rational>& parameters() const { return a_; }

  /// R(0^L)=1, R(j) = sum_{i->j} R(i) a_{i;j}; each level sums to 1.
  std::vector<Rational> reach() const {
    std::vector<Rational> r(std::size_t{1} << L_, 0);
    r[0] = 1;
    for (const Edge& e : all_edges(L_)) r[e.dst.bits] += r[e.src.bits] * a_.at(e);
    return r;
  }

  std::vector<double> reach_double() const {
    std::vector<double> r(std::size_t{1} << L_, 0.0);
    r[0] = 1.0;
    for (const Edge& e : all_edges(L_)) r[e.dst.bits] += r[e.src.bits] * to_double(a_.at(e));
    return r;
  }

  /// b_{i;j} = R(i) a_{i;j} / R(j); nullopt when R(j)=0 (any value consistent).
  std::map<Edge, std::optional<Rational>> b_oracle() const {
    auto r = reach();
    std::map<Edge, std::optional<Rational>> b;
    for (const Edge& e : all_edges(L_)) {
      if (r[e.dst.bits] == 0)
        b[e] = std::nullopt;
      else
        b[e] = Rational(r[e.src.bits] * a_.at(e) / r[e.dst.bits]);
    }
    return b;
  }

 private:
  int L_;
  std::map<Edge, Rational> a_;
};

/// Cross-sectional mix over levels 0..L; non-negative, sums to 1.
struct SamplingDistribution {
  std::vector<Rational> weights;

  static SamplingDistribution uniform(int L) {
    check_dimension(L);
    SamplingDistribution q;
    q.weights.assign(static_cast<std::size_t>(L) + 1, make_rational(1, L + 1));
    return q;
  }

  void validate(int L) const {
    if (weights.size() != static_cast<std::size_t>(L) + 1)
      throw std::invalid_argument("sampling distribution needs L+1 level weights");
    Rational sum = 0;
    for (const auto& w : weights) {
      if (w < 0) throw std::invalid_argument("negative level weight");
      sum += w;
    }
    if (sum != 1) throw std::invalid_argument("level weights must sum to 1");
  }
};

/// Infinite-sample proportions N_i = q(level(i)) * R(i); sums to 1 exactly.
inline std::vector<Rational> exact_proportions(const TransitionModel& m,
                                               const SamplingDistribution& q) {
  int L = m.dimension();
  q.validate(L);
  auto r = m.reach();
  std::vector<Rational> prop(r.size());
  for (std::uint32_t n = 0; n < r.size(); ++n)
    prop[n] = q.weights[static_cast<std::size_t>(level(NodeId{n}))] * r[n];
  return prop;
}

/// n independent draws: level ~ q, then a path walked from 0^L by the
/// a-probabilities, recorded at the drawn level.  Deterministic given seed.
inline Dataset sample_dataset(const TransitionModel& m, const SamplingDistribution& q,
                              std::uint64_t n, std::uint64_t seed) {
  int L = m.dimension();
  q.validate(L);
  if (n < 1) throw std::invalid_argument("sample count must be at least 1");
  std::vector<std::uint64_t> counts(std::size_t{1} << L, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> qw(q.weights.size());
  for (std::size_t i = 0; i < qw.size(); ++i) qw[i] = to_double(q.weights[i]);
  for (std::uint64_t s = 0; s < n; ++s) {
    double u = unit(rng);
    int lv = 0;
    for (; lv + 1 < static_cast<int>(qw.size()); ++lv) {
      if (u < qw[lv]) break;
      u -= qw[lv];
    }
    NodeId cur{0};
    for (int step = 0; step < lv; ++step) {
      double v = unit(rng);
      auto out = outgoing(cur, L);
      NodeId next = out.back().dst;
      for (const Edge& e : out) {
        double p = to_double(m.a(e));
        if (v < p) {
          next = e.dst;
          break;
        }
        v -= p;
      }
      cur = next;
    }
    ++counts[cur.bits];
  }
  return Dataset(L, std::move(counts));
}

/// Random strictly-positive model for property tests: per node the outgoing
/// weights are normalized integer draws, exact rationals.
inline TransitionModel random_model(int L, std::mt19937_64& rng) {
  check_dimension(L);
  std::map<Edge, Rational> a;
  std::uniform_int_distribution<long> w(1, 100);
  for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
    NodeId node{n};
    if (level(node) == L) continue;
    auto out = outgoing(node, L);
    std::vector<long> ws(out.size());
    long sum = 0;
    for (auto& x : ws) sum += (x = w(rng));
    for (std::size_t k = 0; k < out.size(); ++k) a[out[k]] = make_rational(ws[k], sum);
  }
  return TransitionModel(L, std::move(a));
}

}  // namespace hyperalg

#endif  // HYPERALG_DYNAMICS_HPP
