#ifndef HYPERALG_LIKELIHOOD_HPP
#define HYPERALG_LIKELIHOOD_HPP

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "hyperalg/dataset.hpp"
#include "hyperalg/dynamics.hpp"
#include "hyperalg/hypercube.hpp"
#include "hyperalg/polynomial.hpp"

// Log-likelihood of a cross-sectional dataset under the a-projection of a
// model:  l = sum over inner states of D_i * log R(i), with the reach R from
// the forward recursion.  States at level 0 and L contribute nothing (R=1).
// Exponents are the raw counts D_i.

namespace hyperalg {

struct StateTerm {
  std::uint64_t count = 0;
  double reach = 0.0;
  double contribution = 0.0;  // count * log(reach)
};

struct LikelihoodReport {
  double loglik = 0.0;  // -inf when some counted state is unreachable
  std::optional<NodeId> offending_state;
  std::map<NodeId, StateTerm> per_state_terms;
};

inline LikelihoodReport loglik(const TransitionModel& m, const Dataset& d) {
  if (m.dimension() != d.dimension())
    throw std::invalid_argument("model and dataset dimension mismatch");
  int L = d.dimension();
  auto r = m.reach_double();
  LikelihoodReport rep;
  for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
    int lv = level(NodeId{n});
    if (lv == 0 || lv == L) continue;
    std::uint64_t c = d.count(NodeId{n});
    if (c == 0) continue;
    StateTerm t;
    t.count = c;
    t.reach = r[n];
    if (r[n] <= 0.0) {
      t.contribution = -std::numeric_limits<double>::infinity();
      if (!rep.offending_state) rep.offending_state = NodeId{n};
    } else {
      t.contribution = static_cast<double>(c) * std::log(r[n]);
    }
    rep.per_state_terms[NodeId{n}] = t;
    rep.loglik += t.contribution;
  }
  return rep;
}

/// Exact likelihood L = prod over inner states of R(i)^{D_i} (rational mode).
inline Rational likelihood_exact(const TransitionModel& m, const Dataset& d) {
  if (m.dimension() != d.dimension())
    throw std::invalid_argument("model and dataset dimension mismatch");
  int L = d.dimension();
  auto r = m.reach();
  Rational acc = 1;
  for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
    int lv = level(NodeId{n});
    if (lv == 0 || lv == L) continue;
    for (std::uint64_t k = 0; k < d.count(NodeId{n}); ++k) acc *= r[n];
  }
  return acc;
}

/// Partial derivatives of the log-likelihood with respect to the free
/// a-variables of the canonical parametrization, by forward sensitivity of
/// the reach recursion composed with the elimination map.
inline std::map<VarId, double> loglik_gradient(const TransitionModel& m, const Dataset& d) {
  if (m.dimension() != d.dimension())
    throw std::invalid_argument("model and dataset dimension mismatch");
  int L = d.dimension();
  auto el = canonical_eliminations(L);
  auto edges = all_edges(L);
  auto r = m.reach_double();

  // da(edge)/dx for free variable x: +1 on x's own edge, -1 on the eliminated
  // sibling of the same source node, 0 elsewhere.
  std::map<Edge, Edge> eliminated_sibling;  // source-node eliminated edge
  for (const Edge& e : el.eliminated_a)
    for (const Edge& s : outgoing(e.src, L)) eliminated_sibling[s] = e;

  std::map<VarId, double> grad;
  for (const Edge& fe : el.free_a) {
    std::vector<double> dr(std::size_t{1} << L, 0.0);
    const Edge elim = eliminated_sibling.at(fe);
    for (const Edge& e : edges) {
      double da = e == fe ? 1.0 : (e == elim ? -1.0 : 0.0);
      dr[e.dst.bits] += dr[e.src.bits] * to_double(m.a(e)) + r[e.src.bits] * da;
    }
    double g = 0.0;
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
      int lv = level(NodeId{n});
      if (lv == 0 || lv == L) continue;
      std::uint64_t c = d.count(NodeId{n});
      if (c == 0) continue;
      if (r[n] <= 0.0)
        throw std::domain_error("counted state " + node_label(NodeId{n}, L) +
                                " has zero reach; gradient undefined");
      g += static_cast<double>(c) * dr[n] / r[n];
    }
    grad[a_var(fe, L)] = g;
  }
  return grad;
}

}  // namespace hyperalg

#endif  // HYPERALG_LIKELIHOOD_HPP
