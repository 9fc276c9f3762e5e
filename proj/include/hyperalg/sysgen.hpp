#ifndef HYPERALG_SYSGEN_HPP
#define HYPERALG_SYSGEN_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperalg/dataset.hpp"
#include "hyperalg/hypercube.hpp"
#include "hyperalg/polynomial.hpp"

// Generator system construction.  Three blocks of generators are built from
// the data-coupled trajectory proportions P(i):
//   I1 -- process dynamics:  sum_{s->n} P(s) a_{s;n} - P(n) per inner node,
//   I2 -- normalisation:     per-level P sums and per-node a sums equal 1,
//   I3 -- trajectory consistency: b_{i;j} (sum_{k->j} P(k) a_{k;j}) - P(i) a_{i;j}.
// The reduced form eliminates one a-variable per multi-out-degree node and one
// b-variable per multi-in-degree node through the sum-to-one constraints and
// drops the one redundant I1 generator per level.

namespace hyperalg {

enum class SystemMode { full, reduced };

struct GeneratedSystem {
  int L = 0;
  SystemMode mode = SystemMode::reduced;
  std::vector<VarId> variables;          // free variables, a-block then b-block
  std::map<VarId, Polynomial> fixed;     // forced/eliminated -> expression in free vars
  std::vector<Polynomial> generators;
  std::vector<std::string> generator_labels;
  std::vector<Polynomial> p_expr;        // indexed by node bits
  std::string dataset_digest;
};

namespace detail {

struct VarPolys {
  std::map<Edge, Polynomial> a;
  std::map<Edge, Polynomial> b;
};

// Expression of every edge variable in the system's free variables.
inline VarPolys edge_var_polys(int L, SystemMode mode, const Eliminations& el,
                               std::map<VarId, Polynomial>& fixed) {
  VarPolys vp;
  for (const Edge& e : all_edges(L)) {
    vp.a[e] = Polynomial::variable(a_var(e, L));
    vp.b[e] = Polynomial::variable(b_var(e, L));
  }
  for (const Edge& e : el.forced_a) {
    vp.a[e] = Polynomial(1);
    fixed[a_var(e, L)] = Polynomial(1);
  }
  for (const Edge& e : el.forced_b) {
    vp.b[e] = Polynomial(1);
    fixed[b_var(e, L)] = Polynomial(1);
  }
  if (mode == SystemMode::reduced) {
    for (const Edge& e : el.eliminated_a) {
      Polynomial expr(1);
      for (const Edge& s : outgoing(e.src, L))
        if (s.dst != e.dst) expr -= Polynomial::variable(a_var(s, L));
      vp.a[e] = expr;
      fixed[a_var(e, L)] = std::move(expr);
    }
    for (const Edge& e : el.eliminated_b) {
      Polynomial expr(1);
      for (const Edge& s : incoming(e.dst, L))
        if (s.src != e.src) expr -= Polynomial::variable(b_var(s, L));
      vp.b[e] = expr;
      fixed[b_var(e, L)] = std::move(expr);
    }
  }
  return vp;
}

}  // namespace detail

/// Trajectory-proportion expressions P(i) for all nodes, computed by the
/// forward/backward coefficient recursion.  Edge variables are taken from
/// `vp`, so the same routine serves the full and the reduced basis.
inline std::vector<Polynomial> build_p_exprs(int L, const std::vector<Rational>& N,
                                             const detail::VarPolys& vp) {
  std::size_t size = std::size_t{1} << L;
  if (N.size() != size) throw std::invalid_argument("proportions must have 2^L entries");
  std::vector<Polynomial> cfn(size), cbn(size), p(size);
  cfn[0] = Polynomial(N[0]);
  cbn[size - 1] = Polynomial(N[size - 1]);
  for (int step = 1; step <= L - 1; ++step) {
    for (std::uint32_t n = 1; n + 1 < size; ++n) {
      int lv = level(NodeId{n});
      if (lv == step) {  // forward
        Polynomial acc{N[n]};
        for (const Edge& e : incoming(NodeId{n}, L)) acc += cfn[e.src.bits] * vp.a.at(e);
        cfn[n] = std::move(acc);
      }
      if (lv == L - step) {  // backward
        Polynomial acc{N[n]};
        for (const Edge& e : outgoing(NodeId{n}, L)) acc += cbn[e.dst.bits] * vp.b.at(e);
        cbn[n] = std::move(acc);
      }
    }
  }
  p[0] = Polynomial(1);
  p[size - 1] = Polynomial(1);
  for (std::uint32_t n = 1; n + 1 < size; ++n)
    p[n] = cfn[n] + cbn[n] - Polynomial(N[n]);
  return p;
}

/// Convenience overload over a dataset (full-variable basis).
inline std::vector<Polynomial> build_p_exprs(const Dataset& d) {
  int L = d.dimension();
  auto el = canonical_eliminations(L);
  std::map<VarId, Polynomial> fixed;
  auto vp = detail::edge_var_polys(L, SystemMode::full, el, fixed);
  return build_p_exprs(L, d.proportions(), vp);
}

inline std::vector<Polynomial> build_I1(int L, const std::vector<Polynomial>& p,
                                        const detail::VarPolys& vp) {
  std::vector<Polynomial> g;
  g.push_back(Polynomial(1) - p[0]);
  for (const NodeId& n : inner_nodes_by_level(L)) {
    Polynomial acc = -p[n.bits];
    for (const Edge& e : incoming(n, L)) acc += p[e.src.bits] * vp.a.at(e);
    g.push_back(std::move(acc));
  }
  g.push_back(Polynomial(1) - p[full_node(L).bits]);
  return g;
}

inline std::vector<Polynomial> build_I2(int L, const std::vector<Polynomial>& p,
                                        const detail::VarPolys& vp) {
  std::vector<Polynomial> g;
  for (int lv = 1; lv <= L - 1; ++lv) {
    Polynomial acc(-1);
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n)
      if (level(NodeId{n}) == lv) acc += p[n];
    g.push_back(std::move(acc));
  }
  // level-(L-1) nodes have their single outgoing a forced to 1; no generator
  for (int lv = 0; lv <= L - 2; ++lv)
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n)
      if (level(NodeId{n}) == lv) {
        Polynomial acc(-1);
        for (const Edge& e : outgoing(NodeId{n}, L)) acc += vp.a.at(e);
        g.push_back(std::move(acc));
      }
  return g;
}

/// One generator per edge into a node of level >= 2; edges into level-1 nodes
/// carry a forced b and get none.
inline std::vector<Polynomial> build_I3(int L, const std::vector<Polynomial>& p,
                                        const detail::VarPolys& vp) {
  std::vector<Polynomial> g;
  for (int lv = 2; lv <= L; ++lv)
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
      if (level(NodeId{n}) != lv) continue;
      Polynomial sum;
      for (const Edge& e : incoming(NodeId{n}, L)) sum += p[e.src.bits] * vp.a.at(e);
      for (const Edge& e : incoming(NodeId{n}, L))
        g.push_back(vp.b.at(e) * sum - p[e.src.bits] * vp.a.at(e));
    }
  return g;
}

inline GeneratedSystem build_system(int L, const std::vector<Rational>& N,
                                    SystemMode mode, std::string digest = "") {
  check_dimension(L);
  GeneratedSystem sys;
  sys.L = L;
  sys.mode = mode;
  sys.dataset_digest = std::move(digest);

  auto el = canonical_eliminations(L);
  auto vp = detail::edge_var_polys(L, mode, el, sys.fixed);
  sys.p_expr = build_p_exprs(L, N, vp);

  if (mode == SystemMode::full) {
    for (const Edge& e : el.free_a) sys.variables.push_back(a_var(e, L));
    for (const Edge& e : el.eliminated_a) sys.variables.push_back(a_var(e, L));
    for (const Edge& e : el.free_b) sys.variables.push_back(b_var(e, L));
    for (const Edge& e : el.eliminated_b) sys.variables.push_back(b_var(e, L));
    std::sort(sys.variables.begin(), sys.variables.end());

    auto g1 = build_I1(L, sys.p_expr, vp);
    auto g2 = build_I2(L, sys.p_expr, vp);
    auto g3 = build_I3(L, sys.p_expr, vp);
    auto nodes = inner_nodes_by_level(L);
    sys.generator_labels.push_back("I1:" + node_label(NodeId{0}, L));
    for (const NodeId& n : nodes) sys.generator_labels.push_back("I1:" + node_label(n, L));
    sys.generator_labels.push_back("I1:" + node_label(full_node(L), L));
    for (int lv = 1; lv <= L - 1; ++lv)
      sys.generator_labels.push_back("I2:level" + std::to_string(lv));
    for (int lv = 0; lv <= L - 2; ++lv)
      for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n)
        if (level(NodeId{n}) == lv)
          sys.generator_labels.push_back("I2:" + node_label(NodeId{n}, L));
    for (int lv = 2; lv <= L; ++lv)
      for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n)
        if (level(NodeId{n}) == lv)
          for (const Edge& e : incoming(NodeId{n}, L))
            sys.generator_labels.push_back("I3:" + var_name(b_var(e, L)));
    for (auto& g : g1) sys.generators.push_back(std::move(g));
    for (auto& g : g2) sys.generators.push_back(std::move(g));
    for (auto& g : g3) sys.generators.push_back(std::move(g));
    return sys;
  }

  // reduced mode
  for (const Edge& e : el.free_a) sys.variables.push_back(a_var(e, L));
  for (const Edge& e : el.free_b) sys.variables.push_back(b_var(e, L));
  std::sort(sys.variables.begin(), sys.variables.end());

  for (int lv = 1; lv <= L - 1; ++lv) {
    NodeId dropped = dropped_node_at_level(L, lv);
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
      NodeId node{n};
      if (level(node) != lv || node == dropped) continue;
      Polynomial acc = -sys.p_expr[n];
      for (const Edge& e : incoming(node, L)) acc += sys.p_expr[e.src.bits] * vp.a.at(e);
      sys.generators.push_back(std::move(acc));
      sys.generator_labels.push_back("I1:" + node_label(node, L));
    }
  }
  for (int lv = 2; lv <= L; ++lv)
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
      NodeId node{n};
      if (level(node) != lv) continue;
      Polynomial sum;
      auto in = incoming(node, L);
      for (const Edge& e : in) sum += sys.p_expr[e.src.bits] * vp.a.at(e);
      // the smallest source's b is eliminated: no generator for it
      for (std::size_t k = 1; k < in.size(); ++k) {
        const Edge& e = in[k];
        sys.generators.push_back(Polynomial::variable(b_var(e, L)) * sum -
                                 sys.p_expr[e.src.bits] * vp.a.at(e));
        sys.generator_labels.push_back("I3:" + var_name(b_var(e, L)));
      }
    }
  return sys;
}

inline GeneratedSystem build_system(const Dataset& d, SystemMode mode) {
  return build_system(d.dimension(), d.proportions(), mode, d.digest());
}

/// Extends a free-variable point by the fixed-variable expressions.
template <typename Value>
inline std::map<VarId, Value> extend_point(const GeneratedSystem& sys,
                                           const std::map<VarId, Value>& point) {
  std::map<VarId, Value> full = point;
  for (const auto& [v, expr] : sys.fixed) {
    if constexpr (std::is_same_v<Value, Rational>)
      full[v] = expr.eval_exact(point);
    else
      full[v] = expr.eval_double(point);
  }
  return full;
}

inline std::vector<double> residuals(const GeneratedSystem& sys,
                                     const std::map<VarId, double>& point) {
  std::vector<double> r;
  r.reserve(sys.generators.size());
  for (const auto& g : sys.generators) r.push_back(g.eval_double(point));
  return r;
}

inline std::vector<Rational> residuals_exact(const GeneratedSystem& sys,
                                             const std::map<VarId, Rational>& point) {
  std::vector<Rational> r;
  r.reserve(sys.generators.size());
  for (const auto& g : sys.generators) r.push_back(g.eval_exact(point));
  return r;
}

/// Checks the two non-trivial syzygies among the L=3 full generators
/// f1..f14 (I1 then I2): both combinations must cancel symbolically.
inline bool verify_syzygies(const GeneratedSystem& sys) {
  if (sys.L != 3 || sys.mode != SystemMode::full)
    throw std::invalid_argument("syzygy check requires the full L=3 system");
  const auto& f = sys.generators;
  if (f.size() < 14) throw std::invalid_argument("malformed full system");
  const auto& P = sys.p_expr;
  // (1,1,1,1,0,0,0,0,1,0,-P(000),0,0,0)
  Polynomial s1 = f[0] + f[1] + f[2] + f[3] + f[8] - P[0] * f[10];
  // (0,0,0,0,1,1,1,0,-1,1,0,-P(100),-P(010),-P(001))
  Polynomial s2 = f[4] + f[5] + f[6] - f[8] + f[9] - P[1] * f[11] - P[2] * f[12] - P[4] * f[13];
  return s1.is_zero() && s2.is_zero();
}

/// The naive closed dynamics system: I1 with the observed proportions N_i
/// substituted directly for the P(i).  Infeasible for datasets whose inner
/// states went unobserved.
inline std::vector<Polynomial> naive_closed_generators(const Dataset& d) {
  int L = d.dimension();
  auto N = d.proportions();
  std::vector<Polynomial> g;
  for (const NodeId& n : inner_nodes_by_level(L)) {
    Polynomial acc(-N[n.bits]);
    for (const Edge& e : incoming(n, L))
      acc += Polynomial::variable(a_var(e, L)).scaled(N[e.src.bits]);
    g.push_back(std::move(acc));
  }
  return g;
}

}  // namespace hyperalg

#endif  // HYPERALG_SYSGEN_HPP
