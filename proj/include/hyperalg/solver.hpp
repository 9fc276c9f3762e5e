#ifndef HYPERALG_SOLVER_HPP
#define HYPERALG_SOLVER_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "hyperalg/dataset.hpp"
#include "hyperalg/likelihood.hpp"
#include "hyperalg/sysgen.hpp"

// Numerical location of points of the semi-algebraic set V: box-constrained
// minimisation of F(x) = sum_i p_i(x)^2 over [0,1]^d with analytic gradients,
// fiber solving for externally supplied a-values, and penalized maximum
// likelihood over V.

namespace hyperalg {

struct SolveOptions {
  int starts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;       // converged iff F < tol
  int max_iterations = 600;
  double dedup_tol = 1e-4;
};

struct SolveResult {
  std::map<VarId, double> point;
  double objective = 0.0;          // sum of squared residuals, recomputed
  std::vector<double> residuals;
  int iterations = 0;
  std::uint64_t start_seed = 0;
  int start_index = 0;
  bool converged = false;
};

namespace detail {

struct CompiledTerm {
  double coeff;
  std::vector<std::pair<int, int>> pows;  // (variable index, exponent)
};

struct CompiledPoly {
  std::vector<CompiledTerm> terms;

  double eval(const Eigen::VectorXd& x) const {
    double acc = 0.0;
    for (const auto& t : terms) {
      double v = t.coeff;
      for (auto [i, e] : t.pows)
        for (int k = 0; k < e; ++k) v *= x[i];
      acc += v;
    }
    return acc;
  }
};

struct CompiledSystem {
  int dim = 0;
  std::vector<VarId> vars;
  std::vector<CompiledPoly> polys;
  // sparse Jacobian: per polynomial, (variable index, derivative polynomial)
  std::vector<std::vector<std::pair<int, CompiledPoly>>> jac;

  Eigen::VectorXd residuals(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(polys.size()));
    for (std::size_t i = 0; i < polys.size(); ++i)
      r[static_cast<Eigen::Index>(i)] = polys[i].eval(x);
    return r;
  }
  double objective(const Eigen::VectorXd& x) const { return residuals(x).squaredNorm(); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(polys.size()), dim);
    for (std::size_t i = 0; i < polys.size(); ++i)
      for (const auto& [v, dp] : jac[i]) J(static_cast<Eigen::Index>(i), v) = dp.eval(x);
    return J;
  }
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < polys.size(); ++i) {
      double ri = polys[i].eval(x);
      for (const auto& [v, dp] : jac[i]) g[v] += 2.0 * ri * dp.eval(x);
    }
    return g;
  }
};

inline CompiledPoly compile_poly(const Polynomial& p, const std::map<VarId, int>& index) {
  CompiledPoly cp;
  for (const auto& [m, c] : p.terms()) {
    CompiledTerm t;
    t.coeff = to_double(c);
    for (const auto& [v, e] : m.exps) {
      auto it = index.find(v);
      if (it == index.end())
        throw std::invalid_argument("generator references non-free variable " + var_name(v));
      t.pows.emplace_back(it->second, e);
    }
    cp.terms.push_back(std::move(t));
  }
  return cp;
}

inline CompiledSystem compile(const std::vector<Polynomial>& gens,
                              const std::vector<VarId>& vars) {
  CompiledSystem cs;
  cs.vars = vars;
  cs.dim = static_cast<int>(vars.size());
  std::map<VarId, int> index;
  for (int i = 0; i < cs.dim; ++i) index[vars[static_cast<std::size_t>(i)]] = i;
  for (const auto& g : gens) {
    cs.polys.push_back(compile_poly(g, index));
    std::vector<std::pair<int, CompiledPoly>> row;
    for (const auto& [v, dp] : g.gradient())
      row.emplace_back(index.at(v), compile_poly(dp, index));
    cs.jac.push_back(std::move(row));
  }
  return cs;
}

inline void clamp_box(Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], 0.0, 1.0);
}

/// Levenberg-Marquardt with projection onto the unit box after every step.
/// Monotone in F by construction (only improving steps are accepted).
inline std::pair<Eigen::VectorXd, int> minimize_squares(const CompiledSystem& cs,
                                                        Eigen::VectorXd x,
                                                        int max_iterations) {
  clamp_box(x);
  if (cs.dim == 0 || cs.polys.empty()) return {x, 0};
  double mu = 1e-3;
  double F = cs.objective(x);
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (F < 1e-22) break;
    Eigen::MatrixXd J = cs.jacobian(x);
    Eigen::VectorXd r = cs.residuals(x);
    Eigen::MatrixXd H = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int inner = 0; inner < 60; ++inner) {
      Eigen::MatrixXd A = H;
      A.diagonal().array() += mu;
      Eigen::VectorXd step = A.ldlt().solve(-g);
      Eigen::VectorXd xn = x + step;
      clamp_box(xn);
      double Fn = cs.objective(xn);
      if (Fn < F) {
        x = std::move(xn);
        F = Fn;
        mu = std::max(mu * 0.3, 1e-12);
        accepted = true;
        break;
      }
      mu *= 4.0;
      if (mu > 1e14) break;
    }
    if (!accepted) break;
  }
  return {x, it};
}

inline std::uint64_t start_seed_for(std::uint64_t seed, int start) {
  return seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(start + 1));
}

inline SolveResult finish_result(const CompiledSystem& cs, const Eigen::VectorXd& x,
                                 int iterations, int start, std::uint64_t seed,
                                 double tol) {
  SolveResult res;
  for (int i = 0; i < cs.dim; ++i)
    res.point[cs.vars[static_cast<std::size_t>(i)]] = x[i];
  Eigen::VectorXd r = cs.residuals(x);
  res.residuals.assign(r.data(), r.data() + r.size());
  res.objective = r.squaredNorm();
  res.iterations = iterations;
  res.start_index = start;
  res.start_seed = start_seed_for(seed, start);
  res.converged = res.objective < tol;
  return res;
}

inline std::vector<SolveResult> run_multistart(const CompiledSystem& cs,
                                               const SolveOptions& opt) {
  if (opt.starts < 1) throw std::invalid_argument("starts must be >= 1");
  if (opt.tol <= 0) throw std::invalid_argument("tol must be positive");
  std::vector<SolveResult> results;
  for (int s = 0; s < opt.starts; ++s) {
    Eigen::VectorXd x0(cs.dim);
    if (s == 0) {
      x0.setConstant(0.5);
    } else {
      std::mt19937_64 rng(start_seed_for(opt.seed, s));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < cs.dim; ++i) x0[i] = unit(rng);
    }
    auto [x, it] = minimize_squares(cs, std::move(x0), opt.max_iterations);
    results.push_back(finish_result(cs, x, it, s, opt.seed, opt.tol));
  }
  std::sort(results.begin(), results.end(), [](const SolveResult& a, const SolveResult& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    return a.start_index < b.start_index;
  });
  std::vector<SolveResult> unique;
  for (auto& r : results) {
    bool dup = false;
    for (const auto& u : unique) {
      double dist = 0.0;
      auto iu = u.point.begin();
      for (auto ir = r.point.begin(); ir != r.point.end(); ++ir, ++iu)
        dist = std::max(dist, std::abs(ir->second - iu->second));
      if (dist <= 1e-4) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(std::move(r));
  }
  return unique;
}

}  // namespace detail

/// Multi-start minimisation of the sum of squared generators over the unit
/// box.  The first start sits at all-0.5; the rest are uniform in the box.
inline std::vector<SolveResult> solve_residual(const GeneratedSystem& sys,
                                               const SolveOptions& opt = {}) {
  if (sys.mode != SystemMode::reduced)
    throw std::invalid_argument("solve_residual requires a reduced system");
  return detail::run_multistart(detail::compile(sys.generators, sys.variables), opt);
}

/// Substitutes the supplied a-values (snapped to exact rationals) and
/// minimises over the b-box only.
inline std::vector<SolveResult> solve_fiber(const GeneratedSystem& sys,
                                            const std::map<VarId, double>& a_values,
                                            const SolveOptions& opt = {}) {
  if (sys.mode != SystemMode::reduced)
    throw std::invalid_argument("solve_fiber requires a reduced system");
  std::map<VarId, Polynomial> bindings;
  std::vector<VarId> b_vars;
  for (const VarId& v : sys.variables) {
    if (v.kind == VarKind::A) {
      auto it = a_values.find(v);
      if (it == a_values.end())
        throw std::invalid_argument("missing a-value for " + var_name(v));
      if (it->second < 0.0 || it->second > 1.0)
        throw std::invalid_argument("a-value outside [0,1] for " + var_name(v));
      bindings[v] = Polynomial(snap_to_grid(it->second));
    } else {
      b_vars.push_back(v);
    }
  }
  std::vector<Polynomial> gens;
  gens.reserve(sys.generators.size());
  for (const auto& g : sys.generators) gens.push_back(g.substitute(bindings));
  return detail::run_multistart(detail::compile(gens, b_vars), opt);
}

struct MleOptions {
  std::vector<double> lambda_schedule{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  int starts = 8;
  std::uint64_t seed = 0;
  double feasibility_tol = 1e-8;
  int max_iterations = 300;
};

struct MleResult {
  SolveResult point;
  LikelihoodReport report;
  bool feasible = false;
};

namespace detail {

// log-likelihood and gradient over the free coordinates of a compiled system.
struct LoglikEvaluator {
  int L;
  const Dataset* data;
  std::vector<Edge> edges;
  std::map<Edge, int> free_index;       // edge -> free coordinate
  std::map<Edge, Edge> elim_sibling;    // source node's eliminated edge
  std::vector<Edge> eliminated, forced;
  std::vector<int> a_coords;            // free coordinates that are a-variables

  LoglikEvaluator(const GeneratedSystem& sys, const Dataset& d)
      : L(sys.L), data(&d), edges(all_edges(sys.L)) {
    auto el = canonical_eliminations(L);
    eliminated = el.eliminated_a;
    forced = el.forced_a;
    for (std::size_t i = 0; i < sys.variables.size(); ++i) {
      const VarId& v = sys.variables[i];
      if (v.kind == VarKind::A) {
        free_index[v.edge] = static_cast<int>(i);
        a_coords.push_back(static_cast<int>(i));
      }
    }
    for (const Edge& e : eliminated)
      for (const Edge& s : outgoing(e.src, L)) elim_sibling[s] = e;
  }

  // expands free coordinates to per-edge transition values; false when an
  // eliminated value leaves [0,1]
  bool edge_values(const Eigen::VectorXd& x, std::map<Edge, double>& a) const {
    for (const Edge& e : forced) a[e] = 1.0;
    for (const auto& [e, i] : free_index) a[e] = x[i];
    for (const Edge& e : eliminated) {
      double rest = 1.0;
      for (const Edge& s : outgoing(e.src, L))
        if (s.dst != e.dst) rest -= a.at(s);
      if (rest < -1e-12) return false;
      a[e] = std::max(rest, 0.0);
    }
    return true;
  }

  // returns -inf on infeasible points
  double value(const Eigen::VectorXd& x) const {
    std::map<Edge, double> a;
    if (!edge_values(x, a)) return -std::numeric_limits<double>::infinity();
    std::vector<double> r(std::size_t{1} << L, 0.0);
    r[0] = 1.0;
    for (const Edge& e : edges) r[e.dst.bits] += r[e.src.bits] * a[e];
    double ll = 0.0;
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
      int lv = level(NodeId{n});
      if (lv == 0 || lv == L) continue;
      std::uint64_t c = data->count(NodeId{n});
      if (c == 0) continue;
      if (r[n] <= 0.0) return -std::numeric_limits<double>::infinity();
      ll += static_cast<double>(c) * std::log(r[n]);
    }
    return ll;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    std::map<Edge, double> a;
    if (!edge_values(x, a)) return g;
    std::vector<double> r(std::size_t{1} << L, 0.0);
    r[0] = 1.0;
    for (const Edge& e : edges) r[e.dst.bits] += r[e.src.bits] * a[e];
    for (const auto& [fe, idx] : free_index) {
      std::vector<double> dr(std::size_t{1} << L, 0.0);
      const Edge elim = elim_sibling.at(fe);
      for (const Edge& e : edges) {
        double da = e == fe ? 1.0 : (e == elim ? -1.0 : 0.0);
        dr[e.dst.bits] += dr[e.src.bits] * a[e] + r[e.src.bits] * da;
      }
      double s = 0.0;
      for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n) {
        int lv = level(NodeId{n});
        if (lv == 0 || lv == L) continue;
        std::uint64_t c = data->count(NodeId{n});
        if (c == 0 || r[n] <= 0.0) continue;
        s += static_cast<double>(c) * dr[n] / r[n];
      }
      g[idx] = s;
    }
    return g;
  }
};

/// Projected BFGS with Armijo backtracking on a generic objective.
template <typename Value, typename Grad>
inline Eigen::VectorXd projected_bfgs(Value value, Grad gradient, Eigen::VectorXd x,
                                      int max_iterations) {
  const int d = static_cast<int>(x.size());
  if (d == 0) return x;
  clamp_box(x);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
  double f = value(x);
  Eigen::VectorXd g = gradient(x);
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd p = -H * g;
    if (p.dot(g) > -1e-16) {
      H.setIdentity();
      p = -g;
    }
    double alpha = 1.0;
    bool moved = false;
    Eigen::VectorXd xn;
    double fn = f;
    for (int ls = 0; ls < 40; ++ls) {
      xn = x + alpha * p;
      clamp_box(xn);
      fn = value(xn);
      Eigen::VectorXd dx = xn - x;
      if (std::isfinite(fn) && fn <= f + 1e-4 * g.dot(dx) && dx.lpNorm<Eigen::Infinity>() > 0) {
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) break;
    Eigen::VectorXd gn = gradient(xn);
    Eigen::VectorXd s = xn - x;
    Eigen::VectorXd y = gn - g;
    double sy = s.dot(y);
    if (sy > 1e-12) {
      Eigen::VectorXd Hy = H * y;
      H += ((sy + y.dot(Hy)) / (sy * sy)) * (s * s.transpose()) -
           (Hy * s.transpose() + s * Hy.transpose()) / sy;
    } else {
      H.setIdentity();
    }
    if ((xn - x).lpNorm<Eigen::Infinity>() < 1e-14) {
      x = xn;
      f = fn;
      break;
    }
    x = xn;
    f = fn;
    g = gn;
  }
  return x;
}

}  // namespace detail

/// Exterior-penalty maximum likelihood over V: maximises l(a) - lambda F(a,b)
/// for an increasing lambda schedule with warm starts, then polishes
/// feasibility with the least-squares solver.
inline MleResult solve_mle(const GeneratedSystem& sys, const Dataset& d,
                           const MleOptions& opt = {}) {
  if (sys.mode != SystemMode::reduced)
    throw std::invalid_argument("solve_mle requires a reduced system");
  if (sys.L != d.dimension())
    throw std::invalid_argument("system and dataset dimension mismatch");
  auto cs = detail::compile(sys.generators, sys.variables);
  detail::LoglikEvaluator ll(sys, d);

  auto start_point = [&](int s) {
    Eigen::VectorXd x(cs.dim);
    std::mt19937_64 rng(detail::start_seed_for(opt.seed, s));
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    // per-node normalized weights keep every eliminated coordinate feasible
    auto el = canonical_eliminations(sys.L);
    std::map<VarId, double> val;
    auto assign_group = [&](const std::vector<Edge>& free_edges, VarKind kind, bool by_src) {
      std::map<std::uint32_t, std::vector<Edge>> groups;
      for (const Edge& e : free_edges) groups[by_src ? e.src.bits : e.dst.bits].push_back(e);
      for (auto& [node, es] : groups) {
        std::size_t total = es.size() + 1;  // plus the eliminated edge
        std::vector<double> w(total);
        double sum = 0.0;
        for (auto& v : w) sum += (v = (s == 0 ? 1.0 : unit(rng)));
        for (std::size_t k = 0; k < es.size(); ++k) {
          VarId v = kind == VarKind::A ? a_var(es[k], sys.L) : b_var(es[k], sys.L);
          val[v] = w[k] / sum;
        }
      }
    };
    assign_group(el.free_a, VarKind::A, true);
    assign_group(el.free_b, VarKind::B, false);
    for (int i = 0; i < cs.dim; ++i) x[i] = val.at(cs.vars[static_cast<std::size_t>(i)]);
    return x;
  };

  MleResult best;
  best.point.objective = std::numeric_limits<double>::infinity();
  double best_ll = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (int s = 0; s < opt.starts; ++s) {
    Eigen::VectorXd x = start_point(s);
    for (double lambda : opt.lambda_schedule) {
      auto value = [&](const Eigen::VectorXd& z) {
        double l = ll.value(z);
        if (!std::isfinite(l)) return std::numeric_limits<double>::infinity();
        return -l + lambda * cs.objective(z);
      };
      auto grad = [&](const Eigen::VectorXd& z) {
        return (-ll.gradient(z) + lambda * cs.objective_gradient(z)).eval();
      };
      x = detail::projected_bfgs(value, grad, x, opt.max_iterations);
    }
    // feasibility polish: descend F alone from the penalty solution
    auto [xp, iters] = detail::minimize_squares(cs, x, 80);
    double F = cs.objective(xp);
    double l = ll.value(xp);
    bool feas = F < opt.feasibility_tol;
    bool better = !have || (feas && !best.feasible) ||
                  (feas == best.feasible && l > best_ll);
    if (better) {
      best.point = detail::finish_result(cs, xp, iters, s, opt.seed, opt.feasibility_tol);
      best.feasible = feas;
      best_ll = l;
      have = true;
    }
  }
  std::map<VarId, Rational> free_a;
  for (const auto& [v, x] : best.point.point)
    if (v.kind == VarKind::A) free_a[v] = rational_from_double(std::clamp(x, 0.0, 1.0));
  // clamp eliminated coordinates that float error pushed below zero
  auto el = canonical_eliminations(sys.L);
  std::map<Edge, Rational> a;
  for (const Edge& e : el.forced_a) a[e] = 1;
  for (const Edge& e : el.free_a) a[e] = free_a.at(a_var(e, sys.L));
  for (const Edge& e : el.eliminated_a) {
    Rational rest = 1;
    for (const Edge& s : outgoing(e.src, sys.L))
      if (s.dst != e.dst) rest -= a.at(s);
    a[e] = rest < 0 ? Rational(0) : (rest > 1 ? Rational(1) : rest);
  }
  best.report = loglik(TransitionModel(sys.L, std::move(a), 1e-6), d);
  return best;
}

}  // namespace hyperalg

#endif  // HYPERALG_SOLVER_HPP
