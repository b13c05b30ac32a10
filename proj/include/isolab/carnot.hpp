#pragma once

#include <map>

#include "isolab/cayley.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Heisenberg / step-2 gauge calculus on column stacks: exact horizontal
// perimeter decomposition, two-sided bounds, coarea, tapered profiles, and
// the blockwise cap-loss experiment.  Boundary counts in this module are
// UNDIRECTED (each broken horizontal edge once); the directed versions are
// twice these.
// ---------------------------------------------------------------------------

// Heisenberg gauge h = z - x y and its inverse
inline Vec heis_gauge(const Vec& xyz) { return Vec{xyz[0], xyz[1], xyz[2] - xyz[0] * xyz[1]}; }
inline Vec heis_ungauge(const Vec& xyh) { return Vec{xyh[0], xyh[1], xyh[2] + xyh[0] * xyh[1]}; }

// #([0,alpha) triangle [t, t+beta)) = delta + 2 min{d(t), m}
inline Int interval_sd(Int alpha, Int beta, Int t) {
  if (alpha < 0 || beta < 0) throw EncodingError("interval_sd: lengths must be nonnegative");
  Int m = std::min(alpha, beta);
  Int delta = alpha > beta ? alpha - beta : beta - alpha;
  auto pos = [](Int v) { return v > 0 ? v : 0; };
  Int dt = pos(t - pos(alpha - beta)) + pos(-t - pos(beta - alpha));
  return delta + 2 * std::min(dt, m);
}

// brute-force oracle for the same count
inline Int interval_sd_enum(Int alpha, Int beta, Int t) {
  Int count = 0;
  Int lo = std::min<Int>(0, t), hi = std::max(alpha, t + beta);
  for (Int x = lo; x < hi; ++x) {
    bool in_i = (x >= 0 && x < alpha);
    bool in_j = (x >= t && x < t + beta);
    if (in_i != in_j) ++count;
  }
  return count;
}

// per-edge two-sided bounds: 2 min{|t|, A} - delta <= #sd <= delta + 2 min{|t|, A}
inline bool per_edge_bounds_check(Int alpha, Int beta, Int t) {
  Int A = std::max(alpha, beta);
  Int delta = alpha > beta ? alpha - beta : beta - alpha;
  Int val = interval_sd(alpha, beta, t);
  Int cap = 2 * std::min(t < 0 ? -t : t, A);
  return (cap - delta <= val) && (val <= delta + cap) && (val == interval_sd_enum(alpha, beta, t));
}

// ---------------------------------------------------------------------------
// Column stacks
// ---------------------------------------------------------------------------

struct ColumnStack {
  int d = 2;  // base dimension
  int m = 1;  // center rank
  // footprint u -> (offsets h(u) in Z^m, heights l(u) in N^m); nondegenerate
  // mode requires l_j >= 1 on the footprint
  std::map<Vec, std::pair<Vec, Vec>> columns;

  const std::pair<Vec, Vec>& at(const Vec& u) const { return columns.at(u); }
  bool in_footprint(const Vec& u) const { return columns.count(u) != 0; }

  void validate() const {
    for (auto& [u, hl] : columns) {
      if (static_cast<int>(u.size()) != d) throw EncodingError("column stack: bad footprint point");
      if (static_cast<int>(hl.first.size()) != m || static_cast<int>(hl.second.size()) != m)
        throw EncodingError("column stack: bad column data");
      for (Int len : hl.second)
        if (len < 1) throw EncodingError("column stack: degenerate column in nondegenerate mode");
    }
  }

  Int volume() const {
    Int v = 0;
    for (auto& [u, hl] : columns) {
      Int prod = 1;
      for (Int len : hl.second) prod *= len;
      v += prod;
    }
    return v;
  }
};

// alignment shifts sigma_{e_k}(x) = - sum_{j>k} x_j omega(e_k, e_j)  (step-2
// normalized gauge); the Heisenberg specialization with omega(e1,e2) = 1 is
// sigma_{e_1}(x) = -y, sigma_{e_2} = 0, matching h' = h + sigma under right
// multiplication.
inline Vec step2_shift(const Cocycle& omega, int k, const Vec& x) {
  Vec s(static_cast<std::size_t>(omega.m), 0);
  for (int j = k + 1; j < omega.d; ++j)
    for (int c = 0; c < omega.m; ++c)
      s[static_cast<std::size_t>(c)] -= x[static_cast<std::size_t>(j)] * omega.entry[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
  return s;
}

inline Cocycle heisenberg_cocycle() {
  Cocycle w = Cocycle::zero(2, 1);
  w.set(0, 1, Vec{1});
  return w;
}

// ---------------------------------------------------------------------------
// Exact Heisenberg decomposition (m = 1)
// ---------------------------------------------------------------------------

struct HeisDecomposition {
  Int boundary_term = 0;  // sum over broken base edges of alpha(e)
  Int delta_term = 0;     // sum over internal edges of |delta(e)|
  Int shear_term = 0;     // sum over internal edges of 2 min{d(t(e)), m(e)}
  Int total = 0;
};

// t(e) = h(u+v) - h(u) + sigma_v(u) with sigma_{e_1}(x, y) = y, sigma_{e_2} = 0
inline Int heis_edge_shift(const Vec& u, int axis, const std::pair<Vec, Vec>& cu,
                           const std::pair<Vec, Vec>& cv) {
  Int sigma = (axis == 0) ? u[1] : 0;
  return cv.first[0] - cu.first[0] + sigma;
}

inline HeisDecomposition heis_decompose(const ColumnStack& S) {
  if (S.d != 2 || S.m != 1) throw EncodingError("heis_decompose: expected d = 2, m = 1");
  S.validate();
  HeisDecomposition out;
  for (auto& [u, hl] : S.columns) {
    Int alpha = hl.second[0];
    // boundary base edges: all four directions leaving the footprint
    for (int axis = 0; axis < 2; ++axis)
      for (Int sg : {Int(1), Int(-1)}) {
        Vec w = u;
        w[static_cast<std::size_t>(axis)] += sg;
        if (!S.in_footprint(w)) out.boundary_term += alpha;
      }
    // internal edges, oriented along +e_1, +e_2 (each undirected edge once)
    for (int axis = 0; axis < 2; ++axis) {
      Vec w = u;
      w[static_cast<std::size_t>(axis)] += 1;
      if (!S.in_footprint(w)) continue;
      auto& hlv = S.at(w);
      Int beta = hlv.second[0];
      Int t = heis_edge_shift(u, axis, hl, hlv);
      Int sd = interval_sd(alpha, beta, t);
      Int delta = alpha > beta ? alpha - beta : beta - alpha;
      out.delta_term += delta;
      out.shear_term += sd - delta;
    }
  }
  out.total = out.boundary_term + out.delta_term + out.shear_term;
  return out;
}

// independent ground truth: enumerate the actual 3D vertex set and count the
// broken undirected horizontal Cayley edges from the group law
inline Int heis_lift_boundary(const ColumnStack& S, std::size_t budget = 2'000'000) {
  if (S.d != 2 || S.m != 1) throw EncodingError("heis_lift_boundary: expected d = 2, m = 1");
  GroupGraph heis = GroupGraph::heisenberg();
  std::unordered_set<Vec, VecHash> lift;
  for (auto& [u, hl] : S.columns) {
    for (Int hh = hl.first[0]; hh < hl.first[0] + hl.second[0]; ++hh) {
      lift.insert(heis_ungauge(Vec{u[0], u[1], hh}));
      if (lift.size() > budget) throw ResourceError("heis_lift_boundary: budget exceeded");
    }
  }
  Int broken = 0;
  for (auto& g : lift)
    for (int gi = 0; gi < 4; ++gi) {
      Vec n = heis.apply(Vertex{g}, gi, Action::Right).w;
      if (!lift.count(n)) ++broken;
    }
  return broken;  // each broken undirected edge counted once, from inside
}

// ---------------------------------------------------------------------------
// Step-2 general rank: exact identity for m = 1, sandwich bounds for m >= 1
// ---------------------------------------------------------------------------

struct Step2Bounds {
  Int lower = 0;
  Int upper = 0;
  Int direct = 0;
};

inline Step2Bounds step2_bounds(const ColumnStack& S, const Cocycle& omega,
                                std::size_t budget = 1'000'000) {
  if (S.d != omega.d || S.m != omega.m) throw EncodingError("step2_bounds: dimension mismatch");
  S.validate();
  Step2Bounds out;

  auto pos = [](Int v) { return v > 0 ? v : 0; };
  Int boundary = 0, low_int = 0, up_int = 0;
  for (auto& [u, hl] : S.columns) {
    Int vol = 1;
    for (Int len : hl.second) vol *= len;
    for (int axis = 0; axis < S.d; ++axis)
      for (Int sg : {Int(1), Int(-1)}) {
        Vec w = u;
        w[static_cast<std::size_t>(axis)] += sg;
        if (!S.in_footprint(w)) boundary += vol;
      }
    for (int axis = 0; axis < S.d; ++axis) {
      Vec w = u;
      w[static_cast<std::size_t>(axis)] += 1;
      if (!S.in_footprint(w)) continue;
      auto& hlv = S.at(w);
      // tau(e) = h(u) - h(u+v) + sigma_v(u)
      Vec sigma = step2_shift(omega, axis, u);
      Vec tau(static_cast<std::size_t>(S.m));
      for (int j = 0; j < S.m; ++j)
        tau[static_cast<std::size_t>(j)] = hl.first[static_cast<std::size_t>(j)] -
                                           hlv.first[static_cast<std::size_t>(j)] +
                                           sigma[static_cast<std::size_t>(j)];
      for (int j = 0; j < S.m; ++j) {
        Int a = hl.second[static_cast<std::size_t>(j)], b = hlv.second[static_cast<std::size_t>(j)];
        Int delta = a - b;
        Int dpos = pos(delta), dneg = pos(-delta);
        Int tj = tau[static_cast<std::size_t>(j)];
        Int sj = 2 * std::min(std::min(a, b), pos(tj - dneg) + pos(-tj - dpos));
        Int contrib_1d = (delta < 0 ? -delta : delta) + sj;
        Int a_max = 1, a_cap = 1;
        for (int k = 0; k < S.m; ++k) {
          if (k == j) continue;
          Int ak = hl.second[static_cast<std::size_t>(k)], bk = hlv.second[static_cast<std::size_t>(k)];
          Int tk = tau[static_cast<std::size_t>(k)];
          a_max *= std::max(ak, bk);
          // #([0,a) cap ([0,b) - t)) = (min(a, b - t) - max(0, -t))_+
          Int inter = pos(std::min(ak, bk - tk) - pos(-tk));
          a_cap *= inter;
        }
        low_int += contrib_1d * a_cap;
        up_int += contrib_1d * a_max;
      }
    }
  }
  out.lower = boundary + low_int;
  out.upper = boundary + up_int;

  // direct lift enumeration in original coordinates (x, h = h_sharp + zeta(x))
  GroupGraph g = GroupGraph::step2(omega);
  std::unordered_set<Vec, VecHash> lift;
  for (auto& [u, hl] : S.columns) {
    Vec zeta = omega.gauge(u);
    std::function<void(int, Vec&)> rec = [&](int j, Vec& sharp) {
      if (j == S.m) {
        Vec pt(u.begin(), u.end());
        for (int k = 0; k < S.m; ++k)
          pt.push_back(sharp[static_cast<std::size_t>(k)] + zeta[static_cast<std::size_t>(k)]);
        lift.insert(pt);
        if (lift.size() > budget) throw ResourceError("step2_bounds: lift budget exceeded");
        return;
      }
      for (Int hh = hl.first[static_cast<std::size_t>(j)];
           hh < hl.first[static_cast<std::size_t>(j)] + hl.second[static_cast<std::size_t>(j)]; ++hh) {
        sharp[static_cast<std::size_t>(j)] = hh;
        rec(j + 1, sharp);
      }
    };
    Vec sharp(static_cast<std::size_t>(S.m));
    rec(0, sharp);
  }
  Int broken = 0;
  for (auto& pt : lift)
    for (int gi = 0; gi < 2 * S.d; ++gi) {
      Vec n = g.apply(Vertex{pt}, gi, Action::Right).w;
      if (!lift.count(n)) ++broken;
    }
  out.direct = broken;
  return out;
}

// symbolic verification of the constant face curl (dc)_{ik} = omega(e_i,e_k)
// - omega(e_k,e_i) for the shear cochain c_{e_k} = -sigma_{e_k}
inline bool constant_face_curl_check(const Cocycle& omega, Rng& rng, int trials = 20) {
  for (int trial = 0; trial < trials; ++trial) {
    Vec x(static_cast<std::size_t>(omega.d));
    for (auto& c : x) c = rng.uniform_int(-8, 8);
    for (int i = 0; i < omega.d; ++i)
      for (int k = i + 1; k < omega.d; ++k) {
        Vec xe_k = x, xe_i = x;
        ++xe_k[static_cast<std::size_t>(k)];
        ++xe_i[static_cast<std::size_t>(i)];
        // (dc)_{ik} = Delta_{e_k} c_{e_i} - Delta_{e_i} c_{e_k}
        Vec ci0 = step2_shift(omega, i, x), ci1 = step2_shift(omega, i, xe_k);
        Vec ck0 = step2_shift(omega, k, x), ck1 = step2_shift(omega, k, xe_i);
        for (int c = 0; c < omega.m; ++c) {
          Int lhs = -(ci1[static_cast<std::size_t>(c)] - ci0[static_cast<std::size_t>(c)]) +
                    (ck1[static_cast<std::size_t>(c)] - ck0[static_cast<std::size_t>(c)]);
          Int rhs = omega.entry[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] -
                    omega.entry[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
          if (lhs != rhs) return false;
        }
      }
  }
  return true;
}

// vertical (central) edge boundary of an m=1 stack equals 2 #{nonempty columns}
inline bool vertical_count_check(const ColumnStack& S) {
  if (S.m != 1) throw EncodingError("vertical_count_check: m must be 1");
  Int direct = 0;
  for (auto& [u, hl] : S.columns) {
    // contiguous column: exactly one top and one bottom central edge broken
    (void)u;
    if (hl.second[0] >= 1) direct += 2;
  }
  Int formula = 2 * static_cast<Int>(S.columns.size());
  return direct == formula;
}

// ---------------------------------------------------------------------------
// Discrete coarea on the base grid
// ---------------------------------------------------------------------------

// undirected grid perimeter of E in Z^d (axis representatives, each
// undirected edge once)
inline Int grid_perimeter(const std::unordered_set<Vec, VecHash>& E, int d) {
  Int per = 0;
  for (auto& u : E)
    for (int i = 0; i < d; ++i) {
      Vec w = u;
      ++w[static_cast<std::size_t>(i)];
      if (!E.count(w)) ++per;
      w[static_cast<std::size_t>(i)] -= 2;
      if (!E.count(w)) ++per;
    }
  return per;
}

// sum_v sum_u |Delta_v l(u)| = sum_{k >= 1} Per_grid({l >= k}), both exact
struct CoareaReport {
  Int lhs = 0;
  Int rhs = 0;
  bool equal = false;
};

inline CoareaReport coarea_check(const std::map<Vec, Int>& heights, int d) {
  CoareaReport rep;
  Int max_h = 0;
  for (auto& [u, l] : heights) {
    if (l < 0) throw EncodingError("coarea_check: heights must be nonnegative");
    max_h = std::max(max_h, l);
  }
  auto height = [&](const Vec& u) -> Int {
    auto it = heights.find(u);
    return it == heights.end() ? 0 : it->second;
  };
  // LHS: one representative per undirected edge, over edges touching support
  std::set<std::pair<Vec, int>> seen_edges;
  for (auto& [u, l] : heights) {
    (void)l;
    for (int i = 0; i < d; ++i) {
      Vec w = u;
      ++w[static_cast<std::size_t>(i)];
      seen_edges.insert({u, i});
      Vec back = u;
      --back[static_cast<std::size_t>(i)];
      seen_edges.insert({back, i});
    }
  }
  for (auto& [u, axis] : seen_edges) {
    Vec w = u;
    ++w[static_cast<std::size_t>(axis)];
    Int dlt = height(w) - height(u);
    rep.lhs += dlt < 0 ? -dlt : dlt;
  }
  // RHS: integer level sets
  for (Int k = 1; k <= max_h; ++k) {
    std::unordered_set<Vec, VecHash> level;
    for (auto& [u, l] : heights)
      if (l >= k) level.insert(u);
    rep.rhs += grid_perimeter(level, d);
  }
  rep.equal = (rep.lhs == rep.rhs);
  return rep;
}

// ---------------------------------------------------------------------------
// Tapered profiles over cube samplers and the blockwise cap-loss experiment
// ---------------------------------------------------------------------------

// discrete l^infty distance to the complement, by iterated erosion
inline std::map<Vec, Int> linf_erosion_depth(const std::unordered_set<Vec, VecHash>& E, int d) {
  std::map<Vec, Int> depth;
  std::unordered_set<Vec, VecHash> cur = E;
  Int level = 0;
  for (auto& u : E) depth[u] = 0;
  while (!cur.empty()) {
    ++level;
    std::unordered_set<Vec, VecHash> next;
    for (auto& u : cur) {
      bool interior = true;
      // unit l^infty ball neighbors
      std::function<void(int, Vec&)> rec = [&](int axis, Vec& w) {
        if (!interior) return;
        if (axis == d) {
          if (!cur.count(w)) interior = false;
          return;
        }
        for (Int s = -1; s <= 1 && interior; ++s) {
          w[static_cast<std::size_t>(axis)] += s;
          rec(axis + 1, w);
          w[static_cast<std::size_t>(axis)] -= s;
        }
      };
      Vec w = u;
      rec(0, w);
      if (interior) next.insert(u);
    }
    for (auto& u : next) depth[u] = level;
    cur = std::move(next);
    if (level > 100000) throw ResourceError("linf_erosion_depth: runaway erosion");
  }
  return depth;
}

// tapered Wulff stack over E_rho = [-rho, rho]^2: l(u) = min(H, slope * (1 +
// dist_infty(u, boundary))) with H = rho^2, slope = rho
inline ColumnStack tapered_stack(Int rho) {
  ColumnStack S;
  S.d = 2;
  S.m = 1;
  std::unordered_set<Vec, VecHash> E;
  for (Int x = -rho; x <= rho; ++x)
    for (Int y = -rho; y <= rho; ++y) E.insert(Vec{x, y});
  auto depth = linf_erosion_depth(E, 2);
  Int H = rho * rho;
  for (auto& [u, dep] : depth) {
    Int l = std::min<Int>(H, rho * (dep + 1));
    S.columns[u] = {Vec{0}, Vec{l}};
  }
  return S;
}

struct CapLossRow {
  Int rho = 0;
  Int block = 0;       // L
  Int caploss = 0;     // sum (|t(e)| - A(e))_+
  Int surrogate = 0;   // sum |c(e) + (dh)(e)|
  double normalized = 0;  // caploss / rho^3
};

// shear 1-cochain value on the oriented base edge (u -> u + e_axis)
inline Int shear_cochain(const Vec& u, int axis) { return axis == 0 ? u[1] : 0; }

// Blockwise offsets against the shear: the footprint is tiled into height-L
// slabs, each fitted with its own anchored H1 cone (integrating -c so that
// t = c + dh is the cone residual), and consecutive slabs are synchronized
// across their interface by a rounded median.  Constant-per-slab shifts keep
// every in-slab residual below the taper heights; the interface residuals
// are the L * ~x terms the cap absorbs away from the outermost layers.
inline std::map<Vec, Int> blockwise_offsets(const std::unordered_set<Vec, VecHash>& E, Int L) {
  if (L < 1) throw EncodingError("blockwise_offsets: block size must be >= 1");
  if (E.empty()) return {};
  auto slab_of = [&](Int y) { return y >= 0 ? y / L : -((-y - 1) / L + 1); };
  Int x0 = std::numeric_limits<Int>::max();
  for (auto& u : E) x0 = std::min(x0, u[0]);

  std::map<Int, std::vector<Vec>> slabs;
  for (auto& u : E) slabs[slab_of(u[1])].push_back(u);

  std::map<Vec, Int> h;
  for (auto& [q, cells] : slabs) {
    Int ybase = q * L;
    // anchored cone on the slab: integrate -c along the lexicographic path
    // from (x0, ybase)
    std::map<Vec, Int> hq;
    for (auto& u : cells) {
      Int acc = 0;
      for (Int t = x0; t < u[0]; ++t) acc += shear_cochain(Vec{t, ybase}, 0);
      for (Int t = ybase; t < u[1]; ++t) acc += shear_cochain(Vec{u[0], t}, 1);
      hq[u] = -acc;
    }
    // median synchronization with the slab below across the interface
    // (vertical edges w -> u, c_2 = 0): want h(w) - (hq[u] + lambda) ~ 0
    std::vector<Int> samples;
    for (auto& u : cells) {
      if (u[1] != ybase) continue;
      Vec w{u[0], u[1] - 1};
      auto it = h.find(w);
      if (it == h.end()) continue;
      samples.push_back(it->second - hq[u]);
    }
    Int lambda = 0;
    if (!samples.empty()) {
      std::sort(samples.begin(), samples.end());
      lambda = samples[samples.size() / 2];  // rounded median (integer data)
    }
    for (auto& u : cells) h[u] = hq[u] + lambda;
  }
  return h;
}

inline std::vector<CapLossRow> caploss_experiment(const std::vector<Int>& rho_list,
                                                  std::function<Int(Int)> block_rule = nullptr) {
  if (!block_rule) block_rule = [](Int rho) { return static_cast<Int>(std::floor(std::sqrt(static_cast<double>(rho)))); };
  std::vector<CapLossRow> rows;
  for (Int rho : rho_list) {
    ColumnStack S = tapered_stack(rho);
    std::unordered_set<Vec, VecHash> E;
    for (auto& [u, hl] : S.columns) E.insert(u);
    Int L = block_rule(rho);
    auto h = blockwise_offsets(E, L);
    CapLossRow row;
    row.rho = rho;
    row.block = L;
    for (auto& [u, hl] : S.columns) {
      for (int axis = 0; axis < 2; ++axis) {
        Vec w = u;
        ++w[static_cast<std::size_t>(axis)];
        if (!E.count(w)) continue;
        Int t = shear_cochain(u, axis) + h.at(w) - h.at(u);
        Int A = std::max(S.at(u).second[0], S.at(w).second[0]);
        Int abs_t = t < 0 ? -t : t;
        row.surrogate += abs_t;
        row.caploss += std::max<Int>(0, abs_t - A);
      }
    }
    row.normalized = static_cast<double>(row.caploss) /
                     (static_cast<double>(rho) * static_cast<double>(rho) * static_cast<double>(rho));
    rows.push_back(row);
  }
  return rows;
}

// median-variation on a cycle: sum |a_i - median| <= sum |a_{i+1} - a_i|
inline bool cycle_median_check(const std::vector<Int>& a) {
  if (a.empty()) return true;
  std::vector<Int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  Int med = sorted[sorted.size() / 2];
  Int lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lhs += std::abs(a[i] - med);
    rhs += std::abs(a[(i + 1) % a.size()] - a[i]);
  }
  return lhs <= rhs;
}

}  // namespace isolab
