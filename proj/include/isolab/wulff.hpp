#pragma once

#include <cmath>

#include "isolab/cayley.hpp"
#include "isolab/exactlp.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Zonotope anisotropies, continuum Wulff bodies and constants, discrete Wulff
// samplers, and convergence of the normalized perimeter toward the sharp
// constant.  All polytope arithmetic is exact-rational.
// ---------------------------------------------------------------------------

struct Anisotropy {
  int d = 0;
  std::vector<Vec> reps;     // one integer vector per +- pair
  std::vector<Rat> weights;  // positive rationals per representative

  // split convention: a_s = a_{s^-1} = 1/2, i.e. unit weight per pair
  static Anisotropy axis_split(int d) {
    Anisotropy a;
    a.d = d;
    for (int i = 0; i < d; ++i) {
      a.reps.push_back(unit_vec(d, i));
      a.weights.push_back(1);
    }
    return a;
  }

  // doubled (unit-weight directed) convention used for the Heisenberg base
  static Anisotropy axis_directed_units(int d) {
    Anisotropy a = axis_split(d);
    for (auto& w : a.weights) w = 2;
    return a;
  }

  Rat tau(const Vec& xi) const {
    Rat s = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      Int ip = dot(xi, reps[i]);
      s += weights[i] * Rat(ip < 0 ? -ip : ip);
    }
    return s;
  }

  void validate() const {
    if (reps.empty() || reps.size() != weights.size())
      throw EncodingError("anisotropy: reps/weights mismatch");
    for (auto& w : weights)
      if (w <= 0) throw EncodingError("anisotropy: weights must be positive");
    // S_+ must span R^d: rank check by fraction-free elimination
    std::vector<std::vector<Rat>> M;
    for (auto& v : reps) {
      std::vector<Rat> row;
      for (Int x : v) row.push_back(Rat(x));
      M.push_back(row);
    }
    int rank = 0;
    for (int col = 0; col < d && rank < static_cast<int>(M.size()); ++col) {
      int p = -1;
      for (int r = rank; r < static_cast<int>(M.size()); ++r)
        if (M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
          p = r;
          break;
        }
      if (p < 0) continue;
      std::swap(M[static_cast<std::size_t>(rank)], M[static_cast<std::size_t>(p)]);
      for (int r = 0; r < static_cast<int>(M.size()); ++r) {
        if (r == rank) continue;
        auto& Rr = M[static_cast<std::size_t>(r)];
        auto& Rp = M[static_cast<std::size_t>(rank)];
        if (Rr[static_cast<std::size_t>(col)] == 0) continue;
        Rat f = Rr[static_cast<std::size_t>(col)] / Rp[static_cast<std::size_t>(col)];
        for (int cc = 0; cc < d; ++cc)
          Rr[static_cast<std::size_t>(cc)] -= f * Rp[static_cast<std::size_t>(cc)];
      }
      ++rank;
    }
    if (rank < d) throw EncodingError("anisotropy: representatives do not span R^d");
  }
};

namespace detail {

inline Vec primitive_signed(Vec v) {
  Int g = 0;
  for (Int x : v) g = std::gcd(g, x < 0 ? -x : x);
  if (g > 1)
    for (auto& x : v) x /= g;
  for (Int x : v) {
    if (x > 0) break;
    if (x < 0) {
      for (auto& y : v) y = -y;
      break;
    }
  }
  return v;
}

inline Rat det2(const Vec& a, const Vec& b) { return Rat(a[0] * b[1] - a[1] * b[0]); }

}  // namespace detail

// volume of K = sum_v w_v [-v, v]: sum over d-subsets of |det| of the
// segment vectors 2 w_v v
inline Rat zonotope_volume(const Anisotropy& a) {
  a.validate();
  int d = a.d;
  std::size_t M = a.reps.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  Rat vol = 0;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == idx.size()) {
      // det of the chosen integer vectors, scaled by prod(2 w)
      std::vector<std::vector<Rat>> m(static_cast<std::size_t>(d), std::vector<Rat>(static_cast<std::size_t>(d)));
      Rat scale = 1;
      for (int i = 0; i < d; ++i) {
        scale *= 2 * a.weights[idx[static_cast<std::size_t>(i)]];
        for (int j = 0; j < d; ++j)
          m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              Rat(a.reps[idx[static_cast<std::size_t>(i)]][static_cast<std::size_t>(j)]);
      }
      // fraction-free 3x3/2x2/1x1 determinant
      Rat det = 0;
      if (d == 1)
        det = m[0][0];
      else if (d == 2)
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
      else if (d == 3)
        det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
              m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
              m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
      else {
        // general d: expansion by Gaussian elimination over rationals
        Rat sign = 1;
        det = 1;
        for (int c = 0; c < d; ++c) {
          int p = -1;
          for (int r = c; r < d; ++r)
            if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) {
              p = r;
              break;
            }
          if (p < 0) {
            det = 0;
            break;
          }
          if (p != c) {
            std::swap(m[static_cast<std::size_t>(p)], m[static_cast<std::size_t>(c)]);
            sign = -sign;
          }
          det *= m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
          for (int r = c + 1; r < d; ++r) {
            Rat f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] /
                    m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
            for (int cc = c; cc < d; ++cc)
              m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
                  f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
          }
        }
        det *= sign;
      }
      if (det < 0) det = -det;
      vol += scale * det;
      return;
    }
    for (std::size_t i = start; i + (idx.size() - pos) <= M; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return vol;
}

// Wulff body W = K (the zonotope itself: tau = h_K, so the tau-unit Wulff
// shape is K).  Facet normals + exact offsets give membership tests; a vertex
// list is produced for d <= 3.
struct WulffBody {
  int d = 0;
  std::vector<Vec> facet_normals;   // primitive integer normals, one per +- pair
  std::vector<Rat> facet_offsets;   // h_K(n)
  Rat volume = 0;
  std::vector<std::vector<Rat>> vertices;  // d <= 3 only

  // x in rho * K ?
  bool contains(const Vec& x, const Rat& rho) const {
    for (std::size_t f = 0; f < facet_normals.size(); ++f) {
      Int ip = dot(x, facet_normals[f]);
      Rat lhs(ip < 0 ? -ip : ip);
      if (lhs > rho * facet_offsets[f]) return false;
    }
    return true;
  }
};

inline WulffBody wulff_body(const Anisotropy& a) {
  a.validate();
  if (a.d > 3) throw UnsupportedFamilyError("wulff_body: exact polytope arithmetic supports d <= 3");
  WulffBody W;
  W.d = a.d;
  W.volume = zonotope_volume(a);

  // facet normals
  std::set<Vec> normals;
  if (a.d == 1) {
    normals.insert(Vec{1});
  } else if (a.d == 2) {
    for (auto& v : a.reps) normals.insert(detail::primitive_signed(Vec{-v[1], v[0]}));
  } else {
    for (std::size_t i = 0; i < a.reps.size(); ++i)
      for (std::size_t j = i + 1; j < a.reps.size(); ++j) {
        const Vec& u = a.reps[i];
        const Vec& v = a.reps[j];
        Vec n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
        if (n[0] == 0 && n[1] == 0 && n[2] == 0) continue;
        normals.insert(detail::primitive_signed(n));
      }
  }
  for (auto& n : normals) {
    W.facet_normals.push_back(n);
    W.facet_offsets.push_back(a.tau(n));
  }

  // vertex list
  if (a.d == 1) {
    W.vertices = {{-a.tau(Vec{1})}, {a.tau(Vec{1})}};
  } else if (a.d == 2) {
    // zonogon walk: segment vectors 2 w v, oriented into the upper half plane,
    // sorted by angle
    std::vector<std::pair<Vec, Rat>> segs;
    for (std::size_t i = 0; i < a.reps.size(); ++i) {
      Vec v = a.reps[i];
      if (v[1] < 0 || (v[1] == 0 && v[0] < 0)) v = vneg(v);
      segs.push_back({v, a.weights[i]});
    }
    std::sort(segs.begin(), segs.end(), [](const auto& p, const auto& q) {
      // angle order in [0, pi): cross product test
      Int cr = p.first[0] * q.first[1] - p.first[1] * q.first[0];
      if (cr != 0) return cr > 0;
      return p.first < q.first;
    });
    std::vector<Rat> start{0, 0};
    for (auto& [v, w] : segs) {
      start[0] -= w * Rat(v[0]);
      start[1] -= w * Rat(v[1]);
    }
    std::vector<Rat> cur = start;
    W.vertices.push_back(cur);
    for (auto& [v, w] : segs) {
      cur[0] += 2 * w * Rat(v[0]);
      cur[1] += 2 * w * Rat(v[1]);
      W.vertices.push_back(cur);
    }
    // mirror side: from -V_0 back around to V_0
    std::size_t upper = W.vertices.size();
    for (std::size_t k = 1; k + 1 < upper; ++k)
      W.vertices.push_back({-W.vertices[k][0], -W.vertices[k][1]});
  } else {
    // d = 3: sign vectors with nonempty open normal cone (exact LP test)
    std::size_t M = a.reps.size();
    if (M <= 12) {
      for (std::uint64_t mask = 0; mask < (1ull << M); ++mask) {
        // feasibility of <n, sigma_i v_i> >= 1 for all i; n free -> n = p - q
        std::vector<std::vector<Rat>> A;
        std::vector<Rat> b;
        for (std::size_t i = 0; i < M; ++i) {
          Vec v = a.reps[i];
          if (mask & (1ull << i)) v = vneg(v);
          std::vector<Rat> row(3 + 3 + M, 0);
          for (int k = 0; k < 3; ++k) {
            row[static_cast<std::size_t>(k)] = Rat(v[static_cast<std::size_t>(k)]);
            row[static_cast<std::size_t>(3 + k)] = Rat(-v[static_cast<std::size_t>(k)]);
          }
          row[6 + i] = -1;  // surplus
          A.push_back(row);
          b.push_back(1);
        }
        if (!ExactSimplex::feasible(A, b)) continue;
        std::vector<Rat> vert(3, 0);
        for (std::size_t i = 0; i < M; ++i) {
          Rat sg = (mask & (1ull << i)) ? -1 : 1;
          for (int k = 0; k < 3; ++k)
            vert[static_cast<std::size_t>(k)] += sg * a.weights[i] * Rat(a.reps[i][static_cast<std::size_t>(k)]);
        }
        W.vertices.push_back(vert);
      }
    }
  }
  return W;
}

// c_W = Per_tau(W) / |W|^{(d-1)/d}; for the Wulff body Per_tau(W) = d |W|,
// so c_W = d |W|^{1/d}
inline double continuum_constant(const Anisotropy& a) {
  if (a.d < 1) throw UnsupportedFamilyError("continuum_constant: bad dimension");
  Rat vol = zonotope_volume(a);
  return a.d * std::pow(rat_to_double(vol), 1.0 / a.d);
}

// ---------------------------------------------------------------------------
// Samplers Y_rho = rho W cap Z^d and ratio scans
// ---------------------------------------------------------------------------

inline std::vector<Vec> sampler_points(const Anisotropy& a, const Rat& rho,
                                       std::size_t budget = 30'000'000) {
  WulffBody W = wulff_body(a);
  // bounding box: |x_i| <= rho h_K(e_i)
  std::vector<Int> half(static_cast<std::size_t>(a.d));
  double count_estimate = 1;
  for (int i = 0; i < a.d; ++i) {
    Rat b = rho * a.tau(unit_vec(a.d, i));
    half[static_cast<std::size_t>(i)] = static_cast<Int>(std::floor(rat_to_double(b)));
    count_estimate *= 2.0 * static_cast<double>(half[static_cast<std::size_t>(i)]) + 1.0;
  }
  if (count_estimate > static_cast<double>(budget))
    throw ResourceError("sampler: enumeration budget exceeded");
  std::vector<Vec> pts;
  Vec x(static_cast<std::size_t>(a.d));
  std::function<void(int)> rec = [&](int axis) {
    if (axis == a.d) {
      if (W.contains(x, rho)) pts.push_back(x);
      return;
    }
    for (Int v = -half[static_cast<std::size_t>(axis)]; v <= half[static_cast<std::size_t>(axis)]; ++v) {
      x[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1);
    }
  };
  rec(0);
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline VertexSet sampler(const Anisotropy& a, const Rat& rho, const GroupGraph& graph,
                         std::size_t budget = 30'000'000) {
  std::vector<Vertex> vs;
  for (auto& p : sampler_points(a, rho, budget)) vs.push_back(Vertex{p});
  return VertexSet(&graph, std::move(vs));
}

// weighted directed perimeter sum_v w_v (D_v + D_{-v}) over the stencil of
// the anisotropy; unit weights give Per_{S,1}
inline Rat discrete_perimeter(const std::vector<Vec>& pts, const Anisotropy& a) {
  std::unordered_set<Vec, VecHash> in(pts.begin(), pts.end());
  Rat per = 0;
  for (std::size_t i = 0; i < a.reps.size(); ++i) {
    Int broken = 0;
    const Vec& v = a.reps[i];
    for (auto& p : pts) {
      if (!in.count(vadd(p, v))) ++broken;
      if (!in.count(vsub(p, v))) ++broken;
    }
    per += a.weights[i] * Rat(broken);
  }
  return per;
}

struct WulffRatioRow {
  double rho = 0;
  Int size = 0;
  double perimeter = 0;
  double ratio = 0;  // Per / |Y|^{(d-1)/d}
};

inline std::vector<WulffRatioRow> wulff_ratio_scan(const Anisotropy& a, const std::vector<Rat>& rhos,
                                                   std::size_t budget = 30'000'000) {
  std::vector<WulffRatioRow> rows(rhos.size());
  parallel_for(rhos.size(), [&](std::size_t i) {
    auto pts = sampler_points(a, rhos[i], budget);
    Rat per = discrete_perimeter(pts, a);
    WulffRatioRow row;
    row.rho = rat_to_double(rhos[i]);
    row.size = static_cast<Int>(pts.size());
    row.perimeter = rat_to_double(per);
    double expo = static_cast<double>(a.d - 1) / a.d;
    row.ratio = row.perimeter / std::pow(static_cast<double>(row.size), expo);
    rows[i] = row;
  });
  return rows;
}

// fiber-saturated lifts pi^{-1}(E_rho) in Z^d x Z_m: horizontal edges
// replicate m-fold, vertical edges vanish; ratio tends to 2 d m^{1/d}
struct FiberRatioRow {
  double rho = 0;
  Int base_size = 0;
  Int lift_size = 0;
  Int lift_boundary = 0;
  double ratio = 0;
};

inline std::vector<FiberRatioRow> fiber_lift_ratio(int d, int m, const std::vector<Rat>& rhos,
                                                   std::size_t budget = 30'000'000) {
  if (m < 1) throw EncodingError("fiber_lift_ratio: m must be >= 1");
  Anisotropy ax = Anisotropy::axis_split(d);
  std::vector<FiberRatioRow> rows(rhos.size());
  parallel_for(rhos.size(), [&](std::size_t i) {
    auto pts = sampler_points(ax, rhos[i], budget);
    Rat per = discrete_perimeter(pts, ax);
    FiberRatioRow row;
    row.rho = rat_to_double(rhos[i]);
    row.base_size = static_cast<Int>(pts.size());
    row.lift_size = row.base_size * m;
    row.lift_boundary = static_cast<Int>(per.get_num().get_si()) * m;  // horizontal only
    double expo = static_cast<double>(d - 1) / d;
    row.ratio = static_cast<double>(row.lift_boundary) /
                std::pow(static_cast<double>(row.lift_size), expo);
    rows[i] = row;
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Supporting combinatorial bounds (used by tests and the acceptance suite)
// ---------------------------------------------------------------------------

// sizes of the (d-1)-dimensional coordinate projections
inline std::vector<Int> projection_sizes(const std::vector<Vec>& pts, int d) {
  std::vector<Int> sizes(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    std::unordered_set<Vec, VecHash> proj;
    for (auto& p : pts) {
      Vec q;
      q.reserve(p.size() - 1);
      for (int j = 0; j < d; ++j)
        if (j != i) q.push_back(p[static_cast<std::size_t>(j)]);
      proj.insert(q);
    }
    sizes[static_cast<std::size_t>(i)] = static_cast<Int>(proj.size());
  }
  return sizes;
}

// Per_{S,1}(Y) with the unimodular stencil {+-b_i} equals the axis perimeter
// of B^{-1} Y
inline Int directed_perimeter_stencil(const std::vector<Vec>& pts, const std::vector<Vec>& stencil_plus) {
  std::unordered_set<Vec, VecHash> in(pts.begin(), pts.end());
  Int per = 0;
  for (auto& v : stencil_plus)
    for (auto& p : pts) {
      if (!in.count(vadd(p, v))) ++per;
      if (!in.count(vsub(p, v))) ++per;
    }
  return per;
}

}  // namespace isolab
