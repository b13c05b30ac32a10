#pragma once

#include <cmath>

#include "isolab/wulff.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Quantitative Gamma-convergence harness: discrete grid TV energies at mesh
// h = 1/k against the continuum anisotropic perimeter.  Cell x <-> half-open
// cube (x + [0,1)^d) / k, so all sampler arithmetic is exact in integers.
// ---------------------------------------------------------------------------

enum class SampleMode { In, Out };

struct GridSet {
  Int k = 1;  // mesh h = 1/k
  int d = 2;
  std::vector<Vec> cells;  // sorted lattice indices

  double h() const { return 1.0 / static_cast<double>(k); }
  bool contains(const Vec& x) const { return std::binary_search(cells.begin(), cells.end(), x); }
};

struct ContinuumSet {
  enum class Kind { AxisBox, Disk, Ellipse, ConvexPolygon };
  Kind kind = Kind::AxisBox;
  int d = 2;

  // AxisBox: half-open [lo, hi)
  std::vector<Rat> lo, hi;
  // Disk (d = 2) / ball (d = 3) and Ellipse (d = 2)
  std::vector<double> center;
  double radius = 0;
  double semi_a = 0, semi_b = 0;
  // ConvexPolygon, counterclockwise
  std::vector<std::array<Rat, 2>> poly;

  static ContinuumSet box(std::vector<Rat> lo, std::vector<Rat> hi) {
    ContinuumSet e;
    e.kind = Kind::AxisBox;
    e.d = static_cast<int>(lo.size());
    e.lo = std::move(lo);
    e.hi = std::move(hi);
    return e;
  }
  static ContinuumSet disk(std::vector<double> center, double radius) {
    ContinuumSet e;
    e.kind = Kind::Disk;
    e.d = static_cast<int>(center.size());
    e.center = std::move(center);
    e.radius = radius;
    return e;
  }
  static ContinuumSet ellipse(std::vector<double> center, double a, double b) {
    ContinuumSet e;
    e.kind = Kind::Ellipse;
    e.d = 2;
    e.center = std::move(center);
    e.semi_a = a;
    e.semi_b = b;
    return e;
  }
  static ContinuumSet polygon(std::vector<std::array<Rat, 2>> verts) {
    ContinuumSet e;
    e.kind = Kind::ConvexPolygon;
    e.d = 2;
    e.poly = std::move(verts);
    return e;
  }
};

namespace detail {

inline bool point_in_polygon(const std::vector<std::array<Rat, 2>>& poly, const Rat& x, const Rat& y) {
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    Rat cross = (q[0] - p[0]) * (y - p[1]) - (q[1] - p[1]) * (x - p[0]);
    if (cross < 0) return false;  // CCW polygon, boundary counts as inside
  }
  return true;
}

// separating-axis test: closed axis-aligned cell [cx, cx+1]/k vs convex polygon
inline bool cell_intersects_polygon(const std::vector<std::array<Rat, 2>>& poly, Int k, Int cx, Int cy) {
  Rat x0(cx, k), x1(cx + 1, k), y0(cy, k), y1(cy + 1, k);
  x0.canonicalize(); x1.canonicalize(); y0.canonicalize(); y1.canonicalize();
  // axis-aligned separations
  Rat pminx = poly[0][0], pmaxx = poly[0][0], pminy = poly[0][1], pmaxy = poly[0][1];
  for (auto& p : poly) {
    pminx = std::min(pminx, p[0]);
    pmaxx = std::max(pmaxx, p[0]);
    pminy = std::min(pminy, p[1]);
    pmaxy = std::max(pmaxy, p[1]);
  }
  if (pmaxx < x0 || pminx > x1 || pmaxy < y0 || pminy > y1) return false;
  // polygon edge normals
  std::size_t n = poly.size();
  std::array<std::array<Rat, 2>, 4> corners = {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    Rat nx = -(q[1] - p[1]);
    Rat ny = q[0] - p[0];
    Rat pmin, pmax;
    bool first = true;
    for (auto& v : poly) {
      Rat d = nx * v[0] + ny * v[1];
      if (first) {
        pmin = pmax = d;
        first = false;
      } else {
        pmin = std::min(pmin, d);
        pmax = std::max(pmax, d);
      }
    }
    Rat cmin, cmax;
    first = true;
    for (auto& cpt : corners) {
      Rat d = nx * cpt[0] + ny * cpt[1];
      if (first) {
        cmin = cmax = d;
        first = false;
      } else {
        cmin = std::min(cmin, d);
        cmax = std::max(cmax, d);
      }
    }
    if (cmax < pmin || cmin > pmax) return false;
  }
  return true;
}

}  // namespace detail

// half-open samplers A_h^in(E) = {x : Q_h(x) subset E}, A_h^out = {x : Q_h(x) meets E}
inline GridSet sample(const ContinuumSet& E, Int k, SampleMode mode) {
  GridSet A;
  A.k = k;
  A.d = E.d;
  // integer bounding box of cell indices
  std::vector<Int> blo(static_cast<std::size_t>(E.d)), bhi(static_cast<std::size_t>(E.d));
  auto set_box = [&](int i, double lo, double hi) {
    blo[static_cast<std::size_t>(i)] = static_cast<Int>(std::floor(lo * static_cast<double>(k))) - 2;
    bhi[static_cast<std::size_t>(i)] = static_cast<Int>(std::ceil(hi * static_cast<double>(k))) + 2;
  };
  switch (E.kind) {
    case ContinuumSet::Kind::AxisBox:
      for (int i = 0; i < E.d; ++i)
        set_box(i, rat_to_double(E.lo[static_cast<std::size_t>(i)]),
                rat_to_double(E.hi[static_cast<std::size_t>(i)]));
      break;
    case ContinuumSet::Kind::Disk:
      for (int i = 0; i < E.d; ++i)
        set_box(i, E.center[static_cast<std::size_t>(i)] - E.radius,
                E.center[static_cast<std::size_t>(i)] + E.radius);
      break;
    case ContinuumSet::Kind::Ellipse:
      set_box(0, E.center[0] - E.semi_a, E.center[0] + E.semi_a);
      set_box(1, E.center[1] - E.semi_b, E.center[1] + E.semi_b);
      break;
    case ContinuumSet::Kind::ConvexPolygon: {
      Rat mnx = E.poly[0][0], mxx = E.poly[0][0], mny = E.poly[0][1], mxy = E.poly[0][1];
      for (auto& p : E.poly) {
        mnx = std::min(mnx, p[0]);
        mxx = std::max(mxx, p[0]);
        mny = std::min(mny, p[1]);
        mxy = std::max(mxy, p[1]);
      }
      set_box(0, rat_to_double(mnx), rat_to_double(mxx));
      set_box(1, rat_to_double(mny), rat_to_double(mxy));
      break;
    }
  }

  auto cell_in = [&](const Vec& x) -> bool {
    switch (E.kind) {
      case ContinuumSet::Kind::AxisBox: {
        for (int i = 0; i < E.d; ++i) {
          Rat leftend(x[static_cast<std::size_t>(i)], k);
          Rat rightend(x[static_cast<std::size_t>(i)] + 1, k);
          leftend.canonicalize();
          rightend.canonicalize();
          if (leftend < E.lo[static_cast<std::size_t>(i)] || rightend > E.hi[static_cast<std::size_t>(i)])
            return false;
        }
        return true;
      }
      case ContinuumSet::Kind::Disk: {
        double far2 = 0;
        for (int i = 0; i < E.d; ++i) {
          double a = static_cast<double>(x[static_cast<std::size_t>(i)]) / k - E.center[static_cast<std::size_t>(i)];
          double b = static_cast<double>(x[static_cast<std::size_t>(i)] + 1) / k - E.center[static_cast<std::size_t>(i)];
          double m = std::max(std::abs(a), std::abs(b));
          far2 += m * m;
        }
        return far2 <= E.radius * E.radius;
      }
      case ContinuumSet::Kind::Ellipse: {
        double ax = (static_cast<double>(x[0]) / k - E.center[0]) / E.semi_a;
        double bx = (static_cast<double>(x[0] + 1) / k - E.center[0]) / E.semi_a;
        double ay = (static_cast<double>(x[1]) / k - E.center[1]) / E.semi_b;
        double by = (static_cast<double>(x[1] + 1) / k - E.center[1]) / E.semi_b;
        double mx = std::max(std::abs(ax), std::abs(bx));
        double my = std::max(std::abs(ay), std::abs(by));
        return mx * mx + my * my <= 1.0;
      }
      case ContinuumSet::Kind::ConvexPolygon: {
        for (Int cx : {x[0], x[0] + 1})
          for (Int cy : {x[1], x[1] + 1}) {
            Rat px(cx, k), py(cy, k);
            px.canonicalize();
            py.canonicalize();
            if (!detail::point_in_polygon(E.poly, px, py)) return false;
          }
        return true;
      }
    }
    return false;
  };

  auto cell_out = [&](const Vec& x) -> bool {
    switch (E.kind) {
      case ContinuumSet::Kind::AxisBox: {
        for (int i = 0; i < E.d; ++i) {
          Rat leftend(x[static_cast<std::size_t>(i)], k);
          Rat rightend(x[static_cast<std::size_t>(i)] + 1, k);
          leftend.canonicalize();
          rightend.canonicalize();
          if (rightend <= E.lo[static_cast<std::size_t>(i)] || leftend >= E.hi[static_cast<std::size_t>(i)])
            return false;
        }
        return true;
      }
      case ContinuumSet::Kind::Disk: {
        double near2 = 0;
        for (int i = 0; i < E.d; ++i) {
          double a = static_cast<double>(x[static_cast<std::size_t>(i)]) / k;
          double b = static_cast<double>(x[static_cast<std::size_t>(i)] + 1) / k;
          double c = std::clamp(E.center[static_cast<std::size_t>(i)], a, b) - E.center[static_cast<std::size_t>(i)];
          near2 += c * c;
        }
        return near2 <= E.radius * E.radius;
      }
      case ContinuumSet::Kind::Ellipse: {
        double a = std::clamp(E.center[0], static_cast<double>(x[0]) / k, static_cast<double>(x[0] + 1) / k);
        double b = std::clamp(E.center[1], static_cast<double>(x[1]) / k, static_cast<double>(x[1] + 1) / k);
        double nx = (a - E.center[0]) / E.semi_a;
        double ny = (b - E.center[1]) / E.semi_b;
        return nx * nx + ny * ny <= 1.0;
      }
      case ContinuumSet::Kind::ConvexPolygon:
        return detail::cell_intersects_polygon(E.poly, k, x[0], x[1]);
    }
    return false;
  };

  Vec x(static_cast<std::size_t>(E.d));
  std::function<void(int)> rec = [&](int axis) {
    if (axis == E.d) {
      bool keep = (mode == SampleMode::In) ? cell_in(x) : cell_out(x);
      if (keep) A.cells.push_back(x);
      return;
    }
    for (Int v = blo[static_cast<std::size_t>(axis)]; v <= bhi[static_cast<std::size_t>(axis)]; ++v) {
      x[static_cast<std::size_t>(axis)] = v;
      rec(axis + 1);
    }
  };
  rec(0);
  std::sort(A.cells.begin(), A.cells.end());
  return A;
}

// ---------------------------------------------------------------------------
// Discrete energies (exact rationals; each undirected bond counted once)
// ---------------------------------------------------------------------------

inline Rat orthotropic_energy_exact(const GridSet& A, const std::vector<Rat>& w) {
  for (auto& wi : w)
    if (wi <= 0) throw EncodingError("orthotropic_energy: weights must be positive");
  std::unordered_set<Vec, VecHash> in(A.cells.begin(), A.cells.end());
  Rat total = 0;
  for (int i = 0; i < A.d; ++i) {
    Int jumps = 0;
    Vec e = unit_vec(A.d, i);
    for (auto& x : A.cells) {
      if (!in.count(vadd(x, e))) ++jumps;
      if (!in.count(vsub(x, e))) ++jumps;
    }
    total += w[static_cast<std::size_t>(i)] * Rat(jumps);
  }
  // scale by h^{d-1}
  Big den = 1;
  for (int i = 0; i < A.d - 1; ++i) den *= A.k;
  Rat r = total / Rat(den);
  r.canonicalize();
  return r;
}

inline double orthotropic_energy(const GridSet& A, const std::vector<Rat>& w) {
  return rat_to_double(orthotropic_energy_exact(A, w));
}

inline Rat stencil_energy_exact(const GridSet& A, const std::vector<Vec>& p_plus,
                                const std::vector<Rat>& alpha) {
  if (p_plus.size() != alpha.size()) throw EncodingError("stencil_energy: size mismatch");
  for (auto& p : p_plus)
    if (std::all_of(p.begin(), p.end(), [](Int v) { return v == 0; }))
      throw EncodingError("stencil_energy: zero vector in stencil");
  for (auto& a : alpha)
    if (a <= 0) throw EncodingError("stencil_energy: weights must be positive");
  std::unordered_set<Vec, VecHash> in(A.cells.begin(), A.cells.end());
  Rat total = 0;
  for (std::size_t pi = 0; pi < p_plus.size(); ++pi) {
    Int jumps = 0;
    for (auto& x : A.cells) {
      if (!in.count(vadd(x, p_plus[pi]))) ++jumps;
      if (!in.count(vsub(x, p_plus[pi]))) ++jumps;
    }
    total += alpha[pi] * Rat(jumps);
  }
  Big den = 1;
  for (int i = 0; i < A.d - 1; ++i) den *= A.k;
  Rat r = total / Rat(den);
  r.canonicalize();
  return r;
}

inline double stencil_energy(const GridSet& A, const std::vector<Vec>& p_plus,
                             const std::vector<Rat>& alpha) {
  return rat_to_double(stencil_energy_exact(A, p_plus, alpha));
}

// independent oracle for the exact face identity: measure the jump set of the
// voxel interpolant by 1D fiber scans (Fubini along each axis)
inline Rat voxel_face_measure(const GridSet& A, const std::vector<Rat>& w) {
  Rat total = 0;
  for (int i = 0; i < A.d; ++i) {
    // group cells by the complementary coordinates, scan fibers
    std::map<Vec, std::vector<Int>> fibers;
    for (auto& x : A.cells) {
      Vec key;
      for (int j = 0; j < A.d; ++j)
        if (j != i) key.push_back(x[static_cast<std::size_t>(j)]);
      fibers[key].push_back(x[static_cast<std::size_t>(i)]);
    }
    Int jumps = 0;
    for (auto& [key, line] : fibers) {
      std::sort(line.begin(), line.end());
      // indicator on Z extended by zero: 2 jumps per maximal run
      Int runs = 1;
      for (std::size_t t = 1; t < line.size(); ++t)
        if (line[t] != line[t - 1] + 1) ++runs;
      jumps += 2 * runs;
    }
    total += w[static_cast<std::size_t>(i)] * Rat(jumps);
  }
  Big den = 1;
  for (int i = 0; i < A.d - 1; ++i) den *= A.k;
  Rat r = total / Rat(den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Continuum anisotropic perimeter TV_phi(chi_E)
// ---------------------------------------------------------------------------

namespace detail {

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 28) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double x0, double x2, double f0, double f1, double f2, double whole, double eps,
          int dep) -> double {
    double xm = 0.5 * (x0 + x2);
    double x1l = 0.5 * (x0 + xm);
    double x1r = 0.5 * (xm + x2);
    double fl = f(x1l), fr = f(x1r);
    double left = (xm - x0) / 6.0 * (f0 + 4 * fl + f1);
    double right = (x2 - xm) / 6.0 * (f1 + 4 * fr + f2);
    if (dep <= 0 || std::abs(left + right - whole) < 15 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(x0, xm, f0, fl, f1, left, 0.5 * eps, dep - 1) +
           rec(xm, x2, f1, fr, f2, right, 0.5 * eps, dep - 1);
  };
  // fixed bootstrap panels (a prime count) so symmetric/periodic integrands
  // cannot alias the error estimate on the first split
  const int panels = 13;
  double total = 0;
  double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double x0 = a + p * w, x2 = x0 + w, xm = 0.5 * (x0 + x2);
    double f0 = f(x0), f1 = f(xm), f2 = f(x2);
    double whole = w / 6.0 * (f0 + 4 * f1 + f2);
    total += rec(x0, x2, f0, f1, f2, whole, tol / panels, depth);
  }
  return total;
}

inline double tau_double(const Anisotropy& phi, double nx, double ny, double nz = 0) {
  double s = 0;
  for (std::size_t i = 0; i < phi.reps.size(); ++i) {
    const Vec& v = phi.reps[i];
    double ip = nx * static_cast<double>(v[0]);
    if (v.size() > 1) ip += ny * static_cast<double>(v[1]);
    if (v.size() > 2) ip += nz * static_cast<double>(v[2]);
    s += rat_to_double(phi.weights[i]) * std::abs(ip);
  }
  return s;
}

}  // namespace detail

inline double continuum_tv(const ContinuumSet& E, const Anisotropy& phi, double quad_tol = 1e-8) {
  switch (E.kind) {
    case ContinuumSet::Kind::AxisBox: {
      double tv = 0;
      for (int i = 0; i < E.d; ++i) {
        double area = 1;
        for (int j = 0; j < E.d; ++j) {
          if (j == i) continue;
          area *= rat_to_double(E.hi[static_cast<std::size_t>(j)] - E.lo[static_cast<std::size_t>(j)]);
        }
        Vec n = unit_vec(E.d, i);
        tv += 2.0 * rat_to_double(phi.tau(n)) * area;
      }
      return tv;
    }
    case ContinuumSet::Kind::ConvexPolygon: {
      double tv = 0;
      std::size_t n = E.poly.size();
      for (std::size_t i = 0; i < n; ++i) {
        double ex = rat_to_double(E.poly[(i + 1) % n][0] - E.poly[i][0]);
        double ey = rat_to_double(E.poly[(i + 1) % n][1] - E.poly[i][1]);
        tv += detail::tau_double(phi, ey, -ex);  // outward normal of a CCW edge
      }
      return tv;
    }
    case ContinuumSet::Kind::Disk: {
      if (E.d == 2) {
        auto f = [&](double t) { return detail::tau_double(phi, std::cos(t), std::sin(t)); };
        return E.radius * detail::adaptive_simpson(f, 0, 2 * M_PI, quad_tol);
      }
      // ball in R^3
      auto f_theta = [&](double th) {
        auto f_phi = [&](double ph) {
          return detail::tau_double(phi, std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                                    std::cos(th)) *
                 std::sin(th);
        };
        return detail::adaptive_simpson(f_phi, 0, 2 * M_PI, quad_tol);
      };
      return E.radius * E.radius * detail::adaptive_simpson(f_theta, 0, M_PI, quad_tol);
    }
    case ContinuumSet::Kind::Ellipse: {
      auto f = [&](double t) {
        return detail::tau_double(phi, E.semi_b * std::cos(t), E.semi_a * std::sin(t));
      };
      return detail::adaptive_simpson(f, 0, 2 * M_PI, quad_tol);
    }
  }
  throw EncodingError("continuum_tv: bad shape");
}

// ---------------------------------------------------------------------------
// Rate fits
// ---------------------------------------------------------------------------

struct RateRow {
  Int k = 0;
  double h = 0;
  double e_in = 0, e_out = 0;
  double tv = 0;
  double err_in = 0, err_out = 0;
};

struct RateFit {
  bool exact = false;    // all errors identically zero (aligned case)
  double slope = 0;      // beta-hat from log err vs log h
  double log_c = 0;      // fitted intercept
  std::vector<RateRow> rows;
};

// energy callback: GridSet -> double
template <typename EnergyFn>
RateFit rate_fit_with(const ContinuumSet& E, double tv, const std::vector<Int>& k_list,
                      EnergyFn&& energy) {
  if (k_list.size() < 4) throw EncodingError("rate_fit: need at least 4 meshes");
  RateFit fit;
  fit.rows.resize(k_list.size());
  parallel_for(k_list.size(), [&](std::size_t i) {
    Int k = k_list[i];
    GridSet in = sample(E, k, SampleMode::In);
    GridSet out = sample(E, k, SampleMode::Out);
    RateRow row;
    row.k = k;
    row.h = 1.0 / static_cast<double>(k);
    row.e_in = energy(in);
    row.e_out = energy(out);
    row.tv = tv;
    row.err_in = std::abs(row.e_in - tv);
    row.err_out = std::abs(row.e_out - tv);
    fit.rows[i] = row;
  });
  double eps = 1e-12;
  bool all_zero = true;
  for (auto& r : fit.rows)
    if (std::max(r.err_in, r.err_out) > eps) all_zero = false;
  if (all_zero) {
    fit.exact = true;
    return fit;
  }
  std::vector<double> xs, ys;
  for (auto& r : fit.rows) {
    double err = 0.5 * (r.err_in + r.err_out);
    if (err < eps) err = eps;
    xs.push_back(std::log(r.h));
    ys.push_back(std::log(err));
  }
  auto [slope, intercept] = linear_fit(xs, ys);
  fit.slope = slope;
  fit.log_c = intercept;
  return fit;
}

inline RateFit rate_fit_orthotropic(const ContinuumSet& E, const std::vector<Rat>& w,
                                    const Anisotropy& phi, const std::vector<Int>& k_list) {
  double tv = continuum_tv(E, phi);
  return rate_fit_with(E, tv, k_list, [&](const GridSet& A) { return orthotropic_energy(A, w); });
}

inline RateFit rate_fit_stencil(const ContinuumSet& E, const std::vector<Vec>& p_plus,
                                const std::vector<Rat>& alpha, const std::vector<Int>& k_list) {
  Anisotropy phi;
  phi.d = E.d;
  phi.reps = p_plus;
  phi.weights = alpha;
  double tv = continuum_tv(E, phi);
  return rate_fit_with(E, tv, k_list,
                       [&](const GridSet& A) { return stencil_energy(A, p_plus, alpha); });
}

}  // namespace isolab
