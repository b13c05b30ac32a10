#pragma once

#include <map>
#include <tuple>

#include "isolab/exactlp.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Rectangular-grid cochain complex with exact rational values, lexicographic
// homotopies, curl-fitting with the explicit operator constants, and exact
// l^1 filling on tiny grids.  No floating point anywhere in this module.
// ---------------------------------------------------------------------------

class GridComplex {
 public:
  explicit GridComplex(std::vector<int> sides) : N_(std::move(sides)) {
    d_ = static_cast<int>(N_.size());
    for (int n : N_)
      if (n < 1) throw EncodingError("grid complex: sides must be >= 1");
    // vertices
    vcount_ = 1;
    for (int n : N_) vcount_ *= n;
    // edges per axis
    edge_offset_.assign(static_cast<std::size_t>(d_) + 1, 0);
    for (int i = 0; i < d_; ++i) {
      Int c = std::max<Int>(0, N_[static_cast<std::size_t>(i)] - 1);
      for (int j = 0; j < d_; ++j)
        if (j != i) c *= N_[static_cast<std::size_t>(j)];
      edge_offset_[static_cast<std::size_t>(i) + 1] = edge_offset_[static_cast<std::size_t>(i)] + c;
    }
    // faces per (j,k), j < k
    for (int j = 0; j < d_; ++j)
      for (int k = j + 1; k < d_; ++k) pairs_.push_back({j, k});
    face_offset_.assign(pairs_.size() + 1, 0);
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      auto [j, k] = pairs_[p];
      Int c = std::max<Int>(0, N_[static_cast<std::size_t>(j)] - 1) *
              std::max<Int>(0, N_[static_cast<std::size_t>(k)] - 1);
      for (int i = 0; i < d_; ++i)
        if (i != j && i != k) c *= N_[static_cast<std::size_t>(i)];
      face_offset_[p + 1] = face_offset_[p] + c;
    }
  }

  int dim() const { return d_; }
  const std::vector<int>& sides() const { return N_; }
  Int num_vertices() const { return vcount_; }
  Int num_edges() const { return edge_offset_.back(); }
  Int num_faces() const { return face_offset_.back(); }
  const std::vector<std::pair<int, int>>& face_pairs() const { return pairs_; }

  // mixed-radix vertex index (axis 0 fastest)
  Int vertex_index(const Vec& x) const {
    Int idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
      if (x[static_cast<std::size_t>(i)] < 0 || x[static_cast<std::size_t>(i)] >= N_[static_cast<std::size_t>(i)])
        throw EncodingError("grid complex: vertex index out of range");
      idx += x[static_cast<std::size_t>(i)] * stride;
      stride *= N_[static_cast<std::size_t>(i)];
    }
    return idx;
  }

  Vec vertex_coords(Int idx) const {
    Vec x(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
      x[static_cast<std::size_t>(i)] = idx % N_[static_cast<std::size_t>(i)];
      idx /= N_[static_cast<std::size_t>(i)];
    }
    return x;
  }

  // edge along axis i at base x (requires x_i <= N_i - 2)
  Int edge_index(int axis, const Vec& x) const {
    Int idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
      Int cap = N_[static_cast<std::size_t>(i)] - (i == axis ? 1 : 0);
      if (x[static_cast<std::size_t>(i)] < 0 || x[static_cast<std::size_t>(i)] >= cap)
        throw EncodingError("grid complex: edge index out of range");
      idx += x[static_cast<std::size_t>(i)] * stride;
      stride *= cap;
    }
    return edge_offset_[static_cast<std::size_t>(axis)] + idx;
  }

  std::pair<int, Vec> edge_coords(Int idx) const {
    int axis = 0;
    while (idx >= edge_offset_[static_cast<std::size_t>(axis) + 1]) ++axis;
    idx -= edge_offset_[static_cast<std::size_t>(axis)];
    Vec x(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
      Int cap = N_[static_cast<std::size_t>(i)] - (i == axis ? 1 : 0);
      x[static_cast<std::size_t>(i)] = idx % cap;
      idx /= cap;
    }
    return {axis, x};
  }

  // face spanned by axes (j,k) at base x (x_j <= N_j - 2, x_k <= N_k - 2)
  Int face_index(int j, int k, const Vec& x) const {
    std::size_t p = pair_slot(j, k);
    Int idx = 0, stride = 1;
    for (int i = 0; i < d_; ++i) {
      Int cap = N_[static_cast<std::size_t>(i)] - ((i == j || i == k) ? 1 : 0);
      if (x[static_cast<std::size_t>(i)] < 0 || x[static_cast<std::size_t>(i)] >= cap)
        throw EncodingError("grid complex: face index out of range");
      idx += x[static_cast<std::size_t>(i)] * stride;
      stride *= cap;
    }
    return face_offset_[p] + idx;
  }

  std::tuple<int, int, Vec> face_coords(Int idx) const {
    std::size_t p = 0;
    while (idx >= face_offset_[p + 1]) ++p;
    idx -= face_offset_[p];
    auto [j, k] = pairs_[p];
    Vec x(static_cast<std::size_t>(d_));
    for (int i = 0; i < d_; ++i) {
      Int cap = N_[static_cast<std::size_t>(i)] - ((i == j || i == k) ? 1 : 0);
      x[static_cast<std::size_t>(i)] = idx % cap;
      idx /= cap;
    }
    return {j, k, x};
  }

 private:
  std::size_t pair_slot(int j, int k) const {
    for (std::size_t p = 0; p < pairs_.size(); ++p)
      if (pairs_[p].first == j && pairs_[p].second == k) return p;
    throw EncodingError("grid complex: bad face pair");
  }

  std::vector<int> N_;
  int d_ = 0;
  Int vcount_ = 0;
  std::vector<Int> edge_offset_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<Int> face_offset_;
};

struct Cochain {
  const GridComplex* K = nullptr;
  int degree = 0;
  std::vector<Rat> vals;

  static Cochain zero(const GridComplex& K, int degree) {
    Cochain c;
    c.K = &K;
    c.degree = degree;
    Int n = degree == 0 ? K.num_vertices() : degree == 1 ? K.num_edges() : K.num_faces();
    c.vals.assign(static_cast<std::size_t>(n), Rat(0));
    return c;
  }

  Rat l1_norm() const {
    Rat s = 0;
    for (auto& v : vals) s += (v < 0 ? Rat(-v) : v);
    return s;
  }
};

// d^0: (du)_i(x) = u(x + e_i) - u(x)
inline Cochain d0(const Cochain& u) {
  if (u.degree != 0) throw EncodingError("d0: expected a 0-cochain");
  const GridComplex& K = *u.K;
  Cochain c = Cochain::zero(K, 1);
  for (Int e = 0; e < K.num_edges(); ++e) {
    auto [axis, x] = K.edge_coords(e);
    Vec y = x;
    ++y[static_cast<std::size_t>(axis)];
    c.vals[static_cast<std::size_t>(e)] = u.vals[static_cast<std::size_t>(K.vertex_index(y))] -
                                          u.vals[static_cast<std::size_t>(K.vertex_index(x))];
  }
  return c;
}

// d^1: (dc)_{jk}(x) = c_j(x) + c_k(x+e_j) - c_j(x+e_k) - c_k(x)
inline Cochain d1(const Cochain& c) {
  if (c.degree != 1) throw EncodingError("d1: expected a 1-cochain");
  const GridComplex& K = *c.K;
  Cochain b = Cochain::zero(K, 2);
  for (Int f = 0; f < K.num_faces(); ++f) {
    auto [j, k, x] = K.face_coords(f);
    Vec xj = x, xk = x;
    ++xj[static_cast<std::size_t>(j)];
    ++xk[static_cast<std::size_t>(k)];
    b.vals[static_cast<std::size_t>(f)] =
        c.vals[static_cast<std::size_t>(K.edge_index(j, x))] +
        c.vals[static_cast<std::size_t>(K.edge_index(k, xj))] -
        c.vals[static_cast<std::size_t>(K.edge_index(j, xk))] -
        c.vals[static_cast<std::size_t>(K.edge_index(k, x))];
  }
  return b;
}

// lexicographic potential (basepointed cone):
// (H1 c)(x) = sum_i sum_{t < x_i} c_i(x_1..x_{i-1}, t, 0..0)
inline Cochain H1(const Cochain& c) {
  if (c.degree != 1) throw EncodingError("H1: expected a 1-cochain");
  const GridComplex& K = *c.K;
  Cochain u = Cochain::zero(K, 0);
  int d = K.dim();
  for (Int v = 0; v < K.num_vertices(); ++v) {
    Vec x = K.vertex_coords(v);
    Rat acc = 0;
    for (int i = 0; i < d; ++i) {
      Vec pos(x.begin(), x.end());
      for (int z = i + 1; z < d; ++z) pos[static_cast<std::size_t>(z)] = 0;
      for (Int t = 0; t < x[static_cast<std::size_t>(i)]; ++t) {
        pos[static_cast<std::size_t>(i)] = t;
        acc += c.vals[static_cast<std::size_t>(K.edge_index(i, pos))];
      }
    }
    u.vals[static_cast<std::size_t>(v)] = acc;
  }
  return u;
}

// increasing-index cone:
// (H2up b)_j(x) = - sum_{k > j} sum_{t < x_k} b_{jk}(x_1..x_{k-1}, t, 0..0)
inline Cochain H2up(const Cochain& b) {
  if (b.degree != 2) throw EncodingError("H2up: expected a 2-cochain");
  const GridComplex& K = *b.K;
  Cochain c = Cochain::zero(K, 1);
  int d = K.dim();
  for (Int e = 0; e < K.num_edges(); ++e) {
    auto [j, x] = K.edge_coords(e);
    Rat acc = 0;
    for (int k = j + 1; k < d; ++k) {
      Vec pos(x.begin(), x.end());
      for (int z = k + 1; z < d; ++z) pos[static_cast<std::size_t>(z)] = 0;
      for (Int t = 0; t < x[static_cast<std::size_t>(k)]; ++t) {
        pos[static_cast<std::size_t>(k)] = t;
        acc -= b.vals[static_cast<std::size_t>(K.face_index(j, k, pos))];
      }
    }
    c.vals[static_cast<std::size_t>(e)] = acc;
  }
  return c;
}

// decreasing-index cone:
// (H2down b)_j(x) = + sum_{k < j} sum_{t < x_k} b_{kj}(x_1..x_{k-1}, t, 0..0)
inline Cochain H2down(const Cochain& b) {
  if (b.degree != 2) throw EncodingError("H2down: expected a 2-cochain");
  const GridComplex& K = *b.K;
  Cochain c = Cochain::zero(K, 1);
  int d = K.dim();
  for (Int e = 0; e < K.num_edges(); ++e) {
    auto [j, x] = K.edge_coords(e);
    Rat acc = 0;
    for (int k = 0; k < j; ++k) {
      Vec pos(x.begin(), x.end());
      for (int z = k + 1; z < d; ++z) pos[static_cast<std::size_t>(z)] = 0;
      for (Int t = 0; t < x[static_cast<std::size_t>(k)]; ++t) {
        pos[static_cast<std::size_t>(k)] = t;
        acc += b.vals[static_cast<std::size_t>(K.face_index(k, j, pos))];
      }
    }
    c.vals[static_cast<std::size_t>(e)] = acc;
  }
  return c;
}

// C_up(R) = max_{2 <= k <= d} (N_k - 1) prod_{i > k} N_i  (1-based axis order)
inline Int c_up(const GridComplex& K) {
  Int best = 0;
  int d = K.dim();
  for (int k = 1; k < d; ++k) {  // 0-based: k = 1..d-1
    Int v = K.sides()[static_cast<std::size_t>(k)] - 1;
    for (int i = k + 1; i < d; ++i) v *= K.sides()[static_cast<std::size_t>(i)];
    best = std::max(best, v);
  }
  return best;
}

struct CurlFitResult {
  Cochain potential;   // h = H1 c
  Cochain residual;    // c - d0 h (= H2up d1 c, checked exactly)
  Rat residual_l1 = 0;
  Rat curl_l1 = 0;     // ||d1 c||_1
  Int bound_constant = 0;  // C_up(R)
  bool within_bound = true;
};

inline CurlFitResult curl_fit(const Cochain& c) {
  const GridComplex& K = *c.K;
  CurlFitResult r;
  r.potential = H1(c);
  Cochain grad = d0(r.potential);
  r.residual = c;
  for (std::size_t i = 0; i < r.residual.vals.size(); ++i) r.residual.vals[i] -= grad.vals[i];
  Cochain curl = d1(c);
  Cochain via_h2 = H2up(curl);
  if (via_h2.vals != r.residual.vals)
    throw std::logic_error("cochain homotopy identity violated (internal error)");
  r.residual_l1 = r.residual.l1_norm();
  r.curl_l1 = curl.l1_norm();
  r.bound_constant = c_up(K);
  r.within_bound = (r.residual_l1 <= Rat(r.bound_constant) * r.curl_l1);
  return r;
}

struct WeightedCurlFit {
  Rat residual_weighted = 0;  // ||c - dh||_{1,alpha}
  Rat curl_weighted = 0;      // ||dc||_{1,beta}
  Rat constant = 0;           // max_{j<k} (alpha_j / beta_jk) (N_k-1) prod_{i>k} N_i
  bool within_bound = true;
};

inline WeightedCurlFit weighted_curl_fit(const Cochain& c, const std::vector<Rat>& alpha,
                                         const std::map<std::pair<int, int>, Rat>& beta) {
  const GridComplex& K = *c.K;
  for (auto& a : alpha)
    if (a <= 0) throw EncodingError("weighted_curl_fit: alpha must be positive");
  for (auto& [p, b] : beta)
    if (b <= 0) throw EncodingError("weighted_curl_fit: beta must be positive");
  Cochain h = H1(c);
  Cochain grad = d0(h);
  Cochain curl = d1(c);

  WeightedCurlFit r;
  for (Int e = 0; e < K.num_edges(); ++e) {
    auto [axis, x] = K.edge_coords(e);
    Rat v = c.vals[static_cast<std::size_t>(e)] - grad.vals[static_cast<std::size_t>(e)];
    if (v < 0) v = -v;
    r.residual_weighted += alpha[static_cast<std::size_t>(axis)] * v;
  }
  for (Int f = 0; f < K.num_faces(); ++f) {
    auto [j, k, x] = K.face_coords(f);
    Rat v = curl.vals[static_cast<std::size_t>(f)];
    if (v < 0) v = -v;
    r.curl_weighted += beta.at({j, k}) * v;
  }
  r.constant = 0;
  int d = K.dim();
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Int geom = K.sides()[static_cast<std::size_t>(k)] - 1;
      for (int i = k + 1; i < d; ++i) geom *= K.sides()[static_cast<std::size_t>(i)];
      Rat v = alpha[static_cast<std::size_t>(j)] / beta.at({j, k}) * Rat(geom);
      r.constant = std::max(r.constant, v);
    }
  r.within_bound = (r.residual_weighted <= r.constant * r.curl_weighted);
  return r;
}

// exact l^1 filling: min ||R||_1 s.t. d1 R = b, solved by the in-tree exact
// simplex (variables R = R+ - R-)
inline Rat fill1_exact(const GridComplex& K, const Cochain& b, std::vector<Rat>* argmin = nullptr) {
  if (b.degree != 2) throw EncodingError("fill1_exact: expected a 2-cochain");
  if (K.num_edges() > 60) throw ResourceError("fill1_exact: complex too large (> 60 edges)");
  std::size_t E = static_cast<std::size_t>(K.num_edges());
  std::size_t F = static_cast<std::size_t>(K.num_faces());
  // rows: faces; cols: R+ then R-
  std::vector<std::vector<Rat>> A(F, std::vector<Rat>(2 * E, 0));
  for (std::size_t e = 0; e < E; ++e) {
    Cochain unit = Cochain::zero(K, 1);
    unit.vals[e] = 1;
    Cochain img = d1(unit);
    for (std::size_t f = 0; f < F; ++f) {
      A[f][e] = img.vals[f];
      A[f][E + e] = -img.vals[f];
    }
  }
  std::vector<Rat> rhs(b.vals.begin(), b.vals.end());
  std::vector<Rat> cost(2 * E, 1);
  LpResult res = ExactSimplex::solve(A, rhs, cost);
  if (res.status == LpResult::Status::Infeasible)
    throw DegenerateInputError("fill1_exact: b is not in the image of d1");
  if (res.status != LpResult::Status::Optimal)
    throw std::logic_error("fill1_exact: unexpected LP status");
  if (argmin) {
    argmin->assign(E, Rat(0));
    for (std::size_t e = 0; e < E; ++e) (*argmin)[e] = res.x[e] - res.x[E + e];
  }
  return res.value;
}

}  // namespace isolab
