#pragma once

#include <cassert>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "isolab/core.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Group families, generator-labelled adjacency, finite vertex sets, and the
// boundary functionals (vertex / edge, directed / undirected, left / right,
// colored sigma).
//
// Vertex encodings are flat integer words with a family-specific layout:
//   ZdStencil   {x_1..x_d}
//   Heisenberg  {x, y, z}
//   Step2       {x_1..x_d, h_1..h_m}
//   Lamplighter {cursor, n, pos_1, val_1, .., pos_n, val_n}  (lamps sorted,
//                values in 1..q; zero lamps omitted)
//   Semidirect  {x_1..x_d, k}
//   Torus       {x_1..x_d}  (residues in [0, m))
//   Explicit    {id}
// Words compare lexicographically, which gives every family a canonical total
// order and VertexSets a deterministic iteration order.
// ---------------------------------------------------------------------------

enum class Family { ZdStencil, Heisenberg, Step2, Lamplighter, Semidirect, Torus, Explicit };

// Right: neighbors of g are g*s.  Left: neighbors of g are s*g.
enum class Action { Right, Left };

enum class EdgeMode { DirectedPairs, UndirectedCut };

struct Generator {
  std::string label;
  int inverse = -1;  // index of the inverse generator (self for involutions)
};

// Upper-triangular integer 2-cocycle omega : Z^d x Z^d -> Z^m, stored as
// omega[i][j] in Z^m with omega[i][i] = 0 and omega[j][i] = 0 for j > i.
struct Cocycle {
  int d = 0;
  int m = 0;
  std::vector<std::vector<Vec>> entry;  // entry[i][j] : Vec of length m

  static Cocycle zero(int d, int m) {
    Cocycle w;
    w.d = d;
    w.m = m;
    w.entry.assign(d, std::vector<Vec>(d, Vec(m, 0)));
    return w;
  }

  void set(int i, int j, Vec v) {
    if (i >= j) throw EncodingError("cocycle: only entries with i < j may be nonzero");
    entry[i][j] = std::move(v);
  }

  // omega(x, y) by bilinearity
  Vec eval(const Vec& x, const Vec& y) const {
    Vec r(m, 0);
    for (int i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < d; ++j) {
        if (y[j] == 0) continue;
        for (int k = 0; k < m; ++k) r[k] += x[i] * y[j] * entry[i][j][k];
      }
    }
    return r;
  }

  // quadratic gauge zeta(x) = sum_{i<j} x_i x_j omega(e_i, e_j)
  Vec gauge(const Vec& x) const {
    Vec r(m, 0);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int k = 0; k < m; ++k) r[k] += x[i] * x[j] * entry[i][j][k];
    return r;
  }
};

struct Vertex {
  Vec w;

  bool operator==(const Vertex& o) const { return w == o.w; }
  bool operator!=(const Vertex& o) const { return w != o.w; }
  bool operator<(const Vertex& o) const { return w < o.w; }
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const noexcept { return VecHash{}(v.w); }
};

class GroupGraph {
 public:
  // ---- constructors per family ----

  static GroupGraph zd_stencil(int d, std::vector<Vec> stencil_plus) {
    GroupGraph g;
    g.family_ = Family::ZdStencil;
    g.d_ = d;
    for (auto& v : stencil_plus) {
      if (static_cast<int>(v.size()) != d) throw EncodingError("stencil vector has wrong dimension");
      if (std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; }))
        throw EncodingError("stencil contains the zero vector");
    }
    // store the symmetric stencil as +v, -v pairs
    for (auto& v : stencil_plus) {
      int i = static_cast<int>(g.steps_.size());
      g.steps_.push_back(v);
      g.steps_.push_back(vneg(v));
      g.gens_.push_back({"+" + vec_label(v), i + 1});
      g.gens_.push_back({"-" + vec_label(v), i});
    }
    return g;
  }

  static GroupGraph zd_axis(int d) {
    std::vector<Vec> s;
    for (int i = 0; i < d; ++i) s.push_back(unit_vec(d, i));
    return zd_stencil(d, std::move(s));
  }

  static GroupGraph heisenberg() {
    GroupGraph g;
    g.family_ = Family::Heisenberg;
    g.d_ = 3;
    g.gens_ = {{"a", 1}, {"a^-1", 0}, {"b", 3}, {"b^-1", 2}};
    return g;
  }

  static GroupGraph step2(Cocycle omega) {
    GroupGraph g;
    g.family_ = Family::Step2;
    g.d_ = omega.d;
    g.m_ = omega.m;
    g.omega_ = std::move(omega);
    for (int i = 0; i < g.d_; ++i) {
      int base = 2 * i;
      g.gens_.push_back({"+e" + std::to_string(i + 1), base + 1});
      g.gens_.push_back({"-e" + std::to_string(i + 1), base});
    }
    return g;
  }

  // Lamplighter Z_{q+1} wr Z: cursor moves +-1 plus toggle generators acting
  // on the lamp at the cursor.  Toggles come in +-pairs merged when q = 1
  // (the toggle is an involution); for q >= 2 each pair contributes both the
  // increment and the decrement, so t = 2 * toggle_pairs.
  static GroupGraph lamplighter(int q, int toggle_pairs = 1) {
    if (q < 1) throw EncodingError("lamplighter: q must be >= 1");
    if (toggle_pairs < 1) throw EncodingError("lamplighter: need at least one toggle pair");
    GroupGraph g;
    g.family_ = Family::Lamplighter;
    g.q_ = q;
    g.toggle_pairs_ = toggle_pairs;
    g.gens_.push_back({"R", 1});
    g.gens_.push_back({"L", 0});
    for (int j = 0; j < toggle_pairs; ++j) {
      if (q == 1) {
        int i = static_cast<int>(g.gens_.size());
        g.gens_.push_back({"t" + std::to_string(j + 1), i});
      } else {
        int i = static_cast<int>(g.gens_.size());
        g.gens_.push_back({"t" + std::to_string(j + 1), i + 1});
        g.gens_.push_back({"t" + std::to_string(j + 1) + "^-1", i});
      }
    }
    return g;
  }

  static GroupGraph semidirect(std::vector<Vec> A) {
    int d = static_cast<int>(A.size());
    for (auto& row : A)
      if (static_cast<int>(row.size()) != d) throw EncodingError("semidirect: A must be square");
    GroupGraph g;
    g.family_ = Family::Semidirect;
    g.d_ = d;
    g.A_ = A;
    g.Ainv_ = invert_unimodular(A);
    for (int i = 0; i < d; ++i) {
      int base = 2 * i;
      g.gens_.push_back({"+s" + std::to_string(i + 1), base + 1});
      g.gens_.push_back({"-s" + std::to_string(i + 1), base});
    }
    g.gens_.push_back({"t", 2 * d + 1});
    g.gens_.push_back({"t^-1", 2 * d});
    return g;
  }

  static GroupGraph torus(int d, Int m) {
    if (m < 1) throw EncodingError("torus: modulus must be positive");
    GroupGraph g;
    g.family_ = Family::Torus;
    g.d_ = d;
    g.mod_ = m;
    for (int i = 0; i < d; ++i) {
      int base = 2 * i;
      g.gens_.push_back({"+e" + std::to_string(i + 1), base + 1});
      g.gens_.push_back({"-e" + std::to_string(i + 1), base});
    }
    return g;
  }

  static GroupGraph explicit_graph(std::vector<std::vector<int>> adjacency) {
    GroupGraph g;
    g.family_ = Family::Explicit;
    g.adj_ = std::move(adjacency);
    std::size_t maxdeg = 0;
    for (std::size_t u = 0; u < g.adj_.size(); ++u) {
      auto& row = g.adj_[u];
      std::sort(row.begin(), row.end());
      maxdeg = std::max(maxdeg, row.size());
    }
    g.explicit_maxdeg_ = static_cast<int>(maxdeg);
    return g;
  }

  // ---- basic queries ----

  Family family() const { return family_; }
  int dim() const { return d_; }
  int center_rank() const { return m_; }
  Int modulus() const { return mod_; }
  int lamp_q() const { return q_; }
  const Cocycle& omega() const { return omega_; }
  const std::vector<Vec>& matrix() const { return A_; }
  const std::vector<Vec>& matrix_inverse() const { return Ainv_; }
  std::size_t explicit_size() const { return adj_.size(); }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  // degree counted with multiplicity
  int degree() const {
    if (family_ == Family::Explicit) return explicit_maxdeg_;
    return static_cast<int>(gens_.size());
  }

  const std::vector<Generator>& generators() const { return gens_; }

  bool is_group_family() const { return family_ != Family::Explicit; }

  // Infinite vertex-transitive families (everything except Torus/Explicit).
  bool is_infinite_transitive() const {
    return family_ != Family::Torus && family_ != Family::Explicit;
  }

  Vertex identity() const {
    switch (family_) {
      case Family::ZdStencil:
      case Family::Torus:
        return Vertex{Vec(d_, 0)};
      case Family::Heisenberg:
        return Vertex{Vec(3, 0)};
      case Family::Step2:
        return Vertex{Vec(d_ + m_, 0)};
      case Family::Semidirect:
        return Vertex{Vec(d_ + 1, 0)};
      case Family::Lamplighter:
        return Vertex{Vec{0, 0}};
      case Family::Explicit:
        return Vertex{Vec{0}};
    }
    throw EncodingError("identity: bad family");
  }

  void check_vertex(const Vertex& v) const {
    switch (family_) {
      case Family::ZdStencil:
        if (static_cast<int>(v.w.size()) != d_) throw EncodingError("vertex: wrong arity");
        return;
      case Family::Heisenberg:
        if (v.w.size() != 3) throw EncodingError("vertex: wrong arity");
        return;
      case Family::Step2:
        if (static_cast<int>(v.w.size()) != d_ + m_) throw EncodingError("vertex: wrong arity");
        return;
      case Family::Semidirect:
        if (static_cast<int>(v.w.size()) != d_ + 1) throw EncodingError("vertex: wrong arity");
        return;
      case Family::Torus:
        if (static_cast<int>(v.w.size()) != d_) throw EncodingError("vertex: wrong arity");
        for (Int x : v.w)
          if (x < 0 || x >= mod_) throw EncodingError("vertex: residue out of range");
        return;
      case Family::Lamplighter: {
        if (v.w.size() < 2 || (v.w.size() - 2) % 2 != 0) throw EncodingError("vertex: bad lamp word");
        Int n = v.w[1];
        if (static_cast<Int>(v.w.size()) != 2 + 2 * n) throw EncodingError("vertex: bad lamp count");
        for (Int i = 0; i < n; ++i) {
          Int val = v.w[3 + 2 * i];
          if (val < 1 || val > q_) throw EncodingError("vertex: lamp value out of range");
          if (i > 0 && v.w[2 + 2 * i] <= v.w[2 + 2 * (i - 1)])
            throw EncodingError("vertex: lamps not sorted");
        }
        return;
      }
      case Family::Explicit:
        if (v.w.size() != 1 || v.w[0] < 0 || v.w[0] >= static_cast<Int>(adj_.size()))
          throw EncodingError("vertex: id out of range");
        return;
    }
  }

  // Apply generator `gi` under the given action.
  Vertex apply(const Vertex& v, int gi, Action action) const {
    switch (family_) {
      case Family::ZdStencil:
        return Vertex{vadd(v.w, steps_[gi])};  // abelian
      case Family::Torus: {
        Vec r = v.w;
        int axis = gi / 2;
        Int sg = (gi % 2 == 0) ? 1 : -1;
        r[axis] = ((r[axis] + sg) % mod_ + mod_) % mod_;
        return Vertex{r};
      }
      case Family::Heisenberg:
        return heis_apply(v, gi, action);
      case Family::Step2:
        return step2_apply(v, gi, action);
      case Family::Semidirect:
        return semidirect_apply(v, gi, action);
      case Family::Lamplighter:
        return lamp_apply(v, gi, action);
      case Family::Explicit:
        throw UnsupportedFamilyError("apply: explicit graphs have no generator action");
    }
    throw EncodingError("apply: bad family");
  }

  // All neighbors with multiplicity (generator-labelled).  For Explicit
  // graphs the labels are adjacency slots.
  std::vector<std::pair<int, Vertex>> neighbors(const Vertex& v, Action action = Action::Right) const {
    check_vertex(v);
    std::vector<std::pair<int, Vertex>> out;
    if (family_ == Family::Explicit) {
      const auto& row = adj_[static_cast<std::size_t>(v.w[0])];
      out.reserve(row.size());
      for (std::size_t i = 0; i < row.size(); ++i) out.push_back({static_cast<int>(i), Vertex{Vec{row[i]}}});
      return out;
    }
    out.reserve(gens_.size());
    for (int gi = 0; gi < static_cast<int>(gens_.size()); ++gi) out.push_back({gi, apply(v, gi, action)});
    return out;
  }

  // group inverse (group families only)
  Vertex inverse(const Vertex& v) const {
    switch (family_) {
      case Family::ZdStencil:
        return Vertex{vneg(v.w)};
      case Family::Torus: {
        Vec r(d_);
        for (int i = 0; i < d_; ++i) r[i] = (mod_ - v.w[i]) % mod_;
        return Vertex{r};
      }
      case Family::Heisenberg: {
        Int x = v.w[0], y = v.w[1], z = v.w[2];
        return Vertex{Vec{-x, -y, -z + x * y}};
      }
      case Family::Step2: {
        Vec x(v.w.begin(), v.w.begin() + d_);
        Vec h(v.w.begin() + d_, v.w.end());
        Vec corr = omega_.eval(x, x);
        Vec r(d_ + m_);
        for (int i = 0; i < d_; ++i) r[i] = -x[i];
        for (int k = 0; k < m_; ++k) r[d_ + k] = -h[k] + corr[k];
        return Vertex{r};
      }
      case Family::Semidirect: {
        Vec x(v.w.begin(), v.w.begin() + d_);
        Int k = v.w[d_];
        Vec y = mat_pow_apply(-k, x);
        Vec r(d_ + 1);
        for (int i = 0; i < d_; ++i) r[i] = -y[i];
        r[d_] = -k;
        return Vertex{r};
      }
      case Family::Lamplighter: {
        // (f, x)^-1 = (-shift_{-x} f, -x)
        Int cursor = v.w[0], n = v.w[1];
        std::map<Int, Int> lamps;
        for (Int i = 0; i < n; ++i) {
          Int pos = v.w[2 + 2 * i], val = v.w[3 + 2 * i];
          lamps[pos - cursor] = (q_ + 1 - val) % (q_ + 1);
        }
        return lamp_pack(-cursor, lamps);
      }
      case Family::Explicit:
        throw UnsupportedFamilyError("inverse: unsupported for explicit graphs");
    }
    throw EncodingError("inverse: bad family");
  }

  // group product (group families only); used for translations and products
  Vertex multiply(const Vertex& a, const Vertex& b) const {
    switch (family_) {
      case Family::ZdStencil:
        return Vertex{vadd(a.w, b.w)};
      case Family::Torus: {
        Vec r(d_);
        for (int i = 0; i < d_; ++i) r[i] = (a.w[i] + b.w[i]) % mod_;
        return Vertex{r};
      }
      case Family::Heisenberg: {
        Int x = a.w[0], y = a.w[1], z = a.w[2];
        Int X = b.w[0], Y = b.w[1], Z = b.w[2];
        return Vertex{Vec{x + X, y + Y, z + Z + x * Y}};
      }
      case Family::Step2: {
        Vec xa(a.w.begin(), a.w.begin() + d_), ha(a.w.begin() + d_, a.w.end());
        Vec xb(b.w.begin(), b.w.begin() + d_), hb(b.w.begin() + d_, b.w.end());
        Vec tw = omega_.eval(xa, xb);
        Vec r(d_ + m_);
        for (int i = 0; i < d_; ++i) r[i] = xa[i] + xb[i];
        for (int k = 0; k < m_; ++k) r[d_ + k] = ha[k] + hb[k] + tw[k];
        return Vertex{r};
      }
      case Family::Semidirect: {
        Vec xa(a.w.begin(), a.w.begin() + d_);
        Int ka = a.w[d_];
        Vec xb(b.w.begin(), b.w.begin() + d_);
        Int kb = b.w[d_];
        Vec moved = mat_pow_apply(ka, xb);
        Vec r(d_ + 1);
        for (int i = 0; i < d_; ++i) r[i] = xa[i] + moved[i];
        r[d_] = ka + kb;
        return Vertex{r};
      }
      case Family::Lamplighter: {
        // (f, x)(g, y) = (f + shift_x g, x + y)
        Int xa = a.w[0], na = a.w[1];
        Int xb = b.w[0], nb = b.w[1];
        std::map<Int, Int> lamps;
        for (Int i = 0; i < na; ++i) lamps[a.w[2 + 2 * i]] = a.w[3 + 2 * i];
        for (Int i = 0; i < nb; ++i) {
          Int pos = b.w[2 + 2 * i] + xa;
          Int val = (lamps.count(pos) ? lamps[pos] : 0) + b.w[3 + 2 * i];
          val %= (q_ + 1);
          if (val == 0)
            lamps.erase(pos);
          else
            lamps[pos] = val;
        }
        return lamp_pack(xa + xb, lamps);
      }
      case Family::Explicit:
        throw UnsupportedFamilyError("multiply: unsupported for explicit graphs");
    }
    throw EncodingError("multiply: bad family");
  }

  // A^k x for semidirect conjugation (k may be negative)
  Vec mat_pow_apply(Int k, Vec x) const {
    const std::vector<Vec>& M = (k >= 0) ? A_ : Ainv_;
    Int steps = (k >= 0) ? k : -k;
    for (Int s = 0; s < steps; ++s) {
      Vec y(d_, 0);
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) y[i] += M[i][j] * x[j];
      x = y;
    }
    return x;
  }

 private:
  static std::string vec_label(const Vec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(v[i]);
    }
    return s + ")";
  }

  static std::vector<Vec> invert_unimodular(const std::vector<Vec>& A) {
    int d = static_cast<int>(A.size());
    // exact Gauss-Jordan over rationals; entries must come out integral
    std::vector<std::vector<Rat>> M(d, std::vector<Rat>(2 * d, 0));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) M[i][j] = Rat(A[i][j]);
      M[i][d + i] = 1;
    }
    for (int c = 0; c < d; ++c) {
      int p = -1;
      for (int r = c; r < d; ++r)
        if (M[r][c] != 0) {
          p = r;
          break;
        }
      if (p < 0) throw EncodingError("semidirect: A is singular");
      std::swap(M[c], M[p]);
      Rat piv = M[c][c];
      for (int j = 0; j < 2 * d; ++j) M[c][j] /= piv;
      for (int r = 0; r < d; ++r) {
        if (r == c || M[r][c] == 0) continue;
        Rat f = M[r][c];
        for (int j = 0; j < 2 * d; ++j) M[r][j] -= f * M[c][j];
      }
    }
    std::vector<Vec> inv(d, Vec(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Rat q = M[i][d + j];
        q.canonicalize();
        if (q.get_den() != 1) throw EncodingError("semidirect: A is not in GL(d,Z)");
        inv[i][j] = static_cast<Int>(q.get_num().get_si());
      }
    return inv;
  }

  Vertex heis_apply(const Vertex& v, int gi, Action action) const {
    Int x = v.w[0], y = v.w[1], z = v.w[2];
    bool right = (action == Action::Right);
    switch (gi) {
      case 0:  // a
        return right ? Vertex{Vec{x + 1, y, z}} : Vertex{Vec{x + 1, y, z + y}};
      case 1:  // a^-1
        return right ? Vertex{Vec{x - 1, y, z}} : Vertex{Vec{x - 1, y, z - y}};
      case 2:  // b
        return right ? Vertex{Vec{x, y + 1, z + x}} : Vertex{Vec{x, y + 1, z}};
      case 3:  // b^-1
        return right ? Vertex{Vec{x, y - 1, z - x}} : Vertex{Vec{x, y - 1, z}};
    }
    throw EncodingError("heisenberg: bad generator");
  }

  Vertex step2_apply(const Vertex& v, int gi, Action action) const {
    int axis = gi / 2;
    Int sg = (gi % 2 == 0) ? 1 : -1;
    Vec x(v.w.begin(), v.w.begin() + d_);
    Vec h(v.w.begin() + d_, v.w.end());
    Vec e = unit_vec(d_, axis, sg);
    Vec tw = (action == Action::Right) ? omega_.eval(x, e) : omega_.eval(e, x);
    Vec r(d_ + m_);
    for (int i = 0; i < d_; ++i) r[i] = x[i] + e[i];
    for (int k = 0; k < m_; ++k) r[d_ + k] = h[k] + tw[k];
    return Vertex{r};
  }

  Vertex semidirect_apply(const Vertex& v, int gi, Action action) const {
    Vec x(v.w.begin(), v.w.begin() + d_);
    Int k = v.w[d_];
    Vec r(d_ + 1);
    if (gi < 2 * d_) {
      int axis = gi / 2;
      Int sg = (gi % 2 == 0) ? 1 : -1;
      if (action == Action::Left) {
        // s_i (x, k) = (x + e_i, k)
        for (int i = 0; i < d_; ++i) r[i] = x[i];
        r[axis] += sg;
        r[d_] = k;
      } else {
        // (x, k) s_i = (x + A^k e_i, k)
        Vec moved = mat_pow_apply(k, unit_vec(d_, axis, sg));
        for (int i = 0; i < d_; ++i) r[i] = x[i] + moved[i];
        r[d_] = k;
      }
      return Vertex{r};
    }
    Int tsg = (gi == 2 * d_) ? 1 : -1;
    if (action == Action::Left) {
      // t (x, k) = (A x, k+1);  t^-1 (x, k) = (A^-1 x, k-1)
      Vec moved = mat_pow_apply(tsg, x);
      for (int i = 0; i < d_; ++i) r[i] = moved[i];
      r[d_] = k + tsg;
    } else {
      // (x, k) t = (x, k+1)
      for (int i = 0; i < d_; ++i) r[i] = x[i];
      r[d_] = k + tsg;
    }
    return Vertex{r};
  }

  Vertex lamp_pack(Int cursor, const std::map<Int, Int>& lamps) const {
    Vec w;
    w.push_back(cursor);
    w.push_back(static_cast<Int>(lamps.size()));
    for (auto& [pos, val] : lamps) {
      w.push_back(pos);
      w.push_back(val);
    }
    return Vertex{std::move(w)};
  }

  Vertex lamp_apply(const Vertex& v, int gi, Action action) const {
    Int cursor = v.w[0], n = v.w[1];
    std::map<Int, Int> lamps;
    for (Int i = 0; i < n; ++i) lamps[v.w[2 + 2 * i]] = v.w[3 + 2 * i];
    if (gi < 2) {
      Int sg = (gi == 0) ? 1 : -1;
      if (action == Action::Right) return lamp_pack(cursor + sg, lamps);
      // left base move shifts all lamps
      std::map<Int, Int> moved;
      for (auto& [pos, val] : lamps) moved[pos + sg] = val;
      return lamp_pack(cursor + sg, moved);
    }
    // toggle generators
    int ti = gi - 2;
    Int delta;
    if (q_ == 1) {
      delta = 1;
    } else {
      delta = (ti % 2 == 0) ? 1 : q_;  // q == -1 mod (q+1)
    }
    Int where = (action == Action::Right) ? cursor : 0;
    Int val = (lamps.count(where) ? lamps[where] : 0) + delta;
    val %= (q_ + 1);
    if (val == 0)
      lamps.erase(where);
    else
      lamps[where] = val;
    return lamp_pack(cursor, lamps);
  }

  Family family_ = Family::ZdStencil;
  int d_ = 0;
  int m_ = 0;        // center rank (step2)
  Int mod_ = 0;      // torus modulus
  int q_ = 0;        // lamplighter lamp states - 1
  int toggle_pairs_ = 0;
  Cocycle omega_;
  std::vector<Vec> A_, Ainv_;         // semidirect matrix and inverse
  std::vector<Vec> steps_;            // ZdStencil step vectors per generator
  std::vector<Generator> gens_;
  std::vector<std::vector<int>> adj_;  // explicit adjacency
  int explicit_maxdeg_ = 0;
};

// ---------------------------------------------------------------------------
// VertexSet
// ---------------------------------------------------------------------------

class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(const GroupGraph* g) : graph_(g) {}
  VertexSet(const GroupGraph* g, std::vector<Vertex> members) : graph_(g) {
    for (auto& v : members) g->check_vertex(v);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    members_ = std::move(members);
  }

  const GroupGraph& graph() const { return *graph_; }
  const std::vector<Vertex>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(const Vertex& v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
  }

  void insert(Vertex v) {
    auto it = std::lower_bound(members_.begin(), members_.end(), v);
    if (it == members_.end() || !(*it == v)) members_.insert(it, std::move(v));
  }

  VertexSet translated_left(const Vertex& h) const {
    std::vector<Vertex> out;
    out.reserve(members_.size());
    for (auto& v : members_) out.push_back(graph_->multiply(h, v));
    return VertexSet(graph_, std::move(out));
  }

  VertexSet translated_right(const Vertex& h) const {
    std::vector<Vertex> out;
    out.reserve(members_.size());
    for (auto& v : members_) out.push_back(graph_->multiply(v, h));
    return VertexSet(graph_, std::move(out));
  }

  VertexSet inverse_set() const {
    std::vector<Vertex> out;
    out.reserve(members_.size());
    for (auto& v : members_) out.push_back(graph_->inverse(v));
    return VertexSet(graph_, std::move(out));
  }

  VertexSet set_union(const VertexSet& o) const {
    std::vector<Vertex> out;
    std::set_union(members_.begin(), members_.end(), o.members_.begin(), o.members_.end(),
                   std::back_inserter(out));
    return VertexSet(graph_, std::move(out));
  }

  std::size_t sym_diff_size(const VertexSet& o) const {
    std::size_t inter = 0;
    auto a = members_.begin();
    auto b = o.members_.begin();
    while (a != members_.end() && b != o.members_.end()) {
      if (*a < *b)
        ++a;
      else if (*b < *a)
        ++b;
      else {
        ++inter;
        ++a;
        ++b;
      }
    }
    return members_.size() + o.members_.size() - 2 * inter;
  }

 private:
  const GroupGraph* graph_ = nullptr;
  std::vector<Vertex> members_;
};

// ---------------------------------------------------------------------------
// Boundary functionals
// ---------------------------------------------------------------------------

inline std::vector<std::pair<int, Vertex>> neighbors(const Vertex& g, const GroupGraph& graph,
                                                     Action action = Action::Right) {
  return graph.neighbors(g, action);
}

// outer vertex boundary: neighbors of Y outside Y
inline VertexSet vertex_boundary(const VertexSet& Y, Action action = Action::Right) {
  const GroupGraph& g = Y.graph();
  std::unordered_set<Vertex, VertexHash> out;
  for (auto& y : Y.members())
    for (auto& [gi, n] : g.neighbors(y, action))
      if (!Y.contains(n)) out.insert(n);
  std::vector<Vertex> v(out.begin(), out.end());
  return VertexSet(&g, std::move(v));
}

// directed edge boundary: #{(y, s) : y in Y, y.s not in Y}
inline Int directed_edge_boundary(const VertexSet& Y, Action action = Action::Right) {
  const GroupGraph& g = Y.graph();
  Int count = 0;
  for (auto& y : Y.members())
    for (auto& [gi, n] : g.neighbors(y, action)) {
      if (n == y) continue;  // loops never contribute
      if (!Y.contains(n)) ++count;
    }
  return count;
}

// undirected crossing edges, each counted once.  Every crossing edge has
// exactly one endpoint in Y (S symmetric), so counting distinct outside
// neighbors per inside vertex sees each edge once; quotient multi-edges
// collapse (loops never contribute).
inline Int undirected_edge_boundary(const VertexSet& Y, Action action = Action::Right) {
  const GroupGraph& g = Y.graph();
  Int count = 0;
  std::vector<Vertex> outs;
  for (auto& y : Y.members()) {
    outs.clear();
    for (auto& [gi, n] : g.neighbors(y, action)) {
      if (n == y) continue;
      if (!Y.contains(n)) outs.push_back(n);
    }
    std::sort(outs.begin(), outs.end());
    outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
    count += static_cast<Int>(outs.size());
  }
  return count;
}

inline Int edge_boundary(const VertexSet& Y, EdgeMode mode, Action action = Action::Right) {
  return mode == EdgeMode::DirectedPairs ? directed_edge_boundary(Y, action)
                                         : undirected_edge_boundary(Y, action);
}

// Per-generator directed counts D_s(F) = #{y in F : s y notin F} (left action).
inline std::vector<Int> per_generator_counts(const VertexSet& Y, Action action = Action::Left) {
  const GroupGraph& g = Y.graph();
  if (g.family() == Family::Explicit)
    throw UnsupportedFamilyError("per_generator_counts: explicit graphs have no generators");
  std::vector<Int> counts(g.generators().size(), 0);
  for (auto& y : Y.members())
    for (int gi = 0; gi < static_cast<int>(g.generators().size()); ++gi) {
      Vertex n = g.apply(y, gi, action);
      if (n == y) continue;
      if (!Y.contains(n)) ++counts[gi];
    }
  return counts;
}

// Undirected edge boundary in the left Cayley graph, per inverse-pair color.
inline Int left_edge_boundary(const VertexSet& Y) {
  return undirected_edge_boundary(Y, Action::Left);
}

struct SigmaBoundary {
  Int colored = 0;          // B_Sigma(Y)
  Int left = 0;             // B^L(Y)
  Int right_via_inverse = 0;  // B^L(Y^-1) = B^R(Y)
};

// Colored-sum boundary B_Sigma(Y) = B^L(Y) + B^L(Y^-1), with a direct count
// over the Sigma_+-colored graph as cross-check.
inline SigmaBoundary sigma_boundary(const VertexSet& Y) {
  const GroupGraph& g = Y.graph();
  if (!g.is_group_family())
    throw UnsupportedFamilyError("sigma_boundary: inversion unavailable for explicit graphs");
  SigmaBoundary r;
  r.left = undirected_edge_boundary(Y, Action::Left);
  r.right_via_inverse = undirected_edge_boundary(Y.inverse_set(), Action::Left);
  // direct count: left colors + right colors (each undirected colored edge once)
  Int direct = undirected_edge_boundary(Y, Action::Left) + undirected_edge_boundary(Y, Action::Right);
  r.colored = direct;
  return r;
}

// ball by BFS, with a cardinality guard
inline VertexSet ball(const GroupGraph& graph, int radius, std::size_t guard = 2'000'000) {
  std::unordered_set<Vertex, VertexHash> seen;
  std::deque<std::pair<Vertex, int>> queue;
  Vertex e = graph.identity();
  seen.insert(e);
  queue.push_back({e, 0});
  while (!queue.empty()) {
    auto [v, dist] = queue.front();
    queue.pop_front();
    if (dist == radius) continue;
    for (auto& [gi, n] : graph.neighbors(v, Action::Right)) {
      if (seen.count(n)) continue;
      seen.insert(n);
      if (seen.size() > guard) throw ResourceError("ball: cardinality guard exceeded");
      queue.push_back({n, dist + 1});
    }
  }
  std::vector<Vertex> out(seen.begin(), seen.end());
  return VertexSet(&graph, std::move(out));
}

// word-metric radius rad(F) = max_g d(e, g); BFS outward from identity
inline int set_radius(const VertexSet& F) {
  const GroupGraph& g = F.graph();
  std::unordered_map<Vertex, int, VertexHash> dist;
  std::deque<Vertex> queue;
  Vertex e = g.identity();
  dist[e] = 0;
  queue.push_back(e);
  std::size_t found = F.contains(e) ? 1 : 0;
  int radius = 0;
  while (!queue.empty() && found < F.size()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (auto& [gi, n] : g.neighbors(v, Action::Right)) {
      if (dist.count(n)) continue;
      dist[n] = dist[v] + 1;
      if (F.contains(n)) {
        ++found;
        radius = std::max(radius, dist[n]);
      }
      if (dist.size() > 20'000'000) throw ResourceError("set_radius: guard exceeded");
      queue.push_back(n);
    }
  }
  if (found < F.size()) throw ResourceError("set_radius: set not reachable from identity");
  return radius;
}

}  // namespace isolab
