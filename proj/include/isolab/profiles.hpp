#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>

#include "isolab/cayley.hpp"

namespace isolab {

// ---------------------------------------------------------------------------
// Exact isoperimetric profiles by brute-force enumeration: connected classes
// via Redelmeier-style growth from the identity, disconnected minimizers via
// the far-apart-placement DP, plus the structural checks (Lipschitz, tail
// trimming, subadditivity) and the ratio diagnostic.
// ---------------------------------------------------------------------------

enum class Normalization { Vertex, DirectedEdge };

// Interns vertices of the (possibly infinite) graph into dense ids with
// memoized neighbor lists.  Everything the enumeration touches lives within
// word distance R_max of the identity, so the table stays small.
class InternedGraph {
 public:
  InternedGraph(const GroupGraph& g, Action action, std::size_t guard = 5'000'000)
      : g_(&g), action_(action), guard_(guard) {}

  const GroupGraph& graph() const { return *g_; }

  int id_of(const Vertex& v) {
    auto it = ids_.find(v);
    if (it != ids_.end()) return it->second;
    if (verts_.size() >= guard_) throw ResourceError("interned graph guard exceeded");
    int id = static_cast<int>(verts_.size());
    ids_.emplace(v, id);
    verts_.push_back(v);
    nbrs_.emplace_back();
    computed_.push_back(0);
    return id;
  }

  const Vertex& vertex(int id) const { return verts_[static_cast<std::size_t>(id)]; }

  std::span<const int> neighbors(int id) {
    if (!computed_[static_cast<std::size_t>(id)]) {
      Vertex v = verts_[static_cast<std::size_t>(id)];
      std::vector<int> tmp;
      for (auto& [gi, n] : g_->neighbors(v, action_)) {
        if (n == v) continue;  // loops never contribute
        tmp.push_back(id_of(n));
      }
      nbrs_[static_cast<std::size_t>(id)] = std::move(tmp);
      computed_[static_cast<std::size_t>(id)] = 1;
    }
    return nbrs_[static_cast<std::size_t>(id)];
  }

  std::size_t size() const { return verts_.size(); }

 private:
  const GroupGraph* g_;
  Action action_;
  std::size_t guard_;
  std::vector<Vertex> verts_;
  std::unordered_map<Vertex, int, VertexHash> ids_;
  std::vector<std::vector<int>> nbrs_;
  std::vector<char> computed_;
};

struct ProfileTable {
  Normalization norm = Normalization::DirectedEdge;
  int degree = 0;
  int r_max = 0;
  std::vector<Int> values;            // I°(r), r = 1..r_max
  std::vector<Int> minorant;          // suffix-min over the window
  std::vector<VertexSet> witnesses;   // one minimizer per r
  bool window_truncated = true;       // minorant uses s <= r_max only

  Int value(int r) const { return values[static_cast<std::size_t>(r - 1)]; }
  Int minorant_at(int r) const { return minorant[static_cast<std::size_t>(r - 1)]; }

  void rebuild_minorant() {
    minorant = values;
    for (int r = r_max - 1; r >= 1; --r)
      minorant[r - 1] = std::min(minorant[r - 1], minorant[r]);
  }
};

struct ConnectedMinTable {
  int r_max = 0;
  std::vector<Int> values;  // c(r): min over connected classes through identity
  std::vector<VertexSet> witnesses;
};

namespace detail {

// Redelmeier growth from a root: enumerates every connected set containing
// the root exactly once, maintaining directed-edge and vertex boundary
// counts incrementally.
class ConnectedEnumerator {
 public:
  ConnectedEnumerator(InternedGraph& ig, int r_max, std::size_t max_sets)
      : ig_(ig), r_max_(r_max), max_sets_(max_sets) {}

  // callback(set_ids, edge_boundary, vertex_boundary)
  template <typename F>
  void run(int root, F&& callback) {
    callback_ = std::function<void(const std::vector<int>&, Int, Int)>(std::forward<F>(callback));
    status_.assign(ig_.size() + 1024, Status::Free);
    refcount_.assign(status_.size(), 0);
    pool_.clear();
    set_.clear();
    edge_b_ = 0;
    vertex_b_ = 0;
    sets_seen_ = 0;
    ensure(root);
    status_[static_cast<std::size_t>(root)] = Status::Listed;
    pool_.push_back(root);
    grow();
  }

 private:
  enum class Status : unsigned char { Free, Listed, InSet, Blocked };

  void ensure(int id) {
    if (static_cast<std::size_t>(id) >= status_.size()) {
      status_.resize(static_cast<std::size_t>(id) + 1024, Status::Free);
      refcount_.resize(status_.size(), 0);
    }
  }

  void include(int c) {
    auto nb = ig_.neighbors(c);
    for (int n : nb) ensure(n);
    // vertex boundary: c leaves the outside set
    if (refcount_[static_cast<std::size_t>(c)] > 0) --vertex_b_;
    for (int n : nb) {
      if (status_[static_cast<std::size_t>(n)] == Status::InSet) {
        --edge_b_;  // the pair (n -> c) is no longer boundary
      } else {
        ++edge_b_;  // new pair (c -> n)
        if (refcount_[static_cast<std::size_t>(n)]++ == 0) ++vertex_b_;
      }
    }
    status_[static_cast<std::size_t>(c)] = Status::InSet;
    set_.push_back(c);
  }

  void exclude(int c) {
    set_.pop_back();
    status_[static_cast<std::size_t>(c)] = Status::Listed;  // caller adjusts
    auto nb = ig_.neighbors(c);
    for (int n : nb) {
      if (status_[static_cast<std::size_t>(n)] == Status::InSet) {
        ++edge_b_;
      } else {
        --edge_b_;
        if (--refcount_[static_cast<std::size_t>(n)] == 0) --vertex_b_;
      }
    }
    if (refcount_[static_cast<std::size_t>(c)] > 0) ++vertex_b_;
  }

  void grow() {
    std::vector<int> popped;
    while (!pool_.empty()) {
      int c = pool_.back();
      pool_.pop_back();
      popped.push_back(c);
      include(c);
      if (++sets_seen_ > max_sets_)
        throw ResourceError("profile enumeration budget exceeded; refusing partial table");
      callback_(set_, edge_b_, vertex_b_);
      if (static_cast<int>(set_.size()) < r_max_) {
        std::size_t added = 0;
        for (int n : ig_.neighbors(c)) {
          ensure(n);
          if (status_[static_cast<std::size_t>(n)] == Status::Free) {
            status_[static_cast<std::size_t>(n)] = Status::Listed;
            pool_.push_back(n);
            ++added;
          }
        }
        grow();
        for (std::size_t i = 0; i < added; ++i) {
          status_[static_cast<std::size_t>(pool_.back())] = Status::Free;
          pool_.pop_back();
        }
      }
      exclude(c);
      status_[static_cast<std::size_t>(c)] = Status::Blocked;
    }
    for (auto it = popped.rbegin(); it != popped.rend(); ++it) {
      status_[static_cast<std::size_t>(*it)] = Status::Listed;
      pool_.push_back(*it);
    }
  }

  InternedGraph& ig_;
  int r_max_;
  std::size_t max_sets_;
  std::function<void(const std::vector<int>&, Int, Int)> callback_;
  std::vector<Status> status_;
  std::vector<Int> refcount_;
  std::vector<int> pool_;
  std::vector<int> set_;
  Int edge_b_ = 0;
  Int vertex_b_ = 0;
  std::size_t sets_seen_ = 0;
};

inline void combinations(std::size_t n, std::size_t k,
                         const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) break;
      if (i == 0) return;
    }
    ++idx[i];
    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

struct ProfileOptions {
  std::size_t max_sets = 400'000'000;     // enumeration budget (records)
  std::size_t max_subsets = 30'000'000;   // exhaustive budget for finite graphs
  bool use_disconnected_dp = true;        // only valid on infinite transitive families
  std::vector<Vertex> ground_set;         // finite-graph search space (default: all)
  Action action = Action::Right;          // edge convention for the boundary counts
};

// connected minimum through the identity, translation-normalized
inline ConnectedMinTable connected_min_table(const GroupGraph& g, int r_max,
                                             Normalization norm,
                                             const ProfileOptions& opt = {}) {
  if (!g.is_infinite_transitive())
    throw UnsupportedFamilyError("connected_min_table needs an infinite vertex-transitive family");
  InternedGraph ig(g, opt.action);
  int root = ig.id_of(g.identity());

  ConnectedMinTable out;
  out.r_max = r_max;
  out.values.assign(static_cast<std::size_t>(r_max), std::numeric_limits<Int>::max());
  std::vector<std::vector<int>> best_sets(static_cast<std::size_t>(r_max));

  detail::ConnectedEnumerator en(ig, r_max, opt.max_sets);
  en.run(root, [&](const std::vector<int>& set, Int eb, Int vb) {
    Int val = (norm == Normalization::DirectedEdge) ? eb : vb;
    std::size_t r = set.size() - 1;
    if (val < out.values[r]) {
      out.values[r] = val;
      best_sets[r] = set;
    }
  });

  out.witnesses.reserve(static_cast<std::size_t>(r_max));
  for (int r = 1; r <= r_max; ++r) {
    std::vector<Vertex> vs;
    for (int id : best_sets[static_cast<std::size_t>(r - 1)]) vs.push_back(ig.vertex(id));
    out.witnesses.emplace_back(&g, std::move(vs));
  }
  return out;
}

namespace detail {

// translate B far from A (on the side that is an automorphism for the chosen
// edge convention) and verify by recomputation that boundaries do not interact
inline VertexSet far_union(const GroupGraph& g, const VertexSet& A, const VertexSet& B,
                           Normalization norm, Int want_val, Action action) {
  Vertex step = g.apply(g.identity(), 0, Action::Right);  // first generator
  Int k = 4;
  for (int attempt = 0; attempt < 24; ++attempt, k *= 2) {
    Vertex h = g.identity();
    for (Int i = 0; i < k; ++i) h = g.multiply(h, step);
    // right-action edges are invariant under left translation and vice versa
    VertexSet moved = (action == Action::Right) ? B.translated_left(h) : B.translated_right(h);
    bool overlap = false;
    for (auto& v : moved.members())
      if (A.contains(v)) {
        overlap = true;
        break;
      }
    if (overlap) continue;
    VertexSet u = A.set_union(moved);
    Int got = (norm == Normalization::DirectedEdge)
                  ? directed_edge_boundary(u, action)
                  : static_cast<Int>(vertex_boundary(u, action).size());
    if (got == want_val) return u;
  }
  throw ResourceError("far_union: could not separate components");
}

}  // namespace detail

inline ProfileTable exact_profile(const GroupGraph& g, int r_max, Normalization norm,
                                  const ProfileOptions& opt = {}) {
  ProfileTable table;
  table.norm = norm;
  table.degree = g.degree();
  table.r_max = r_max;
  table.values.assign(static_cast<std::size_t>(r_max), std::numeric_limits<Int>::max());
  table.witnesses.assign(static_cast<std::size_t>(r_max), VertexSet(&g));

  if (g.is_infinite_transitive()) {
    ConnectedMinTable conn = connected_min_table(g, r_max, norm, opt);
    for (int r = 1; r <= r_max; ++r) {
      table.values[static_cast<std::size_t>(r - 1)] = conn.values[static_cast<std::size_t>(r - 1)];
      table.witnesses[static_cast<std::size_t>(r - 1)] = conn.witnesses[static_cast<std::size_t>(r - 1)];
    }
    if (opt.use_disconnected_dp) {
      // I°(r) = min(c(r), min_k I°(k) + I°(r-k)); far-apart placement realizes
      // the split, and the recomputed boundary of the union certifies it.
      for (int r = 2; r <= r_max; ++r) {
        for (int k = 1; k <= r / 2; ++k) {
          Int cand = table.value(k) + table.value(r - k);
          if (cand < table.value(r)) {
            VertexSet u = detail::far_union(g, table.witnesses[static_cast<std::size_t>(k - 1)],
                                            table.witnesses[static_cast<std::size_t>(r - k - 1)],
                                            norm, cand, opt.action);
            table.values[static_cast<std::size_t>(r - 1)] = cand;
            table.witnesses[static_cast<std::size_t>(r - 1)] = u;
          }
        }
      }
    }
  } else {
    // finite graphs: raw exhaustive search over a configured ground set
    std::vector<Vertex> ground = opt.ground_set;
    if (ground.empty()) {
      if (g.family() == Family::Torus) {
        Vec v(g.dim(), 0);
        std::function<void(int)> rec = [&](int axis) {
          if (axis == g.dim()) {
            ground.push_back(Vertex{v});
            return;
          }
          for (Int x = 0; x < g.modulus(); ++x) {
            v[axis] = x;
            rec(axis + 1);
          }
        };
        rec(0);
      } else {
        for (std::size_t i = 0; i < g.explicit_size(); ++i)
          ground.push_back(Vertex{Vec{static_cast<Int>(i)}});
      }
    }
    std::size_t n = ground.size();
    for (int r = 1; r <= r_max; ++r) {
      // subset-count guard
      double log_count = 0;
      for (int i = 0; i < r; ++i) log_count += std::log2(static_cast<double>(n - i) / (i + 1));
      if (log_count > std::log2(static_cast<double>(opt.max_subsets)))
        throw ResourceError("exact_profile: exhaustive budget exceeded; refusing partial table");
      Int best = std::numeric_limits<Int>::max();
      std::vector<std::size_t> best_idx;
      detail::combinations(n, static_cast<std::size_t>(r), [&](const std::vector<std::size_t>& idx) {
        std::vector<Vertex> vs;
        vs.reserve(idx.size());
        for (auto i : idx) vs.push_back(ground[i]);
        VertexSet Y(&g, std::move(vs));
        Int val = (norm == Normalization::DirectedEdge)
                      ? directed_edge_boundary(Y, opt.action)
                      : static_cast<Int>(vertex_boundary(Y, opt.action).size());
        if (val < best) {
          best = val;
          best_idx = idx;
        }
      });
      table.values[static_cast<std::size_t>(r - 1)] = best;
      std::vector<Vertex> vs;
      for (auto i : best_idx) vs.push_back(ground[i]);
      table.witnesses[static_cast<std::size_t>(r - 1)] = VertexSet(&g, std::move(vs));
    }
  }

  table.rebuild_minorant();
  return table;
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

struct ProfileCheckReport {
  bool passed = true;
  std::vector<std::string> violations;
  Int max_step = 0;  // Lipschitz: max |I°(r+1) - I°(r)|

  void fail(std::string msg) {
    passed = false;
    violations.push_back(std::move(msg));
  }
};

// |I°(r+1) - I°(r)| <= Δ, and the one-point deletion bound
// I°(r) <= I°(r+1) + 1 (vertex) resp. + Δ (edge).
inline ProfileCheckReport check_lipschitz(const ProfileTable& t) {
  ProfileCheckReport rep;
  Int delta = t.degree;
  Int del_cost = (t.norm == Normalization::Vertex) ? 1 : delta;
  for (int r = 1; r < t.r_max; ++r) {
    Int step = t.value(r + 1) - t.value(r);
    rep.max_step = std::max(rep.max_step, step < 0 ? -step : step);
    if (t.value(r + 1) > t.value(r) + delta)
      rep.fail("forward Lipschitz fails at r=" + std::to_string(r));
    if (t.value(r) > t.value(r + 1) + del_cost)
      rep.fail("deletion Lipschitz fails at r=" + std::to_string(r));
  }
  return rep;
}

// tail trimming I°(r) <= I°(s) + cost*(s-r) and subadditivity
inline ProfileCheckReport check_trim_subadd(const ProfileTable& t, bool subadditivity_applicable) {
  ProfileCheckReport rep;
  Int del_cost = (t.norm == Normalization::Vertex) ? 1 : t.degree;
  for (int r = 1; r <= t.r_max; ++r)
    for (int s = r; s <= t.r_max; ++s)
      if (t.value(r) > t.value(s) + del_cost * (s - r))
        rep.fail("trimming fails at r=" + std::to_string(r) + ", s=" + std::to_string(s));
  if (subadditivity_applicable) {
    for (int r1 = 1; r1 <= t.r_max; ++r1)
      for (int r2 = r1; r1 + r2 <= t.r_max; ++r2)
        if (t.value(r1 + r2) > t.value(r1) + t.value(r2))
          rep.fail("subadditivity fails at (" + std::to_string(r1) + "," + std::to_string(r2) + ")");
  }
  return rep;
}

struct RatioScan {
  double max_ratio = 1.0;
  int argmax = 1;
  std::vector<double> ratios;  // per r
  bool window_caveat = true;   // minorant computed within the window only
};

inline RatioScan ratio_scan(const ProfileTable& t) {
  RatioScan rs;
  rs.ratios.resize(static_cast<std::size_t>(t.r_max));
  bool any_positive = false;
  for (int r = 1; r <= t.r_max; ++r) {
    Int m = t.minorant_at(r);
    double ratio = 1.0;
    if (m > 0) {
      any_positive = true;
      ratio = static_cast<double>(t.value(r)) / static_cast<double>(m);
    }
    rs.ratios[static_cast<std::size_t>(r - 1)] = ratio;
    if (ratio > rs.max_ratio) {
      rs.max_ratio = ratio;
      rs.argmax = r;
    }
  }
  if (!any_positive) throw DegenerateInputError("ratio_scan: minorant vanishes on the whole window");
  return rs;
}

// grow Y by k points, boundary-first; |∂Z| <= |∂Y| + kΔ
inline VertexSet padding(const VertexSet& Y, int k) {
  const GroupGraph& g = Y.graph();
  VertexSet Z = Y;
  for (int i = 0; i < k; ++i) {
    VertexSet bd = vertex_boundary(Z);
    if (bd.empty()) throw CapacityError("padding: no room to grow");
    Z.insert(bd.members().front());  // lexicographically least boundary vertex
  }
  return Z;
}

// ---------------------------------------------------------------------------
// Certified bracket for the colored Σ-profile.  The Σ-graph is homogeneous
// only under the two-sided action, so I°_Σ is not reachable by translation
// enumeration; instead we certify 2 I^L(r) <= I°_Σ(r) <= B_Σ(Y*_r) with Y*_r
// a left minimizer, and check the theorem bound B_Σ(Y*_r) <= I^L(r) + Δ r.
// ---------------------------------------------------------------------------

struct SigmaSandwich {
  int r_max = 0;
  std::vector<Int> left_profile;  // I^L_edge(r) on the (simple) left Cayley graph
  std::vector<Int> lower;         // 2 I^L(r)
  std::vector<Int> upper;         // B_Σ of the left minimizer
  bool ok = true;                 // lower <= upper <= I^L + Δ r throughout
};

inline SigmaSandwich sigma_profile_sandwich(const GroupGraph& g, int r_max,
                                            const ProfileOptions& base_opt = {}) {
  ProfileOptions opt = base_opt;
  opt.action = Action::Left;
  ProfileTable left = exact_profile(g, r_max, Normalization::DirectedEdge, opt);
  SigmaSandwich out;
  out.r_max = r_max;
  Int delta = g.degree();
  for (int r = 1; r <= r_max; ++r) {
    Int il = left.value(r);
    SigmaBoundary sb = sigma_boundary(left.witnesses[static_cast<std::size_t>(r - 1)]);
    out.left_profile.push_back(il);
    out.lower.push_back(2 * il);
    out.upper.push_back(sb.colored);
    if (sb.colored != sb.left + sb.right_via_inverse) out.ok = false;
    if (2 * il > sb.colored) out.ok = false;
    if (sb.colored > il + delta * r) out.ok = false;
  }
  return out;
}

}  // namespace isolab
