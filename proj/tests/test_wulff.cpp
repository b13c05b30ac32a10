#include "isolab/wulff.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "isolab/cayley.hpp"

using namespace isolab;

namespace {

// shoelace area of a polygon with rational vertices
Rat polygon_area(const std::vector<std::vector<Rat>>& verts) {
  Rat s = 0;
  std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = verts[i];
    const auto& q = verts[(i + 1) % n];
    s += p[0] * q[1] - q[0] * p[1];
  }
  s /= 2;
  return s < 0 ? Rat(-s) : s;
}

// Per_tau of a polygon: sum over edges of tau(rot90(edge vector)), exact for
// 1-homogeneous tau
Rat polygon_tau_perimeter(const std::vector<std::vector<Rat>>& verts, const Anisotropy& a) {
  Rat s = 0;
  std::size_t n = verts.size();
  for (std::size_t i = 0; i < n; ++i) {
    Rat ex = verts[(i + 1) % n][0] - verts[i][0];
    Rat ey = verts[(i + 1) % n][1] - verts[i][1];
    // tau(-ey, ex) via rational extension of tau
    Rat acc = 0;
    for (std::size_t k = 0; k < a.reps.size(); ++k) {
      Rat ip = Rat(a.reps[k][0]) * (-ey) + Rat(a.reps[k][1]) * ex;
      if (ip < 0) ip = -ip;
      acc += a.weights[k] * ip;
    }
    s += acc;
  }
  return s;
}

std::vector<Vec> grow_polyomino(const GroupGraph& g, int size, Rng& rng) {
  std::vector<Vertex> members{g.identity()};
  std::unordered_set<Vertex, VertexHash> in(members.begin(), members.end());
  while (static_cast<int>(members.size()) < size) {
    const Vertex& base = members[rng.uniform(members.size())];
    auto nb = g.neighbors(base);
    const Vertex& cand = nb[rng.uniform(nb.size())].second;
    if (in.insert(cand).second) members.push_back(cand);
  }
  std::vector<Vec> pts;
  for (auto& m : members) pts.push_back(m.w);
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<Vec> random_gl2z(Rng& rng, int ops = 6) {
  std::vector<Vec> B = {Vec{1, 0}, Vec{0, 1}};
  for (int k = 0; k < ops; ++k) {
    Int t = rng.uniform_int(-2, 2);
    if (rng.coin()) {
      // column op: b1 += t b2
      B[0][0] += t * B[0][1];
      B[1][0] += t * B[1][1];
    } else {
      B[0][1] += t * B[0][0];
      B[1][1] += t * B[1][0];
    }
  }
  return B;
}

}  // namespace

TEST_CASE("continuum constants: axis and Heisenberg base") {
  REQUIRE(continuum_constant(Anisotropy::axis_split(2)) == Catch::Approx(4.0).margin(1e-12));
  REQUIRE(continuum_constant(Anisotropy::axis_split(3)) == Catch::Approx(6.0).margin(1e-12));
  REQUIRE(continuum_constant(Anisotropy::axis_directed_units(2)) == Catch::Approx(8.0).margin(1e-12));
}

TEST_CASE("wulff body geometry is internally consistent (d = 2)") {
  Anisotropy hex;
  hex.d = 2;
  hex.reps = {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}};
  hex.weights = {1, 1, 1};
  WulffBody W = wulff_body(hex);
  REQUIRE(polygon_area(W.vertices) == zonotope_volume(hex));
  // Per_tau(W) = d |W| for the Wulff body
  REQUIRE(polygon_tau_perimeter(W.vertices, hex) == 2 * zonotope_volume(hex));

  Anisotropy ax = Anisotropy::axis_split(2);
  WulffBody Wax = wulff_body(ax);
  REQUIRE(polygon_area(Wax.vertices) == Rat(4));
  REQUIRE(zonotope_volume(ax) == Rat(4));
}

TEST_CASE("wulff body vertices d = 3 (axis cube)") {
  Anisotropy ax = Anisotropy::axis_split(3);
  WulffBody W = wulff_body(ax);
  REQUIRE(W.vertices.size() == 8);
  REQUIRE(W.volume == Rat(8));
  for (auto& v : W.vertices)
    for (auto& c : v) REQUIRE((c == 1 || c == -1));
}

TEST_CASE("sampler: 5x5 square at rho = 2.5, nestedness, density") {
  Anisotropy ax = Anisotropy::axis_split(2);
  auto pts = sampler_points(ax, rat_from_decimal("2.5"));
  REQUIRE(pts.size() == 25);

  auto small = sampler_points(ax, Rat(2));
  for (auto& p : small) {
    REQUIRE(std::binary_search(pts.begin(), pts.end(), p));
  }

  auto big = sampler_points(ax, Rat(100));
  double density = static_cast<double>(big.size()) / (100.0 * 100.0);
  REQUIRE(std::abs(density - 4.0) / 4.0 < 0.03);
}

TEST_CASE("axis ratio is exactly 2d on cube samplers") {
  Anisotropy ax2 = Anisotropy::axis_split(2);
  for (int n : {1, 2, 3, 7}) {
    // n x n squares: handmade, ratio exactly 4
    std::vector<Vec> sq;
    for (Int x = 0; x < n; ++x)
      for (Int y = 0; y < n; ++y) sq.push_back(Vec{x, y});
    Rat per = discrete_perimeter(sq, ax2);
    REQUIRE(per == Rat(4 * n));
  }
  auto rows = wulff_ratio_scan(ax2, {Rat(5), Rat(10)});
  for (auto& r : rows) REQUIRE(r.ratio == Catch::Approx(4.0).margin(1e-12));

  Anisotropy ax3 = Anisotropy::axis_split(3);
  auto rows3 = wulff_ratio_scan(ax3, {Rat(4), Rat(8)});
  for (auto& r : rows3) REQUIRE(r.ratio == Catch::Approx(6.0).margin(1e-12));
}

TEST_CASE("general stencil ratio converges to the zonotope constant") {
  Anisotropy hex;
  hex.d = 2;
  hex.reps = {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}};
  hex.weights = {1, 1, 1};
  double cw = continuum_constant(hex);
  auto rows = wulff_ratio_scan(hex, {Rat(20), Rat(40), Rat(80)});
  double err_prev = 1e9;
  for (auto& r : rows) {
    double err = std::abs(r.ratio - cw) / cw;
    REQUIRE(err < 0.05 + 1e-12);
    REQUIRE(err <= err_prev + 1e-9);
    err_prev = err;
  }
  // never meaningfully below the sharp constant (the exact pointwise lower
  // bound is an axis-stencil statement; general samplers may undershoot by a
  // vanishing finite-size term)
  for (auto& r : rows) REQUIRE(r.ratio > cw * (1.0 - 1e-3));
}

TEST_CASE("fiber lifts: ratio formula and direct product-graph oracle") {
  // d = 1, m = 3: h_S = 2 * 3 = 6, segments x fiber attain it
  auto rows13 = fiber_lift_ratio(1, 3, {Rat(10)});
  REQUIRE(rows13[0].ratio == Catch::Approx(6.0).margin(1e-9));

  // m = 1 degenerates to the axis constant 2d
  auto rows21 = fiber_lift_ratio(2, 1, {Rat(10)});
  REQUIRE(rows21[0].ratio == Catch::Approx(4.0).margin(1e-9));

  // d = 2, m = 2 at rho = 60: within 5% of 4 sqrt(2)
  auto rows22 = fiber_lift_ratio(2, 2, {Rat(60)});
  double target = 4.0 * std::sqrt(2.0);
  REQUIRE(std::abs(rows22[0].ratio - target) / target < 0.05);

  // oracle: literally enumerate the lift in Z^2 x Z_3 and count its boundary
  int m = 3;
  Anisotropy ax = Anisotropy::axis_split(2);
  auto base = sampler_points(ax, Rat(4));
  std::unordered_set<Vec, VecHash> in;
  for (auto& p : base)
    for (Int z = 0; z < m; ++z) in.insert(Vec{p[0], p[1], z});
  Int direct = 0;
  for (auto& q : in) {
    for (auto step : {Vec{1, 0, 0}, Vec{-1, 0, 0}, Vec{0, 1, 0}, Vec{0, -1, 0}}) {
      if (!in.count(vadd(q, step))) ++direct;
    }
    for (Int dz : {1, -1}) {
      Vec r{q[0], q[1], ((q[2] + dz) % m + m) % m};
      if (!(r == q) && !in.count(r)) ++direct;
    }
  }
  auto row = fiber_lift_ratio(2, m, {Rat(4)})[0];
  REQUIRE(direct == row.lift_boundary);
}

TEST_CASE("discrete Wulff lower bound, Loomis-Whitney, column counting") {
  GroupGraph z2 = GroupGraph::zd_axis(2);
  Anisotropy ax = Anisotropy::axis_split(2);
  Rng rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    auto pts = grow_polyomino(z2, 1 + static_cast<int>(rng.uniform(18)), rng);
    Int per = directed_perimeter_stencil(pts, ax.reps);
    double n = static_cast<double>(pts.size());
    REQUIRE(static_cast<double>(per) >= 4.0 * std::sqrt(n) - 1e-9);
    auto proj = projection_sizes(pts, 2);
    REQUIRE(static_cast<double>(n) <= static_cast<double>(proj[0]) * static_cast<double>(proj[1]));
    REQUIRE(per >= 2 * (proj[0] + proj[1]));
  }
}

TEST_CASE("unimodular change of basis preserves the directed perimeter") {
  GroupGraph z2 = GroupGraph::zd_axis(2);
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    auto pts = grow_polyomino(z2, 1 + static_cast<int>(rng.uniform(12)), rng);
    std::vector<Vec> B = random_gl2z(rng);
    // stencil S = {+-b_i} where b_i are the columns of B
    std::vector<Vec> stencil = {Vec{B[0][0], B[1][0]}, Vec{B[0][1], B[1][1]}};
    // map Y through B (so that B^{-1}(BY) = Y is the axis side)
    std::vector<Vec> mapped;
    for (auto& p : pts)
      mapped.push_back(Vec{B[0][0] * p[0] + B[0][1] * p[1], B[1][0] * p[0] + B[1][1] * p[1]});
    std::sort(mapped.begin(), mapped.end());
    Int lhs = directed_perimeter_stencil(mapped, stencil);
    Int rhs = directed_perimeter_stencil(pts, {Vec{1, 0}, Vec{0, 1}});
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("sampler budget guard") {
  Anisotropy ax = Anisotropy::axis_split(3);
  REQUIRE_THROWS_AS(sampler_points(ax, Rat(10000)), ResourceError);
}

TEST_CASE("degenerate anisotropies are rejected") {
  Anisotropy bad;
  bad.d = 2;
  bad.reps = {Vec{1, 0}};
  bad.weights = {1};
  REQUIRE_THROWS_AS(bad.validate(), EncodingError);

  Anisotropy neg;
  neg.d = 2;
  neg.reps = {Vec{1, 0}, Vec{0, 1}};
  neg.weights = {1, Rat(-1)};
  REQUIRE_THROWS_AS(neg.validate(), EncodingError);
}
