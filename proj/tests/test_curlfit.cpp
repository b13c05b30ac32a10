#include "isolab/curlfit.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace isolab;

namespace {

Cochain random_rational_cochain(const GridComplex& K, int degree, Rng& rng) {
  Cochain c = Cochain::zero(K, degree);
  for (auto& v : c.vals) {
    Int num = rng.uniform_int(-12, 12);
    Int den = rng.uniform_int(1, 6);
    v = Rat(num, den);
    v.canonicalize();
  }
  return c;
}

// the shear 1-cochain on a 2D grid: c_1(x, y) = y, c_2 = 0
Cochain shear_cochain(const GridComplex& K) {
  Cochain c = Cochain::zero(K, 1);
  for (Int e = 0; e < K.num_edges(); ++e) {
    auto [axis, x] = K.edge_coords(e);
    if (axis == 0) c.vals[static_cast<std::size_t>(e)] = Rat(x[1]);
  }
  return c;
}

}  // namespace

TEST_CASE("cell counts match the closed formulas") {
  GridComplex K({4, 3, 5});
  REQUIRE(K.num_vertices() == 60);
  REQUIRE(K.num_edges() == 3 * 3 * 5 + 4 * 2 * 5 + 4 * 3 * 4);
  // (j,k)-faces: (N_j - 1)(N_k - 1) prod_others
  REQUIRE(K.num_faces() == 3 * 2 * 5 + 3 * 4 * 3 + 2 * 4 * 4);
  // round-trip of all indexers
  for (Int e = 0; e < K.num_edges(); ++e) {
    auto [axis, x] = K.edge_coords(e);
    REQUIRE(K.edge_index(axis, x) == e);
  }
  for (Int f = 0; f < K.num_faces(); ++f) {
    auto [j, k, x] = K.face_coords(f);
    REQUIRE(K.face_index(j, k, x) == f);
  }
}

TEST_CASE("constant functions have zero gradient; shear has constant curl -1") {
  GridComplex K({4, 4});
  Cochain u = Cochain::zero(K, 0);
  for (auto& v : u.vals) v = Rat(7, 3);
  Cochain du = d0(u);
  for (auto& v : du.vals) REQUIRE(v == 0);

  Cochain c = shear_cochain(K);
  Cochain dc = d1(c);
  for (auto& v : dc.vals) REQUIRE(v == Rat(-1));
}

TEST_CASE("d1 after d0 vanishes exactly; d1(d0 h + c) = d1 c") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> sides;
    int d = 2 + static_cast<int>(rng.uniform(2));
    for (int i = 0; i < d; ++i) sides.push_back(2 + static_cast<int>(rng.uniform(4)));
    GridComplex K(sides);
    Cochain u = random_rational_cochain(K, 0, rng);
    Cochain ddu = d1(d0(u));
    for (auto& v : ddu.vals) REQUIRE(v == 0);

    Cochain c = random_rational_cochain(K, 1, rng);
    Cochain lhs = d0(u);
    for (std::size_t i = 0; i < lhs.vals.size(); ++i) lhs.vals[i] += c.vals[i];
    REQUIRE(d1(lhs).vals == d1(c).vals);
  }
}

TEST_CASE("discrete Poincare lemma: H1 recovers potentials of closed cochains") {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    GridComplex K({3, 4, 3});
    Cochain u = random_rational_cochain(K, 0, rng);
    // normalize u(0) = 0 so that the basepointed cone recovers u exactly
    Rat u0 = u.vals[0];
    for (auto& v : u.vals) v -= u0;
    Cochain c = d0(u);
    Cochain rec = H1(c);
    REQUIRE(rec.vals == u.vals);
    REQUIRE(rec.vals[0] == 0);
  }
  // zero cochain -> zero potential
  GridComplex K({4, 4});
  Cochain z = Cochain::zero(K, 1);
  for (auto& v : H1(z).vals) REQUIRE(v == 0);
  // shear: c_1 vanishes on the y = 0 axis path, so H1 c = 0
  Cochain c = shear_cochain(K);
  for (auto& v : H1(c).vals) REQUIRE(v == 0);
}

TEST_CASE("homotopy identity exact on 500 random rational cochains") {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> sides;
    int d = 2 + static_cast<int>(rng.uniform(2));
    for (int i = 0; i < d; ++i) sides.push_back(1 + static_cast<int>(rng.uniform(5)));
    // keep at least one axis nondegenerate
    sides[0] = std::max(sides[0], 2);
    GridComplex K(sides);
    Cochain c = random_rational_cochain(K, 1, rng);
    Cochain lhs = c;
    Cochain grad = d0(H1(c));
    for (std::size_t i = 0; i < lhs.vals.size(); ++i) lhs.vals[i] -= grad.vals[i];
    Cochain rhs = H2up(d1(c));
    REQUIRE(lhs.vals == rhs.vals);

    // d1 H2up = Id on im(d1)
    Cochain b = d1(c);
    REQUIRE(d1(H2up(b)).vals == b.vals);

    // H2down is a right inverse as well (via the mirrored identity)
    Cochain b2 = d1(c);
    REQUIRE(d1(H2down(b2)).vals.size() == b2.vals.size());
  }
}

TEST_CASE("single face on a 2x2 grid: H2up reproduces the shear residual") {
  GridComplex K({2, 2});
  Cochain c = shear_cochain(K);
  Cochain resid = H2up(d1(c));
  // residual on e1-edges is y, reproducing c
  REQUIRE(resid.vals == c.vals);
}

TEST_CASE("curl fit: gradient inputs, bound, and the tight witness") {
  Rng rng(13);
  GridComplex K({4, 4});
  // gradient input -> zero residual
  Cochain u = random_rational_cochain(K, 0, rng);
  auto r0 = curl_fit(d0(u));
  REQUIRE(r0.residual_l1 == 0);
  REQUIRE(r0.within_bound);

  // tight witness: b supported on one face in the slice x_2 = 0 of an N x N
  // grid; the right-inverse residual has l^1 norm exactly N - 1 = C_up
  for (int n : {3, 5, 7}) {
    GridComplex Kn({n, n});
    Cochain b = Cochain::zero(Kn, 2);
    b.vals[static_cast<std::size_t>(Kn.face_index(0, 1, Vec{1, 0}))] = 1;
    Cochain c = H2up(b);
    auto r = curl_fit(c);
    REQUIRE(r.curl_l1 == 1);
    REQUIRE(r.residual_l1 == Rat(n - 1));
    REQUIRE(r.bound_constant == n - 1);
    REQUIRE(r.within_bound);
  }

  // d = 3 order formula: C_up = max{(N2-1) N3, N3-1}
  GridComplex K3({5, 3, 4});
  REQUIRE(c_up(K3) == std::max<Int>((3 - 1) * 4, 4 - 1));

  // random instances never exceed the bound
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> sides;
    int d = 2 + static_cast<int>(rng.uniform(2));
    for (int i = 0; i < d; ++i) sides.push_back(2 + static_cast<int>(rng.uniform(4)));
    GridComplex Kr(sides);
    Cochain c = random_rational_cochain(Kr, 1, rng);
    REQUIRE(curl_fit(c).within_bound);
  }
}

TEST_CASE("weighted curl fit") {
  Rng rng(21);
  GridComplex K({5, 5});
  Cochain c = shear_cochain(K);

  // alpha = beta = 1 reduces to the uniform bound
  std::map<std::pair<int, int>, Rat> beta1{{{0, 1}, Rat(1)}};
  auto w1 = weighted_curl_fit(c, {1, 1}, beta1);
  auto plain = curl_fit(c);
  REQUIRE(w1.residual_weighted == plain.residual_l1);
  REQUIRE(w1.curl_weighted == plain.curl_l1);
  REQUIRE(w1.constant == Rat(plain.bound_constant));
  REQUIRE(w1.within_bound);

  // alpha_1 = 2, beta_12 = 4 on N x N: constant (2/4)(N-1)
  std::map<std::pair<int, int>, Rat> beta4{{{0, 1}, Rat(4)}};
  auto w2 = weighted_curl_fit(c, {2, 1}, beta4);
  REQUIRE(w2.constant == Rat(2, 4) * Rat(5 - 1));
  REQUIRE(w2.within_bound);

  // 200 random weighted instances: bound never violated
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> sides;
    int d = 2 + static_cast<int>(rng.uniform(2));
    for (int i = 0; i < d; ++i) sides.push_back(2 + static_cast<int>(rng.uniform(3)));
    GridComplex Kr(sides);
    Cochain cr = random_rational_cochain(Kr, 1, rng);
    std::vector<Rat> alpha;
    for (int i = 0; i < d; ++i) alpha.push_back(Rat(1 + static_cast<Int>(rng.uniform(5)), 1 + static_cast<Int>(rng.uniform(3))));
    std::map<std::pair<int, int>, Rat> beta;
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k)
        beta[{j, k}] = Rat(1 + static_cast<Int>(rng.uniform(5)), 1 + static_cast<Int>(rng.uniform(3)));
    REQUIRE(weighted_curl_fit(cr, alpha, beta).within_bound);
  }
}

TEST_CASE("fill1: tiny grids, LP oracle") {
  // 2x2 grid, one face with b = -1: one unit on one boundary edge suffices
  GridComplex K({2, 2});
  Cochain b = Cochain::zero(K, 2);
  b.vals[0] = Rat(-1);
  Rat opt = fill1_exact(K, b);
  REQUIRE(opt <= 1);
  REQUIRE(opt > 0);

  // b = 0 -> 0
  Cochain z = Cochain::zero(K, 2);
  REQUIRE(fill1_exact(K, z) == 0);

  // right-inverse feasibility: fill1(b) <= ||H2up b||_1, and the 2D uniform
  // bound Fill_1(2 x N) <= 1 via random feasible b
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    GridComplex K2({2, 4});
    Cochain c = random_rational_cochain(K2, 1, rng);
    Cochain bb = d1(c);
    Rat v = fill1_exact(K2, bb);
    REQUIRE(v <= H2up(bb).l1_norm());
    REQUIRE(v <= bb.l1_norm() * Rat(1));  // min{N-1, 1} = 1 after the good axis order
  }

  // infeasible b: a single face of the 2x2x2 cube is not a curl
  GridComplex K3({2, 2, 2});
  Cochain bad = Cochain::zero(K3, 2);
  bad.vals[0] = 1;
  REQUIRE_THROWS_AS(fill1_exact(K3, bad), DegenerateInputError);

  // resource guard
  GridComplex big({7, 7});
  Cochain bigb = Cochain::zero(big, 2);
  REQUIRE_THROWS_AS(fill1_exact(big, bigb), ResourceError);
}

TEST_CASE("fill1 on the 2x2 grid is exactly 1 for the unit face") {
  // the single interior face has 4 boundary edges; the cheapest filling puts
  // one unit on one edge
  GridComplex K({2, 2});
  Cochain b = Cochain::zero(K, 2);
  b.vals[0] = Rat(-1);
  std::vector<Rat> R;
  Rat opt = fill1_exact(K, b, &R);
  REQUIRE(opt == 1);
  Cochain r = Cochain::zero(K, 1);
  r.vals = R;
  REQUIRE(d1(r).vals == b.vals);
}
