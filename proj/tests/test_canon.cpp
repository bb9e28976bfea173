// Tests for the equivalence invariants, canonical forms, the consistency
// report, and the constructive decomposition. Small cases are checked against
// hand-computed values; randomized batteries check the structural properties
// (invariance under the group action, canonical fixed points, certificate
// validity) that the implementation must satisfy exactly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dring/canon.hpp"
#include "dring/errors.hpp"
#include "dring/matrix.hpp"
#include "dring/scalar.hpp"

namespace {

using namespace dring;

struct TestRng {
  std::mt19937_64 eng;
  explicit TestRng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }
};

Rational small_rational(TestRng& g, int num_bound, int den_bound) {
  Rational q(g.range(-num_bound, num_bound), g.range(1, den_bound));
  q.canonicalize();
  return q;
}

RationalRing::Elem rand_elem(const RationalRing&, TestRng& g) {
  return small_rational(g, 3, 3);
}
PrimeField::Elem rand_elem(const PrimeField& F, TestRng& g) {
  return static_cast<std::uint64_t>(g.below(static_cast<int>(F.modulus())));
}
QuaternionRing::Elem rand_elem(const QuaternionRing&, TestRng& g) {
  return Quaternion{small_rational(g, 2, 2), small_rational(g, 2, 2), small_rational(g, 2, 2),
                    small_rational(g, 2, 2)};
}

template <class R>
Matrix<R> rand_mat(const R& ring, int rows, int cols, TestRng& g) {
  Matrix<R> out(ring, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(i, j) = rand_elem(ring, g);
  return out;
}

template <class R>
Matrix<R> rand_nonsingular(const R& ring, int n, TestRng& g) {
  for (;;) {
    Matrix<R> cand = rand_mat(ring, n, n, g);
    if (rank(cand) == n) return cand;
  }
}

struct NamedCheck {
  void operator()(const std::vector<std::pair<std::string, int>>& got,
                  const std::vector<std::pair<std::string, int>>& want) const {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CAPTURE(want[i].first);
      CHECK(got[i].first == want[i].first);
      CHECK(got[i].second == want[i].second);
    }
  }
};

// Check every stored value of an invariants object against a sparse list of
// expectations; everything not listed must be zero.
void expect_sparse(const QuaternityInvariants& inv,
                   const std::vector<std::pair<std::string, int>>& nonzero) {
  for (const auto& [name, value] : inv.named_values()) {
    int want = 0;
    for (const auto& [n2, v2] : nonzero)
      if (n2 == name) want = v2;
    CAPTURE(name);
    CHECK(value == want);
  }
}

template <class R>
void check_certificate(const R& ring, const Matrix<R>& A, const Matrix<R>& B, const Matrix<R>& C,
                       const Matrix<R>& D) {
  auto dec = decompose_quaternity(A, B, C, D);
  CHECK(matrix_eq(mul(mul(dec.M, A), dec.P), dec.canonical.S_a));
  CHECK(matrix_eq(mul(mul(dec.M, B), dec.Q), dec.canonical.S_b));
  CHECK(matrix_eq(mul(mul(dec.S, C), dec.P), dec.canonical.S_c));
  CHECK(matrix_eq(mul(mul(dec.T, D), dec.P), dec.canonical.S_d));
  // The transforms must all be invertible.
  CHECK(matrix_eq(mul(invert_matrix(dec.M), dec.M), identity(ring, dec.M.rows())));
  CHECK(matrix_eq(mul(invert_matrix(dec.P), dec.P), identity(ring, dec.P.rows())));
  CHECK(matrix_eq(mul(invert_matrix(dec.Q), dec.Q), identity(ring, dec.Q.rows())));
  CHECK(matrix_eq(mul(invert_matrix(dec.S), dec.S), identity(ring, dec.S.rows())));
  CHECK(matrix_eq(mul(invert_matrix(dec.T), dec.T), identity(ring, dec.T.rows())));
  // The reported invariants are the ones computed from the inputs, and the
  // canonical form is rebuilt from them alone.
  CHECK(dec.inv == quaternity_invariants(A, B, C, D));
  auto rebuilt = build_canonical_quaternity(ring, dec.inv);
  CHECK(matrix_eq(dec.canonical.S_a, rebuilt.S_a));
  CHECK(matrix_eq(dec.canonical.S_b, rebuilt.S_b));
  CHECK(matrix_eq(dec.canonical.S_c, rebuilt.S_c));
  CHECK(matrix_eq(dec.canonical.S_d, rebuilt.S_d));
  // The canonical quaternity lies in the same equivalence class, so it must
  // reproduce the invariants verbatim, profile included.
  CHECK(quaternity_invariants(dec.canonical.S_a, dec.canonical.S_b, dec.canonical.S_c,
                              dec.canonical.S_d) == dec.inv);
  // And the recomputed-rank consistency report must come out clean.
  auto rep = verify_consistency(A, B, C, D, dec.inv);
  CHECK(rep.all_ok);
}

template <class R>
void random_certificate_battery(const R& ring, std::uint64_t seed, int count, int max_dim) {
  TestRng g(seed);
  for (int it = 0; it < count; ++it) {
    int m = g.range(0, max_dim), p = g.range(0, max_dim), q = g.range(0, max_dim);
    int s = g.range(0, max_dim), t = g.range(0, max_dim);
    CAPTURE(it);
    CAPTURE(m);
    CAPTURE(p);
    CAPTURE(q);
    CAPTURE(s);
    CAPTURE(t);
    check_certificate(ring, rand_mat(ring, m, p, g), rand_mat(ring, m, q, g),
                      rand_mat(ring, s, p, g), rand_mat(ring, t, p, g));
  }
}

}  // namespace

TEST_CASE("invariants of hand-checked rational quaternities") {
  RationalRing Q;
  using M = Matrix<RationalRing>;

  SUBCASE("single invertible A alone") {
    // A = [1], B and C and D empty on one side each.
    auto inv = quaternity_invariants(M::from_int_rows(Q, {{1}}), M(Q, 1, 0), M(Q, 0, 1),
                                     M(Q, 0, 1));
    expect_sparse(inv, {{"r1", 1}, {"r_theta", 1}});
  }
  SUBCASE("zero A with invertible B and C") {
    auto inv = quaternity_invariants(M::from_int_rows(Q, {{0}}), M::from_int_rows(Q, {{1}}),
                                     M::from_int_rows(Q, {{1}}), M(Q, 0, 1));
    expect_sparse(inv, {{"r3", 1}, {"rank_b", 1}});
  }
  SUBCASE("invertible A and D") {
    auto inv = quaternity_invariants(M::from_int_rows(Q, {{1}}), M(Q, 1, 0), M(Q, 0, 1),
                                     M::from_int_rows(Q, {{1}}));
    expect_sparse(inv, {{"r1", 1}, {"r10", 1}});
    CHECK(inv.profile.aux1 == 2);
    CHECK(inv.profile.aux2 == 2);
    CHECK(inv.profile.aux3 == 2);
  }
  SUBCASE("width-two case touching r7 and r14") {
    auto A = M::from_int_rows(Q, {{1, 0}});
    auto B = M(Q, 1, 0);
    auto C = M::from_int_rows(Q, {{0, 1}});
    auto D = M::from_int_rows(Q, {{1, 1}});
    auto inv = quaternity_invariants(A, B, C, D);
    expect_sparse(inv, {{"r1", 1}, {"r3", 1}, {"r7", 1}, {"r14", 1}});
    CHECK(inv.profile.aux1 == 3);
    CHECK(inv.profile.aux2 == 3);
    CHECK(inv.profile.aux3 == 4);
    // This quaternity is already in canonical position.
    auto can = build_canonical_quaternity(Q, inv);
    CHECK(matrix_eq(can.S_a, A));
    CHECK(matrix_eq(can.S_b, B));
    CHECK(matrix_eq(can.S_c, C));
    CHECK(matrix_eq(can.S_d, D));
  }
  SUBCASE("identity block with padding") {
    auto inv = quaternity_invariants(identity(Q, 3), zeros(Q, 3, 2), zeros(Q, 1, 3),
                                     zeros(Q, 1, 3));
    expect_sparse(inv, {{"r1", 3}, {"r_theta", 3}});
  }
}

TEST_CASE("dual invariants of a hand-checked array") {
  RationalRing Q;
  using M = Matrix<RationalRing>;
  auto E = identity(Q, 2);
  M F(Q, 2, 0), G(Q, 2, 0), H(Q, 0, 2);
  auto d = dual_invariants(E, F, G, H);
  for (const auto& [name, value] : d.named_values()) {
    CAPTURE(name);
    CHECK(value == ((name == "v2" || name == "v5") ? 2 : 0));
  }
  auto can = build_canonical_dual(Q, d);
  CHECK(matrix_eq(can.S_e, identity(Q, 2)));
  CHECK(can.S_f.rows() == 2);
  CHECK(can.S_f.cols() == 0);
  CHECK(can.S_g.cols() == 0);
  CHECK(can.S_h.rows() == 0);
}

TEST_CASE("invariants are preserved by the equivalence group action") {
  auto battery = [](const auto& ring, std::uint64_t seed, int count, int max_dim) {
    TestRng g(seed);
    for (int it = 0; it < count; ++it) {
      int m = g.range(0, max_dim), p = g.range(0, max_dim), q = g.range(0, max_dim);
      int s = g.range(0, max_dim), t = g.range(0, max_dim);
      auto A = rand_mat(ring, m, p, g), B = rand_mat(ring, m, q, g);
      auto C = rand_mat(ring, s, p, g), D = rand_mat(ring, t, p, g);
      auto U = rand_nonsingular(ring, m, g), V = rand_nonsingular(ring, p, g);
      auto W = rand_nonsingular(ring, q, g), X = rand_nonsingular(ring, s, g);
      auto Y = rand_nonsingular(ring, t, g);
      auto base = quaternity_invariants(A, B, C, D);
      auto moved = quaternity_invariants(mul(mul(U, A), V), mul(mul(U, B), W), mul(mul(X, C), V),
                                         mul(mul(Y, D), V));
      CAPTURE(it);
      CHECK(base == moved);
      NamedCheck{}(moved.named_values(), base.named_values());
    }
  };
  battery(RationalRing{}, 2026'08'01, 4, 4);
  battery(PrimeField{2}, 2026'08'02, 6, 5);
  battery(PrimeField{3}, 2026'08'03, 5, 5);
  battery(PrimeField{7}, 2026'08'04, 4, 5);
  battery(QuaternionRing{}, 2026'08'05, 3, 3);
}

TEST_CASE("consistency report carries the eight labeled identities") {
  PrimeField F3{3};
  TestRng g(411);
  auto A = rand_mat(F3, 4, 3, g), B = rand_mat(F3, 4, 2, g);
  auto C = rand_mat(F3, 2, 3, g), D = rand_mat(F3, 3, 3, g);
  auto inv = quaternity_invariants(A, B, C, D);
  auto rep = verify_consistency(A, B, C, D, inv);
  CHECK(rep.all_ok);
  std::vector<std::string> labels;
  for (const auto& c : rep.checks) {
    labels.push_back(c.label);
    CAPTURE(c.label);
    CHECK(c.ok);
    CHECK(c.lhs == c.rhs);
  }
  CHECK(labels == std::vector<std::string>{"(1.17)", "(1.18)", "(1.19)", "(1.20)", "(1.21)",
                                           "(2.2)", "(2.3)", "(2.4)"});
  // A wrong invariant value must surface as a failed identity, not a throw.
  auto bad = inv;
  bad.r10 += 1;
  auto rep2 = verify_consistency(A, B, C, D, bad);
  CHECK_FALSE(rep2.all_ok);
}

TEST_CASE("transported dual invariants match the predicted ones") {
  auto battery = [](const auto& ring, std::uint64_t seed, int count, int max_dim) {
    TestRng g(seed);
    for (int it = 0; it < count; ++it) {
      int m = g.range(0, max_dim), p = g.range(0, max_dim), q = g.range(0, max_dim);
      int s = g.range(0, max_dim), t = g.range(0, max_dim);
      auto A = rand_mat(ring, m, p, g), B = rand_mat(ring, m, q, g);
      auto C = rand_mat(ring, s, p, g), D = rand_mat(ring, t, p, g);
      auto predicted = predicted_dual_invariants(quaternity_invariants(A, B, C, D));
      auto transported = duality_transport(A, B, C, D);
      CAPTURE(it);
      CHECK(predicted == transported);
      NamedCheck{}(transported.named_values(), predicted.named_values());
    }
  };
  battery(RationalRing{}, 77001, 4, 4);
  battery(PrimeField{2}, 77002, 6, 5);
  battery(PrimeField{5}, 77003, 4, 5);
  battery(QuaternionRing{}, 77004, 3, 3);
}

TEST_CASE("decomposition certificates over the rationals") {
  random_certificate_battery(RationalRing{}, 515001, 6, 5);
}

TEST_CASE("decomposition certificates over GF(2)") {
  random_certificate_battery(PrimeField{2}, 515002, 20, 4);
}

TEST_CASE("decomposition certificates over GF(3)") {
  random_certificate_battery(PrimeField{3}, 515003, 20, 4);
}

TEST_CASE("decomposition certificates over GF(7)") {
  random_certificate_battery(PrimeField{7}, 515004, 8, 5);
}

TEST_CASE("decomposition certificates over the rational quaternions") {
  random_certificate_battery(QuaternionRing{}, 515005, 4, 3);
}

TEST_CASE("decomposition handles vanishing dimensions") {
  PrimeField F2{2};
  TestRng g(9090);
  const int dims[][5] = {{0, 3, 2, 2, 2}, {3, 0, 2, 2, 2}, {3, 3, 0, 2, 2},
                         {3, 3, 2, 0, 2}, {3, 3, 2, 2, 0}, {0, 0, 0, 0, 0},
                         {1, 4, 0, 0, 4}, {4, 1, 3, 3, 0}};
  for (const auto& d : dims) {
    CAPTURE(d[0]);
    CAPTURE(d[1]);
    CAPTURE(d[2]);
    CAPTURE(d[3]);
    CAPTURE(d[4]);
    check_certificate(F2, rand_mat(F2, d[0], d[1], g), rand_mat(F2, d[0], d[2], g),
                      rand_mat(F2, d[3], d[1], g), rand_mat(F2, d[4], d[1], g));
  }
  RationalRing Q;
  for (const auto& d : dims)
    check_certificate(Q, rand_mat(Q, d[0], d[1], g), rand_mat(Q, d[0], d[2], g),
                      rand_mat(Q, d[3], d[1], g), rand_mat(Q, d[4], d[1], g));
}

TEST_CASE("dual decomposition certificates") {
  auto battery = [](const auto& ring, std::uint64_t seed, int count, int max_dim) {
    TestRng g(seed);
    for (int it = 0; it < count; ++it) {
      int p1 = g.range(0, max_dim), q1 = g.range(0, max_dim), s1 = g.range(0, max_dim);
      int t1 = g.range(0, max_dim), m1 = g.range(0, max_dim);
      auto E = rand_mat(ring, p1, m1, g), F = rand_mat(ring, p1, s1, g);
      auto G = rand_mat(ring, p1, t1, g), H = rand_mat(ring, q1, m1, g);
      auto dec = decompose_dual(E, F, G, H);
      CAPTURE(it);
      CHECK(matrix_eq(mul(mul(dec.P1, E), dec.M1), dec.canonical.S_e));
      CHECK(matrix_eq(mul(mul(dec.P1, F), dec.S1), dec.canonical.S_f));
      CHECK(matrix_eq(mul(mul(dec.P1, G), dec.T1), dec.canonical.S_g));
      CHECK(matrix_eq(mul(mul(dec.Q1, H), dec.M1), dec.canonical.S_h));
      CHECK(dec.inv == dual_invariants(E, F, G, H));
      // The canonical dual array reproduces its invariants.
      CHECK(dual_invariants(dec.canonical.S_e, dec.canonical.S_f, dec.canonical.S_g,
                            dec.canonical.S_h) == dec.inv);
    }
  };
  battery(RationalRing{}, 616001, 4, 4);
  battery(PrimeField{2}, 616002, 10, 4);
  battery(PrimeField{5}, 616003, 6, 4);
  battery(QuaternionRing{}, 616004, 3, 3);
}

TEST_CASE("negative derived widths are flagged as internal inconsistencies") {
  PrimeField F5{5};
  TestRng g(31337);
  auto A = rand_mat(F5, 3, 4, g), B = rand_mat(F5, 3, 2, g);
  auto C = rand_mat(F5, 2, 4, g), D = rand_mat(F5, 3, 4, g);
  auto inv = quaternity_invariants(A, B, C, D);
  auto bad = inv;
  bad.r11 = bad.r5 + 1;  // makes the g2 width r5 - r11 negative
  CHECK_THROWS_AS(build_canonical_quaternity(F5, bad), InternalInconsistency);
}

TEST_CASE("quaternity shape validation names the offending matrix") {
  RationalRing Q;
  using M = Matrix<RationalRing>;
  try {
    quaternity_invariants(M(Q, 2, 3), M(Q, 1, 2), M(Q, 2, 3), M(Q, 2, 3));
    FAIL("expected a shape mismatch");
  } catch (const ShapeMismatch& e) {
    CHECK(std::string(e.what()).find("B") != std::string::npos);
  }
  try {
    quaternity_invariants(M(Q, 2, 3), M(Q, 2, 2), M(Q, 2, 4), M(Q, 2, 3));
    FAIL("expected a shape mismatch");
  } catch (const ShapeMismatch& e) {
    CHECK(std::string(e.what()).find("C") != std::string::npos);
  }
}

TEST_CASE("row permutation helper") {
  RationalRing Q;
  auto a = Matrix<RationalRing>::from_int_rows(Q, {{1, 2}, {3, 4}, {5, 6}});
  auto b = permute_rows(a, {2, 0, 1});
  CHECK(matrix_eq(b, Matrix<RationalRing>::from_int_rows(Q, {{5, 6}, {1, 2}, {3, 4}})));
  CHECK_THROWS_AS(permute_rows(a, {0, 1}), InternalInconsistency);
}
