#include <doctest.h>

#include <loopcount/gf2.hpp>

#include <random>

using namespace loopcount;
using namespace loopcount::gf2;

namespace {

BitVec random_vec(std::size_t n, std::mt19937_64& rng) {
  BitVec v(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1) v.set(i, true);
  return v;
}

BitMat random_mat(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  BitMat m(r, c);
  for (std::size_t i = 0; i < r; ++i) m.set_row(i, random_vec(c, rng));
  return m;
}

}  // namespace

TEST_CASE("bitvec basics") {
  BitVec v(130);
  CHECK(v.is_zero());
  v.set(0, true);
  v.set(64, true);
  v.set(129, true);
  CHECK(v.popcount() == 3);
  CHECK(v.get(64));
  CHECK_FALSE(v.get(63));
  CHECK(v.first_set() == 0);
  v.flip(0);
  CHECK(v.first_set() == 64);
  BitVec w(130);
  w.set(64, true);
  v ^= w;
  CHECK(v.popcount() == 1);
  CHECK(v.first_set() == 129);
}

TEST_CASE("hex encoding is msb-first with high-side padding") {
  // bits (0,1,1,1) on 4 positions -> 0b0111 -> "7"
  BitVec v(4);
  v.set(1, true);
  v.set(2, true);
  v.set(3, true);
  CHECK(to_hex(v) == "7");
  CHECK(lex_index(v) == 7);

  // bit 0 is the most significant: (1,0,0,0) -> "8"
  BitVec u(4);
  u.set(0, true);
  CHECK(to_hex(u) == "8");
  CHECK(lex_index(u) == 8);

  // non-multiple-of-4 lengths pad on the high side
  BitVec t(5);
  t.set(0, true);  // value 2^4 = 16 -> "10"
  CHECK(to_hex(t) == "10");
  CHECK(from_hex(5, "10").get(0));
  CHECK(to_hex(BitVec(5)) == "00");

  // padding bits must be zero
  CHECK_THROWS_WITH_AS(from_hex(5, "40"), doctest::Contains("bad-hex"), Error);
  CHECK_THROWS_AS(from_hex(4, "g"), Error);
  CHECK_THROWS_AS(from_hex(4, ""), Error);
  CHECK_THROWS_AS(from_hex(4, "12"), Error);  // wrong digit count
}

TEST_CASE("hex round trip and lex order agree with integer order") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    std::size_t n = 1 + rng() % 40;
    BitVec a = random_vec(n, rng);
    BitVec b = random_vec(n, rng);
    CHECK(from_hex(n, to_hex(a)) == a);
    int cmp = lex_compare(a, b);
    auto ia = lex_index(a), ib = lex_index(b);
    CHECK((cmp < 0) == (ia < ib));
    CHECK((cmp == 0) == (ia == ib));
    CHECK(from_lex_index(n, ia) == a);
  }
}

TEST_CASE("matrix vector product and powers") {
  std::mt19937_64 rng(11);
  // cyclic shift permutation matrix has order n
  std::size_t n = 12;
  BitMat p(n, n);
  for (std::size_t i = 0; i < n; ++i) p.set(i, (i + 1) % n, true);
  CHECK(p.pow(n) == BitMat::identity(n));
  CHECK_FALSE(p.pow(6) == BitMat::identity(n));

  for (int it = 0; it < 50; ++it) {
    BitMat a = random_mat(9, 13, rng);
    BitMat b = random_mat(13, 7, rng);
    BitVec v = random_vec(7, rng);
    // (a*b)*v == a*(b*v)
    CHECK(a.mul(b).mul(v) == a.mul(b.mul(v)));
  }
}

TEST_CASE("rank, kernel, solve") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 80; ++it) {
    std::size_t r = 3 + rng() % 20, c = 3 + rng() % 20;
    BitMat m = random_mat(r, c, rng);
    auto ker = kernel_basis(m);
    CHECK(rank(m) + ker.size() == c);
    for (const auto& k : ker) CHECK(m.mul(k).is_zero());

    // solvable system: rhs in the column space
    BitVec x0 = random_vec(c, rng);
    BitVec b = m.mul(x0);
    auto sol = solve(m, b);
    REQUIRE(sol.solvable);
    CHECK(m.mul(sol.particular) == b);
    CHECK(sol.nullity == ker.size());

    BitVec b2 = random_vec(r, rng);
    auto sol2 = solve(m, b2);
    if (sol2.solvable) CHECK(m.mul(sol2.particular) == b2);
  }
  // explicit unsolvable case
  BitMat z(2, 2);
  BitVec b(2);
  b.set(0, true);
  CHECK_FALSE(solve(z, b).solvable);
}

TEST_CASE("inverse") {
  std::mt19937_64 rng(17);
  int found = 0;
  for (int it = 0; it < 200 && found < 40; ++it) {
    std::size_t n = 2 + rng() % 12;
    BitMat m = random_mat(n, n, rng);
    auto inv = inverse(m);
    if (!inv) {
      CHECK(rank(m) < n);
      continue;
    }
    ++found;
    CHECK(m.mul(*inv) == BitMat::identity(n));
    CHECK(inv->mul(m) == BitMat::identity(n));
  }
  CHECK(found >= 20);
  CHECK_FALSE(inverse(BitMat(3, 3)).has_value());
}

TEST_CASE("eliminator incremental span") {
  std::mt19937_64 rng(19);
  Eliminator e;
  std::vector<BitVec> added;
  for (int it = 0; it < 60; ++it) {
    BitVec v = random_vec(24, rng);
    bool fresh = e.add(v);
    if (!fresh) {
      // v must lie in the span of what was added
      BitMat m = BitMat::from_cols(24, added);
      CHECK(solve(m, v).solvable);
    }
    if (fresh) added.push_back(v);
    CHECK(e.rank() == added.size());
  }
}

TEST_CASE("tracked eliminator reports dependency combinations") {
  TrackedEliminator te(8);
  BitVec a(8), b(8);
  a.set(1, true);
  a.set(3, true);
  b.set(3, true);
  b.set(5, true);
  CHECK_FALSE(te.add(a).has_value());
  CHECK_FALSE(te.add(b).has_value());
  BitVec c = a;
  c ^= b;
  auto dep = te.add(c);
  REQUIRE(dep.has_value());
  // combination covers all three inserted vectors: a ^ b ^ c = 0
  CHECK(dep->get(0));
  CHECK(dep->get(1));
  CHECK(dep->get(2));
}

TEST_CASE("polynomial arithmetic") {
  // (x + 1)(x^2 + x + 1) = x^3 + 1
  Gf2Poly p = Gf2Poly::from_coeff_string("11");
  Gf2Poly q = Gf2Poly::from_coeff_string("111");
  Gf2Poly prod = p * q;
  CHECK(prod.coeff_string() == "1001");
  CHECK(prod == Gf2Poly::monomial(3) + Gf2Poly::one());
  CHECK(p < q);  // ordered by degree first
  CHECK(Gf2Poly::from_coeff_string("1011") < Gf2Poly::from_coeff_string("1101"));
  CHECK(p.degree() == 1);
  CHECK(Gf2Poly::zero().degree() == -1);

  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    auto rnd = [&](int maxdeg) {
      Gf2Poly r = Gf2Poly::zero();
      for (int i = 0; i <= maxdeg; ++i)
        if (rng() & 1) r.set(i, true);
      return r;
    };
    Gf2Poly a = rnd(10), b = rnd(10), c = rnd(10);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("polynomial evaluated at matrix") {
  // companion matrix of x^2 + x + 1 is annihilated by it
  BitMat m(2, 2);
  m.set(0, 1, true);
  m.set(1, 0, true);
  m.set(1, 1, true);
  Gf2Poly p = Gf2Poly::from_coeff_string("111");
  CHECK(p.eval(m) == BitMat(2, 2));
  Gf2Poly q = Gf2Poly::from_coeff_string("11");
  CHECK_FALSE(q.eval(m) == BitMat(2, 2));
}
