#include <doctest.h>

#include <loopcount/action.hpp>
#include <loopcount/nt.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

using namespace loopcount;
using gf2::BitVec;

namespace {

Cocycle random_cocycle(int q, std::mt19937_64& rng) {
  Cocycle th(q);
  for (int x = 1; x < q; ++x)
    for (int y = 1; y < q; ++y) th.set(x, y, rng() & 1);
  return th;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("closed-form isotope action matches the table-level computation") {
  // exhaustively at q=3: every cocycle, every (a, b) pair
  for (uint64_t idx = 0; idx < 16; ++idx) {
    Cocycle th = unflatten(vector_at(3, idx));
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 3; ++a2)
        for (int b1 = 0; b1 < 2; ++b1)
          for (int b2 = 0; b2 < 3; ++b2) {
            auto gen = ActionGenerator::isotope_renorm(a1, a2, b1, b2);
            CHECK(apply(gen, th) == apply_isotope_semantic(a1, a2, b1, b2, th));
          }
  }
  // randomly at q=5 and q=7
  std::mt19937_64 rng(331);
  for (int q : {5, 7})
    for (int it = 0; it < (q == 5 ? 150 : 40); ++it) {
      Cocycle th = random_cocycle(q, rng);
      int a1 = int(rng() & 1), a2 = int(rng() % q);
      int b1 = int(rng() & 1), b2 = int(rng() % q);
      auto gen = ActionGenerator::isotope_renorm(a1, a2, b1, b2);
      CHECK(apply(gen, th) == apply_isotope_semantic(a1, a2, b1, b2, th));
    }
}

TEST_CASE("isotope action produces isotopic extensions") {
  std::mt19937_64 rng(337);
  for (int it = 0; it < 8; ++it) {
    Cocycle th = random_cocycle(3, rng);
    int a1 = int(rng() & 1), a2 = int(rng() % 3);
    int b1 = int(rng() & 1), b2 = int(rng() % 3);
    Cocycle out = apply(ActionGenerator::isotope_renorm(a1, a2, b1, b2), th);
    // the acted cocycle extends to a relabelling of the principal isotope
    auto iso = principal_isotope(extend(th), a1 * 3 + a2, b1 * 3 + b2);
    CHECK(are_isomorphic(extend(out), iso).has_value());
  }
}

TEST_CASE("automorphism and coboundary actions") {
  std::mt19937_64 rng(347);
  int q = 5;
  for (int it = 0; it < 60; ++it) {
    Cocycle th = random_cocycle(q, rng);
    int u = 1 + int(rng() % (q - 1));
    Cocycle thu = apply(ActionGenerator::automorphism(u), th);
    for (int x = 0; x < q; ++x)
      for (int y = 0; y < q; ++y) CHECK(thu.at(x, y) == th.at(u * x % q, u * y % q));
    // composition: A_u A_v = A_{uv}
    int v = 1 + int(rng() % (q - 1));
    auto lhs = apply(ActionGenerator::automorphism(u), apply(ActionGenerator::automorphism(v), th));
    auto rhs = apply(ActionGenerator::automorphism(u * v % q), th);
    CHECK(lhs == rhs);

    std::vector<uint8_t> f(q, 0);
    for (int i = 1; i < q; ++i) f[i] = rng() & 1;
    Cocycle shifted = apply(ActionGenerator::coboundary_shift(f), th);
    auto expect = flatten(th);
    expect.v ^= flatten(coboundary(q, f)).v;
    CHECK(flatten(shifted) == expect);
    // isomorphic as loops
    CHECK(are_isomorphic(extend(th), extend(shifted)).has_value());
    CHECK(are_isomorphic(extend(th), extend(thu)).has_value());
  }
}

TEST_CASE("compiled maps agree with semantic action") {
  std::mt19937_64 rng(349);
  for (int q : {3, 5, 7}) {
    auto gens = isotopy_generators(q);
    auto maps = compile_all(gens, q);
    REQUIRE(gens.size() == maps.size());
    for (size_t i = 0; i < gens.size(); ++i)
      for (int it = 0; it < 20; ++it) {
        Cocycle th = random_cocycle(q, rng);
        CHECK(maps[i].apply(flatten(th).v) == flatten(apply(gens[i], th)).v);
      }
  }
}

TEST_CASE("coboundary shifts compile to pure translations") {
  int q = 5;
  std::vector<uint8_t> f = {0, 1, 0, 1, 1};
  auto m = compile(ActionGenerator::coboundary_shift(f), q);
  CHECK(m.m == gf2::BitMat::identity(free_dim(q)));
  CHECK(m.c == flatten(coboundary(q, f)).v);
}

TEST_CASE("pure isotope generators compile to linear maps") {
  for (int q : {3, 5, 7})
    for (int s = 1; s < q; ++s) {
      auto row = compile(ActionGenerator::isotope_renorm(0, s, 0, 0), q);
      auto col = compile(ActionGenerator::isotope_renorm(0, 0, 0, s), q);
      CHECK(row.c.is_zero());
      CHECK(col.c.is_zero());
      CHECK(compiled_translation(q, s, 0) == row);
      CHECK(compiled_translation(q, 0, s) == col);
    }
}

TEST_CASE("translation group laws") {
  for (int q : {5, 7}) {
    auto T = [&](int s, int t) { return compiled_translation(q, s % q, t % q); };
    auto I = AffineMap::identity(free_dim(q));
    for (int s = 0; s < q; ++s)
      for (int t = 0; t < q; ++t) {
        CHECK(T(s, 0).compose(T(0, t)) == T(s, t));
        CHECK(T(0, t).compose(T(s, 0)) == T(s, t));
      }
    CHECK(T(1, 0).compose(T(q - 1, 0)) == I);
    CHECK(T(2, 3).compose(T(q - 2, q - 3)) == I);
    // T_{1,0} has order q
    auto p = I;
    for (int i = 0; i < q; ++i) p = T(1, 0).compose(p);
    CHECK(p == I);
  }
}

TEST_CASE("automorphisms normalize the translation group") {
  int q = 7;
  for (int u : {2, 3, 5})
    for (int s = 0; s < q; ++s)
      for (int t = 0; t < q; ++t) {
        auto A = compile(ActionGenerator::automorphism(u), q);
        auto conj = A.inverse().compose(compiled_translation(q, s, t).compose(A));
        CHECK(conj == compiled_translation(q, u * s % q, u * t % q));
      }
}

TEST_CASE("coboundary space is invariant under translations") {
  int q = 5;
  auto basis = coboundary_basis(q);
  std::vector<BitVec> bs;
  for (auto& b : basis) bs.push_back(b.v);
  auto B = gf2::BitMat::from_cols(free_dim(q), bs);
  for (int s = 0; s < q; ++s)
    for (int t = 0; t < q; ++t) {
      auto T = compiled_translation(q, s, t);
      for (auto& b : bs) CHECK(gf2::solve(B, T.m.mul(b)).solvable);
    }
}

TEST_CASE("orbit of the zero vector is the coboundary span") {
  auto orb = orbit(3, isotopy_generators(3), CocycleVector(3));
  std::vector<std::string> hexes;
  for (auto& v : orb) hexes.push_back(gf2::to_hex(v));
  CHECK(hexes == std::vector<std::string>{"0", "7", "9", "e"});

  // isomorphism generators give the same orbit for the zero vector
  auto orb2 = orbit(3, isomorphism_generators(3), CocycleVector(3));
  CHECK(orb == orb2);

  CHECK_THROWS_AS(orbit(3, isotopy_generators(3), from_hex(3, "1"), 5), ResourceError);
}

TEST_CASE("orbit partitions at q=3") {
  auto iso = partition_orbits(3, isotopy_generators(3));
  REQUIRE(iso.representatives.size() == 2);
  CHECK(gf2::to_hex(iso.representatives[0].v) == "0");
  CHECK(gf2::to_hex(iso.representatives[1].v) == "1");
  std::vector<uint64_t> sz = iso.sizes;
  std::sort(sz.begin(), sz.end());
  CHECK(sz == std::vector<uint64_t>{4, 12});
  CHECK(iso.class_of.size() == 16);
  CHECK(iso.class_of[0] == 0);
  CHECK(iso.class_of[1] == 1);

  auto isom = partition_orbits(3, isomorphism_generators(3));
  REQUIRE(isom.representatives.size() == 3);
  std::vector<uint64_t> sz2 = isom.sizes;
  std::sort(sz2.begin(), sz2.end());
  CHECK(sz2 == std::vector<uint64_t>{4, 4, 8});

  // the isotopy partition coarsens the isomorphism partition
  for (size_t i = 0; i < 16; ++i)
    for (size_t j = 0; j < 16; ++j)
      if (isom.class_of[i] == isom.class_of[j]) CHECK(iso.class_of[i] == iso.class_of[j]);

  // generator order does not change the partition
  auto gens = isotopy_generators(3);
  std::reverse(gens.begin(), gens.end());
  auto iso2 = partition_orbits(3, gens);
  CHECK(iso2.class_of == iso.class_of);
  CHECK(iso2.sizes == iso.sizes);

  // jsonl rendering
  CHECK(partition_to_jsonl(iso) == "{\"rep\":\"0\",\"size\":4}\n{\"rep\":\"1\",\"size\":12}\n");

  CHECK_THROWS_AS(partition_orbits(7, isotopy_generators(7)), ResourceError);
}

TEST_CASE("group closure sizes") {
  CHECK(group_closure(3, isotopy_generators(3)).size() == 72);
  CHECK(group_closure(3, isomorphism_generators(3)).size() == 8);
  CHECK(group_closure(5, isotopy_generators(5)).size() == 1600);
  CHECK(group_closure(5, isomorphism_generators(5)).size() == 64);
  CHECK_THROWS_WITH_AS(group_closure(5, isotopy_generators(5), 100),
                       doctest::Contains("group-too-large"), ResourceError);
}

TEST_CASE("burnside orbit counts") {
  auto g3 = group_closure(3, isotopy_generators(3));
  CHECK(burnside_count(3, g3) == 2);
  auto g5 = group_closure(5, isotopy_generators(5));
  CHECK(burnside_count(5, g5) == 63);
  // empty generator list: the trivial group, every vector its own orbit
  auto g0 = group_closure(3, {});
  REQUIRE(g0.size() == 1);
  CHECK(burnside_count(3, g0) == 16);
  // a non-group multiset is detected by nonintegral averages
  std::vector<AffineMap> notgroup = {AffineMap::identity(4), compiled_translation(3, 1, 0)};
  CHECK_THROWS_WITH_AS(burnside_count(3, notgroup), doctest::Contains("nonintegral"), Error);
}

TEST_CASE("ratio components") {
  for (int q : {3, 5, 7}) {
    auto comps = ratio_components(q);
    REQUIRE(int(comps.size()) == q - 1);
    int total = 0;
    for (auto& c : comps) {
      CHECK(int(c.basis.size()) == q - 1);
      total += int(c.basis.size());
    }
    CHECK(total == free_dim(q));
    CHECK(comps[0].label == "ratio-1");

    // W_1 is the coboundary subspace
    auto B = gf2::BitMat::from_cols(free_dim(q), comps[0].basis);
    for (auto& cb : coboundary_basis(q)) CHECK(gf2::solve(B, cb.v).solvable);

    // every W_r really is fixed pointwise by T_{-r,1}
    for (int r = 1; r < q; ++r) {
      auto T = compiled_translation(q, (q - r) % q, 1);
      for (auto& b : comps[r - 1].basis) CHECK(T.apply(b) == b);
    }
  }
}

TEST_CASE("separability of ratio components") {
  auto comps3 = ratio_components(3);
  auto gens3 = isotopy_generators(3);
  // nothing flows out of W_2 into W_1? coboundary shifts land in W_1, so
  // W_2 -> W_1 is reachable; W_1 -> W_2 is not
  auto r12 = are_separable(3, comps3, 0, 1, gens3);
  CHECK(r12.verdict == Separability::separable);
  auto r21 = are_separable(3, comps3, 1, 0, gens3);
  CHECK(r21.verdict == Separability::not_separable);
  auto same = are_separable(3, comps3, 1, 1, gens3);
  CHECK(same.verdict == Separability::not_separable);

  auto comps5 = ratio_components(5);
  auto gens5 = isotopy_generators(5);
  CHECK(are_separable(5, comps5, 1, 2, gens5).verdict == Separability::separable);
  CHECK(are_separable(5, comps5, 3, 0, gens5).verdict == Separability::not_separable);

  CHECK_THROWS_WITH_AS(are_separable(3, comps3, 0, 5, gens3), doctest::Contains("bad-config"),
                       Error);
}

TEST_CASE("generator configuration files") {
  for (int q : {3, 5, 7}) {
    auto iso_file = slurp(std::string(LOOPCOUNT_SOURCE_DIR) + "/generators/isotopy_2q.json");
    auto isom_file = slurp(std::string(LOOPCOUNT_SOURCE_DIR) + "/generators/isomorphism_2q.json");
    CHECK(generators_digest(q, load_generators(iso_file, q)) ==
          generators_digest(q, isotopy_generators(q)));
    CHECK(generators_digest(q, load_generators(isom_file, q)) ==
          generators_digest(q, isomorphism_generators(q)));
  }

  // symbolic and concrete forms resolve identically (3 has primitive root 2)
  auto sym = load_generators(R"([{"kind": "automorphism", "u": "primitive_root"}])", 3);
  auto conc = load_generators(R"([{"kind": "automorphism", "u": 2}])", 3);
  CHECK(generators_digest(3, sym) == generators_digest(3, conc));

  // digest separates different groups
  CHECK(generators_digest(5, isotopy_generators(5)) !=
        generators_digest(5, isomorphism_generators(5)));

  CHECK_THROWS_WITH_AS(load_generators(R"([{"kind": "nope"}])", 3),
                       doctest::Contains("bad-config"), Error);
  CHECK_THROWS_AS(load_generators("[]", 3), Error);
  CHECK_THROWS_AS(load_generators("not json", 3), Error);
  CHECK_THROWS_AS(load_generators(R"([{"kind": "automorphism", "u": 0}])", 3), Error);
}

TEST_CASE("linear generators round trip through configs") {
  int q = 3;
  auto T = compiled_translation(q, 1, 0);
  std::ostringstream cfg;
  cfg << R"([{"kind": "linear", "rows": [)";
  for (size_t i = 0; i < T.m.rows; ++i) {
    if (i) cfg << ", ";
    cfg << '"';
    for (size_t j = 0; j < T.m.cols; ++j) cfg << (T.m.get(i, j) ? '1' : '0');
    cfg << '"';
  }
  cfg << R"(], "c": ")";
  for (size_t i = 0; i < T.c.n; ++i) cfg << (T.c.get(i) ? '1' : '0');
  cfg << R"("}])";
  auto gens = load_generators(cfg.str(), q);
  REQUIRE(gens.size() == 1);
  CHECK(compile(gens[0], q) == T);
}
