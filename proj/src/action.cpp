#include "loopcount/action.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <unordered_set>

#include "json.hpp"
#include "loopcount/nt.hpp"

namespace loopcount {

namespace {

struct BitVecHash {
    size_t operator()(const gf2::BitVec& v) const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ uint64_t(v.n);
        for (uint64_t w : v.w) h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return size_t(h);
    }
};

}  // namespace

AffineMap AffineMap::inverse() const {
    auto minv = gf2::inverse(m);
    if (!minv) fail("not-invertible", "affine map has singular linear part");
    return {*minv, minv->mul(c)};
}

Cocycle apply(const ActionGenerator& gen, const Cocycle& theta) {
    int q = theta.q;
    require(theta.normalized(), "not-normalized", "input cocycle not normalized");
    switch (gen.kind) {
        case ActionGenerator::Kind::automorphism: {
            int u = ((gen.u % q) + q) % q;
            require(u != 0, "not-invertible", "automorphism multiplier is 0 mod q");
            Cocycle out(q);
            for (int x = 0; x < q; ++x)
                for (int y = 0; y < q; ++y)
                    out.set(x, y, theta.at(u * x % q, u * y % q));
            return out;
        }
        case ActionGenerator::Kind::coboundary_shift: {
            Cocycle d = coboundary(q, gen.f);
            Cocycle out = theta;
            for (size_t i = 0; i < out.bits.size(); ++i) out.bits[i] ^= d.bits[i];
            return out;
        }
        case ActionGenerator::Kind::isotope_renorm: {
            require(gen.a1 >= 0 && gen.a1 <= 1 && gen.b1 >= 0 && gen.b1 <= 1 &&
                        gen.a2 >= 0 && gen.a2 < q && gen.b2 >= 0 && gen.b2 < q,
                    "bad-element", "isotope parameters out of range");
            int a1 = gen.a1, a2 = gen.a2, b1 = gen.b1, b2 = gen.b2;
            int c = (a2 + b2) % q;
            int e1 = (a1 + b1 + theta.at(a2, b2)) & 1;
            Cocycle out(q);
            for (int x = 0; x < q; ++x) {
                int xa = (x + a2) % q;
                for (int y = 0; y < q; ++y) {
                    int yb = (y + b2) % q;
                    int v = a1 + b1 + theta.at(xa, b2) + theta.at(a2, yb) + theta.at(xa, yb);
                    // mu-correction from the identity-restoring relabelling
                    v += e1 * (((x + c) % q == c) + ((y + c) % q == c) + ((x + y + c) % q == c));
                    out.set(x, y, uint8_t(v & 1));
                }
            }
            if (!out.normalized())
                fail("not-extension-after-isotopy", "isotope result is not normalized");
            return out;
        }
        case ActionGenerator::Kind::linear: {
            int L = free_dim(q);
            require(gen.lin.m.rows == L && gen.lin.m.cols == L && gen.lin.c.n == L,
                    "bad-config", "linear generator has wrong dimensions");
            CocycleVector v = flatten(theta);
            CocycleVector out(q);
            out.v = gen.lin.apply(v.v);
            return unflatten(out);
        }
    }
    fail("bad-config", "unknown generator kind");
}

Cocycle apply_isotope_semantic(int a1, int a2, int b1, int b2, const Cocycle& theta) {
    int q = theta.q;
    CayleyTable tab = extend(theta);
    int n = tab.n;
    int a = a1 * q + a2, b = b1 * q + b2;
    std::vector<int> ldiv(n), rdiv(n);
    for (int y = 0; y < n; ++y) ldiv[tab.at(a, y)] = y;
    for (int x = 0; x < n; ++x) rdiv[tab.at(x, b)] = x;
    int e = tab.at(a, b);
    int e1 = e / q, e2 = e % q;
    auto phi = [&](int i) {
        int i1 = i / q, i2 = i % q;
        int j1 = (i1 + (e1 && i2 == e2 ? 1 : 0)) & 1;
        int j2 = (i2 - e2 + q) % q;
        return j1 * q + j2;
    };
    auto phi_inv = [&](int j) {
        int j1 = j / q, j2 = j % q;
        int i2 = (j2 + e2) % q;
        int i1 = (j1 + (e1 && i2 == e2 ? 1 : 0)) & 1;
        return i1 * q + i2;
    };
    CayleyTable rel(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            rel.set(x, y, phi(tab.at(rdiv[phi_inv(x)], ldiv[phi_inv(y)])));
    try {
        return extract(rel);
    } catch (const Error& err) {
        fail("not-extension-after-isotopy", err.what());
    }
}

AffineMap compile(const ActionGenerator& gen, int q) {
    int L = free_dim(q);
    if (gen.kind == ActionGenerator::Kind::linear) {
        require(gen.lin.m.rows == L && gen.lin.m.cols == L && gen.lin.c.n == L,
                "bad-config", "linear generator has wrong dimensions");
        if (!gf2::inverse(gen.lin.m)) fail("not-invertible", "linear part is singular");
        return gen.lin;
    }
    auto act = [&](const gf2::BitVec& v) {
        CocycleVector cv(q);
        cv.v = v;
        return flatten(apply(gen, unflatten(cv))).v;
    };
    AffineMap out;
    out.c = act(gf2::BitVec(L));
    out.m = gf2::BitMat(L, L);
    for (int i = 0; i < L; ++i) {
        gf2::BitVec e(L);
        e.set(i, true);
        out.m.set_col(i, act(e) ^ out.c);
    }
    // Certify affineness: exhaustive on small spaces, sampled otherwise.
    if (L <= 16) {
        for (uint64_t idx = 0; idx < (uint64_t(1) << L); ++idx) {
            gf2::BitVec v = gf2::from_lex_index(L, idx);
            if (act(v) != out.apply(v)) fail("not-affine", "generator is not affine");
        }
    } else {
        std::mt19937_64 rng(0xC0FFEEull + uint64_t(L));
        for (int trial = 0; trial < 200; ++trial) {
            gf2::BitVec v(L);
            for (size_t k = 0; k < v.w.size(); ++k) v.w[k] = rng();
            int spare = int(v.w.size()) * 64 - L;
            if (spare) v.w.back() &= ~uint64_t(0) >> spare;
            if (act(v) != out.apply(v)) fail("not-affine", "generator is not affine");
        }
    }
    if (!gf2::inverse(out.m)) fail("not-invertible", "compiled linear part is singular");
    return out;
}

std::vector<AffineMap> compile_all(const std::vector<ActionGenerator>& gens, int q) {
    std::vector<AffineMap> out;
    out.reserve(gens.size());
    for (const auto& g : gens) out.push_back(compile(g, q));
    return out;
}

AffineMap compiled_translation(int q, int s, int t) {
    s = ((s % q) + q) % q;
    t = ((t % q) + q) % q;
    AffineMap ts = compile(ActionGenerator::isotope_renorm(0, s, 0, 0), q);
    AffineMap tt = compile(ActionGenerator::isotope_renorm(0, 0, 0, t), q);
    AffineMap out = ts.compose(tt);
    if (!out.c.is_zero()) fail("internal", "partial translation compiled with a constant part");
    return out;
}

std::vector<gf2::BitVec> orbit(int q, const std::vector<ActionGenerator>& gens,
                               const CocycleVector& start, size_t cap) {
    require(start.q == q && start.v.n == free_dim(q), "order-mismatch", "vector length mismatch");
    std::vector<AffineMap> maps = compile_all(gens, q);
    std::unordered_set<gf2::BitVec, BitVecHash> seen;
    std::deque<gf2::BitVec> frontier;
    seen.insert(start.v);
    frontier.push_back(start.v);
    while (!frontier.empty()) {
        gf2::BitVec v = frontier.front();
        frontier.pop_front();
        for (const auto& m : maps) {
            gf2::BitVec w = m.apply(v);
            if (seen.insert(w).second) {
                if (seen.size() > cap)
                    fail_resource("space-too-large", "orbit exceeded cap " + std::to_string(cap));
                frontier.push_back(w);
            }
        }
    }
    std::vector<gf2::BitVec> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), gf2::lex_less);
    return out;
}

OrbitPartition partition_orbits(int q, const std::vector<ActionGenerator>& gens, int max_bits) {
    int L = free_dim(q);
    if (L > max_bits || L > 36)
        fail_resource("space-too-large",
                      "orbit partition needs " + std::to_string(L) + " bits, cap is " +
                          std::to_string(std::min(max_bits, 36)));
    std::vector<AffineMap> maps = compile_all(gens, q);
    uint64_t N = uint64_t(1) << L;
    OrbitPartition part;
    part.q = q;
    part.class_of.assign(N, UINT32_MAX);
    std::vector<uint64_t> stack;
    for (uint64_t idx = 0; idx < N; ++idx) {
        if (part.class_of[idx] != UINT32_MAX) continue;
        uint32_t id = uint32_t(part.representatives.size());
        part.representatives.push_back(vector_at(q, idx));
        uint64_t size = 0;
        part.class_of[idx] = id;
        stack.assign(1, idx);
        while (!stack.empty()) {
            uint64_t cur = stack.back();
            stack.pop_back();
            ++size;
            gf2::BitVec v = gf2::from_lex_index(L, cur);
            for (const auto& m : maps) {
                uint64_t nxt = gf2::lex_index(m.apply(v));
                if (part.class_of[nxt] == UINT32_MAX) {
                    part.class_of[nxt] = id;
                    stack.push_back(nxt);
                }
            }
        }
        part.sizes.push_back(size);
    }
    return part;
}

std::string partition_to_jsonl(const OrbitPartition& p) {
    std::string out;
    for (size_t i = 0; i < p.representatives.size(); ++i) {
        out += "{\"rep\":\"";
        out += to_hex(p.representatives[i]);
        out += "\",\"size\":";
        out += std::to_string(p.sizes[i]);
        out += "}\n";
    }
    return out;
}

std::vector<AffineMap> group_closure(int q, const std::vector<ActionGenerator>& gens, size_t cap) {
    std::vector<AffineMap> maps = compile_all(gens, q);
    int L = free_dim(q);
    std::unordered_set<AffineMap, AffineMapHash> seen;
    std::deque<AffineMap> frontier;
    std::vector<AffineMap> out;
    AffineMap id = AffineMap::identity(L);
    seen.insert(id);
    frontier.push_back(id);
    out.push_back(id);
    while (!frontier.empty()) {
        AffineMap cur = frontier.front();
        frontier.pop_front();
        for (const auto& g : maps) {
            AffineMap nxt = g.compose(cur);
            if (seen.insert(nxt).second) {
                if (seen.size() > cap)
                    fail_resource("group-too-large",
                                  "group closure exceeded cap " + std::to_string(cap));
                frontier.push_back(nxt);
                out.push_back(nxt);
            }
        }
    }
    return out;
}

BigInt burnside_count(int q, const std::vector<AffineMap>& group) {
    require(!group.empty(), "bad-config", "empty group");
    int L = free_dim(q);
    gf2::BitMat I = gf2::BitMat::identity(L);
    BigInt total = 0;
    for (const auto& g : group) {
        gf2::SolveResult s = gf2::solve(g.m ^ I, g.c);
        if (s.solvable) total += pow2(s.nullity);
    }
    if (total % BigInt(group.size()) != 0)
        fail("nonintegral", "fixed-point total not divisible by group size");
    return total / BigInt(group.size());
}

namespace {

// Coordinates of w in the concatenated component basis (unique once the
// decomposition has been validated); returns per-component "has support".
struct Projector {
    gf2::BitMat cinv;
    std::vector<std::pair<int, int>> blocks;  // [begin, end) columns per component

    std::vector<char> support(const gf2::BitVec& w) const {
        gf2::BitVec y = cinv.mul(w);
        std::vector<char> s(blocks.size(), 0);
        for (size_t i = 0; i < blocks.size(); ++i)
            for (int k = blocks[i].first; k < blocks[i].second && !s[i]; ++k)
                if (y.get(k)) s[i] = 1;
        return s;
    }
    bool in_component(const gf2::BitVec& w, int comp) const {
        gf2::BitVec y = cinv.mul(w);
        for (int k = blocks[comp].first; k < blocks[comp].second; ++k)
            if (y.get(k)) return true;
        return false;
    }
};

Projector make_projector(int L, const std::vector<SubspaceComponent>& decomposition) {
    std::vector<gf2::BitVec> cols;
    Projector p;
    for (const auto& comp : decomposition) {
        int begin = int(cols.size());
        for (const auto& b : comp.basis) {
            require(b.n == L, "not-a-decomposition", "basis vector of wrong length");
            cols.push_back(b);
        }
        p.blocks.push_back({begin, int(cols.size())});
    }
    require(int(cols.size()) == L, "not-a-decomposition",
            "component dimensions sum to " + std::to_string(cols.size()) + ", expected " +
                std::to_string(L));
    auto inv = gf2::inverse(gf2::BitMat::from_cols(L, cols));
    require(inv.has_value(), "not-a-decomposition", "components are not independent");
    p.cinv = *inv;
    return p;
}

// Does g move some vector of span(A) to one with B-support?
bool flows(const AffineMap& g, const std::vector<gf2::BitVec>& abasis, const Projector& proj,
           int comp_b) {
    if (abasis.empty()) return false;
    if (proj.in_component(g.c, comp_b)) return true;
    for (const auto& a : abasis)
        if (proj.in_component(g.m.mul(a), comp_b)) return true;
    return false;
}

}  // namespace

SeparabilityReport are_separable(int q, const std::vector<SubspaceComponent>& decomposition,
                                 int comp_a, int comp_b, const std::vector<ActionGenerator>& gens,
                                 const SeparabilityOptions& opts) {
    int L = free_dim(q);
    int nc = int(decomposition.size());
    require(comp_a >= 0 && comp_a < nc && comp_b >= 0 && comp_b < nc, "bad-config",
            "component index out of range");
    Projector proj = make_projector(L, decomposition);
    if (comp_a == comp_b) return {Separability::not_separable, "identical components"};
    const auto& abasis = decomposition[comp_a].basis;
    if (abasis.empty()) return {Separability::separable, "empty source component"};

    try {
        std::vector<AffineMap> group = group_closure(q, gens, opts.closure_cap);
        for (const auto& g : group)
            if (flows(g, abasis, proj, comp_b))
                return {Separability::not_separable,
                        "witnessed inside a group of size " + std::to_string(group.size())};
        return {Separability::separable,
                "exhaustive over a group of size " + std::to_string(group.size())};
    } catch (const ResourceError&) {
        // fall through to certificates on the component graph
    }

    std::vector<AffineMap> maps = compile_all(gens, q);
    // Over-approximate support flow: reach[i] = support can appear in comp i.
    std::vector<char> reach(nc, 0);
    reach[comp_a] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& g : maps) {
            std::vector<char> image(nc, 0);
            for (int i = 0; i < nc; ++i) {
                if (!reach[i]) continue;
                for (const auto& b : decomposition[i].basis) {
                    std::vector<char> s = proj.support(g.m.mul(b));
                    for (int j = 0; j < nc; ++j) image[j] |= s[j];
                }
            }
            std::vector<char> cs = proj.support(g.c);
            for (int j = 0; j < nc; ++j) image[j] |= cs[j];
            for (int j = 0; j < nc; ++j)
                if (image[j] && !reach[j]) { reach[j] = 1; grew = true; }
        }
    }
    if (!reach[comp_b])
        return {Separability::separable, "no support path in the component flow graph"};

    // Support can reach B in the over-approximation; look for a real witness.
    std::mt19937_64 rng(opts.seed);
    AffineMap w = AffineMap::identity(L);
    for (int round = 0; round < opts.witness_rounds; ++round) {
        if (round % 50 == 0) w = AffineMap::identity(L);
        w = maps[rng() % maps.size()].compose(w);
        if (flows(w, abasis, proj, comp_b))
            return {Separability::not_separable, "witnessed by a random product"};
    }
    return {Separability::undecided, "support path exists but no witness found"};
}

std::vector<SubspaceComponent> ratio_components(int q) {
    int L = free_dim(q);
    gf2::BitMat I = gf2::BitMat::identity(L);
    std::vector<SubspaceComponent> comps;
    int total = 0;
    for (int r = 1; r < q; ++r) {
        AffineMap tr = compiled_translation(q, (q - r) % q, 1);
        SubspaceComponent c;
        c.label = "ratio-" + std::to_string(r);
        c.basis = gf2::kernel_basis(tr.m ^ I);
        total += int(c.basis.size());
        comps.push_back(std::move(c));
    }
    require(total == L, "internal", "ratio components do not fill the space");
    std::vector<gf2::BitVec> all;
    for (const auto& c : comps)
        for (const auto& b : c.basis) all.push_back(b);
    require(gf2::rank_of(all) == L, "internal", "ratio components are not independent");
    return comps;
}

namespace {

std::vector<uint8_t> parse_f(const nlohmann::json& jf, int q) {
    require(jf.is_array() && int(jf.size()) == q, "bad-config",
            "coboundary_shift f must have q entries");
    std::vector<uint8_t> f(q);
    for (int i = 0; i < q; ++i) {
        int v = jf[i].get<int>();
        require(v == 0 || v == 1, "bad-config", "f entries must be 0/1");
        f[i] = uint8_t(v);
    }
    return f;
}

std::pair<int, int> parse_pair(const nlohmann::json& jp, int q, const char* name) {
    require(jp.is_array() && jp.size() == 2, "bad-config",
            std::string(name) + " must be [z2, zq]");
    int p1 = jp[0].get<int>(), p2 = jp[1].get<int>();
    require(p1 >= 0 && p1 <= 1 && p2 >= 0 && p2 < q, "bad-config",
            std::string(name) + " out of range");
    return {p1, p2};
}

}  // namespace

std::vector<ActionGenerator> load_generators(const std::string& json_text, int q) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        fail("bad-config", std::string("generator config parse error: ") + e.what());
    }
    require(j.is_array(), "bad-config", "generator config must be a JSON array");
    std::vector<ActionGenerator> gens;
    for (const auto& item : j) {
        require(item.is_object() && item.contains("kind"), "bad-config",
                "each generator needs a kind");
        std::string kind = item["kind"].get<std::string>();
        if (kind == "automorphism") {
            int u;
            if (item["u"].is_string()) {
                require(item["u"] == "primitive_root", "bad-config",
                        "unknown symbolic u: " + item["u"].get<std::string>());
                u = nt::primitive_root(q);
            } else {
                u = item["u"].get<int>();
                require(((u % q) + q) % q != 0, "not-invertible", "u must be a unit mod q");
            }
            gens.push_back(ActionGenerator::automorphism(u));
        } else if (kind == "coboundary_shift") {
            if (item["f"].is_string()) {
                require(item["f"] == "indicator_basis", "bad-config",
                        "unknown symbolic f: " + item["f"].get<std::string>());
                for (int k = 1; k < q; ++k) {
                    std::vector<uint8_t> f(q, 0);
                    f[k] = 1;
                    gens.push_back(ActionGenerator::coboundary_shift(std::move(f)));
                }
            } else {
                gens.push_back(ActionGenerator::coboundary_shift(parse_f(item["f"], q)));
            }
        } else if (kind == "isotope_renorm") {
            auto [a1, a2] = parse_pair(item["a"], q, "a");
            auto [b1, b2] = parse_pair(item["b"], q, "b");
            gens.push_back(ActionGenerator::isotope_renorm(a1, a2, b1, b2));
        } else if (kind == "linear") {
            int L = free_dim(q);
            require(item.contains("rows") && item["rows"].is_array() &&
                        int(item["rows"].size()) == L,
                    "bad-config", "linear generator needs L rows");
            AffineMap map;
            map.m = gf2::BitMat(L, L);
            for (int r = 0; r < L; ++r) {
                std::string row = item["rows"][r].get<std::string>();
                require(int(row.size()) == L, "bad-config", "linear row of wrong length");
                for (int cidx = 0; cidx < L; ++cidx) {
                    require(row[cidx] == '0' || row[cidx] == '1', "bad-config",
                            "linear rows must be binary strings");
                    map.m.set(r, cidx, row[cidx] == '1');
                }
            }
            map.c = gf2::BitVec(L);
            if (item.contains("c")) {
                std::string cs = item["c"].get<std::string>();
                require(int(cs.size()) == L, "bad-config", "linear c of wrong length");
                for (int i = 0; i < L; ++i) map.c.set(i, cs[i] == '1');
            }
            gens.push_back(ActionGenerator::linear(std::move(map)));
        } else {
            fail("bad-config", "unknown generator kind: " + kind);
        }
    }
    require(!gens.empty(), "bad-config", "generator config is empty");
    return gens;
}

std::vector<ActionGenerator> isotopy_generators(int q) {
    std::vector<ActionGenerator> gens = isomorphism_generators(q);
    gens.push_back(ActionGenerator::isotope_renorm(0, 1, 0, 0));
    gens.push_back(ActionGenerator::isotope_renorm(0, 0, 0, 1));
    return gens;
}

std::vector<ActionGenerator> isomorphism_generators(int q) {
    std::vector<ActionGenerator> gens;
    gens.push_back(ActionGenerator::automorphism(nt::primitive_root(q)));
    for (int k = 1; k < q; ++k) {
        std::vector<uint8_t> f(q, 0);
        f[k] = 1;
        gens.push_back(ActionGenerator::coboundary_shift(std::move(f)));
    }
    return gens;
}

std::string generators_digest(int q, const std::vector<ActionGenerator>& gens) {
    std::vector<AffineMap> maps = compile_all(gens, q);
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    mix(uint64_t(q));
    for (const auto& m : maps) {
        for (uint64_t w : m.m.w) mix(w);
        for (uint64_t w : m.c.w) mix(w);
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return std::string(buf);
}

}  // namespace loopcount
