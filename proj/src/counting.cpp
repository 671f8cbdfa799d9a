#include "loopcount/counting.hpp"

#include "json.hpp"
#include "loopcount/invariant.hpp"
#include "loopcount/nt.hpp"

namespace loopcount {

std::string report_to_json(const CountReport& r) {
    nlohmann::json j;
    j["q"] = r.q;
    j["method"] = r.method;
    j["up_to_isotopy"] =
        r.up_to_isotopy ? nlohmann::json(r.up_to_isotopy->str()) : nlohmann::json(nullptr);
    j["up_to_isomorphism"] =
        r.up_to_isomorphism ? nlohmann::json(r.up_to_isomorphism->str()) : nlohmann::json(nullptr);
    j["breakdown"] = nlohmann::json::parse(r.breakdown_json);
    return j.dump();
}

BigInt isomorphism_count_formula(int q) {
    nt::require_odd_prime(q);
    long long E = (long long)(q - 1) * (q - 2);
    BigInt total = 0;
    for (long long e : nt::divisors(q - 1)) total += BigInt(nt::euler_phi(e)) * pow2(E / e);
    if (total % BigInt(q - 1) != 0) fail("nonintegral", "isomorphism formula sum not divisible");
    return total / BigInt(q - 1);
}

BigInt isotopy_count_formula(int q) {
    nt::require_odd_prime(q);
    long long E = (long long)(q - 1) * (q - 2);
    BigInt total = pow2(E);                     // identity
    BigInt mixed = 0;                           // nontrivial automorphism part, any translation
    for (long long e : nt::divisors(q - 1))
        if (e > 1) mixed += BigInt(nt::euler_phi(e)) * pow2(E / e);
    total += BigInt(q) * q * mixed;
    total += BigInt(E) * pow2(q - 1);           // translations with s, t != 0, t != -s
    total += BigInt(3) * (q - 1);               // remaining pure translations
    BigInt order = BigInt(q) * q * (q - 1);
    if (total % order != 0) fail("nonintegral", "isotopy formula sum not divisible");
    return total / order;
}

CountReport count_via_formula(int q) {
    nt::require_odd_prime(q);
    long long E = (long long)(q - 1) * (q - 2);
    CountReport r;
    r.q = q;
    r.method = "formula";
    r.up_to_isotopy = isotopy_count_formula(q);
    r.up_to_isomorphism = isomorphism_count_formula(q);

    nlohmann::json b;
    b["E"] = std::to_string(E);
    b["group_order_isotopy"] = (BigInt(q) * q * (q - 1) * pow2(q - 1)).str();
    b["group_order_isomorphism"] = (BigInt(q - 1) * pow2(q - 1)).str();
    auto terms = nlohmann::json::array();
    terms.push_back({{"name", "identity"}, {"value", pow2(E).str()}});
    for (long long e : nt::divisors(q - 1)) {
        if (e == 1) continue;
        terms.push_back({{"name", "automorphism_order_" + std::to_string(e)},
                         {"value", (BigInt(q) * q * nt::euler_phi(e) * pow2(E / e)).str()}});
    }
    terms.push_back({{"name", "generic_translations"}, {"value", (BigInt(E) * pow2(q - 1)).str()}});
    terms.push_back({{"name", "degenerate_translations"}, {"value", (BigInt(3) * (q - 1)).str()}});
    b["isotopy_terms"] = terms;
    r.breakdown_json = b.dump();
    return r;
}

namespace {

// Per-component Burnside: solve (M+I)v = c block by block in the ratio
// decomposition, whose blocks every shipped generator preserves.
BigInt burnside_per_component(int q, const std::vector<ActionGenerator>& gens,
                              const std::vector<AffineMap>& group) {
    int L = free_dim(q);
    std::vector<SubspaceComponent> comps = ratio_components(q);
    std::vector<gf2::BitVec> cols;
    std::vector<std::pair<int, int>> blocks;
    for (const auto& comp : comps) {
        int begin = int(cols.size());
        for (const auto& b : comp.basis) cols.push_back(b);
        blocks.push_back({begin, int(cols.size())});
    }
    gf2::BitMat basis_mat = gf2::BitMat::from_cols(L, cols);
    auto cinv = gf2::inverse(basis_mat);
    require(cinv.has_value(), "internal", "ratio components do not form a basis");

    // The decomposition must be invariant under every generator's linear
    // part; products then preserve it automatically.
    for (const auto& g : compile_all(gens, q)) {
        for (size_t ci = 0; ci < comps.size(); ++ci) {
            for (const auto& b : comps[ci].basis) {
                gf2::BitVec y = cinv->mul(g.m.mul(b));
                for (int k = 0; k < L; ++k)
                    if (y.get(k) && (k < blocks[ci].first || k >= blocks[ci].second))
                        fail("not-invariant",
                             "generator does not preserve the ratio decomposition");
            }
        }
    }

    gf2::BitMat I = gf2::BitMat::identity(L);
    BigInt total = 0;
    for (const auto& g : group) {
        gf2::BitMat mi = g.m ^ I;
        // Coordinates of (M+I) applied to each basis column, and of c.
        gf2::BitMat coords(L, L);
        for (int j = 0; j < L; ++j) coords.set_col(j, cinv->mul(mi.mul(cols[j])));
        gf2::BitVec c_coords = cinv->mul(g.c);
        bool solvable = true;
        int dim = 0;
        for (const auto& [begin, end] : blocks) {
            int k = end - begin;
            gf2::BitMat a(k, k);
            gf2::BitVec rhs(k);
            for (int r = 0; r < k; ++r) {
                for (int cc = 0; cc < k; ++cc) a.set(r, cc, coords.get(begin + r, begin + cc));
                rhs.set(r, c_coords.get(begin + r));
            }
            gf2::SolveResult s = gf2::solve(a, rhs);
            if (!s.solvable) { solvable = false; break; }
            dim += s.nullity;
        }
        if (solvable) total += pow2(dim);
    }
    if (total % BigInt(group.size()) != 0)
        fail("nonintegral", "fixed-point total not divisible by group size");
    return total / BigInt(group.size());
}

}  // namespace

CountReport count_via_burnside(int q, const std::vector<ActionGenerator>& gens,
                               const BurnsideOptions& opts) {
    nt::require_odd_prime(q);
    require(!(opts.force_full_space && opts.force_per_component), "bad-config",
            "conflicting evaluation strategy flags");
    int L = free_dim(q);
    std::vector<AffineMap> group = group_closure(q, gens, opts.closure_cap);
    bool per_component = opts.force_per_component || (L > 36 && !opts.force_full_space);
    BigInt count = per_component ? burnside_per_component(q, gens, group)
                                 : burnside_count(q, group);
    CountReport r;
    r.q = q;
    r.method = "burnside";
    r.up_to_isotopy = count;
    nlohmann::json b;
    b["group_size"] = std::to_string(group.size());
    b["evaluation"] = per_component ? "per-component" : "full-space";
    r.breakdown_json = b.dump();
    return r;
}

CountReport count_via_orbits(int q, const std::vector<ActionGenerator>& gens,
                             const OrbitOptions& opts) {
    nt::require_odd_prime(q);
    OrbitPartition part = partition_orbits(q, gens, opts.max_bits);
    CountReport r;
    r.q = q;
    r.method = "orbit_enumeration";
    r.up_to_isotopy = BigInt(part.representatives.size());
    nlohmann::json b;
    b["classes"] = std::to_string(part.representatives.size());
    b["space_size"] = std::to_string(uint64_t(1) << free_dim(q));
    r.breakdown_json = b.dump();
    return r;
}

CountReport count_isomorphism_baseline(int q, const BurnsideOptions& opts) {
    nt::require_odd_prime(q);
    std::vector<ActionGenerator> gens = isomorphism_generators(q);
    std::vector<AffineMap> group = group_closure(q, gens, opts.closure_cap);
    BigInt count = burnside_count(q, group);
    CountReport r;
    r.q = q;
    r.method = "burnside";
    r.up_to_isomorphism = count;
    nlohmann::json b;
    b["group_size"] = std::to_string(group.size());
    b["action"] = "automorphism+coboundary";
    r.breakdown_json = b.dump();
    return r;
}

}  // namespace loopcount
