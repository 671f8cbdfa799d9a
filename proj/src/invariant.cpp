#include "loopcount/invariant.hpp"

#include <algorithm>

#include "json.hpp"
#include "loopcount/cocycle.hpp"
#include "loopcount/nt.hpp"

namespace loopcount {

namespace {

// Arithmetic in GF(2)[x]/(x^q - 1): elements are bit vectors of length q.
gf2::BitVec ring_mul(const gf2::BitVec& a, const gf2::BitVec& b, int q) {
    gf2::BitVec out(q);
    for (int i = 0; i < q; ++i) {
        if (!a.get(i)) continue;
        for (int j = 0; j < q; ++j)
            if (b.get(j)) out.flip((i + j) % q);
    }
    return out;
}

gf2::BitVec ring_shift(const gf2::BitVec& a, int q) {
    gf2::BitVec out(q);
    for (int i = 0; i < q; ++i)
        if (a.get(i)) out.set((i + 1) % q, true);
    return out;
}

}  // namespace

std::vector<gf2::Gf2Poly> factor_cyclotomic(int q) {
    nt::require_odd_prime(q);
    // Cyclotomic cosets of 2 mod q.
    std::vector<char> seen(q, 0);
    std::vector<gf2::BitVec> coset_idempotents;
    for (int i = 0; i < q; ++i) {
        if (seen[i]) continue;
        gf2::BitVec u(q);
        int v = i;
        while (!seen[v]) {
            seen[v] = 1;
            u.set(v, true);
            v = 2 * v % q;
        }
        coset_idempotents.push_back(u);
    }
    // Atoms of the Boolean algebra spanned by the coset idempotents: these
    // are the primitive idempotents, one per irreducible factor.
    gf2::BitVec one(q);
    one.set(0, true);
    std::vector<gf2::BitVec> blocks{one};
    for (const auto& u : coset_idempotents) {
        std::vector<gf2::BitVec> next;
        for (const auto& b : blocks) {
            gf2::BitVec p1 = ring_mul(b, u, q);
            gf2::BitVec p2 = b ^ p1;
            if (!p1.is_zero()) next.push_back(p1);
            if (!p2.is_zero()) next.push_back(p2);
        }
        std::sort(next.begin(), next.end(), gf2::lex_less);
        next.erase(std::unique(next.begin(), next.end()), next.end());
        blocks = std::move(next);
    }
    // Minimal polynomial of multiplication by x on each primitive component:
    // the first linear dependency in the Krylov sequence e, xe, x^2 e, ...
    std::vector<gf2::Gf2Poly> factors;
    for (const auto& e : blocks) {
        gf2::TrackedEliminator elim(q + 1);
        gf2::BitVec v = e;
        gf2::Gf2Poly f;
        for (int k = 0; k <= q; ++k) {
            auto dep = elim.add(v);
            if (dep) {
                for (int i = 0; i <= k; ++i)
                    if (dep->get(i)) f.set(i, true);
                break;
            }
            v = ring_shift(v, q);
        }
        require(!f.is_zero(), "internal", "no Krylov dependency found");
        factors.push_back(f);
    }
    std::sort(factors.begin(), factors.end());
    // Structural checks: degrees, product.
    int d = nt::ord_mod(2, q);
    require(int(factors.size()) == 1 + (q - 1) / d, "internal", "wrong factor count");
    gf2::Gf2Poly prod = gf2::Gf2Poly::one();
    for (const auto& f : factors) prod = prod * f;
    gf2::Gf2Poly target = gf2::Gf2Poly::monomial(q) + gf2::Gf2Poly::one();
    require(prod == target, "internal", "factor product is not x^q - 1");
    return factors;
}

Decomposition decompose(int q, const AffineMap& cyclic_generator) {
    nt::require_odd_prime(q);
    int L = free_dim(q);
    const gf2::BitMat& m = cyclic_generator.m;
    require(m.rows == L && m.cols == L, "order-check-failed", "generator has wrong dimensions");
    require(cyclic_generator.c.is_zero(), "order-check-failed",
            "cyclic generator must be linear (zero constant part)");
    gf2::BitMat I = gf2::BitMat::identity(L);
    require(!(m == I), "order-check-failed", "generator is the identity");
    require(m.pow(uint64_t(q)) == I, "order-check-failed", "M^q != I");

    Decomposition out;
    out.q = q;
    int total = 0;
    std::vector<gf2::BitVec> all;
    for (const auto& f : factor_cyclotomic(q)) {
        InvariantComponent comp;
        comp.factor = f;
        comp.basis = gf2::kernel_basis(f.eval(m));
        int dim = int(comp.basis.size());
        int deg = f.degree();
        require(dim % deg == 0, "internal", "kernel dimension not a multiple of the degree");
        comp.multiplicity = dim / deg;
        total += dim;
        for (const auto& b : comp.basis) all.push_back(b);
        out.components.push_back(std::move(comp));
    }
    require(total == L, "internal", "component ranks do not sum to the space dimension");
    require(gf2::rank_of(all) == L, "internal", "components are not independent");
    // Invariance of each kernel under M.
    for (const auto& comp : out.components) {
        gf2::Eliminator span;
        for (const auto& b : comp.basis) span.add(b);
        for (const auto& b : comp.basis)
            require(span.contains(m.mul(b)), "internal", "kernel not invariant under M");
    }
    return out;
}

std::optional<int> fixed_space_dim(const AffineMap& map, const std::vector<gf2::BitVec>& basis) {
    int L = map.m.rows;
    gf2::Eliminator span;
    for (const auto& b : basis) {
        require(b.n == L, "not-invariant", "basis vector of wrong length");
        require(span.add(b), "bad-basis", "basis vectors are dependent");
    }
    for (const auto& b : basis)
        require(span.contains(map.m.mul(b)), "not-invariant",
                "subspace is not invariant under the linear part");
    int k = int(basis.size());
    // Solve (M+I) B y = c over the subspace coordinates y.
    gf2::BitMat a(L, k);
    gf2::BitMat mi = map.m ^ gf2::BitMat::identity(L);
    for (int j = 0; j < k; ++j) a.set_col(j, mi.mul(basis[j]));
    gf2::SolveResult s = gf2::solve(a, map.c);
    if (!s.solvable) return std::nullopt;
    return s.nullity;
}

std::vector<SubspaceComponent> to_subspace_components(const Decomposition& d) {
    std::vector<SubspaceComponent> out;
    for (const auto& comp : d.components)
        out.push_back({comp.factor.coeff_string(), comp.basis});
    return out;
}

std::string decomposition_to_json(const Decomposition& d) {
    nlohmann::json j;
    j["q"] = d.q;
    auto comps = nlohmann::json::array();
    for (const auto& comp : d.components) {
        nlohmann::json c;
        c["factor"] = comp.factor.coeff_string();
        c["degree"] = comp.factor.degree();
        c["multiplicity"] = comp.multiplicity;
        auto basis = nlohmann::json::array();
        for (const auto& b : comp.basis) basis.push_back(gf2::to_hex(b));
        c["basis"] = basis;
        comps.push_back(c);
    }
    j["components"] = comps;
    return j.dump();
}

}  // namespace loopcount
