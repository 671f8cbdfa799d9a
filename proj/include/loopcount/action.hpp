#pragma once

// The group acting on the cocycle space.
//
// Generators are specified semantically and then compiled to affine maps
// v -> M v + c on the flattened space GF(2)^((q-1)^2):
//  - automorphism u:        theta'(x,y) = theta(ux, uy), u a unit mod q;
//  - coboundary_shift f:    theta'     = theta + delta f;
//  - isotope_renorm a,b:    build E(theta), take the principal isotope by
//    (a,b), relabel so the identity returns to 0 and the table is again a
//    canonical extension, and read the cocycle back off.
//
// Orbits of the group generated by automorphisms and coboundary shifts are
// isomorphism classes of the extensions; adding the isotope generators
// refines nothing but merges classes into isotopy classes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopcount/bigint.hpp"
#include "loopcount/cocycle.hpp"
#include "loopcount/gf2.hpp"

namespace loopcount {

struct AffineMap {
    gf2::BitMat m;
    gf2::BitVec c;

    gf2::BitVec apply(const gf2::BitVec& v) const { return m.mul(v) ^ c; }
    // (*this) after inner: v -> M (M' v + c') + c.
    AffineMap compose(const AffineMap& inner) const {
        return {m.mul(inner.m), m.mul(inner.c) ^ c};
    }
    AffineMap inverse() const;
    bool operator==(const AffineMap& o) const = default;
    static AffineMap identity(int n) { return {gf2::BitMat::identity(n), gf2::BitVec(n)}; }
};

struct AffineMapHash {
    size_t operator()(const AffineMap& a) const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ uint64_t(a.m.rows);
        auto mix = [&h](uint64_t x) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        for (uint64_t w : a.m.w) mix(w);
        for (uint64_t w : a.c.w) mix(w);
        return size_t(h);
    }
};

struct ActionGenerator {
    enum class Kind { automorphism, coboundary_shift, isotope_renorm, linear };
    Kind kind = Kind::automorphism;
    int u = 1;                   // automorphism: multiplier mod q
    std::vector<uint8_t> f;      // coboundary_shift: q values, f[0] = 0
    int a1 = 0, a2 = 0;          // isotope_renorm: a = (a1, a2) in Z_2 x Z_q
    int b1 = 0, b2 = 0;          //                 b = (b1, b2)
    AffineMap lin;               // linear: taken as is

    static ActionGenerator automorphism(int u) {
        ActionGenerator g;
        g.kind = Kind::automorphism;
        g.u = u;
        return g;
    }
    static ActionGenerator coboundary_shift(std::vector<uint8_t> f) {
        ActionGenerator g;
        g.kind = Kind::coboundary_shift;
        g.f = std::move(f);
        return g;
    }
    static ActionGenerator isotope_renorm(int a1, int a2, int b1, int b2) {
        ActionGenerator g;
        g.kind = Kind::isotope_renorm;
        g.a1 = a1; g.a2 = a2; g.b1 = b1; g.b2 = b2;
        return g;
    }
    static ActionGenerator linear(AffineMap map) {
        ActionGenerator g;
        g.kind = Kind::linear;
        g.lin = std::move(map);
        return g;
    }
};

// Semantic action of one generator.
Cocycle apply(const ActionGenerator& gen, const Cocycle& theta);

// Isotope action computed through the Cayley table: extend, take the raw
// principal isotope, relabel canonically, extract.  Slow path used to
// cross-check the closed-form apply(); throws "not-extension-after-isotopy"
// if the relabelled table is not a canonical extension.
Cocycle apply_isotope_semantic(int a1, int a2, int b1, int b2, const Cocycle& theta);

// Compile to an affine map on the flattened space.  Verifies affineness on
// sample vectors (exhaustively for small q) and invertibility of the linear
// part; throws "not-affine" / "not-invertible".
AffineMap compile(const ActionGenerator& gen, int q);

std::vector<AffineMap> compile_all(const std::vector<ActionGenerator>& gens, int q);

// Compiled partial translation T_{s,t}: the pure isotope maps
// T_{s,0} = isotope((0,s),(0,0)) and T_{0,t} = isotope((0,0),(0,t)),
// composed.  Linear (zero translation part).
AffineMap compiled_translation(int q, int s, int t);

// Orbit of one vector under the generated group, sorted lexicographically.
// Throws "space-too-large" past the cap.
std::vector<gf2::BitVec> orbit(int q, const std::vector<ActionGenerator>& gens,
                               const CocycleVector& start, size_t cap = 10000000);

struct OrbitPartition {
    int q = 0;
    // Class ids indexed by enumeration index of the vector; ids are assigned
    // in ascending order of the class's smallest vector, which is also its
    // representative.
    std::vector<uint32_t> class_of;
    std::vector<CocycleVector> representatives;
    std::vector<uint64_t> sizes;
};

// Full orbit partition of the space; requires (q-1)^2 <= max_bits
// ("space-too-large" otherwise).
OrbitPartition partition_orbits(int q, const std::vector<ActionGenerator>& gens,
                                int max_bits = 30);

// One JSON line {"rep": hex, "size": n} per class.
std::string partition_to_jsonl(const OrbitPartition& p);

// Closure of the generated group as explicit affine maps; throws
// "group-too-large" past the cap.
std::vector<AffineMap> group_closure(int q, const std::vector<ActionGenerator>& gens,
                                     size_t cap = 10000000);

// Exact orbit count by averaging fixed-point counts over the full group.
// Throws "nonintegral" if the fixed-point total is not divisible by the
// group order (a symptom of a non-group input).
BigInt burnside_count(int q, const std::vector<AffineMap>& group);

struct SubspaceComponent {
    std::string label;
    std::vector<gf2::BitVec> basis;
};

enum class Separability { separable, not_separable, undecided };

struct SeparabilityReport {
    Separability verdict = Separability::undecided;
    std::string detail;
};

struct SeparabilityOptions {
    size_t closure_cap = 200000;  // exhaustive decision up to this group size
    int witness_rounds = 2000;    // random products tried past the cap
    uint64_t seed = 0x5eedull;
};

// Can the generated group move a vector supported in component comp_a to one
// with nonzero support in component comp_b?  separable = certified no,
// not_separable = certified yes (witness found), undecided otherwise.  The
// components must come from one direct-sum decomposition of the full space
// ("not-a-decomposition" otherwise); comp_a == comp_b reports not_separable.
SeparabilityReport are_separable(int q, const std::vector<SubspaceComponent>& decomposition,
                                 int comp_a, int comp_b,
                                 const std::vector<ActionGenerator>& gens,
                                 const SeparabilityOptions& opts = {});

// The ratio decomposition: for r in 1..q-1, W_r is the fixed space of the
// compiled translation T_{-r, 1}.  Each W_r has dimension q-1, the W_r are
// independent and fill the space, W_1 is the coboundary subspace, and every
// shipped generator kind preserves the set {W_r}.
std::vector<SubspaceComponent> ratio_components(int q);

// Generator configuration files: a JSON array of generator objects,
//   {"kind": "automorphism", "u": 2 | "primitive_root"}
//   {"kind": "coboundary_shift", "f": [0,1,0,...] | "indicator_basis"}
//   {"kind": "isotope_renorm", "a": [0,1], "b": [0,0]}
//   {"kind": "linear", "rows": ["0101...", ...], "c": "00..."}
// The symbolic forms resolve per q: "primitive_root" is the smallest
// primitive root mod q, "indicator_basis" expands to the q-1 indicator
// coboundary shifts.
std::vector<ActionGenerator> load_generators(const std::string& json_text, int q);

// Built-in configurations (matching the files shipped under generators/).
std::vector<ActionGenerator> isotopy_generators(int q);
std::vector<ActionGenerator> isomorphism_generators(int q);

// Stable digest of a compiled generator list; cache keys depend on it.
std::string generators_digest(int q, const std::vector<ActionGenerator>& gens);

}  // namespace loopcount
