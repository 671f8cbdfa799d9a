#pragma once

// Finite loops as Cayley tables.
//
// A table of order n is a row-major n*n array over {0..n-1}; element 0 is
// required to be a two-sided identity for every operation that assumes a
// loop.  Rows are left translations: t[x*n+y] = x*y.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopcount/errors.hpp"

namespace loopcount {

struct CayleyTable {
    int n = 0;
    std::vector<int> t;

    CayleyTable() = default;
    explicit CayleyTable(int order) : n(order), t(size_t(order) * order, 0) {}

    int at(int x, int y) const { return t[size_t(x) * n + y]; }
    void set(int x, int y, int v) { t[size_t(x) * n + y] = v; }

    bool operator==(const CayleyTable& o) const = default;

    // Cyclic group Z_n with 0 as identity.
    static CayleyTable cyclic(int order) {
        CayleyTable c(order);
        for (int x = 0; x < order; ++x)
            for (int y = 0; y < order; ++y) c.set(x, y, (x + y) % order);
        return c;
    }
};

// Triple of permutations (alpha, beta, gamma) witnessing
// gamma(x * y) = alpha(x) . beta(y) between two tables.
struct Isotopy {
    std::vector<int> alpha, beta, gamma;
};

struct Nilpotency {
    bool nilpotent = false;
    int cls = 0;  // number of central quotient steps to reach the trivial loop; valid when nilpotent
};

// Total check: entries in range, every row and column a permutation, and 0 a
// two-sided identity.
bool is_loop(const CayleyTable& q);

// Elements commuting and associating (in all three positions) with everything.
// Sorted ascending; contains 0 for any loop.
std::vector<int> center(const CayleyTable& q);

Nilpotency is_nilpotent(const CayleyTable& q);

// Quotient by a normal subloop given as a sorted element list containing 0.
// Cosets are relabelled 0..k-1 with the identity coset first, then by
// smallest element.  Throws "not-normal" if the cosets do not partition the
// loop or the induced product is ill-defined.
CayleyTable quotient(const CayleyTable& q, const std::vector<int>& subloop);

// Identity-preserving isomorphism search; returns the relabelling gamma with
// gamma(x * y) = gamma(x) . gamma(y) if one exists.  Throws "order-mismatch"
// when the orders differ.
std::optional<std::vector<int>> are_isomorphic(const CayleyTable& a, const CayleyTable& b);

// Principal isotope x.y = (x / b) * (a \ y), relabelled so that 0 is the
// identity by swapping 0 with the identity element a*b of the raw table.
CayleyTable principal_isotope(const CayleyTable& q, int a, int b);

// True iff b is isomorphic to some principal isotope of a.  Throws
// "order-mismatch" when orders differ.
bool are_isotopic(const CayleyTable& a, const CayleyTable& b);

bool isotopy_valid(const Isotopy& iso, const CayleyTable& from, const CayleyTable& to);

// Explicit isotopy witness, when one exists.
std::optional<Isotopy> isotopy_witness(const CayleyTable& a, const CayleyTable& b);

// Relabelling-invariant fingerprint: multiset of per-element invariants
// (left/right power orders, translation cycle types) plus global counts
// (commuting pairs, associating triples).  Equal tables that are isomorphic
// always produce equal fingerprints.
std::string iso_fingerprint(const CayleyTable& q);

// Isotopy-invariant fingerprint: sorted set of iso_fingerprints over all n^2
// principal isotopes.
std::string isotopy_fingerprint(const CayleyTable& q);

// Serialization.  Text form is n lines of n space-separated entries; JSON
// form is {"n": ..., "table": [[...], ...]}.
std::string table_to_text(const CayleyTable& q);
CayleyTable table_from_text(const std::string& text);
std::string table_to_json(const CayleyTable& q);
CayleyTable table_from_json(const std::string& text);

}  // namespace loopcount
