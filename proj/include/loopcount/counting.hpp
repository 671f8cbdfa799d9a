#pragma once

// Exact counts of nilpotent loops of order 2q (q an odd prime) up to isotopy
// and up to isomorphism.
//
// Both counts are orbit counts on the cocycle space GF(2)^((q-1)^2):
// isomorphism classes under the automorphism + coboundary group of order
// (q-1) * 2^(q-1), isotopy classes under the full group of order
// (q-1) * q^2 * 2^(q-1) that also contains the partial translations coming
// from renormalized principal isotopes.  The closed forms evaluate Burnside
// sums over those groups; with E = (q-1)(q-2):
//
//   isomorphism(q) = ( sum over e | q-1 of phi(e) * 2^(E/e) ) / (q-1)
//   isotopy(q)     = ( 2^E
//                      + q^2 * sum over e | q-1, e > 1 of phi(e) * 2^(E/e)
//                      + E * 2^(q-1)
//                      + 3*(q-1) )                  / (q^2 * (q-1))
//
// Both are verified against orbit enumeration and the brute-force oracle at
// q = 3, 5.

#include <string>
#include <vector>

#include "loopcount/action.hpp"
#include "loopcount/bigint.hpp"
#include "loopcount/report.hpp"

namespace loopcount {

BigInt isotopy_count_formula(int q);
BigInt isomorphism_count_formula(int q);

// Closed forms for both counts; breakdown lists every summand.
CountReport count_via_formula(int q);

struct BurnsideOptions {
    size_t closure_cap = 10000000;
    // Evaluation strategy: per invariant-subspace component when
    // (q-1)^2 > 36, full-space otherwise; the flags force one path.
    bool force_full_space = false;
    bool force_per_component = false;
};

// Burnside over the closure of the given generators.
CountReport count_via_burnside(int q, const std::vector<ActionGenerator>& gens,
                               const BurnsideOptions& opts = {});

struct OrbitOptions {
    int max_bits = 30;
};

// Explicit orbit enumeration over the whole space (small q only).
CountReport count_via_orbits(int q, const std::vector<ActionGenerator>& gens,
                             const OrbitOptions& opts = {});

// Orbit count under the restricted automorphism + coboundary group: the
// isomorphism-class count, reported in up_to_isomorphism.
CountReport count_isomorphism_baseline(int q, const BurnsideOptions& opts = {});

}  // namespace loopcount
