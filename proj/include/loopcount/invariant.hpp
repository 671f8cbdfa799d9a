#pragma once

// Invariant subspaces of the cocycle space under the order-q cyclic part of
// the action, via the factorization of x^q - 1 over GF(2).  Components are
// kernels of p(M) for the irreducible factors p; no change of basis is
// performed.

#include <optional>
#include <string>
#include <vector>

#include "loopcount/action.hpp"
#include "loopcount/gf2.hpp"

namespace loopcount {

// Irreducible factors of x^q - 1 over GF(2): x+1 plus (q-1)/d factors of
// degree d = ord_q(2).  Deterministic, integer-only: primitive idempotents
// from cyclotomic cosets of 2 mod q, then minimal polynomials from Krylov
// sequences.  Sorted by (degree, coefficients from x^0 up).
std::vector<gf2::Gf2Poly> factor_cyclotomic(int q);

struct InvariantComponent {
    gf2::Gf2Poly factor;
    int multiplicity = 0;              // dim(ker factor(M)) / deg(factor); may be 0
    std::vector<gf2::BitVec> basis;    // basis of ker factor(M)
};

struct Decomposition {
    int q = 0;
    std::vector<InvariantComponent> components;  // ordered like factor_cyclotomic(q)
};

// Kernel decomposition under a compiled generator of multiplicative order q.
// The map must be linear (zero constant part) with M^q = I, M != I; throws
// "order-check-failed" otherwise.
Decomposition decompose(int q, const AffineMap& cyclic_generator);

// Dimension of the affine fixed set {v in span(basis) : M v + c = v}, or
// nullopt when that set is empty.  The span must be invariant under M
// ("not-invariant").
std::optional<int> fixed_space_dim(const AffineMap& map, const std::vector<gf2::BitVec>& basis);

// Adapter for are_separable; labels are the factor coefficient strings.
std::vector<SubspaceComponent> to_subspace_components(const Decomposition& d);

// {"q":..., "components":[{"factor": coeff bits low-first, "degree": d,
// "multiplicity": m, "basis": [hex, ...]}, ...]}
std::string decomposition_to_json(const Decomposition& d);

}  // namespace loopcount
