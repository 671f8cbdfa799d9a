#pragma once

// GF(2) cocycles on Z_q and the central extensions they define.
//
// A cocycle is a q*q table theta over {0,1}, normalized: theta(0,y) =
// theta(x,0) = 0.  The extension E(theta) lives on Z_2 x Z_q with product
// (a,x)(b,y) = (a + b + theta(x,y), x + y) and element encoding
// (a,x) -> a*q + x, so 0 encodes the identity (0,0).
//
// Free coordinates are theta(x,y) for x,y in 1..q-1, flattened row major:
// bit (x-1)*(q-1) + (y-1) of a CocycleVector of length (q-1)^2.

#include <cstdint>
#include <string>
#include <vector>

#include "loopcount/cayley.hpp"
#include "loopcount/gf2.hpp"

namespace loopcount {

struct Cocycle {
    int q = 0;
    std::vector<uint8_t> bits;  // q*q, row major

    Cocycle() = default;
    explicit Cocycle(int qq) : q(qq), bits(size_t(qq) * qq, 0) {}

    uint8_t at(int x, int y) const { return bits[size_t(x) * q + y]; }
    void set(int x, int y, uint8_t v) { bits[size_t(x) * q + y] = v; }

    bool normalized() const {
        for (int i = 0; i < q; ++i)
            if (at(0, i) || at(i, 0)) return false;
        return true;
    }
    bool operator==(const Cocycle& o) const = default;
};

struct CocycleVector {
    int q = 0;
    gf2::BitVec v;  // length (q-1)^2

    CocycleVector() = default;
    explicit CocycleVector(int qq) : q(qq), v((qq - 1) * (qq - 1)) {}

    bool operator==(const CocycleVector& o) const = default;
};

inline int free_dim(int q) { return (q - 1) * (q - 1); }

// Drop the zero row and column.
CocycleVector flatten(const Cocycle& theta);
// Rebuild the normalized table.
Cocycle unflatten(const CocycleVector& vec);

// Cayley table of the central extension; validates normalization
// ("not-normalized").
CayleyTable extend(const Cocycle& theta);

// Recover the cocycle from an extension table in canonical form; throws
// "not-an-extension" if the table does not have that shape.
Cocycle extract(const CayleyTable& table);

// Coboundary of f : Z_q -> GF(2), f(0) = 0 required ("not-normalized"):
// (delta f)(x,y) = f(x) + f(y) + f(x+y).
Cocycle coboundary(int q, const std::vector<uint8_t>& f);

// Coboundaries of the indicator functions of 1..q-1, flattened; a basis of
// the coboundary subspace (dimension q-1).
std::vector<CocycleVector> coboundary_basis(int q);

// Rank of a list of flattened cocycles.
int gf2_rank(const std::vector<CocycleVector>& vecs);

// Hex encoding of the flattened vector (see gf2::to_hex for the convention).
std::string to_hex(const CocycleVector& vec);
CocycleVector from_hex(int q, const std::string& hex);

// Enumeration order: index = sum of bit i * 2^(L-1-i); usable while the
// index fits in 63 bits.
uint64_t lex_index(const CocycleVector& vec);
CocycleVector vector_at(int q, uint64_t index);

}  // namespace loopcount
