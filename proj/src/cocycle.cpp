#include "loopcount/cocycle.hpp"

#include "loopcount/errors.hpp"

namespace loopcount {

CocycleVector flatten(const Cocycle& theta) {
    int q = theta.q;
    require(theta.normalized(), "not-normalized", "cocycle has nonzero values on row/column 0");
    CocycleVector out(q);
    for (int x = 1; x < q; ++x)
        for (int y = 1; y < q; ++y)
            if (theta.at(x, y)) out.v.set((x - 1) * (q - 1) + (y - 1), true);
    return out;
}

Cocycle unflatten(const CocycleVector& vec) {
    int q = vec.q;
    Cocycle theta(q);
    for (int x = 1; x < q; ++x)
        for (int y = 1; y < q; ++y)
            theta.set(x, y, vec.v.get((x - 1) * (q - 1) + (y - 1)));
    return theta;
}

CayleyTable extend(const Cocycle& theta) {
    int q = theta.q;
    require(q >= 1 && int(theta.bits.size()) == q * q, "not-normalized", "malformed cocycle table");
    for (uint8_t b : theta.bits)
        require(b <= 1, "not-normalized", "cocycle entries must be 0 or 1");
    require(theta.normalized(), "not-normalized", "cocycle has nonzero values on row/column 0");
    int n = 2 * q;
    CayleyTable out(n);
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < q; ++x)
            for (int b = 0; b < 2; ++b)
                for (int y = 0; y < q; ++y) {
                    int first = (a + b + theta.at(x, y)) & 1;
                    int second = (x + y) % q;
                    out.set(a * q + x, b * q + y, first * q + second);
                }
    return out;
}

Cocycle extract(const CayleyTable& table) {
    int n = table.n;
    require(n >= 2 && n % 2 == 0, "not-an-extension", "order must be even");
    int q = n / 2;
    Cocycle theta(q);
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y)
            theta.set(x, y, uint8_t(table.at(x, y) / q));
    require(theta.normalized(), "not-an-extension", "row/column 0 of the cocycle is nonzero");
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < q; ++x)
            for (int b = 0; b < 2; ++b)
                for (int y = 0; y < q; ++y) {
                    int expect = ((a + b + theta.at(x, y)) & 1) * q + (x + y) % q;
                    require(table.at(a * q + x, b * q + y) == expect, "not-an-extension",
                            "table is not a central extension in canonical form");
                }
    return theta;
}

Cocycle coboundary(int q, const std::vector<uint8_t>& f) {
    require(int(f.size()) == q, "not-normalized", "f must have q values");
    for (uint8_t b : f) require(b <= 1, "not-normalized", "f values must be 0 or 1");
    require(f[0] == 0, "not-normalized", "f(0) must be 0");
    Cocycle theta(q);
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < q; ++y)
            theta.set(x, y, uint8_t((f[x] + f[y] + f[(x + y) % q]) & 1));
    return theta;
}

std::vector<CocycleVector> coboundary_basis(int q) {
    std::vector<CocycleVector> basis;
    basis.reserve(q - 1);
    for (int k = 1; k < q; ++k) {
        std::vector<uint8_t> f(q, 0);
        f[k] = 1;
        basis.push_back(flatten(coboundary(q, f)));
    }
    return basis;
}

int gf2_rank(const std::vector<CocycleVector>& vecs) {
    std::vector<gf2::BitVec> rows;
    rows.reserve(vecs.size());
    for (const auto& v : vecs) rows.push_back(v.v);
    return gf2::rank_of(rows);
}

std::string to_hex(const CocycleVector& vec) { return gf2::to_hex(vec.v); }

CocycleVector from_hex(int q, const std::string& hex) {
    CocycleVector out(q);
    out.v = gf2::from_hex(free_dim(q), hex);
    return out;
}

uint64_t lex_index(const CocycleVector& vec) {
    if (vec.v.n > 63) fail_resource("space-too-large", "lex index needs at most 63 bits");
    return gf2::lex_index(vec.v);
}

CocycleVector vector_at(int q, uint64_t index) {
    if (free_dim(q) > 63) fail_resource("space-too-large", "lex index needs at most 63 bits");
    CocycleVector out(q);
    out.v = gf2::from_lex_index(free_dim(q), index);
    return out;
}

}  // namespace loopcount
