#pragma once

// Bit-packed linear algebra over GF(2).
//
// Conventions used throughout the project:
//  - BitVec stores bit i in word i/64, bit i%64 (LSB first within a word).
//  - Lexicographic order on vectors treats bit 0 as the most significant
//    position: enumeration index of v is sum b_i * 2^(L-1-i).  Hex encoding
//    writes that index most-significant-digit first, zero padded to
//    ceil(L/4) digits, lowercase.
//  - BitMat is row major; mul(v) computes the matrix-vector product with v
//    as a column vector.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loopcount/errors.hpp"

namespace loopcount::gf2 {

inline int words_for(int bits) { return (bits + 63) / 64; }

struct BitVec {
    int n = 0;
    std::vector<uint64_t> w;

    BitVec() = default;
    explicit BitVec(int bits) : n(bits), w(words_for(bits), 0) {}

    bool get(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) w[i >> 6] |= m; else w[i >> 6] &= ~m;
    }
    void flip(int i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }

    bool is_zero() const {
        for (uint64_t x : w) if (x) return false;
        return true;
    }
    int popcount() const {
        int c = 0;
        for (uint64_t x : w) c += __builtin_popcountll(x);
        return c;
    }

    BitVec& operator^=(const BitVec& o) {
        for (size_t k = 0; k < w.size(); ++k) w[k] ^= o.w[k];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }
    bool operator==(const BitVec& o) const = default;

    // Parity of the AND of two vectors.
    bool dot(const BitVec& o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < w.size(); ++k) acc ^= w[k] & o.w[k];
        return __builtin_parityll(acc);
    }

    // Index of the first set bit, or -1.
    int first_set() const {
        for (size_t k = 0; k < w.size(); ++k)
            if (w[k]) return int(k) * 64 + __builtin_ctzll(w[k]);
        return -1;
    }
};

// Lexicographic comparison with bit 0 most significant: a < b iff at the
// first differing position a has 0.  Coincides with comparison of
// enumeration indices.
inline int lex_compare(const BitVec& a, const BitVec& b) {
    for (size_t k = 0; k < a.w.size(); ++k) {
        uint64_t d = a.w[k] ^ b.w[k];
        if (d) {
            int bit = __builtin_ctzll(d);
            return (b.w[k] >> bit) & 1 ? -1 : 1;
        }
    }
    return 0;
}
inline bool lex_less(const BitVec& a, const BitVec& b) { return lex_compare(a, b) < 0; }

// Enumeration index for vectors of length <= 63.
inline uint64_t lex_index(const BitVec& v) {
    uint64_t r = 0;
    for (int i = 0; i < v.n; ++i) r = (r << 1) | uint64_t(v.get(i));
    return r;
}
inline BitVec from_lex_index(int n, uint64_t idx) {
    BitVec v(n);
    for (int i = n - 1; i >= 0; --i) { v.set(i, idx & 1); idx >>= 1; }
    return v;
}

// Hex encoding: width ceil(n/4), most significant digit first, lowercase.
inline std::string to_hex(const BitVec& v) {
    int digits = (v.n + 3) / 4;
    int pad = digits * 4 - v.n;
    std::string s(digits, '0');
    for (int j = 0; j < digits; ++j) {
        int d = 0;
        for (int k = 0; k < 4; ++k) {
            int i = j * 4 + k - pad;
            d = (d << 1) | (i >= 0 && i < v.n ? int(v.get(i)) : 0);
        }
        s[j] = "0123456789abcdef"[d];
    }
    return s;
}

inline BitVec from_hex(int n, const std::string& s) {
    int digits = (n + 3) / 4;
    int pad = digits * 4 - n;
    require(int(s.size()) == digits, "bad-hex",
            "expected " + std::to_string(digits) + " hex digits, got " + std::to_string(s.size()));
    BitVec v(n);
    for (int j = 0; j < digits; ++j) {
        char c = s[j];
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else fail("bad-hex", std::string("invalid hex digit '") + c + "'");
        for (int k = 0; k < 4; ++k) {
            int i = j * 4 + k - pad;
            bool bit = (d >> (3 - k)) & 1;
            if (i < 0) {
                require(!bit, "bad-hex", "value out of range for bit length");
            } else {
                v.set(i, bit);
            }
        }
    }
    return v;
}

struct BitMat {
    int rows = 0, cols = 0;
    int stride = 0;  // words per row
    std::vector<uint64_t> w;

    BitMat() = default;
    BitMat(int r, int c) : rows(r), cols(c), stride(words_for(c)), w(size_t(r) * stride, 0) {}

    uint64_t* row(int r) { return w.data() + size_t(r) * stride; }
    const uint64_t* row(int r) const { return w.data() + size_t(r) * stride; }

    bool get(int r, int c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }
    void set(int r, int c, bool v) {
        uint64_t m = uint64_t(1) << (c & 63);
        if (v) row(r)[c >> 6] |= m; else row(r)[c >> 6] &= ~m;
    }

    static BitMat identity(int n) {
        BitMat m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    BitVec row_vec(int r) const {
        BitVec v(cols);
        for (int k = 0; k < stride; ++k) v.w[k] = row(r)[k];
        return v;
    }
    void set_row(int r, const BitVec& v) {
        for (int k = 0; k < stride; ++k) row(r)[k] = v.w[k];
    }
    BitVec col_vec(int c) const {
        BitVec v(rows);
        for (int r = 0; r < rows; ++r) v.set(r, get(r, c));
        return v;
    }
    void set_col(int c, const BitVec& v) {
        for (int r = 0; r < rows; ++r) set(r, c, v.get(r));
    }

    BitVec mul(const BitVec& v) const {
        BitVec out(rows);
        for (int r = 0; r < rows; ++r) {
            uint64_t acc = 0;
            const uint64_t* rw = row(r);
            for (int k = 0; k < stride; ++k) acc ^= rw[k] & v.w[k];
            out.set(r, __builtin_parityll(acc));
        }
        return out;
    }

    BitMat mul(const BitMat& b) const {
        BitMat out(rows, b.cols);
        for (int i = 0; i < rows; ++i) {
            uint64_t* orow = out.row(i);
            const uint64_t* arow = row(i);
            for (int k = 0; k < cols; ++k) {
                if ((arow[k >> 6] >> (k & 63)) & 1) {
                    const uint64_t* brow = b.row(k);
                    for (int t = 0; t < b.stride; ++t) orow[t] ^= brow[t];
                }
            }
        }
        return out;
    }

    BitMat pow(uint64_t e) const {
        BitMat result = identity(rows), base = *this;
        while (e) {
            if (e & 1) result = result.mul(base);
            base = base.mul(base);
            e >>= 1;
        }
        return result;
    }

    BitMat operator^(const BitMat& o) const {
        BitMat out = *this;
        for (size_t k = 0; k < w.size(); ++k) out.w[k] ^= o.w[k];
        return out;
    }

    bool operator==(const BitMat& o) const = default;

    // Columns are the given vectors.
    static BitMat from_cols(int rows, const std::vector<BitVec>& cols) {
        BitMat m(rows, int(cols.size()));
        for (int c = 0; c < int(cols.size()); ++c) m.set_col(c, cols[c]);
        return m;
    }
    static BitMat from_rows(const std::vector<BitVec>& rows_in) {
        if (rows_in.empty()) return BitMat(0, 0);
        BitMat m(int(rows_in.size()), rows_in[0].n);
        for (int r = 0; r < m.rows; ++r) m.set_row(r, rows_in[r]);
        return m;
    }
};

namespace detail {
// In-place row reduction; returns pivot column per pivot row.
inline std::vector<int> eliminate(BitMat& a) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < a.cols && r < a.rows; ++c) {
        int p = -1;
        for (int i = r; i < a.rows; ++i)
            if (a.get(i, c)) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int k = 0; k < a.stride; ++k) std::swap(a.row(p)[k], a.row(r)[k]);
        for (int i = 0; i < a.rows; ++i) {
            if (i != r && a.get(i, c))
                for (int k = 0; k < a.stride; ++k) a.row(i)[k] ^= a.row(r)[k];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}
}  // namespace detail

inline int rank(BitMat a) { return int(detail::eliminate(a).size()); }

inline int rank_of(const std::vector<BitVec>& vecs) {
    if (vecs.empty()) return 0;
    return rank(BitMat::from_rows(vecs));
}

// Basis of the right kernel {v : Av = 0}, ordered by free column index.
inline std::vector<BitVec> kernel_basis(const BitMat& a_in) {
    BitMat a = a_in;
    std::vector<int> pivots = detail::eliminate(a);
    std::vector<int> pivot_of_col(a.cols, -1);
    for (int r = 0; r < int(pivots.size()); ++r) pivot_of_col[pivots[r]] = r;
    std::vector<BitVec> basis;
    for (int c = 0; c < a.cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        BitVec v(a.cols);
        v.set(c, true);
        for (int r = 0; r < int(pivots.size()); ++r)
            if (a.get(r, c)) v.set(pivots[r], true);
        basis.push_back(v);
    }
    return basis;
}

struct SolveResult {
    bool solvable = false;
    BitVec particular;  // valid when solvable
    int nullity = 0;
};

// Solve Av = b; nullity is always the kernel dimension of A.
inline SolveResult solve(const BitMat& a_in, const BitVec& b) {
    BitMat aug(a_in.rows, a_in.cols + 1);
    for (int r = 0; r < a_in.rows; ++r) {
        for (int k = 0; k < a_in.stride; ++k) aug.row(r)[k] = a_in.row(r)[k];
        if (b.get(r)) aug.set(r, a_in.cols, true);
    }
    std::vector<int> pivots = detail::eliminate(aug);
    SolveResult res;
    res.particular = BitVec(a_in.cols);
    int arank = 0;
    for (int r = 0; r < int(pivots.size()); ++r) {
        if (pivots[r] == a_in.cols) { res.solvable = false; res.nullity = a_in.cols - arank; return res; }
        ++arank;
        if (aug.get(r, a_in.cols)) res.particular.set(pivots[r], true);
    }
    res.solvable = true;
    res.nullity = a_in.cols - arank;
    return res;
}

inline std::optional<BitMat> inverse(const BitMat& m) {
    if (m.rows != m.cols) return std::nullopt;
    int n = m.rows;
    BitMat aug(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.set(r, c, m.get(r, c));
        aug.set(r, n + r, true);
    }
    std::vector<int> pivots = detail::eliminate(aug);
    if (int(pivots.size()) < n || pivots[n - 1] != n - 1) return std::nullopt;
    BitMat inv(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) inv.set(r, c, aug.get(r, n + c));
    return inv;
}

// Incremental span with membership queries.  Rows kept in echelon form.
struct Eliminator {
    std::vector<BitVec> rows;    // echelon rows
    std::vector<int> pivots;     // pivot index of each row

    // Reduce v against the stored rows.
    BitVec reduce(BitVec v) const {
        for (size_t i = 0; i < rows.size(); ++i)
            if (v.get(pivots[i])) v ^= rows[i];
        return v;
    }
    bool contains(const BitVec& v) const { return reduce(v).is_zero(); }
    // Returns true if v enlarged the span.
    bool add(const BitVec& v) {
        BitVec r = reduce(v);
        int p = r.first_set();
        if (p < 0) return false;
        rows.push_back(r);
        pivots.push_back(p);
        return true;
    }
    int rank() const { return int(rows.size()); }
};

// Eliminator that records, for each dependency, the combination of input
// vectors producing zero.  Used to read off minimal polynomials from Krylov
// sequences.
struct TrackedEliminator {
    std::vector<BitVec> rows;
    std::vector<BitVec> combos;  // combos[i]: rows[i] as xor of inputs
    std::vector<int> pivots;
    int added = 0;
    int combo_capacity;

    explicit TrackedEliminator(int capacity) : combo_capacity(capacity) {}

    // Adds the next input vector.  If it is dependent, returns the
    // combination c (over all inputs so far, including this one) with
    // xor_i c_i * input_i = 0; otherwise nullopt.
    std::optional<BitVec> add(BitVec v) {
        BitVec combo(combo_capacity);
        combo.set(added, true);
        ++added;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (v.get(pivots[i])) { v ^= rows[i]; combo ^= combos[i]; }
        }
        int p = v.first_set();
        if (p < 0) return combo;
        rows.push_back(v);
        combos.push_back(combo);
        pivots.push_back(p);
        return std::nullopt;
    }
};

// Dense polynomial over GF(2); coefficient i is the x^i coefficient.
struct Gf2Poly {
    std::vector<uint64_t> c;  // packed coefficients, lowest degree first

    Gf2Poly() = default;

    static Gf2Poly zero() { return Gf2Poly(); }
    static Gf2Poly one() { return monomial(0); }
    static Gf2Poly monomial(int k) {
        Gf2Poly p;
        p.c.assign(k / 64 + 1, 0);
        p.c[k / 64] = uint64_t(1) << (k % 64);
        return p;
    }

    int degree() const {
        for (int k = int(c.size()) - 1; k >= 0; --k)
            if (c[k]) return k * 64 + 63 - __builtin_clzll(c[k]);
        return -1;
    }
    bool is_zero() const { return degree() < 0; }
    bool get(int i) const {
        size_t k = size_t(i) / 64;
        return k < c.size() && ((c[k] >> (i % 64)) & 1);
    }
    void set(int i, bool v) {
        size_t k = size_t(i) / 64;
        if (k >= c.size()) c.resize(k + 1, 0);
        uint64_t m = uint64_t(1) << (i % 64);
        if (v) c[k] |= m; else c[k] &= ~m;
    }

    Gf2Poly operator+(const Gf2Poly& o) const {
        Gf2Poly r = *this;
        if (o.c.size() > r.c.size()) r.c.resize(o.c.size(), 0);
        for (size_t k = 0; k < o.c.size(); ++k) r.c[k] ^= o.c[k];
        return r;
    }

    Gf2Poly operator*(const Gf2Poly& o) const {
        int da = degree(), db = o.degree();
        if (da < 0 || db < 0) return zero();
        Gf2Poly r;
        r.c.assign(size_t(da + db) / 64 + 1, 0);
        for (int i = 0; i <= da; ++i) {
            if (!get(i)) continue;
            int shift = i % 64;
            size_t base = size_t(i) / 64;
            for (size_t k = 0; k < o.c.size(); ++k) {
                r.c[base + k] ^= o.c[k] << shift;
                if (shift && base + k + 1 < r.c.size())
                    r.c[base + k + 1] ^= o.c[k] >> (64 - shift);
            }
        }
        return r;
    }

    bool operator==(const Gf2Poly& o) const {
        int d = degree();
        if (d != o.degree()) return false;
        for (int i = 0; i <= d; ++i)
            if (get(i) != o.get(i)) return false;
        return true;
    }

    // Order by degree, then by coefficients from x^0 upward (0 before 1 at
    // the first difference).
    bool operator<(const Gf2Poly& o) const {
        int d = degree(), e = o.degree();
        if (d != e) return d < e;
        for (int i = 0; i <= d; ++i)
            if (get(i) != o.get(i)) return !get(i);
        return false;
    }

    // Coefficient string, lowest degree first ("11" is 1 + x).
    std::string coeff_string() const {
        int d = degree();
        if (d < 0) return "0";
        std::string s(d + 1, '0');
        for (int i = 0; i <= d; ++i) if (get(i)) s[i] = '1';
        return s;
    }
    static Gf2Poly from_coeff_string(const std::string& s) {
        Gf2Poly p;
        for (size_t i = 0; i < s.size(); ++i) {
            require(s[i] == '0' || s[i] == '1', "bad-poly", "coefficient string must be binary");
            if (s[i] == '1') p.set(int(i), true);
        }
        return p;
    }

    // Evaluate at a square matrix by Horner's rule.
    BitMat eval(const BitMat& m) const {
        int d = degree();
        BitMat acc(m.rows, m.cols);
        if (d < 0) return acc;
        for (int i = d; i >= 0; --i) {
            acc = acc.mul(m);
            if (get(i)) acc = acc ^ BitMat::identity(m.rows);
        }
        return acc;
    }
};

}  // namespace loopcount::gf2
