#include "loopcount/cayley.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace loopcount {

bool is_loop(const CayleyTable& q) {
    int n = q.n;
    if (n <= 0 || int(q.t.size()) != n * n) return false;
    for (int v : q.t)
        if (v < 0 || v >= n) return false;
    std::vector<char> seen(n);
    for (int x = 0; x < n; ++x) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int y = 0; y < n; ++y) {
            int v = q.at(x, y);
            if (seen[v]) return false;
            seen[v] = 1;
        }
    }
    for (int y = 0; y < n; ++y) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int x = 0; x < n; ++x) {
            int v = q.at(x, y);
            if (seen[v]) return false;
            seen[v] = 1;
        }
    }
    for (int x = 0; x < n; ++x)
        if (q.at(0, x) != x || q.at(x, 0) != x) return false;
    return true;
}

std::vector<int> center(const CayleyTable& q) {
    int n = q.n;
    std::vector<int> z;
    for (int a = 0; a < n; ++a) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            if (q.at(a, x) != q.at(x, a)) ok = false;
        for (int x = 0; x < n && ok; ++x) {
            for (int y = 0; y < n; ++y) {
                if (q.at(a, q.at(x, y)) != q.at(q.at(a, x), y) ||
                    q.at(q.at(x, a), y) != q.at(x, q.at(a, y)) ||
                    q.at(q.at(x, y), a) != q.at(x, q.at(y, a))) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) z.push_back(a);
    }
    return z;
}

Nilpotency is_nilpotent(const CayleyTable& q) {
    CayleyTable cur = q;
    int steps = 0;
    while (cur.n > 1) {
        std::vector<int> z = center(cur);
        if (int(z.size()) == 1) return {false, 0};
        cur = quotient(cur, z);
        ++steps;
    }
    return {true, steps};
}

CayleyTable quotient(const CayleyTable& q, const std::vector<int>& subloop) {
    int n = q.n;
    int m = int(subloop.size());
    require(m > 0 && n % m == 0, "not-normal", "subloop size must divide the order");
    std::vector<char> in_sub(n, 0);
    for (int s : subloop) {
        require(s >= 0 && s < n, "not-normal", "subloop element out of range");
        in_sub[s] = 1;
    }
    require(in_sub[0] == 1, "not-normal", "subloop must contain the identity");
    for (int a : subloop)
        for (int b : subloop)
            require(in_sub[q.at(a, b)], "not-normal", "subloop is not closed");

    // Left cosets xN; they must partition the loop.
    std::vector<int> coset_of(n, -1);
    std::vector<std::vector<int>> cosets;
    std::map<std::vector<int>, int> coset_id;
    for (int x = 0; x < n; ++x) {
        std::vector<int> cs;
        cs.reserve(m);
        for (int s : subloop) cs.push_back(q.at(x, s));
        std::sort(cs.begin(), cs.end());
        require(std::unique(cs.begin(), cs.end()) == cs.end(), "not-normal", "coset collapse");
        auto [it, fresh] = coset_id.try_emplace(cs, int(cosets.size()));
        if (fresh) cosets.push_back(cs);
        coset_of[x] = it->second;
    }
    require(int(cosets.size()) == n / m, "not-normal", "wrong number of cosets");
    std::vector<int> member_of(n, -1);
    for (int c = 0; c < int(cosets.size()); ++c) {
        for (int e : cosets[c]) {
            require(member_of[e] == -1, "not-normal", "cosets overlap");
            member_of[e] = c;
        }
    }
    for (int x = 0; x < n; ++x)
        require(member_of[x] == coset_of[x], "not-normal", "cosets do not partition");

    // Relabel: identity coset first, then ascending smallest element.
    int k = int(cosets.size());
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    int idc = coset_of[0];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (a == idc || b == idc) return a == idc && b != idc;
        return cosets[a][0] < cosets[b][0];
    });
    std::vector<int> newlabel(k);
    for (int i = 0; i < k; ++i) newlabel[order[i]] = i;

    CayleyTable out(k);
    for (int ci = 0; ci < k; ++ci) {
        for (int cj = 0; cj < k; ++cj) {
            int expect = -1;
            for (int a : cosets[ci]) {
                for (int b : cosets[cj]) {
                    int c = coset_of[q.at(a, b)];
                    if (expect == -1) expect = c;
                    require(c == expect, "not-normal", "induced product ill-defined");
                }
            }
            out.set(newlabel[ci], newlabel[cj], newlabel[expect]);
        }
    }
    require(is_loop(out), "not-normal", "quotient is not a loop");
    return out;
}

namespace {

// Length of the cycle of the permutation p containing 0, reading p as the
// left/right translation by x: this is the smallest k with x^[k] = identity.
int power_order(const std::vector<int>& p) {
    int v = p[0];
    int k = 1;
    while (v != 0) { v = p[v]; ++k; }
    return k;
}

std::string cycle_type(const std::vector<int>& p) {
    int n = int(p.size());
    std::vector<char> seen(n, 0);
    std::vector<int> lens;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0, v = i;
        while (!seen[v]) { seen[v] = 1; v = p[v]; ++len; }
        lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end());
    std::string s;
    for (int l : lens) { s += std::to_string(l); s += '.'; }
    return s;
}

std::vector<std::string> element_keys(const CayleyTable& q) {
    int n = q.n;
    std::vector<std::string> keys(n);
    std::vector<int> lt(n), rt(n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) { lt[y] = q.at(x, y); rt[y] = q.at(y, x); }
        int commute = 0;
        for (int y = 0; y < n; ++y)
            if (q.at(x, y) == q.at(y, x)) ++commute;
        int assoc = 0;
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (q.at(x, q.at(y, z)) == q.at(q.at(x, y), z)) ++assoc;
        keys[x] = std::to_string(power_order(lt)) + "/" + std::to_string(power_order(rt)) +
                  "/" + cycle_type(lt) + "/" + cycle_type(rt) +
                  "/c" + std::to_string(commute) + "/a" + std::to_string(assoc);
    }
    return keys;
}

struct IsoSearch {
    const CayleyTable& a;
    const CayleyTable& b;
    int n;
    std::vector<std::string> ka, kb;
    std::vector<int> fwd, bwd;      // partial bijection, -1 = unassigned
    std::vector<int> var_order;

    IsoSearch(const CayleyTable& qa, const CayleyTable& qb)
        : a(qa), b(qb), n(qa.n), ka(element_keys(qa)), kb(element_keys(qb)),
          fwd(n, -1), bwd(n, -1) {}

    bool keys_match() const {
        std::vector<std::string> sa = ka, sb = kb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        return sa == sb;
    }

    // Assign u -> v plus all consequences; records assignments in trail.
    bool propagate(int u, int v, std::vector<int>& trail) {
        std::vector<std::pair<int, int>> queue{{u, v}};
        while (!queue.empty()) {
            auto [x, y] = queue.back();
            queue.pop_back();
            if (fwd[x] == y) continue;
            if (fwd[x] != -1 || bwd[y] != -1) return false;
            if (ka[x] != kb[y]) return false;
            fwd[x] = y;
            bwd[y] = x;
            trail.push_back(x);
            for (int w = 0; w < n; ++w) {
                if (fwd[w] == -1) continue;
                int p1 = a.at(x, w), q1 = b.at(y, fwd[w]);
                if (fwd[p1] != -1) {
                    if (fwd[p1] != q1) return false;
                } else if (bwd[q1] != -1) {
                    return false;
                } else {
                    queue.push_back({p1, q1});
                }
                int p2 = a.at(w, x), q2 = b.at(fwd[w], y);
                if (fwd[p2] != -1) {
                    if (fwd[p2] != q2) return false;
                } else if (bwd[q2] != -1) {
                    return false;
                } else {
                    queue.push_back({p2, q2});
                }
            }
        }
        return true;
    }

    void undo(std::vector<int>& trail, size_t mark) {
        while (trail.size() > mark) {
            int x = trail.back();
            trail.pop_back();
            bwd[fwd[x]] = -1;
            fwd[x] = -1;
        }
    }

    bool search(size_t idx, std::vector<int>& trail) {
        while (idx < var_order.size() && fwd[var_order[idx]] != -1) ++idx;
        if (idx == var_order.size()) return true;
        int x = var_order[idx];
        for (int y = 0; y < n; ++y) {
            if (bwd[y] != -1 || kb[y] != ka[x]) continue;
            size_t mark = trail.size();
            if (propagate(x, y, trail) && search(idx + 1, trail)) return true;
            undo(trail, mark);
        }
        return false;
    }

    std::optional<std::vector<int>> run() {
        if (!keys_match()) return std::nullopt;
        // Candidate classes tried smallest first.
        std::map<std::string, int> class_size;
        for (const auto& k : ka) ++class_size[k];
        var_order.resize(n);
        for (int i = 0; i < n; ++i) var_order[i] = i;
        std::sort(var_order.begin(), var_order.end(), [&](int x, int y) {
            int cx = class_size[ka[x]], cy = class_size[ka[y]];
            if (cx != cy) return cx < cy;
            return x < y;
        });
        std::vector<int> trail;
        if (!propagate(0, 0, trail)) return std::nullopt;
        if (!search(0, trail)) return std::nullopt;
        return fwd;
    }
};

}  // namespace

std::optional<std::vector<int>> are_isomorphic(const CayleyTable& a, const CayleyTable& b) {
    require(a.n == b.n, "order-mismatch",
            "orders " + std::to_string(a.n) + " and " + std::to_string(b.n));
    IsoSearch s(a, b);
    return s.run();
}

CayleyTable principal_isotope(const CayleyTable& q, int a, int b) {
    int n = q.n;
    require(a >= 0 && a < n && b >= 0 && b < n, "bad-element", "isotope parameters out of range");
    // Division tables: ldiv[y] = a \ y, rdiv[x] = x / b.
    std::vector<int> ldiv(n), rdiv(n);
    for (int y = 0; y < n; ++y) ldiv[q.at(a, y)] = y;
    for (int x = 0; x < n; ++x) rdiv[q.at(x, b)] = x;
    int e = q.at(a, b);  // two-sided identity of the raw isotope
    // Swap labels 0 and e.
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i) pi[i] = i;
    std::swap(pi[0], pi[e]);
    CayleyTable out(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            out.set(x, y, pi[q.at(rdiv[pi[x]], ldiv[pi[y]])]);
    for (int x = 0; x < n; ++x)
        require(out.at(0, x) == x && out.at(x, 0) == x, "internal",
                "principal isotope lost its identity");
    return out;
}

bool are_isotopic(const CayleyTable& a, const CayleyTable& b) {
    require(a.n == b.n, "order-mismatch",
            "orders " + std::to_string(a.n) + " and " + std::to_string(b.n));
    std::string fb = iso_fingerprint(b);
    for (int x = 0; x < a.n; ++x) {
        for (int y = 0; y < a.n; ++y) {
            CayleyTable iso = principal_isotope(a, x, y);
            if (iso_fingerprint(iso) != fb) continue;
            if (are_isomorphic(iso, b)) return true;
        }
    }
    return false;
}

bool isotopy_valid(const Isotopy& iso, const CayleyTable& from, const CayleyTable& to) {
    int n = from.n;
    if (to.n != n) return false;
    auto is_perm = [&](const std::vector<int>& p) {
        if (int(p.size()) != n) return false;
        std::vector<char> seen(n, 0);
        for (int v : p) {
            if (v < 0 || v >= n || seen[v]) return false;
            seen[v] = 1;
        }
        return true;
    };
    if (!is_perm(iso.alpha) || !is_perm(iso.beta) || !is_perm(iso.gamma)) return false;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (to.at(iso.alpha[x], iso.beta[y]) != iso.gamma[from.at(x, y)]) return false;
    return true;
}

std::optional<Isotopy> isotopy_witness(const CayleyTable& a, const CayleyTable& b) {
    require(a.n == b.n, "order-mismatch",
            "orders " + std::to_string(a.n) + " and " + std::to_string(b.n));
    int n = a.n;
    std::string fb = iso_fingerprint(b);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            CayleyTable iso = principal_isotope(a, x, y);
            if (iso_fingerprint(iso) != fb) continue;
            auto g = are_isomorphic(iso, b);
            if (!g) continue;
            int e = a.at(x, y);
            std::vector<int> pi(n);
            for (int i = 0; i < n; ++i) pi[i] = i;
            std::swap(pi[0], pi[e]);
            // b(alpha u, beta v) = gamma(a(u, v)) with
            // alpha(u) = g(pi(u*y)), beta(v) = g(pi(x*v)), gamma(w) = g(pi(w)).
            Isotopy w;
            w.alpha.resize(n);
            w.beta.resize(n);
            w.gamma.resize(n);
            for (int u = 0; u < n; ++u) {
                w.alpha[u] = (*g)[pi[a.at(u, y)]];
                w.beta[u] = (*g)[pi[a.at(x, u)]];
                w.gamma[u] = (*g)[pi[u]];
            }
            if (!isotopy_valid(w, a, b)) fail("internal", "constructed isotopy failed validation");
            return w;
        }
    }
    return std::nullopt;
}

std::string iso_fingerprint(const CayleyTable& q) {
    std::vector<std::string> keys = element_keys(q);
    std::sort(keys.begin(), keys.end());
    std::string s;
    for (const auto& k : keys) { s += k; s += '|'; }
    return s;
}

std::string isotopy_fingerprint(const CayleyTable& q) {
    std::vector<std::string> fps;
    fps.reserve(size_t(q.n) * q.n);
    for (int x = 0; x < q.n; ++x)
        for (int y = 0; y < q.n; ++y)
            fps.push_back(iso_fingerprint(principal_isotope(q, x, y)));
    std::sort(fps.begin(), fps.end());
    fps.erase(std::unique(fps.begin(), fps.end()), fps.end());
    std::string s;
    for (const auto& f : fps) { s += f; s += '#'; }
    return s;
}

std::string table_to_text(const CayleyTable& q) {
    std::ostringstream os;
    for (int x = 0; x < q.n; ++x) {
        for (int y = 0; y < q.n; ++y) {
            if (y) os << ' ';
            os << q.at(x, y);
        }
        os << '\n';
    }
    return os.str();
}

CayleyTable table_from_text(const std::string& text) {
    std::istringstream is(text);
    std::vector<int> vals;
    long long v;
    while (is >> v) vals.push_back(int(v));
    int n = 0;
    while (n * n < int(vals.size())) ++n;
    require(n > 0 && n * n == int(vals.size()), "bad-table", "entry count is not a perfect square");
    CayleyTable q(n);
    q.t = vals;
    for (int x : q.t) require(x >= 0 && x < n, "bad-table", "entry out of range");
    return q;
}

std::string table_to_json(const CayleyTable& q) {
    nlohmann::json j;
    j["n"] = q.n;
    auto rows = nlohmann::json::array();
    for (int x = 0; x < q.n; ++x) {
        auto row = nlohmann::json::array();
        for (int y = 0; y < q.n; ++y) row.push_back(q.at(x, y));
        rows.push_back(row);
    }
    j["table"] = rows;
    return j.dump();
}

CayleyTable table_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail("bad-table", std::string("JSON parse error: ") + e.what());
    }
    require(j.is_object() && j.contains("n") && j.contains("table"), "bad-table",
            "expected {\"n\", \"table\"}");
    int n = j["n"].get<int>();
    require(n > 0 && j["table"].is_array() && int(j["table"].size()) == n, "bad-table",
            "table row count mismatch");
    CayleyTable q(n);
    for (int x = 0; x < n; ++x) {
        const auto& row = j["table"][x];
        require(row.is_array() && int(row.size()) == n, "bad-table", "table column count mismatch");
        for (int y = 0; y < n; ++y) {
            int v = row[y].get<int>();
            require(v >= 0 && v < n, "bad-table", "entry out of range");
            q.set(x, y, v);
        }
    }
    return q;
}

}  // namespace loopcount
