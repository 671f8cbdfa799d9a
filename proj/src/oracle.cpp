#include "loopcount/oracle.hpp"

#include <atomic>
#include <functional>
#include <random>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "loopcount/errors.hpp"

namespace loopcount {

namespace {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || n < 128) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                size_t begin = next.fetch_add(64);
                if (begin >= n) break;
                size_t end = std::min(n, begin + 64);
                for (size_t i = begin; i < end; ++i) fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Kernel-Zq central extension: base set Zq x Z2, element (c, x) encoded as
// x*q + c, product ((c + d + k*[x = y = 1]) mod q, x xor y).
CayleyTable zq_table(int q, int k) {
    CayleyTable out(2 * q);
    for (int x = 0; x < 2; ++x)
        for (int c = 0; c < q; ++c)
            for (int y = 0; y < 2; ++y)
                for (int d = 0; d < q; ++d) {
                    int first = (c + d + (x && y ? k : 0)) % q;
                    int second = x ^ y;
                    out.set(x * q + c, y * q + d, second * q + first);
                }
    return out;
}

}  // namespace

OracleResult oracle_count(int q, int threads) {
    if (q != 3 && q != 5)
        fail_resource("q-too-large", "brute force is capped at q in {3, 5}, got " +
                                         std::to_string(q));
    threads = resolve_threads(threads);
    int L = free_dim(q);
    size_t N = size_t(1) << L;
    size_t total = N + size_t(q);

    std::vector<CayleyTable> tables(total);
    parallel_for(N, threads,
                 [&](size_t i) { tables[i] = extend(unflatten(vector_at(q, uint64_t(i)))); });
    for (int k = 0; k < q; ++k) tables[N + k] = zq_table(q, k);

    std::vector<char> good(total, 0);
    parallel_for(total, threads, [&](size_t i) {
        good[i] = is_loop(tables[i]) && is_nilpotent(tables[i]).nilpotent;
    });
    for (size_t i = 0; i < total; ++i)
        require(good[i] == 1, "internal",
                "candidate table " + std::to_string(i) + " is not a nilpotent loop");

    std::vector<std::string> fp(total);
    parallel_for(total, threads, [&](size_t i) { fp[i] = iso_fingerprint(tables[i]); });

    // Isomorphism classes: invariant buckets first, exact searches second.
    std::unordered_map<std::string, std::vector<uint32_t>> buckets;
    std::vector<uint32_t> class_rep;  // table index of each class representative
    std::vector<uint32_t> cls(total);
    for (size_t i = 0; i < total; ++i) {
        auto& cand = buckets[fp[i]];
        bool assigned = false;
        for (uint32_t cid : cand) {
            if (are_isomorphic(tables[i], tables[class_rep[cid]])) {
                cls[i] = cid;
                assigned = true;
                break;
            }
        }
        if (!assigned) {
            uint32_t cid = uint32_t(class_rep.size());
            class_rep.push_back(uint32_t(i));
            cand.push_back(cid);
            cls[i] = cid;
        }
    }
    uint32_t iso_classes = uint32_t(class_rep.size());

    for (int k = 1; k < q; ++k)
        require(cls[N + k] == cls[N], "internal", "kernel-Zq tables split across classes");
    require(cls[N] == cls[0], "internal",
            "kernel-Zq family does not merge with the trivial-cocycle class");

    // Isotopy classes over the isomorphism representatives.
    std::vector<std::string> ifp(iso_classes);
    parallel_for(iso_classes, threads,
                 [&](size_t c) { ifp[c] = isotopy_fingerprint(tables[class_rep[c]]); });
    std::unordered_map<std::string, std::vector<uint32_t>> buckets2;
    std::vector<uint32_t> isotopy_rep_table;
    std::vector<uint32_t> iso_to_isotopy(iso_classes);
    for (uint32_t c = 0; c < iso_classes; ++c) {
        auto& cand = buckets2[ifp[c]];
        bool assigned = false;
        for (uint32_t tid : cand) {
            if (are_isotopic(tables[class_rep[c]], tables[isotopy_rep_table[tid]])) {
                iso_to_isotopy[c] = tid;
                assigned = true;
                break;
            }
        }
        if (!assigned) {
            uint32_t tid = uint32_t(isotopy_rep_table.size());
            isotopy_rep_table.push_back(class_rep[c]);
            cand.push_back(tid);
            iso_to_isotopy[c] = tid;
        }
    }
    uint32_t isotopy_classes = uint32_t(isotopy_rep_table.size());

    OracleResult res;
    res.q = q;
    res.iso_classes = iso_classes;
    res.isotopy_classes = isotopy_classes;
    res.iso_class_of.resize(N);
    res.isotopy_class_of.resize(N);
    res.isotopy_class_vector_count.assign(isotopy_classes, 0);
    for (size_t i = 0; i < N; ++i) {
        res.iso_class_of[i] = cls[i];
        res.isotopy_class_of[i] = iso_to_isotopy[cls[i]];
        ++res.isotopy_class_vector_count[res.isotopy_class_of[i]];
    }
    for (uint32_t t = 0; t < isotopy_classes; ++t)
        res.isotopy_reps.push_back(tables[isotopy_rep_table[t]]);
    res.zq_iso_class = cls[N];
    res.zq_isotopy_class = iso_to_isotopy[cls[N]];

    // Audit the partitions: equivalence was built through representatives,
    // so independently re-test random members against each other.
    std::mt19937_64 rng(0xA5D17ull + uint64_t(q));
    std::vector<std::vector<uint32_t>> iso_members(iso_classes);
    for (size_t i = 0; i < total; ++i)
        if (iso_members[cls[i]].size() < 64) iso_members[cls[i]].push_back(uint32_t(i));
    int audited = 0;
    for (int round = 0; round < 30; ++round) {
        uint32_t c = uint32_t(rng() % iso_classes);
        const auto& mem = iso_members[c];
        if (mem.size() < 2) continue;
        uint32_t a = mem[rng() % mem.size()], b = mem[rng() % mem.size()];
        require(are_isomorphic(tables[a], tables[b]).has_value(), "internal",
                "isomorphism class membership not transitive");
        ++audited;
    }
    std::vector<std::vector<uint32_t>> isotopy_members(isotopy_classes);
    for (uint32_t c = 0; c < iso_classes; ++c)
        isotopy_members[iso_to_isotopy[c]].push_back(class_rep[c]);
    for (int round = 0; round < 12; ++round) {
        uint32_t t = uint32_t(rng() % isotopy_classes);
        const auto& mem = isotopy_members[t];
        if (mem.size() < 3) continue;
        uint32_t a = mem[rng() % mem.size()], b = mem[rng() % mem.size()];
        if (a == b) continue;
        require(are_isotopic(tables[a], tables[b]), "internal",
                "isotopy class membership not transitive");
        ++audited;
    }
    for (int round = 0; round < 8 && isotopy_classes >= 2; ++round) {
        uint32_t t1 = uint32_t(rng() % isotopy_classes), t2 = uint32_t(rng() % isotopy_classes);
        if (t1 == t2) continue;
        require(!are_isotopic(tables[isotopy_rep_table[t1]], tables[isotopy_rep_table[t2]]),
                "internal", "distinct isotopy classes are isotopic");
        ++audited;
    }

    CountReport rep;
    rep.q = q;
    rep.method = "oracle";
    rep.up_to_isotopy = BigInt(isotopy_classes);
    rep.up_to_isomorphism = BigInt(iso_classes);
    nlohmann::json b;
    b["kernel_z2_tables"] = std::to_string(N);
    b["kernel_zq_tables"] = std::to_string(q);
    b["zq_family_iso_class"] = std::to_string(res.zq_iso_class);
    b["zq_family_isotopy_class"] = std::to_string(res.zq_isotopy_class);
    b["audit_checks"] = std::to_string(audited);
    rep.breakdown_json = b.dump();
    res.report = rep;
    return res;
}

Certificate certify(const OracleResult& oracle, const std::vector<CountReport>& reports) {
    Certificate cert;
    for (const auto& r : reports) {
        if (r.up_to_isotopy) {
            CertifyEntry e;
            e.method = r.method;
            e.field = "up_to_isotopy";
            e.value = r.up_to_isotopy->str();
            e.expected = oracle.report.up_to_isotopy->str();
            e.ok = *r.up_to_isotopy == *oracle.report.up_to_isotopy;
            cert.pass = cert.pass && e.ok;
            cert.entries.push_back(std::move(e));
        }
        if (r.up_to_isomorphism) {
            CertifyEntry e;
            e.method = r.method;
            e.field = "up_to_isomorphism";
            e.value = r.up_to_isomorphism->str();
            e.expected = oracle.report.up_to_isomorphism->str();
            e.ok = *r.up_to_isomorphism == *oracle.report.up_to_isomorphism;
            cert.pass = cert.pass && e.ok;
            cert.entries.push_back(std::move(e));
        }
    }
    return cert;
}

std::string certificate_to_json(const Certificate& c) {
    nlohmann::json j;
    j["pass"] = c.pass;
    auto entries = nlohmann::json::array();
    for (const auto& e : c.entries) {
        entries.push_back({{"method", e.method},
                           {"field", e.field},
                           {"value", e.value},
                           {"expected", e.expected},
                           {"ok", e.ok}});
    }
    j["entries"] = entries;
    return j.dump();
}

std::string class_inventory_jsonl(const OracleResult& r) {
    // Smallest kernel-Z2 vector per isotopy class.
    std::vector<int64_t> first(r.isotopy_classes, -1);
    for (size_t i = 0; i < r.isotopy_class_of.size(); ++i) {
        uint32_t c = r.isotopy_class_of[i];
        if (first[c] < 0) first[c] = int64_t(i);
    }
    std::string out;
    for (uint32_t c = 0; c < r.isotopy_classes; ++c) {
        nlohmann::json j;
        j["index"] = c;
        j["rep"] = first[c] >= 0 ? nlohmann::json(to_hex(vector_at(r.q, uint64_t(first[c]))))
                                 : nlohmann::json(nullptr);
        j["size"] = r.isotopy_class_vector_count[c];
        auto rows = nlohmann::json::array();
        const CayleyTable& t = r.isotopy_reps[c];
        for (int x = 0; x < t.n; ++x) {
            auto row = nlohmann::json::array();
            for (int y = 0; y < t.n; ++y) row.push_back(t.at(x, y));
            rows.push_back(row);
        }
        j["table"] = rows;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace loopcount
