#pragma once

// Brute-force ground truth at desk scale (q in {3, 5}).
//
// Builds every kernel-Z2 extension table (all 2^((q-1)^2) cocycle vectors)
// and every kernel-Zq extension (q tables, all groups), verifies loop and
// nilpotency for each, classifies the union up to isomorphism by pairwise
// are_isomorphic (invariant buckets first, exact searches second), then
// classifies the isomorphism representatives up to isotopy by pairwise
// are_isotopic.  Deliberately built only on the table-level operations:
// nothing from the group-action machinery is used, so agreement between the
// two paths is meaningful evidence.

#include <cstdint>
#include <vector>

#include "loopcount/cayley.hpp"
#include "loopcount/cocycle.hpp"
#include "loopcount/report.hpp"

namespace loopcount {

struct OracleResult {
    int q = 0;
    CountReport report;  // method = "oracle", both counts filled

    // Classification of the kernel-Z2 family, indexed by the enumeration
    // index of the cocycle vector.  Class ids count from 0 in discovery
    // order (ascending vector index, then the kernel-Zq tables).
    std::vector<uint32_t> iso_class_of;
    std::vector<uint32_t> isotopy_class_of;
    uint32_t iso_classes = 0;
    uint32_t isotopy_classes = 0;

    // First table encountered in each isotopy class.
    std::vector<CayleyTable> isotopy_reps;
    // Kernel-Z2 members per isotopy class.
    std::vector<uint64_t> isotopy_class_vector_count;
    // Where the kernel-Zq family landed (one class: they are all Z_2q).
    uint32_t zq_iso_class = 0;
    uint32_t zq_isotopy_class = 0;
};

// threads = 0 picks the hardware concurrency.  Throws "q-too-large" outside
// {3, 5}.
OracleResult oracle_count(int q, int threads = 1);

struct CertifyEntry {
    std::string method;
    std::string field;  // up_to_isotopy | up_to_isomorphism
    std::string value;
    std::string expected;
    bool ok = false;
};

struct Certificate {
    bool pass = true;
    std::vector<CertifyEntry> entries;
};

// Compares every count present in the reports against the oracle's.
Certificate certify(const OracleResult& oracle, const std::vector<CountReport>& reports);

std::string certificate_to_json(const Certificate& c);

// One JSON line per isotopy class: {"index", "rep", "size", "table"} where
// rep is the smallest kernel-Z2 cocycle hex in the class and size counts its
// kernel-Z2 members.
std::string class_inventory_jsonl(const OracleResult& r);

}  // namespace loopcount
