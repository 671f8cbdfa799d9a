#pragma once

// Count report shared by every counting path.

#include <optional>
#include <string>

#include "loopcount/bigint.hpp"

namespace loopcount {

struct CountReport {
    int q = 0;
    std::string method;  // formula | burnside | orbit_enumeration | oracle
    std::optional<BigInt> up_to_isotopy;
    std::optional<BigInt> up_to_isomorphism;
    std::string breakdown_json = "{}";  // method-specific terms, decimal strings
};

// {"q": .., "method": .., "up_to_isotopy": "decimal"|null,
//  "up_to_isomorphism": "decimal"|null, "breakdown": {...}}
std::string report_to_json(const CountReport& r);

}  // namespace loopcount
