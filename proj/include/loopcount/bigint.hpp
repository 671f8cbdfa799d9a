#pragma once

// Exact big integers for counting; counts grow like 2^((q-1)(q-2)).

#include <boost/multiprecision/cpp_int.hpp>

namespace loopcount {

using BigInt = boost::multiprecision::cpp_int;

// 2^e as a BigInt.
inline BigInt pow2(long long e) {
    BigInt r = 1;
    return r << e;
}

}  // namespace loopcount
