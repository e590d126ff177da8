#include "demobench/detail/hash.hpp"

#include <cstdio>

namespace demobench::detail {

std::string Fnv1a::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return std::string(buf);
}

std::string fnv1a_hex(std::string_view bytes) {
    return Fnv1a{}.update(bytes).hex();
}

}  // namespace demobench::detail
