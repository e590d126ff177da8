#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace demobench::detail {

// FNV-1a, 64-bit. Used for schema fingerprints and content digests; stable
// across platforms and runs.
class Fnv1a {
public:
    Fnv1a& update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= static_cast<std::uint64_t>(c);
            state_ *= 1099511628211ULL;
        }
        return *this;
    }

    Fnv1a& update(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            state_ ^= (v >> (i * 8)) & 0xFFu;
            state_ *= 1099511628211ULL;
        }
        return *this;
    }

    std::uint64_t value() const { return state_; }

    std::string hex() const;

private:
    std::uint64_t state_ = 1469598103934665603ULL;
};

inline std::uint64_t fnv1a(std::string_view bytes) {
    return Fnv1a{}.update(bytes).value();
}

std::string fnv1a_hex(std::string_view bytes);

}  // namespace demobench::detail
