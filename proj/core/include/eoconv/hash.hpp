#ifndef EOCONV_HASH_HPP
#define EOCONV_HASH_HPP

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace eoconv
{

// FNV-1a, 64 bit. Used for content keys, not for security.
class Fnv1a
{
public:
    void bytes(const void* data, std::size_t n) noexcept
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void add(double v) noexcept { bytes(&v, sizeof v); }
    void add(std::int64_t v) noexcept { bytes(&v, sizeof v); }
    void add(std::string_view s) noexcept
    {
        add(static_cast<std::int64_t>(s.size()));
        bytes(s.data(), s.size());
    }
    std::uint64_t value() const noexcept { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string to_hex(std::uint64_t v)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
        v >>= 4;
    }
    return out;
}

inline std::string Fnv1a::hex() const { return to_hex(state_); }

} // namespace eoconv

#endif // EOCONV_HASH_HPP
