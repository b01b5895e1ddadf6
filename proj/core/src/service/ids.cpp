#include "raas/service/ids.hpp"

#include "raas/rng.hpp"

#include <random>

namespace raas {

std::string hex128(std::uint64_t hi, std::uint64_t lo)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[hi & 0xFU];
        out[static_cast<std::size_t>(16 + i)] = kDigits[lo & 0xFU];
        hi >>= 4U;
        lo >>= 4U;
    }
    return out;
}

bool is_token(std::string_view s)
{
    if (s.size() != 32) {
        return false;
    }
    for (char c : s) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
            return false;
        }
    }
    return true;
}

namespace {

std::uint64_t entropy_seed()
{
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32U) ^ rd();
}

}  // namespace

IdGenerator::IdGenerator(std::optional<std::uint64_t> seed, std::uint64_t start)
    : m_master(seed ? *seed : entropy_seed()), m_counter(start)
{
}

std::string IdGenerator::next()
{
    auto n = m_counter.fetch_add(1);
    auto hi = derive_seed(m_master, 2 * n);
    auto lo = derive_seed(m_master, 2 * n + 1);
    return hex128(hi, lo);
}

}  // namespace raas
