#include "raas/rng.hpp"

namespace raas {

__extension__ using u128 = unsigned __int128;

// Lemire's nearly-divisionless method.
std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0) {
        return 0;
    }
    auto x = m_engine();
    auto m = static_cast<u128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        auto threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = m_engine();
            m = static_cast<u128>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64U);
}

}  // namespace raas
