#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace raas {

/// Lowercase hex of a 128-bit value, high word first (32 characters).
std::string hex128(std::uint64_t hi, std::uint64_t lo);

/// True for a 32-character lowercase hex string.
bool is_token(std::string_view s);

/// Issues 128-bit tokens for sets and delivered items. With a seed the
/// sequence is a pure function of (seed, counter); without one the master
/// seed comes from std::random_device.
class IdGenerator {
  public:
    explicit IdGenerator(std::optional<std::uint64_t> seed = std::nullopt, std::uint64_t start = 0);

    std::string next();

    /// Continue numbering after `n` already-issued ids.
    void resume(std::uint64_t n) { m_counter.store(n); }
    [[nodiscard]] std::uint64_t issued() const { return m_counter.load(); }

  private:
    std::uint64_t m_master;
    std::atomic<std::uint64_t> m_counter;
};

}  // namespace raas
