#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chm/bigmod.hpp"

namespace chm {

struct PrimePower {
    Nat prime;
    std::uint32_t exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Strictly ascending primes with positive exponents.
struct Factorization {
    std::vector<PrimePower> factors;

    std::size_t omega() const { return factors.size(); }
    bool empty() const { return factors.empty(); }
    Nat value() const;
    std::string str() const;  // "3 * 11^2", or "1" when empty

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct FactorConfig {
    std::uint64_t trial_bound = 1'000'000;
    int max_restarts = 64;
    // Total Brent iterations across all restarts for one composite cofactor.
    std::uint64_t iteration_budget = std::uint64_t{1} << 26;
};

bool is_prime(std::uint64_t n);
bool is_prime(const Nat& n);

Factorization factorize(const Nat& n, const FactorConfig& config = {});

// Primes up to `bound`, ascending. The default trial bound is cached.
std::span<const std::uint32_t> primes_up_to(std::uint64_t bound);

// Smallest-prime-factor table for the odd integers of [lo, hi], built by a
// segmented sieve. Each entry also carries the complete factorization found
// while sieving, which is what the range driver consumes.
class SpfTable {
public:
    struct Entry {
        std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;  // ascending
    };

    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    std::size_t size() const { return entries_.size(); }

    // n must be odd and inside [lo, hi].
    std::uint64_t spf(std::uint64_t n) const;
    const Entry& entry(std::uint64_t n) const;
    Factorization factorization(std::uint64_t n) const;

    // Factor n by chained lookups n -> n / spf(n) -> ... ; every odd cofactor
    // greater than 1 must itself lie inside the table.
    Factorization factor_by_lookup(std::uint64_t n) const;

private:
    friend SpfTable spf_table(std::uint64_t, std::uint64_t, std::uint64_t);
    std::size_t index(std::uint64_t n) const;

    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<Entry> entries_;
};

inline constexpr std::uint64_t kDefaultSpfSpan = std::uint64_t{1} << 22;

// lo >= 3; span is counted in odd values. Even bounds are moved inward.
SpfTable spf_table(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_odd_values = kDefaultSpfSpan);

}  // namespace chm
