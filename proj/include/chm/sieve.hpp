#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "chm/bigmod.hpp"
#include "chm/criterion.hpp"

namespace chm {

// A list entry that could not be tested (even, <= 1, factorization stalled).
struct ItemError {
    std::size_t line = 0;  // 1-based line in the list file; 0 for range items
    std::string input;
    std::string message;

    friend bool operator==(const ItemError&, const ItemError&) = default;
};

using StreamItem = std::variant<Certificate, ItemError>;
using CertificateSink = std::function<void(const StreamItem&)>;

struct SieveConfig {
    Mode mode = Mode::Both;
    int workers = 1;
    std::uint64_t segment_odd_values = std::uint64_t{1} << 16;
    std::uint64_t list_chunk = 64;
    bool full_orders = false;
    bool timings = false;  // per-certificate elapsed time; breaks byte-identical streams
    FactorConfig factor;
};

struct VerdictCounts {
    std::uint64_t inapplicable = 0;
    std::uint64_t certified = 0;
    std::uint64_t undecided = 0;

    std::uint64_t total() const { return inapplicable + certified + undecided; }
    friend bool operator==(const VerdictCounts&, const VerdictCounts&) = default;
};

struct SieveReport {
    std::string descriptor;
    std::uint64_t processed = 0;   // h values that received a certificate
    std::uint64_t odd_values = 0;  // odd inputs, including rejected ones such as 1
    std::uint64_t composite = 0;   // processed h with at least two distinct primes
    std::uint64_t errors = 0;
    VerdictCounts parity;
    VerdictCounts strict;
    std::vector<Nat> survivors;    // Parity-mode Undecided, ascending
    std::vector<Nat> divergences;  // modes disagree, in stream order
    std::chrono::nanoseconds wall_time{0};

    double throughput() const;  // processed h per second
    double survivor_fraction_all_odd() const;
    double survivor_fraction_composite() const;
    double survivor_fraction_tested() const;
};

// Every odd h in [lo, hi] (even bounds move inward). Certificates reach the
// sink in ascending h order whatever the worker count.
SieveReport sieve_range(const Nat& lo, const Nat& hi, const SieveConfig& config, const CertificateSink& sink);

struct ListEntry {
    std::size_t line = 0;
    std::string text;
};

// One decimal integer per line, surrounding whitespace trimmed, blank lines
// skipped. Throws ParseError naming the offending line.
std::vector<ListEntry> read_h_list(std::istream& in);

SieveReport sieve_list(const std::vector<ListEntry>& entries, const SieveConfig& config, const CertificateSink& sink,
                       std::string descriptor = "list");
SieveReport sieve_list(const std::filesystem::path& path, const SieveConfig& config, const CertificateSink& sink);

}  // namespace chm
