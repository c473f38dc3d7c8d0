#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "chm/bigmod.hpp"
#include "chm/factorizer.hpp"
#include "chm/orders.hpp"

namespace chm {

// Parity: the order of p modulo 2 s^2 is even.
// Strict: p^t = -1 (mod 2 s^2) for some t, the hypothesis of Arasu's theorem.
enum class Mode { Parity, Strict, Both };
enum class WitnessMode { Parity, Strict };
enum class VerdictKind { Inapplicable, Certified, Undecided };

std::string_view to_string(Mode m);
std::string_view to_string(WitnessMode m);
std::string_view to_string(VerdictKind k);
Mode parse_mode(std::string_view text);
WitnessMode parse_witness_mode(std::string_view text);
VerdictKind parse_verdict_kind(std::string_view text);

// Parameters of the circulant weighing matrix C of order n/2 = 2h^2 and
// weight n/4 = h^2, written as n/2 = p^a m and n/4 = p^(2b) u^2.
struct ArasuParams {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    Nat m;
    Nat u;

    friend bool operator==(const ArasuParams&, const ArasuParams&) = default;
};

struct Witness {
    Nat p;
    std::uint32_t r = 0;  // p^r exactly divides h
    Nat s;                // h / p^r
    WitnessMode mode = WitnessMode::Parity;
    std::vector<OrderEvidence> evidence;
    ArasuParams arasu;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Undecided;
    std::optional<Witness> witness;  // present iff kind == Certified

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct Certificate {
    Nat h;
    Nat n;  // 4 h^2
    std::uint32_t omega = 0;
    std::optional<Verdict> parity;  // absent when the mode was not requested
    std::optional<Verdict> strict;
    std::optional<std::chrono::nanoseconds> elapsed;

    // Both modes ran and reached different kinds.
    bool divergent() const { return parity && strict && parity->kind != strict->kind; }
    // Verdict driving exit codes: Parity when it ran, Strict otherwise.
    const Verdict& primary() const { return parity ? *parity : *strict; }

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct TestOptions {
    Mode mode = Mode::Both;
    bool full_orders = false;
    bool timed = true;
    FactorConfig factor;
};

// Certifies nonexistence of a circulant Hadamard matrix of order 4h^2 for odd
// h > 1. Primes of h are tried in ascending order; the first that certifies
// becomes the witness of each mode.
Certificate ryser_test(const Nat& h, const TestOptions& options = {});
// Same, with the factorization of h supplied by the caller.
Certificate ryser_test(const Nat& h, const Factorization& factors, const TestOptions& options = {});

// (p|q) = -1 or (q|p) = -1 for distinct odd primes p, q. Either forces an even
// order in the test of any h divisible by p q.
bool reciprocity_obstruction(const Nat& p, const Nat& q);

// Squarefree h = p1 p2 ... pk over distinct odd primes >= prime_floor, where
// p1 < p2 are the first primes = 3 (mod 4) with (p1|p2) = +1, (p2|p1) = -1.
// The remaining k - 2 primes are the smallest unused odd primes >= prime_floor.
Nat construct_witness_h(int k, const Nat& prime_floor);

// Smallest prime >= n (n >= 2).
Nat next_prime(const Nat& n);

}  // namespace chm
