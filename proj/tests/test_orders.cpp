#include <doctest.h>

#include <random>

#include "chm/orders.hpp"
#include "support/oracles.hpp"

using chm::Nat;

namespace {

chm::Factorization fac(std::uint64_t n) { return chm::factorize(n); }

std::uint64_t v2_of(std::uint64_t x) { return static_cast<std::uint64_t>(__builtin_ctzll(x)); }

}  // namespace

TEST_CASE("order_v2_mod_prime_power examples") {
    // 11^3 = 8 (mod 9); one squaring reaches 1; order 6.
    auto ev = chm::order_v2_mod_prime_power(11, 3, 2);
    CHECK(ev.order_v2 == 1);
    CHECK_FALSE(ev.order_is_odd);
    CHECK(ev.group_order == Nat(6));
    CHECK(oracle::naive_order(11, 9) == 6);

    ev = chm::order_v2_mod_prime_power(3, 11, 2);
    CHECK(ev.order_is_odd);
    CHECK(ev.order_v2 == 0);
    CHECK(ev.group_order == Nat(110));

    for (std::uint64_t q : {3, 5, 7, 101}) {
        ev = chm::order_v2_mod_prime_power(1, q, 3);
        CHECK(ev.order_v2 == 0);
        CHECK(ev.order_is_odd);
    }
}

TEST_CASE("order preconditions") {
    CHECK_THROWS_AS(chm::order_v2_mod_prime_power(9, 3, 2), chm::DomainError);
    CHECK_THROWS_AS(chm::order_v2_mod_prime_power(3, 2, 2), chm::DomainError);
    CHECK_THROWS_AS(chm::order_v2_mod_prime_power(3, 5, 0), chm::DomainError);
    CHECK_THROWS_AS(chm::full_order_mod_prime_power(22, 11, 2), chm::DomainError);
}

TEST_CASE("full_order_mod_prime_power examples") {
    // 3^5 = 243 = 2 * 121 + 1, so 3 has order 5 modulo 121.
    CHECK(oracle::naive_order(3, 121) == 5);
    CHECK(chm::full_order_mod_prime_power(3, 11, 2) == Nat(5));
    CHECK(chm::full_order_mod_prime_power(11, 3, 2) == Nat(6));
    CHECK(chm::full_order_mod_prime_power(1, 7, 4) == Nat(1));
    CHECK(chm::full_order_mod_prime_power(5, 11, 2) == Nat(oracle::naive_order(5, 121)));
    CHECK(oracle::naive_order(5, 121) == 55);
}

TEST_CASE("order_parity_mod_m examples") {
    auto r = chm::order_parity_mod_m(11, fac(3), true);
    CHECK_FALSE(r.is_odd);
    REQUIRE(r.evidence.size() == 1);
    CHECK(r.evidence[0].component_prime == Nat(3));
    CHECK(r.evidence[0].component_exponent == 2);
    CHECK(r.evidence[0].full_order == Nat(6));
    CHECK(oracle::naive_order(11, 18) == 6);

    r = chm::order_parity_mod_m(3, fac(11), true);
    CHECK(r.is_odd);
    CHECK(r.evidence[0].full_order == Nat(oracle::naive_order(3, 242)));

    r = chm::order_parity_mod_m(7, fac(1));
    CHECK(r.is_odd);
    CHECK(r.evidence.empty());

    CHECK_THROWS_AS(chm::order_parity_mod_m(3, fac(33)), chm::DomainError);
    CHECK_THROWS_AS(chm::order_parity_mod_m(4, fac(3)), chm::DomainError);
}

TEST_CASE("is_self_conjugate examples") {
    CHECK(chm::is_self_conjugate(11, fac(3)));
    CHECK(oracle::naive_powmod(11, 3, 18) == 17);
    CHECK_FALSE(chm::is_self_conjugate(5, fac(11)));
    CHECK(oracle::naive_order(5, 242) == 55);
    CHECK(chm::is_self_conjugate(3, fac(1)));
    CHECK_THROWS_AS(chm::is_self_conjugate(5, fac(15)), chm::DomainError);
}

TEST_CASE("self-conjugacy against brute force search for t") {
    // p^t = -1 (mod 2 s^2) for some t, found by walking the powers of p.
    auto brute = [](std::uint64_t p, std::uint64_t s) {
        const std::uint64_t m = 2 * s * s;
        std::uint64_t x = p % m;
        for (std::uint64_t t = 1; t <= m; ++t) {
            if (x == (m - 1) % m) return true;
            if (x == 1) return false;
            x = x * p % m;
        }
        return false;
    };
    for (std::uint64_t s = 3; s < 200; s += 2) {
        for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
            if (s % p == 0) continue;
            CHECK_MESSAGE(chm::is_self_conjugate(p, fac(s)) == brute(p, s), "p=" << p << " s=" << s);
        }
    }
}

TEST_CASE("full order and order_v2 agree with the naive loop for q^e < 10^6") {
    const auto primes = oracle::small_primes(1000);
    std::mt19937_64 rng(101);
    for (int i = 0; i < 4000; ++i) {
        const std::uint64_t q = primes[1 + rng() % (primes.size() - 1)];
        std::uint32_t e = 1;
        std::uint64_t qe = q;
        while (qe * q < 1'000'000 && rng() % 2) {
            qe *= q;
            ++e;
        }
        std::uint64_t a = rng() % qe;
        if (a % q == 0) a += 1;
        const std::uint64_t expect = oracle::naive_order(a, qe);
        const auto full = chm::full_order_mod_prime_power(a, q, e);
        const auto ev = chm::order_v2_mod_prime_power(a, q, e);
        CHECK(full == Nat(expect));
        CHECK(ev.order_v2 == v2_of(expect));
        CHECK(ev.order_is_odd == (expect % 2 == 1));
        // The kernel of (Z/q^e)* -> (Z/q)* has odd order q^(e-1).
        CHECK(chm::order_v2_mod_prime_power(a, q, 1).order_v2 == ev.order_v2);
    }
}

TEST_CASE("multi-word prime power moduli") {
    const Nat q = Nat::parse("1000003");
    std::mt19937_64 rng(103);
    for (int i = 0; i < 20; ++i) {
        const Nat a(2 + rng() % 1'000'000);
        const auto ev = chm::order_v2_mod_prime_power(a, q, 4);  // modulus ~ 10^24
        const Nat full = chm::full_order_mod_prime_power(a, q, 4);
        CHECK(chm::v2(full) == ev.order_v2);
        CHECK(chm::powmod(a, full, chm::pow(q, 4)) == Nat(1));
        CHECK((ev.group_order % full).is_zero());
    }
}

TEST_CASE("self-conjugacy forces even order and -1 in the span") {
    std::mt19937_64 rng(107);
    const auto primes = oracle::small_primes(60);
    int witnessed = 0;
    for (int i = 0; i < 3000; ++i) {
        const std::uint64_t p = primes[1 + rng() % (primes.size() - 1)];
        std::uint64_t s = 1;
        const int k = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < k; ++j) {
            const std::uint64_t q = primes[1 + rng() % (primes.size() - 1)];
            if (q != p && s * q < 3'000) s *= q;
        }
        if (s == 1) continue;
        const auto parity = chm::order_parity_mod_m(p, fac(s), true);
        if (!chm::is_self_conjugate(parity.evidence)) continue;
        ++witnessed;
        CHECK_FALSE(parity.is_odd);
        const Nat m = Nat(2) * Nat(s) * Nat(s);
        const Nat L = chm::combined_order(parity.evidence);
        CHECK(L == Nat(oracle::naive_order(p, 2 * s * s)));
        CHECK(chm::powmod(p, L / Nat(2), m) == m - Nat(1));
    }
    CHECK(witnessed > 100);
}

TEST_CASE("both orders odd implies both Legendre symbols are +1") {
    const auto primes = oracle::small_primes(10'000);
    std::mt19937_64 rng(109);
    int both_odd = 0;
    for (int i = 0; i < 20'000; ++i) {
        const std::uint64_t p = primes[1 + rng() % (primes.size() - 1)];
        const std::uint64_t q = primes[1 + rng() % (primes.size() - 1)];
        if (p == q) continue;
        if (!chm::order_v2_mod_prime_power(p, q, 1).order_is_odd) continue;
        if (!chm::order_v2_mod_prime_power(q, p, 1).order_is_odd) continue;
        ++both_odd;
        CHECK(oracle::euler_legendre(p, q) == 1);
        CHECK(oracle::euler_legendre(q, p) == 1);
        CHECK(chm::jacobi(p, q) == chm::Sign3::Plus);
        CHECK(chm::jacobi(q, p) == chm::Sign3::Plus);
    }
    CHECK(both_odd > 0);
}
