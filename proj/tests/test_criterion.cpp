#include <doctest.h>

#include <future>
#include <random>

#include "chm/criterion.hpp"
#include "support/oracles.hpp"

using chm::Certificate;
using chm::Mode;
using chm::Nat;
using chm::VerdictKind;

namespace {

chm::TestOptions untimed(Mode mode = Mode::Both, bool full_orders = false) {
    chm::TestOptions opt;
    opt.mode = mode;
    opt.full_orders = full_orders;
    opt.timed = false;
    return opt;
}

// Parity verdict from first principles: for each prime p of h, the order of p
// modulo 2 s^2 by repeated multiplication.
VerdictKind naive_parity_verdict(std::uint64_t h) {
    const auto f = oracle::trial_factor(h);
    if (f.size() == 1) return VerdictKind::Inapplicable;
    for (auto [p, r] : f) {
        std::uint64_t s = h;
        for (std::uint32_t i = 0; i < r; ++i) s /= p;
        if (oracle::naive_order(p, 2 * s * s) % 2 == 0) return VerdictKind::Certified;
    }
    return VerdictKind::Undecided;
}

}  // namespace

TEST_CASE("h = 33 is certified by p = 11 with order 6 modulo 18") {
    const Certificate c = chm::ryser_test(33, untimed(Mode::Both, true));
    CHECK(c.h == Nat(33));
    CHECK(c.n == Nat(4356));
    CHECK(c.omega == 2);
    REQUIRE(c.parity);
    REQUIRE(c.strict);
    CHECK(c.parity->kind == VerdictKind::Certified);
    CHECK(c.strict->kind == VerdictKind::Certified);
    CHECK_FALSE(c.divergent());

    const chm::Witness& w = *c.parity->witness;
    CHECK(w.p == Nat(11));
    CHECK(w.r == 1);
    CHECK(w.s == Nat(3));
    CHECK(w.mode == chm::WitnessMode::Parity);
    CHECK(w.arasu == chm::ArasuParams{2, 1, Nat(18), Nat(3)});
    REQUIRE(w.evidence.size() == 1);
    CHECK(w.evidence[0].component_prime == Nat(3));
    CHECK(w.evidence[0].component_exponent == 2);
    CHECK(w.evidence[0].full_order == Nat(6));
    CHECK(oracle::naive_order(11, 18) == 6);
    // p = 3 does not certify: 3 has odd order 5 modulo 242.
    CHECK(oracle::naive_order(3, 242) == 5);
    CHECK(c.strict->witness->p == Nat(11));
    CHECK(c.strict->witness->mode == chm::WitnessMode::Strict);
}

TEST_CASE("h = 55 is undecided, prime powers are inapplicable") {
    const Certificate c = chm::ryser_test(55, untimed());
    CHECK(c.parity->kind == VerdictKind::Undecided);
    CHECK(c.strict->kind == VerdictKind::Undecided);
    CHECK_FALSE(c.parity->witness);
    CHECK(oracle::naive_order(5, 242) == 55);
    CHECK(oracle::naive_order(11, 50) == 5);

    for (std::uint64_t h : {3, 5, 9, 27, 121, 1'000'000'007}) {
        const Certificate p = chm::ryser_test(h, untimed());
        CHECK(p.omega == 1);
        CHECK(p.parity->kind == VerdictKind::Inapplicable);
        CHECK(p.strict->kind == VerdictKind::Inapplicable);
    }
}

TEST_CASE("ryser_test rejects even h and h <= 1") {
    for (std::uint64_t h : {0, 1, 2, 10, 66}) CHECK_THROWS_AS(chm::ryser_test(h), chm::DomainError);
    CHECK_THROWS_AS(chm::ryser_test(Nat(15), chm::factorize(21)), chm::DomainError);
}

TEST_CASE("single-mode requests leave the other verdict absent") {
    const Certificate p = chm::ryser_test(33, untimed(Mode::Parity));
    CHECK(p.parity);
    CHECK_FALSE(p.strict);
    const Certificate s = chm::ryser_test(33, untimed(Mode::Strict));
    CHECK_FALSE(s.parity);
    CHECK(s.strict);
    CHECK(s.primary().kind == VerdictKind::Certified);
    CHECK(chm::ryser_test(33).elapsed.has_value());
}

TEST_CASE("parity verdicts match first-principles orders for odd h < 3000") {
    for (std::uint64_t h = 3; h < 3000; h += 2) {
        const Certificate c = chm::ryser_test(h, untimed(Mode::Parity));
        if (c.parity->kind != naive_parity_verdict(h)) FAIL("mismatch at h = " << h);
    }
}

TEST_CASE("large h values are parity certified with witness 5") {
    for (const char* h : {"31540455528264605", "66687671978077825", "866939735715011725", "1293740836374709805",
                          "6468704181873549025", "16818630872871227465", "84093154364356137325"}) {
        const Certificate c = chm::ryser_test(Nat::parse(h), untimed(Mode::Both, true));
        CHECK(c.parity->kind == VerdictKind::Certified);
        CHECK(c.parity->witness->p == Nat(5));
        for (const auto& ev : c.parity->witness->evidence) {
            CHECK(chm::v2(*ev.full_order) == ev.order_v2);
        }
    }
}

TEST_CASE("mode dominance: strict certified implies parity certified") {
    for (std::uint64_t h = 3; h < 20'000; h += 2) {
        const Certificate c = chm::ryser_test(h, untimed());
        if (c.strict->kind == VerdictKind::Certified && c.parity->kind != VerdictKind::Certified) {
            FAIL("dominance violated at h = " << h);
        }
        if (c.strict->kind == VerdictKind::Certified && c.strict->witness->p < c.parity->witness->p) {
            FAIL("strict witness below parity witness at h = " << h);
        }
    }
}

TEST_CASE("reciprocity_obstruction") {
    CHECK(chm::reciprocity_obstruction(3, 11));
    CHECK(oracle::euler_legendre(11, 3) == -1);
    CHECK_FALSE(chm::reciprocity_obstruction(5, 11));
    CHECK(oracle::euler_legendre(5, 11) == 1);
    CHECK(oracle::euler_legendre(11, 5) == 1);
    CHECK_THROWS_AS(chm::reciprocity_obstruction(7, 7), chm::DomainError);
    CHECK_THROWS_AS(chm::reciprocity_obstruction(2, 7), chm::DomainError);
    CHECK_THROWS_AS(chm::reciprocity_obstruction(9, 7), chm::DomainError);
}

TEST_CASE("two-prime h with an obstruction is certified in both modes") {
    const auto primes = oracle::small_primes(2000);
    std::mt19937_64 rng(211);
    int checked = 0;
    for (int i = 0; i < 3000; ++i) {
        const std::uint64_t p = primes[1 + rng() % (primes.size() - 1)];
        const std::uint64_t q = primes[1 + rng() % (primes.size() - 1)];
        if (p == q || !chm::reciprocity_obstruction(p, q)) continue;
        ++checked;
        const Certificate c = chm::ryser_test(Nat(p) * Nat(q), untimed());
        CHECK(c.parity->kind == VerdictKind::Certified);
        CHECK(c.strict->kind == VerdictKind::Certified);
    }
    CHECK(checked > 1000);
}

TEST_CASE("construct_witness_h") {
    CHECK(chm::construct_witness_h(2, 3) == Nat(33));
    CHECK(chm::construct_witness_h(2, 1) == Nat(33));
    const Nat h3 = chm::construct_witness_h(3, 3);
    CHECK(h3 == Nat(3 * 5 * 11));
    CHECK(chm::ryser_test(h3, untimed()).primary().kind == VerdictKind::Certified);
    CHECK_THROWS_AS(chm::construct_witness_h(1, 3), chm::DomainError);

    const chm::Factorization f = chm::factorize(chm::construct_witness_h(5, 1000));
    CHECK(f.omega() == 5);
    for (const auto& pp : f.factors) {
        CHECK(pp.exponent == 1);
        CHECK(pp.prime >= Nat(1000));
    }
}

TEST_CASE("witness family is always parity certified") {
    std::mt19937_64 rng(223);
    for (int k = 2; k <= 5; ++k) {
        for (int i = 0; i < 15; ++i) {
            const Nat floor(3 + rng() % 100'000);
            const Nat h = chm::construct_witness_h(k, floor);
            const Certificate c = chm::ryser_test(h, untimed(Mode::Parity));
            CHECK(c.omega == static_cast<std::uint32_t>(k));
            CHECK(c.parity->kind == VerdictKind::Certified);
        }
    }
}

TEST_CASE("repeated and concurrent runs give identical certificates") {
    std::vector<std::uint64_t> hs;
    for (std::uint64_t h = 1001; h < 1400; h += 2) hs.push_back(h);
    std::vector<Certificate> first;
    for (auto h : hs) first.push_back(chm::ryser_test(h, untimed(Mode::Both, true)));

    std::vector<std::future<std::vector<Certificate>>> jobs;
    for (int t = 0; t < 4; ++t) {
        jobs.push_back(std::async(std::launch::async, [&] {
            std::vector<Certificate> out;
            for (auto h : hs) out.push_back(chm::ryser_test(h, untimed(Mode::Both, true)));
            return out;
        }));
    }
    for (auto& j : jobs) CHECK(j.get() == first);
}

TEST_CASE("multiplying by a new odd prime never yields Inapplicable") {
    std::mt19937_64 rng(227);
    const auto primes = oracle::small_primes(500);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t h = 2 * (rng() % 5000) + 3;
        const std::uint64_t t = primes[1 + rng() % (primes.size() - 1)];
        if (h % t == 0) continue;
        CHECK(chm::ryser_test(Nat(h) * Nat(t), untimed()).primary().kind != VerdictKind::Inapplicable);
    }
}
