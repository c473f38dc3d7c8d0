#include "chm/criterion.hpp"

#include <string>

namespace chm {

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::Parity: return "parity";
        case Mode::Strict: return "strict";
        case Mode::Both: return "both";
    }
    return "?";
}

std::string_view to_string(WitnessMode m) { return m == WitnessMode::Parity ? "parity" : "strict"; }

std::string_view to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Inapplicable: return "Inapplicable";
        case VerdictKind::Certified: return "Certified";
        case VerdictKind::Undecided: return "Undecided";
    }
    return "?";
}

Mode parse_mode(std::string_view text) {
    if (text == "parity") return Mode::Parity;
    if (text == "strict") return Mode::Strict;
    if (text == "both") return Mode::Both;
    throw ParseError("unknown mode '" + std::string(text) + "'");
}

WitnessMode parse_witness_mode(std::string_view text) {
    if (text == "parity") return WitnessMode::Parity;
    if (text == "strict") return WitnessMode::Strict;
    throw ParseError("unknown witness mode '" + std::string(text) + "'");
}

VerdictKind parse_verdict_kind(std::string_view text) {
    if (text == "Inapplicable") return VerdictKind::Inapplicable;
    if (text == "Certified") return VerdictKind::Certified;
    if (text == "Undecided") return VerdictKind::Undecided;
    throw ParseError("unknown verdict '" + std::string(text) + "'");
}

namespace {

Witness make_witness(const Nat& p, std::uint32_t r, const Nat& s, WitnessMode mode,
                     std::vector<OrderEvidence> evidence) {
    Witness w;
    w.p = p;
    w.r = r;
    w.s = s;
    w.mode = mode;
    w.evidence = std::move(evidence);
    w.arasu = ArasuParams{2ull * r, r, Nat(2) * s * s, s};
    return w;
}

void attach_full_orders(Witness& w, const FactorConfig& config) {
    for (auto& ev : w.evidence) {
        ev.full_order = full_order_mod_prime_power(w.p, ev.component_prime, ev.component_exponent, config);
    }
}

}  // namespace

Certificate ryser_test(const Nat& h, const TestOptions& options) {
    if (h.is_even() || h <= Nat(1)) throw DomainError("h must be odd and greater than 1, got " + h.str());
    return ryser_test(h, factorize(h, options.factor), options);
}

Certificate ryser_test(const Nat& h, const Factorization& factors, const TestOptions& options) {
    if (h.is_even() || h <= Nat(1)) throw DomainError("h must be odd and greater than 1, got " + h.str());
    if (factors.value() != h) throw DomainError("factorization " + factors.str() + " does not match " + h.str());

    const auto start = std::chrono::steady_clock::now();
    const bool want_parity = options.mode != Mode::Strict;
    const bool want_strict = options.mode != Mode::Parity;

    Certificate cert;
    cert.h = h;
    cert.n = Nat(4) * h * h;
    cert.omega = static_cast<std::uint32_t>(factors.omega());

    std::optional<Witness> parity_witness, strict_witness;
    if (cert.omega > 1) {
        for (std::size_t i = 0; i < factors.factors.size(); ++i) {
            if ((!want_parity || parity_witness) && (!want_strict || strict_witness)) break;

            const auto& [p, r] = factors.factors[i];
            Factorization s_factors;
            s_factors.factors.reserve(factors.factors.size() - 1);
            for (std::size_t j = 0; j < factors.factors.size(); ++j) {
                if (j != i) s_factors.factors.push_back(factors.factors[j]);
            }
            OrderParity parity = order_parity_mod_m(p, s_factors);

            const bool parity_hit = want_parity && !parity_witness && !parity.is_odd;
            const bool strict_hit = want_strict && !strict_witness && is_self_conjugate(parity.evidence);
            if (!parity_hit && !strict_hit) continue;

            const Nat s = h / pow(p, r);
            if (parity_hit) parity_witness = make_witness(p, r, s, WitnessMode::Parity, parity.evidence);
            if (strict_hit) strict_witness = make_witness(p, r, s, WitnessMode::Strict, std::move(parity.evidence));
        }
    }

    auto verdict = [&](std::optional<Witness>& w) {
        Verdict v;
        if (cert.omega <= 1) {
            v.kind = VerdictKind::Inapplicable;
        } else if (w) {
            if (options.full_orders) attach_full_orders(*w, options.factor);
            v.kind = VerdictKind::Certified;
            v.witness = std::move(w);
        }
        return v;
    };
    if (want_parity) cert.parity = verdict(parity_witness);
    if (want_strict) cert.strict = verdict(strict_witness);

    if (options.timed) cert.elapsed = std::chrono::steady_clock::now() - start;
    return cert;
}

bool reciprocity_obstruction(const Nat& p, const Nat& q) {
    if (p == q) throw DomainError("reciprocity obstruction: primes must be distinct");
    for (const Nat* x : {&p, &q}) {
        if (x->is_even() || !is_prime(*x)) throw DomainError(x->str() + " is not an odd prime");
    }
    return jacobi(p, q) == Sign3::Minus || jacobi(q, p) == Sign3::Minus;
}

Nat next_prime(const Nat& n) {
    if (n <= Nat(2)) return Nat(2);
    Nat c = n.is_even() ? n + Nat(1) : n;
    while (!is_prime(c)) c += Nat(2);
    return c;
}

Nat construct_witness_h(int k, const Nat& prime_floor) {
    if (k < 2) throw DomainError("witness family needs k >= 2 primes, got " + std::to_string(k));

    const Nat floor = prime_floor < Nat(3) ? Nat(3) : prime_floor;
    auto next_3_mod_4 = [](Nat c) {
        for (c = next_prime(c); c.mod_u64(4) != 3; c = next_prime(c + Nat(1))) {
        }
        return c;
    };

    const Nat p1 = next_3_mod_4(floor);
    Nat p2 = next_3_mod_4(p1 + Nat(1));
    while (jacobi(p1, p2) != Sign3::Plus) p2 = next_3_mod_4(p2 + Nat(1));

    Nat h = p1 * p2;
    int used = 2;
    for (Nat q = next_prime(floor); used < k; q = next_prime(q + Nat(1))) {
        if (q == p1 || q == p2) continue;
        h *= q;
        ++used;
    }
    return h;
}

}  // namespace chm
