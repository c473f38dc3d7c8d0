#include "chm/record.hpp"

#include <cmath>

namespace chm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json witness_json(const Witness& w) {
    ordered_json j;
    j["p"] = w.p.str();
    j["r"] = w.r;
    j["s"] = w.s.str();
    j["mode"] = to_string(w.mode);
    j["arasu"] = {{"a", w.arasu.a}, {"b", w.arasu.b}, {"m", w.arasu.m.str()}, {"u", w.arasu.u.str()}};
    j["components"] = ordered_json::array();
    for (const auto& ev : w.evidence) j["components"].push_back(to_json(ev));
    return j;
}

ordered_json verdict_kind_json(const std::optional<Verdict>& v) {
    return v ? ordered_json(to_string(v->kind)) : ordered_json(nullptr);
}

[[noreturn]] void invalid(const std::string& what) { throw ValidationError("certificate record: " + what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field '") + key + "'");
    return j.at(key);
}

Nat nat_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) invalid(std::string("field '") + key + "' must be a decimal string");
    try {
        return Nat::parse(v.get<std::string>());
    } catch (const ParseError& e) {
        invalid(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_unsigned()) invalid(std::string("field '") + key + "' must be a nonnegative integer");
    return v.get<T>();
}

OrderEvidence evidence_from_json(const json& j) {
    OrderEvidence ev;
    ev.component_prime = nat_field(j, "q");
    ev.component_exponent = int_field<std::uint32_t>(j, "e");
    ev.group_order = nat_field(j, "group_order");
    ev.order_v2 = int_field<std::uint64_t>(j, "order_v2");
    const json& odd = field(j, "order_is_odd");
    if (!odd.is_boolean()) invalid("field 'order_is_odd' must be boolean");
    ev.order_is_odd = odd.get<bool>();
    if (j.contains("full_order")) ev.full_order = nat_field(j, "full_order");
    return ev;
}

Witness witness_from_json(const json& j) {
    Witness w;
    w.p = nat_field(j, "p");
    w.r = int_field<std::uint32_t>(j, "r");
    w.s = nat_field(j, "s");
    const json& mode = field(j, "mode");
    if (!mode.is_string()) invalid("field 'mode' must be a string");
    try {
        w.mode = parse_witness_mode(mode.get<std::string>());
    } catch (const ParseError& e) {
        invalid(e.what());
    }
    const json& arasu = field(j, "arasu");
    w.arasu = ArasuParams{int_field<std::uint64_t>(arasu, "a"), int_field<std::uint64_t>(arasu, "b"),
                          nat_field(arasu, "m"), nat_field(arasu, "u")};
    const json& comps = field(j, "components");
    if (!comps.is_array()) invalid("field 'components' must be an array");
    for (const auto& c : comps) w.evidence.push_back(evidence_from_json(c));
    return w;
}

std::optional<Verdict> verdict_from_json(const json& j, const char* key) {
    const json& v = field(j, key);
    if (v.is_null()) return std::nullopt;
    if (!v.is_string()) invalid(std::string("field '") + key + "' must be a string or null");
    try {
        return Verdict{parse_verdict_kind(v.get<std::string>()), std::nullopt};
    } catch (const ParseError& e) {
        invalid(e.what());
    }
}

void validate_witness(const Certificate& cert, const Witness& w, WitnessMode expected, bool recompute) {
    const std::string tag = std::string(to_string(expected)) + " witness: ";
    if (w.mode != expected) invalid(tag + "mode field disagrees with its verdict");
    if (w.r == 0) invalid(tag + "r must be positive");
    const Nat pr = pow(w.p, w.r);
    if (!(cert.h % pr).is_zero()) invalid(tag + "p^r does not divide h");
    if ((cert.h % (pr * w.p)).is_zero()) invalid(tag + "p^(r+1) divides h");
    if (w.s != cert.h / pr) invalid(tag + "s != h / p^r");
    if (!(w.arasu == ArasuParams{2ull * w.r, w.r, Nat(2) * w.s * w.s, w.s})) invalid(tag + "Arasu parameters mismatch");

    Nat covered(1);
    for (const auto& ev : w.evidence) {
        if (ev.component_exponent == 0 || ev.component_exponent % 2 != 0) invalid(tag + "component exponent must be even");
        covered *= pow(ev.component_prime, ev.component_exponent / 2);
        if (ev.order_is_odd != (ev.order_v2 == 0)) invalid(tag + "order_is_odd disagrees with order_v2");
        if (ev.component_prime < Nat(3)) invalid(tag + "component prime must be odd");
        if (ev.group_order != pow(ev.component_prime, ev.component_exponent - 1) * (ev.component_prime - Nat(1))) {
            invalid(tag + "group order mismatch");
        }
        if (ev.full_order) {
            if (ev.full_order->is_zero() || !(ev.group_order % *ev.full_order).is_zero()) {
                invalid(tag + "full order does not divide the group order");
            }
            if (v2(*ev.full_order) != ev.order_v2) invalid(tag + "full order parity disagrees with order_v2");
        }
        if (recompute) {
            OrderEvidence fresh = order_v2_mod_prime_power(w.p, ev.component_prime, ev.component_exponent);
            if (fresh.order_v2 != ev.order_v2) invalid(tag + "order_v2 does not recompute");
            if (ev.full_order &&
                *ev.full_order != full_order_mod_prime_power(w.p, ev.component_prime, ev.component_exponent)) {
                invalid(tag + "full order does not recompute");
            }
        }
    }
    if (covered != w.s) invalid(tag + "components do not factor s");

    if (expected == WitnessMode::Parity) {
        const bool any_even = std::any_of(w.evidence.begin(), w.evidence.end(), [](const auto& e) { return !e.order_is_odd; });
        if (!any_even) invalid(tag + "no component of even order");
    } else if (w.evidence.empty() || !is_self_conjugate(w.evidence)) {
        invalid(tag + "component 2-adic valuations are not equal and positive");
    }
}

void validate_verdict(const Certificate& cert, const std::optional<Verdict>& v, WitnessMode mode, bool recompute) {
    if (!v) return;
    if ((cert.omega == 1) != (v->kind == VerdictKind::Inapplicable)) invalid("Inapplicable iff omega = 1");
    if ((v->kind == VerdictKind::Certified) != v->witness.has_value()) invalid("witness present iff Certified");
    if (v->witness) validate_witness(cert, *v->witness, mode, recompute);
}

}  // namespace

ordered_json to_json(const OrderEvidence& ev) {
    ordered_json j;
    j["q"] = ev.component_prime.str();
    j["e"] = ev.component_exponent;
    j["group_order"] = ev.group_order.str();
    j["order_v2"] = ev.order_v2;
    j["order_is_odd"] = ev.order_is_odd;
    if (ev.full_order) j["full_order"] = ev.full_order->str();
    return j;
}

ordered_json to_json(const Certificate& cert) {
    ordered_json j;
    j["h"] = cert.h.str();
    j["n"] = cert.n.str();
    j["omega"] = cert.omega;
    j["verdict_parity"] = verdict_kind_json(cert.parity);
    j["verdict_strict"] = verdict_kind_json(cert.strict);
    j["divergent"] = cert.divergent();
    const Verdict* first = cert.parity ? &*cert.parity : cert.strict ? &*cert.strict : nullptr;
    if (first && first->witness) j["witness"] = witness_json(*first->witness);
    if (cert.parity && cert.strict && cert.strict->witness) j["witness_strict"] = witness_json(*cert.strict->witness);
    if (cert.elapsed) j["elapsed_ms"] = std::chrono::duration<double, std::milli>(*cert.elapsed).count();
    return j;
}

ordered_json to_json(const ItemError& err) {
    ordered_json j;
    j["error"] = err.message;
    j["input"] = err.input;
    j["line"] = err.line;
    return j;
}

ordered_json to_json(const SieveReport& report) {
    ordered_json j;
    j["descriptor"] = report.descriptor;
    j["processed"] = report.processed;
    j["odd_values"] = report.odd_values;
    j["composite"] = report.composite;
    j["errors"] = report.errors;
    auto counts = [](const VerdictCounts& c) {
        return ordered_json{{"inapplicable", c.inapplicable}, {"certified", c.certified}, {"undecided", c.undecided}};
    };
    j["parity"] = counts(report.parity);
    j["strict"] = counts(report.strict);
    j["survivor_count"] = report.survivors.size();
    j["survivor_fraction"] = {{"all_odd", report.survivor_fraction_all_odd()},
                              {"composite", report.survivor_fraction_composite()},
                              {"tested", report.survivor_fraction_tested()}};
    j["survivors"] = ordered_json::array();
    for (const auto& h : report.survivors) j["survivors"].push_back(h.str());
    j["divergence_count"] = report.divergences.size();
    j["divergences"] = ordered_json::array();
    for (const auto& h : report.divergences) j["divergences"].push_back(h.str());
    j["wall_time_ms"] = std::chrono::duration<double, std::milli>(report.wall_time).count();
    j["throughput_h_per_s"] = report.throughput();
    return j;
}

std::string to_jsonl(const StreamItem& item) {
    return std::visit([](const auto& v) { return to_json(v).dump(); }, item);
}

Certificate certificate_from_json(const json& j) {
    Certificate cert;
    cert.h = nat_field(j, "h");
    cert.n = nat_field(j, "n");
    cert.omega = int_field<std::uint32_t>(j, "omega");
    cert.parity = verdict_from_json(j, "verdict_parity");
    cert.strict = verdict_from_json(j, "verdict_strict");
    if (!cert.parity && !cert.strict) invalid("no verdict present");

    Verdict& first = cert.parity ? *cert.parity : *cert.strict;
    if (j.contains("witness")) first.witness = witness_from_json(j.at("witness"));
    if (j.contains("witness_strict")) {
        if (!cert.parity || !cert.strict) invalid("'witness_strict' needs both verdicts");
        cert.strict->witness = witness_from_json(j.at("witness_strict"));
    }
    if (j.contains("elapsed_ms")) {
        const json& ms = j.at("elapsed_ms");
        if (!ms.is_number()) invalid("field 'elapsed_ms' must be a number");
        cert.elapsed = std::chrono::nanoseconds(std::llround(ms.get<double>() * 1e6));
    }
    const json& divergent = field(j, "divergent");
    if (!divergent.is_boolean() || divergent.get<bool>() != cert.divergent()) invalid("'divergent' flag mismatch");

    validate(cert);
    return cert;
}

void validate(const Certificate& cert, bool recompute) {
    if (cert.h.is_even() || cert.h <= Nat(1)) invalid("h must be odd and greater than 1");
    if (cert.n != Nat(4) * cert.h * cert.h) invalid("n != 4 h^2");
    if (cert.omega == 0) invalid("omega must be positive");
    validate_verdict(cert, cert.parity, WitnessMode::Parity, recompute);
    validate_verdict(cert, cert.strict, WitnessMode::Strict, recompute);
    if (cert.parity && cert.strict && cert.strict->kind == VerdictKind::Certified &&
        cert.parity->kind != VerdictKind::Certified) {
        invalid("Strict-certified but not Parity-certified");
    }
}

}  // namespace chm
