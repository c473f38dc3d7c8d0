#pragma once

#include <string>

#include <json.hpp>

#include "chm/criterion.hpp"
#include "chm/sieve.hpp"

namespace chm {

// Certificate records as JSON objects. Integers that can exceed 64 bits are
// decimal strings. Key order is fixed so streams are byte-reproducible.
//
//   {"h", "n", "omega", "verdict_parity", "verdict_strict", "divergent",
//    "witness"?, "witness_strict"?, "elapsed_ms"?}
//
// "witness" belongs to the Parity verdict when Parity ran, otherwise to the
// Strict verdict; "witness_strict" appears only when both modes ran and
// Strict certified. A verdict that was not requested is null.
nlohmann::ordered_json to_json(const Certificate& cert);
nlohmann::ordered_json to_json(const ItemError& err);
nlohmann::ordered_json to_json(const SieveReport& report);
nlohmann::ordered_json to_json(const OrderEvidence& ev);

// One JSON Lines record (no trailing newline).
std::string to_jsonl(const StreamItem& item);

// Throws ValidationError on missing or malformed fields, then runs validate().
Certificate certificate_from_json(const nlohmann::json& j);

// Structural checks: n = 4h^2, p^r exactly divides h, s = h / p^r, Arasu
// parameters, evidence consistency and mode invariants. With recompute the
// order evidence is also recomputed from scratch and compared.
void validate(const Certificate& cert, bool recompute = false);

}  // namespace chm
