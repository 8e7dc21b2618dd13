// `.model` files: JSON documents with `"format": 1`.
//
//   {
//     "format": 1,
//     "states": ["s1", "s2"],
//     "abilities": ["alpha", "beta"],
//     "agents": {"a": ["alpha"]},
//     "edges": [{"pair": ["s1", "s2"], "labels": ["alpha"]}],
//     "valuation": {"s1": ["p"], "s2": []}
//   }
//
// Each unordered pair is listed at most once (listing both orders is allowed
// only with identical labels).  Unlisted pairs, self-pairs included, carry
// the empty label set.  save_model() writes the canonical form: names sorted,
// pairs sorted, empty edges omitted, every state present in the valuation.
//
// Kripke files use `"kind": "kripke"` with `relations` (agent -> list of
// ordered pairs) and `valuation` (atom -> list of states).

#pragma once

#include <string>
#include <string_view>

#include "wel/model.hpp"

namespace wel {

/// Throws ModelError on schema errors, duplicates, unknown references, and,
/// when `check` is set, on positivity/symmetry violations.
SimilarityModel load_model(std::string_view json_text, bool check = true);
std::string save_model(const SimilarityModel& m);

SimilarityModel load_model_file(const std::string& path, bool check = true);

KripkeModel load_kripke(std::string_view json_text);
KripkeModel load_kripke_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace wel
