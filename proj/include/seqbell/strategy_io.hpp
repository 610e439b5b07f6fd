#pragma once

#include "seqbell/scenario.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace seqbell {

/// The document does not follow the strategy file layout (missing or
/// unknown fields, wrong types). Invariant violations such as weights that
/// do not sum to one surface as std::invalid_argument instead.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strategy file layout:
///
///   {
///     "state": {"kind": "maximally_entangled"}
///            | {"kind": "partial", "parameter": φ}      // entanglement angle
///            | {"kind": "isotropic", "parameter": v},  // visibility
///     "branches": [{
///       "weight": p,
///       "a_angles": [θ0, θ1],
///       "instruments": [                      // one entry per party B_1..B_{n-1}
///         [ {"rank": "basis" | "trivial_zero" | "trivial_one",
///            "angle": α,                     // basis only
///            "unitaries": [{"axis": [x, y, z], "angle": μ},    // outcome 0
///                          {"axis": [x, y, z], "angle": μ}]}, // outcome 1
///           { ...setting y = 1... } ] ],
///       "final_angles": [γ0, γ1]
///     }]
///   }
///
/// Angles are radians. "unitaries" defaults to identities and "axis" to Y.
std::string strategy_to_json(const SequentialStrategy& strategy, int indent = 2);
SequentialStrategy strategy_from_json(const std::string& text);

SequentialStrategy load_strategy(const std::filesystem::path& path);
void save_strategy(const SequentialStrategy& strategy, const std::filesystem::path& path);

}  // namespace seqbell
