#pragma once

#include "nld/inequality.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace nld {

/// Bounds attached to a catalog entry. Exact where the computation is exact.
struct InequalityBounds {
    std::optional<Rational> classical;
    std::optional<Rational> nosignaling;
    std::optional<double> quantum_lb;
};

struct InequalityRecord {
    SymmetricInequality inequality;
    InequalityBounds bounds;
    std::string model;  ///< e.g. "(2,2,1)"; empty when unknown
};

nlohmann::json to_json(const SymmetricInequality& ineq);
nlohmann::json to_json(const InequalityRecord& record);

/// Reads {"n", "m", "constant", "coeffs": [{"multiset", "c"}], ...}. A "space" field
/// ("full" / "marginals") is optional; multisets containing 0 imply marginals.
InequalityRecord record_from_json(const nlohmann::json& j);
SymmetricInequality inequality_from_json(const nlohmann::json& j);

}  // namespace nld
