#pragma once

// JSON views of results. Numbers are written with 17 significant digits so
// that doubles round-trip; key order is fixed, so equal inputs give equal
// bytes.

#include <string>

#include <nlohmann/json.hpp>

#include "gcint/algebra.hpp"
#include "gcint/antiderivatives.hpp"
#include "gcint/boundary_method.hpp"
#include "gcint/quadrature.hpp"

namespace gcint {

using Json = nlohmann::ordered_json;

inline constexpr int kJsonSchema = 1;

// {"e12": 3.14...}; zero coefficients are omitted.
Json to_json(const Multivector& m);
Json to_json(const DirectedIntegralResult& r);
Json to_json(const DerivativeCheck& c);
Json to_json(const IntegrationReport& r);
Json to_json(const SweepReport& r);
Json to_json(const BranchCutReport& r);

// Pretty-printed, two-space indent, %.17g numbers, non-finite as null.
std::string dump_json(const Json& j);

}  // namespace gcint
