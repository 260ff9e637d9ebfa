#pragma once

#include <string>

#include "qfa/builder.hpp"

namespace qfa {

// Model document:
// {family, params, method, partition, base, transform,
//  regions: [{kind, interval, var, basis, numer, denom, center, scale | logpoly ...}],
//  meta: {epsilon, build_info}}
// Doubles are written as shortest round-trip decimals.
std::string to_json(const QuantileApproximant& a, int indent = 1);

// Throws ParameterError on a malformed document.
QuantileApproximant from_json(const std::string& text);

}  // namespace qfa
