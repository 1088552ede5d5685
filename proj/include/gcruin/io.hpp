#pragma once

#include <string>

#include <json.hpp>

#include "gcruin/convolutions.hpp"
#include "gcruin/measures.hpp"
#include "gcruin/risk.hpp"

namespace gcruin::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text, or the contents of a file when `arg` starts with '@'.
/// Failures raise ValidationError with path "$".
Json parse_json_arg(const std::string& arg);

/// {"family": name, ...}. Families: pareto2a{alpha}, lom_alpha{gamma, alpha},
/// lom_max{a}, lom_kendall{c, alpha}, uniform{a, b}, exponential{rate},
/// point{x}, table{atoms: [{x, mass}], cdf: [[x, F], ...]}.
/// Errors carry the JSON path of the offending field, rooted at `path`.
Distribution law_from_json(const Json& j, const std::string& path = "$");

/// {"kind": name, ...}: classical, symmetric, alpha_stable{alpha}, max,
/// kendall{alpha}, kingman{s}, kendall_type{p, c optional}.
ConvolutionAlgebra algebra_from_json(const Json& j, const std::string& path = "$");

/// {"algebra", "claims", "premiums", "u", "lambda", "beta"}; u defaults to 0,
/// lambda and beta to 1.
RiskModel model_from_json(const Json& j, const std::string& path = "$");

Json to_json(const ConvolutionAlgebra& alg);
/// Family descriptor when the law carries a named family tag, else null.
Json family_json(const Distribution& d);
/// Atoms plus the cdf sampled at `points` equispaced x over the support
/// (up to the 1 - 1e-4 quantile for unbounded laws).
Json distribution_json(const Distribution& d, int points = 512);
Json to_json(const SafetyReport& r);

}  // namespace gcruin::io
