#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "nctwist/triple.hpp"

namespace nctwist {

inline constexpr const char* kTripleSchema = "nctwist-triple/v1";
inline constexpr const char* kReportSchema = "nctwist-report/v1";

/// Triple document: schema "nctwist-triple/v1" with fields algebra
/// {summands, rep_basis}, D, J {matrix, parity}, gamma (optional), twists
/// [{D_l, nu_l}] and metadata. Complex entries are [re, im] pairs; matrices
/// are nested row-major arrays. Doubles survive a round trip bit-exactly.
nlohmann::ordered_json serialize(const TwistedTriple& t);

/// Parse and validate a triple document. Rejects schema mismatches, shape
/// inconsistencies, non-finite entries, a non-self-adjoint total D, and a
/// component sum that disagrees with D. Error messages name the offending
/// field.
TwistedTriple deserialize(const nlohmann::json& doc);

std::string write_triple(const TwistedTriple& t);
TwistedTriple read_triple(const std::string& text);

TwistedTriple load_triple_file(const std::string& path);
void save_triple_file(const TwistedTriple& t, const std::string& path);

}  // namespace nctwist
