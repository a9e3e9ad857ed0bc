#pragma once

// JSON wire formats. Parsing errors are InputError with a message naming the
// offending block and position.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "linkhom/decide.hpp"
#include "linkhom/milnor.hpp"

namespace linkhom {

/// {"components": n, "Y": [[...], ...]}
CanonicalForm parse_canonical(std::string_view text);
std::string canonical_json(const CanonicalForm& y);

/// {"component": i, "conjugator": "x2" | "x2^-1" | "1"}
std::string move_json(const PartialConj& m);
/// Either a bare list of moves or an object with a "certificate" list.
std::vector<PartialConj> parse_certificate(std::string_view text);

/// {"result": ..., "step": k | null, "certificate": [...] | null}; the
/// certificate is omitted (null) unless requested.
std::string verdict_json(const Verdict& v, bool with_certificate);
/// Inverse of verdict_json with the certificate included.
Verdict parse_verdict(std::string_view text);

/// {"components": n, "residues": [{"index": "12", "value": v, "modulus": m}, ...]}
std::string mu_table_json(int n, const std::vector<MuResidue>& residues);
/// {"equal": b, "first_difference": "1234" | null, "residues": [{"index", "left", "right"}...]}
std::string mu_report_json(const MuComparison& report);

/// List of longitude strings in AlgebraElement text format.
std::string string_link_json(const StringLink& sl);

/// Batch input: a list of {"left": form, "right": form} objects or of
/// two-element lists.
std::vector<std::pair<CanonicalForm, CanonicalForm>> parse_pairs(std::string_view text);
std::string batch_json(const std::vector<BatchResult>& results, bool with_certificate);

}  // namespace linkhom
