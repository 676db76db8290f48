#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unirec/core/rng.hpp"
#include "unirec/core/tags.hpp"
#include "unirec/hst/document.hpp"

namespace unirec::corpus {

struct IntRange {
  int lo = 1;
  int hi = 1;

  bool operator==(const IntRange&) const = default;
};

struct GeneratorProfile {
  IntRange paragraphs{1, 3};
  IntRange lines{1, 4};         // per paragraph
  IntRange spans{1, 3};         // per line
  IntRange words{1, 5};         // per Text span
  double formula_density = 0.3; // probability that a span is a formula
  Language language = Language::EN;
  std::vector<Domain> domains{Domain::Book};

  bool operator==(const GeneratorProfile&) const = default;
};

/// Throws Error on an empty or inverted range, a density outside [0, 1] or
/// an empty domain list.
void validate(const GeneratorProfile& profile);

nlohmann::json to_json(const GeneratorProfile& profile);
GeneratorProfile profile_from_json(const nlohmann::json& j);

/// Deterministic synthetic document. Text spans draw from a word list of the
/// profile's language (Mix alternates per span); Formula spans come from a
/// small LaTeX grammar (fractions, sums, scripts, roots, Greek letters,
/// \left...\right pairs) wrapped in $...$, \(...\) or \[...\].
hst::StructuredDocument generate_document(std::uint64_t seed, const GeneratorProfile& profile);

/// One formula body without delimiters, e.g. "\frac{a}{b+1}".
std::string generate_formula(Rng& rng, int depth = 2);

}  // namespace unirec::corpus
