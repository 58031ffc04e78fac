#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cga/oracle.hpp"
#include "cga/structure.hpp"

namespace cga {

struct VerificationFailure {
  enum class Kind { termination, merged_classes, split_class, soundness, completeness, quasigeodesic };
  Kind kind;
  Word word;       // witness group word
  Word other;      // second witness where relevant
  std::string detail;

  bool operator<(const VerificationFailure& o) const;
};

std::string to_string(VerificationFailure::Kind k);

struct VerificationReport {
  std::size_t radius = 0;
  std::size_t words = 0;
  std::size_t classes = 0;
  std::size_t normal_forms = 0;
  std::size_t pairs_checked = 0;  // (u, x) combinations for the multiplier check
  std::size_t multiplier_accepts = 0;
  std::optional<std::size_t> quasigeodesic_c;
  std::vector<VerificationFailure> failures;

  bool ok() const { return failures.empty(); }
  std::size_t count(VerificationFailure::Kind k) const;
  // Deterministic rendering, one line per fact.
  std::string summary() const;
};

struct VerifyOptions {
  // Generators to build the ball from; every finite generator and inverse when empty.
  std::vector<Token> generators;
  std::optional<std::size_t> quasigeodesic_c;  // overrides the structure's value
  bool check_multipliers = true;
  std::size_t threads = 1;
  std::size_t max_failures = 50;  // per kind
};

VerificationReport verify(const GraphAutomaticStructure& s, std::size_t radius, const GroupOracle& oracle,
                          const VerifyOptions& opts = {});

// Words of length <= radius over the symbols, in Shortlex order.
std::vector<Word> ball(const std::vector<Token>& symbols, std::size_t radius);

}  // namespace cga
