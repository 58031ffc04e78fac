#pragma once

#include <optional>
#include <vector>

#include "cga/structure.hpp"

namespace cga {

struct LevelStats {
  std::size_t configurations = 0;  // |S_j|
  std::size_t edges = 0;           // |T_j|
  Counter max_abs_counter = 0;
};

struct StepTrace {
  Token generator;
  std::size_t input_length = 0;
  std::size_t output_length = 0;
  std::size_t bound = 0;
  std::size_t states = 0;  // D
  std::size_t counters = 0;
  Counter growth = 0;      // F
  std::vector<LevelStats> levels;

  std::size_t max_configurations() const;
  std::size_t max_edges() const;
};

struct NormalFormTrace {
  Word input;
  std::vector<Word> forms;  // u_0 .. u_n
  std::vector<StepTrace> steps;
};

// Configuration-graph search for the normal form of u * x.
std::vector<Letter> step_normal_form(const GraphAutomaticStructure& s, std::span<const Letter> u, const Token& x,
                                     StepTrace* trace = nullptr);
Word step_normal_form(const GraphAutomaticStructure& s, const Word& u, const Token& x, StepTrace* trace = nullptr);

struct EnumerationOptions {
  // Skip every candidate sharing a prefix on which the multiplier is already dead.
  bool prune = true;
};

// Shortlex enumerate-and-test; the first accepted candidate.
Word normal_form_enumerative(const GraphAutomaticStructure& s, const Word& u, const Token& x,
                             EnumerationOptions opts = {});

enum class Algorithm { graph, enumerative };

Word normal_form(const GraphAutomaticStructure& s, const Word& w, NormalFormTrace* trace = nullptr,
                 Algorithm algo = Algorithm::graph);
const Word& identity_normal_form(const GraphAutomaticStructure& s);
bool word_problem(const GraphAutomaticStructure& s, const Word& w);
bool are_equal(const GraphAutomaticStructure& s, const Word& w1, const Word& w2);

// Normal form of q * p^-1 without the structure's own identity (used at load time).
Word normalize_seed(const GraphAutomaticStructure& s, const Word& p, const Word& q);

}  // namespace cga
