#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cga/automaton_io.hpp"
#include "cga/engine.hpp"
#include "cga/errors.hpp"
#include "cga/expression.hpp"
#include "cga/manifest.hpp"
#include "cga/normal_form.hpp"
#include "cga/shortlex.hpp"
#include "cga/verify.hpp"

using namespace cga;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kBound = 3, kInvalid = 4 };

struct Globals {
  bool porcelain = false;
};

std::string show(const Word& w) { return w.empty() ? "EPS" : join(w); }

Word parse_word(const std::string& text) {
  Word w = split_words(text);
  if (w.size() == 1 && w[0] == "EPS") return {};
  return w;
}

struct StructureRef {
  std::string group;
  std::string path;

  void add_to(CLI::App* cmd) {
    auto* g = cmd->add_option("--group", group, "builtin or combinator expression, e.g. bs:2,3 or free(z,z)");
    auto* s = cmd->add_option("--structure", path, "manifest file or directory written by `build`");
    g->excludes(s);
  }

  struct Loaded {
    StructurePtr structure;
    std::optional<std::string> oracle;
    OraclePtr builtin_oracle;
  };

  Loaded load() const {
    if (!group.empty()) {
      auto b = build_expression(group);
      return {b.structure, group, b.oracle};
    }
    if (!path.empty()) {
      auto m = load_manifest(path);
      return {m.structure, m.oracle, nullptr};
    }
    throw CLI::ValidationError("one of --group or --structure is required");
  }
};

// Adds formal inverses of the listed generators that are not listed themselves.
std::vector<Token> symmetric(const GraphAutomaticStructure& s, const Word& listed) {
  std::vector<Token> out;
  auto add = [&](const Token& x) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  };
  for (const auto& x : listed) {
    if (!s.generators().contains(x)) throw std::invalid_argument("unknown generator '" + x + "'");
    add(x);
    add(s.generators().inverse(x));
  }
  return out;
}

void print_trace(const NormalFormTrace& t, bool porcelain) {
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& st = t.steps[i];
    Counter max_counter = 0;
    for (const auto& l : st.levels) max_counter = std::max(max_counter, l.max_abs_counter);
    if (porcelain) {
      std::cout << "step " << i + 1 << " generator " << st.generator << " input-length " << st.input_length
                << " output-length " << st.output_length << " bound " << st.bound << " states " << st.states
                << " counters " << st.counters << " growth " << st.growth << " levels " << st.levels.size()
                << " max-configurations " << st.max_configurations() << " max-edges " << st.max_edges()
                << " max-counter " << max_counter << "\n";
    } else {
      std::cout << "  " << i + 1 << ". *" << st.generator << ": |u| " << st.input_length << " -> "
                << st.output_length << " (bound " << st.bound << "), D=" << st.states << " k=" << st.counters
                << " F=" << st.growth << ", levels " << st.levels.size() << ", max |S_j| "
                << st.max_configurations() << ", max |T_j| " << st.max_edges() << ", max |counter| "
                << max_counter << "\n";
      std::cout << "     " << show(t.forms[i + 1]) << "\n";
    }
  }
}

int verdict(bool porcelain, const std::string& key, bool value, const std::string& yes, const std::string& no) {
  if (porcelain) std::cout << key << " " << (value ? "true" : "false") << "\n";
  else std::cout << (value ? yes : no) << "\n";
  return value ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal forms and word problems for graph automatic groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--porcelain", g.porcelain, "line-oriented `key value` output");

  int code = kOk;

  // accept
  auto* accept = app.add_subcommand("accept", "test a word against an automaton file");
  std::string accept_file, accept_word;
  accept->add_option("automaton", accept_file)->required();
  accept->add_option("word", accept_word)->required();
  accept->callback([&] {
    auto m = load_automaton(accept_file);
    bool ok = accepts(m, parse_word(accept_word));
    code = verdict(g.porcelain, "accepted", ok, "accepted", "rejected");
  });

  // validate
  auto* val = app.add_subcommand("validate", "check an automaton file's well-formedness");
  std::string val_file;
  val->add_option("automaton", val_file)->required();
  val->callback([&] {
    auto m = load_automaton(val_file);
    auto r = validate(m);
    std::string k = r.epsilon_bound ? std::to_string(*r.epsilon_bound) : "none";
    if (g.porcelain) {
      std::cout << "valid " << (r.ok() ? "true" : "false") << "\n"
                << "states " << m.num_states() << "\n"
                << "counters " << m.counters() << "\n"
                << "epsilon-bound " << k << "\n"
                << "blind " << (r.blind ? "true" : "false") << "\n"
                << "deterministic " << (r.deterministic ? "true" : "false") << "\n";
      for (const auto& e : r.errors) std::cout << "error " << e << "\n";
    } else {
      std::cout << m.name() << ": " << m.num_states() << " states, " << m.counters() << " counters, K=" << k
                << (r.blind ? ", blind" : "") << (r.deterministic ? ", deterministic" : "") << "\n";
      for (const auto& e : r.errors) std::cout << "error: " << e << "\n";
      std::cout << (r.ok() ? "valid" : "invalid") << "\n";
    }
    code = r.ok() ? kOk : kInvalid;
  });

  // nf
  auto* nf = app.add_subcommand("nf", "normal form of a group word");
  StructureRef nf_ref;
  nf_ref.add_to(nf);
  std::string nf_word, nf_algo = "graph";
  bool nf_trace = false;
  nf->add_option("word", nf_word)->required();
  nf->add_option("--algo", nf_algo, "graph or enum")->check(CLI::IsMember({"graph", "enum"}));
  nf->add_flag("--trace", nf_trace, "per-step search statistics");
  nf->callback([&] {
    auto s = nf_ref.load().structure;
    NormalFormTrace trace;
    Algorithm algo = nf_algo == "enum" ? Algorithm::enumerative : Algorithm::graph;
    Word v = normal_form(*s, parse_word(nf_word), nf_trace ? &trace : nullptr, algo);
    if (g.porcelain) std::cout << "normal-form " << show(v) << "\n";
    else std::cout << show(v) << "\n";
    if (nf_trace) print_trace(trace, g.porcelain);
  });

  // wp
  auto* wp = app.add_subcommand("wp", "is the word trivial in the group");
  StructureRef wp_ref;
  wp_ref.add_to(wp);
  std::string wp_word;
  wp->add_option("word", wp_word)->required();
  wp->callback([&] {
    auto s = wp_ref.load().structure;
    code = verdict(g.porcelain, "trivial", word_problem(*s, parse_word(wp_word)), "trivial", "not trivial");
  });

  // eq
  auto* eq = app.add_subcommand("eq", "do two words represent the same element");
  StructureRef eq_ref;
  eq_ref.add_to(eq);
  std::string eq_a, eq_b;
  eq->add_option("first", eq_a)->required();
  eq->add_option("second", eq_b)->required();
  eq->callback([&] {
    auto s = eq_ref.load().structure;
    code = verdict(g.porcelain, "equal", are_equal(*s, parse_word(eq_a), parse_word(eq_b)), "equal", "not equal");
  });

  // verify
  auto* ver = app.add_subcommand("verify", "check a structure against an oracle on a ball");
  StructureRef ver_ref;
  ver_ref.add_to(ver);
  std::size_t radius = 3, threads = 1;
  std::string ver_oracle, ver_gens;
  std::optional<std::size_t> ver_c;
  bool ver_skip_mult = false;
  ver->add_option("--radius", radius, "ball radius")->required();
  ver->add_option("--oracle", ver_oracle, "oracle expression, or `free`; defaults to the structure's own");
  ver->add_option("--quasigeodesic", ver_c, "override the quasigeodesic constant")->check(CLI::PositiveNumber);
  ver->add_option("--generators", ver_gens, "generators spanning the ball; inverses are added");
  ver->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  ver->add_flag("--skip-multipliers", ver_skip_mult, "only check normal forms");
  ver->callback([&] {
    auto loaded = ver_ref.load();
    const auto& s = *loaded.structure;
    OraclePtr oracle;
    if (!ver_oracle.empty()) oracle = oracle_expression(ver_oracle);
    else if (loaded.builtin_oracle) oracle = loaded.builtin_oracle;
    else if (loaded.oracle) oracle = oracle_expression(*loaded.oracle);
    else throw CLI::ValidationError("--oracle is required: the manifest names no oracle");
    VerifyOptions opts;
    if (!ver_gens.empty()) opts.generators = symmetric(s, parse_word(ver_gens));
    else if (s.generators().finite_symbols().empty())
      throw CLI::ValidationError("--generators is required for a structure with only a generator family");
    opts.quasigeodesic_c = ver_c;
    opts.threads = threads;
    opts.check_multipliers = !ver_skip_mult;
    auto report = verify(s, radius, *oracle, opts);
    if (g.porcelain) {
      std::cout << report.summary() << "verdict " << (report.ok() ? "pass" : "fail") << "\n";
    } else {
      std::cout << s.name() << " against " << oracle->name() << "\n" << report.summary();
      std::cout << (report.ok() ? "PASS" : "FAIL") << "\n";
    }
    code = report.ok() ? kOk : kInvalid;
  });

  // build
  auto* bld = app.add_subcommand("build", "write a structure expression as a manifest directory");
  std::string bld_expr, bld_out;
  std::size_t family_size = 5;
  bld->add_option("expression", bld_expr)->required();
  bld->add_option("--out", bld_out, "output directory")->required();
  bld->add_option("--family-size", family_size, "family members written out")->check(CLI::PositiveNumber);
  bld->callback([&] {
    auto b = build_expression(bld_expr);
    save_manifest(*b.structure, bld_out, {family_size, bld_expr});
    if (g.porcelain) std::cout << "structure " << b.structure->name() << "\nwritten " << bld_out << "\n";
    else std::cout << "wrote " << b.structure->name() << " to " << bld_out << "\n";
  });

  // shortlex-nf
  auto* sl = app.add_subcommand("shortlex-nf", "Shortlex-least geodesic for a word under an oracle");
  std::string sl_oracle, sl_word, sl_gens;
  std::size_t max_len = 12;
  sl->add_option("--oracle", sl_oracle, "oracle expression")->required();
  sl->add_option("--max-len", max_len, "longest candidate searched");
  sl->add_option("--generators", sl_gens, "ordered generator alphabet; defaults to the oracle's");
  sl->add_option("word", sl_word)->required();
  sl->callback([&] {
    auto oracle = oracle_expression(sl_oracle);
    Word gens = sl_gens.empty() ? oracle->generators() : parse_word(sl_gens);
    if (gens.empty()) throw CLI::ValidationError("--generators is required for this oracle");
    auto r = geodesic_normal_form(*oracle, OrderedAlphabet(gens), parse_word(sl_word), max_len);
    if (!r) throw SearchBoundExceeded("no equal word of length <= " + std::to_string(max_len), max_len, max_len);
    if (g.porcelain) std::cout << "geodesic " << show(*r) << "\nlength " << r->size() << "\n";
    else std::cout << show(*r) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const SearchBoundExceeded& e) {
    std::cerr << "ga: search bound exceeded: " << e.what() << "\n";
    if (g.porcelain) std::cout << "error bound-exceeded\n";
    return kBound;
  } catch (const StructureError& e) {
    std::cerr << "ga: " << e.what() << "\n";
    if (g.porcelain) std::cout << "error invalid-structure\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "ga: " << e.what() << "\n";
    if (g.porcelain) std::cout << "error usage\n";
    return kUsage;
  }
  return code;
}
