#include "cga/manifest.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "cga/automaton_io.hpp"
#include "cga/errors.hpp"
#include "cga/langops.hpp"

namespace fs = std::filesystem;

namespace cga {

namespace {

struct Line {
  std::size_t number;
  std::string keyword;
  Word args;
  std::string rest;  // text after the keyword, trimmed
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Word word_or_eps(const Word& args) {
  if (args.size() == 1 && args[0] == "EPS") return {};
  return args;
}

std::string format_word(const Word& w) { return w.empty() ? "EPS" : join(w); }

std::string format_opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

}  // namespace

LoadedManifest load_manifest(const fs::path& path) {
  fs::path file = fs::is_directory(path) ? path / kManifestFile : path;
  fs::path dir = file.parent_path();
  std::string source = file.string();
  std::string text = read_file(file);

  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
      ++n;
      Word toks = split_words(raw);
      if (toks.empty() || toks[0].starts_with("//")) continue;
      std::string kw = toks[0];
      toks.erase(toks.begin());
      std::string rest = trim(std::string_view(raw).substr(raw.find(kw) + kw.size()));
      lines.push_back({n, kw, toks, rest});
    }
  }

  auto fail = [&](const Line& l, const std::string& msg) { return ParseError(source, l.number, 1, msg); };
  auto to_size = [&](const Line& l, const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw fail(l, "expected a non-negative integer, got '" + s + "'");
    return v;
  };
  auto to_opt = [&](const Line& l, const std::string& s) -> std::optional<std::size_t> {
    if (s == "none") return std::nullopt;
    return to_size(l, s);
  };
  auto need = [&](const Line& l, std::size_t lo, std::size_t hi) {
    if (l.args.size() < lo || l.args.size() > hi) throw fail(l, "wrong number of arguments for '" + l.keyword + "'");
  };

  StructureDefinition def;
  LoadedManifest out;
  std::map<Token, fs::path> mult, lmult;
  std::map<Token, Overhang> overhang;
  std::set<std::string> seen;
  std::optional<fs::path> nf_path;
  const Line* nf_line = nullptr;

  for (const auto& l : lines) {
    const std::set<std::string> repeatable = {"mult", "lmult", "overhang"};
    if (!repeatable.count(l.keyword) && !seen.insert(l.keyword).second)
      throw fail(l, "duplicate '" + l.keyword + "' line");
    if (l.keyword == "structure") {
      if (l.rest.empty()) throw fail(l, "missing structure name");
      def.name = l.rest;
    } else if (l.keyword == "lambda") {
      if (l.args.empty()) throw fail(l, "empty symbol alphabet");
      def.lambda = make_alphabet(l.args);
    } else if (l.keyword == "generators") {
      std::set<Token> listed;
      std::size_t i = 0;
      for (; i < l.args.size() && l.args[i] != "family"; ++i) listed.insert(l.args[i]);
      for (std::size_t j = 0; j < i; ++j) {
        const Token& g = l.args[j];
        if (g.ends_with('-') && listed.count(g.substr(0, g.size() - 1))) continue;
        def.generators.add(g, listed.count(g + "-") ? g + "-" : g);
      }
      if (i < l.args.size()) {
        // "family x N": N counts the members with multiplier files and is informational.
        if (i + 1 >= l.args.size()) throw fail(l, "family needs a base name");
        def.generators.set_family({l.args[i + 1]});
        if (i + 2 < l.args.size()) to_size(l, l.args[i + 2]);
        if (i + 3 < l.args.size()) throw fail(l, "unexpected tokens after family");
      }
    } else if (l.keyword == "nf") {
      need(l, 1, 1);
      nf_path = dir / l.args[0];
      nf_line = &l;
    } else if (l.keyword == "mult" || l.keyword == "lmult") {
      need(l, 2, 2);
      auto& table = l.keyword == "mult" ? mult : lmult;
      if (!table.emplace(l.args[0], dir / l.args[1]).second) throw fail(l, "duplicate " + l.keyword + " for '" + l.args[0] + "'");
    } else if (l.keyword == "seed-p") {
      need(l, 1, SIZE_MAX);
      def.seed_p = word_or_eps(l.args);
    } else if (l.keyword == "seed-q") {
      need(l, 1, SIZE_MAX);
      def.seed_q = word_or_eps(l.args);
    } else if (l.keyword == "quasigeodesic-C") {
      need(l, 1, 1);
      def.quasigeodesic_c = to_opt(l, l.args[0]);
      if (def.quasigeodesic_c == 0u) throw fail(l, "quasigeodesic-C must be positive");
    } else if (l.keyword == "growth") {
      need(l, 2, 3);
      def.growth.alpha = to_size(l, l.args[0]);
      def.growth.beta = to_size(l, l.args[1]);
      if (l.args.size() == 3) def.growth.per_index = to_size(l, l.args[2]);
      if (def.growth.alpha < 1) throw fail(l, "growth alpha must be at least 1");
    } else if (l.keyword == "order") {
      def.order = l.args;
    } else if (l.keyword == "overhang") {
      need(l, 3, 3);
      overhang[l.args[0]] = {to_opt(l, l.args[1]), to_opt(l, l.args[2])};
    } else if (l.keyword == "oracle") {
      if (l.rest.empty()) throw fail(l, "missing oracle expression");
      out.oracle = l.rest;
    } else {
      throw fail(l, "unknown keyword '" + l.keyword + "'");
    }
  }

  auto missing = [&](const std::string& kw) {
    return ParseError(source, lines.empty() ? 1 : lines.back().number, 1, "missing '" + kw + "' line");
  };
  for (const char* kw : {"structure", "lambda", "generators", "nf"})
    if (!seen.count(kw)) throw missing(kw);
  for (const auto& l : lines) {
    if ((l.keyword == "mult" || l.keyword == "lmult" || l.keyword == "overhang") && !def.generators.contains(l.args[0]))
      throw fail(l, "unknown generator '" + l.args[0] + "'");
  }
  for (const auto& x : def.generators.finite_symbols())
    if (!mult.count(x) && !mult.count(def.generators.inverse(x)))
      throw missing("mult " + x);

  try {
    def.nf = relabel_alphabet(load_automaton(*nf_path), def.lambda);
  } catch (const std::invalid_argument& e) {
    throw fail(*nf_line, e.what());
  }
  def.multiplier = [mult](const GraphAutomaticStructure& self, const Token& x) {
    if (auto it = mult.find(x); it != mult.end()) return load_automaton(it->second);
    Token inv = self.generators().inverse(x);
    if (mult.count(inv)) return swap_rows(self.multiplier(inv));
    throw StructureError("manifest has no multiplier for '" + x + "'");
  };
  if (!overhang.empty())
    def.overhang = [overhang](const Token& x) {
      auto it = overhang.find(x);
      return it == overhang.end() ? Overhang{} : it->second;
    };
  if (!lmult.empty())
    def.left_multiplier = [lmult](const Token& x) {
      auto it = lmult.find(x);
      if (it == lmult.end()) throw StructureError("manifest has no left multiplier for '" + x + "'");
      return load_automaton(it->second);
    };
  out.structure = GraphAutomaticStructure::create(std::move(def));
  return out;
}

void save_manifest(const GraphAutomaticStructure& s, const fs::path& dir, const SaveOptions& opts) {
  fs::create_directories(dir);
  const auto& gens = s.generators();
  std::ostringstream m;
  m << "structure " << s.name() << "\n";
  m << "lambda " << join(s.lambda()->tokens()) << "\n";

  std::vector<Token> written;
  m << "generators";
  for (const auto& [g, inv] : gens.pairs()) {
    if (inv != g && inv != g + "-")
      throw std::invalid_argument("generator '" + g + "' has inverse '" + inv + "', which a manifest cannot express");
    m << " " << g;
    written.push_back(g);
    if (inv != g) {
      m << " " << inv;
      written.push_back(inv);
    }
  }
  if (gens.family()) {
    m << " family " << gens.family()->base << " " << opts.family_size;
    for (std::size_t i = 1; i <= opts.family_size; ++i) {
      written.push_back(gens.family()->base + std::to_string(i));
      written.push_back(gens.family()->base + std::to_string(i) + "-");
    }
  }
  m << "\n";

  save_automaton(s.nf_automaton(), dir / "nf.aut");
  m << "nf nf.aut\n";
  for (std::size_t i = 0; i < written.size(); ++i) {
    std::string file = "mult-" + std::to_string(i + 1) + ".aut";
    save_automaton(s.multiplier(written[i]), dir / file);
    m << "mult " << written[i] << " " << file << "\n";
  }
  m << "seed-p " << format_word(s.seed_p()) << "\n";
  m << "seed-q " << format_word(s.seed_q()) << "\n";
  m << "quasigeodesic-C " << format_opt(s.quasigeodesic_c()) << "\n";
  m << "growth " << s.growth().alpha << " " << s.growth().beta;
  if (s.growth().per_index) m << " " << s.growth().per_index;
  m << "\n";
  m << "order " << join(s.order()) << "\n";
  if (s.definition().overhang) {
    for (const auto& x : written) {
      Overhang o = s.overhang(x);
      if (o.right || o.left) m << "overhang " << x << " " << format_opt(o.right) << " " << format_opt(o.left) << "\n";
    }
  }
  if (opts.oracle) m << "oracle " << *opts.oracle << "\n";
  write_file(dir / kManifestFile, m.str());
}

}  // namespace cga
