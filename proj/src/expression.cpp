#include "cga/expression.hpp"

#include <cctype>
#include <charconv>

#include "cga/bs.hpp"
#include "cga/combinators.hpp"
#include "cga/errors.hpp"
#include "cga/finf.hpp"
#include "cga/zgroup.hpp"

namespace cga {

namespace {

// Free reduction restricted to the generators of one structure.
class GeneratorFreeOracle : public GroupOracle {
 public:
  GeneratorFreeOracle(GeneratorSet gens, std::string name) : gens_(std::move(gens)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Word canonicalize(const Word& w) const override {
    for (const auto& x : w)
      if (!owns(x)) throw std::invalid_argument("oracle '" + name_ + "' does not know generator '" + x + "'");
    Word out;
    for (const auto& x : w) {
      if (!out.empty() && out.back() == gens_.inverse(x)) out.pop_back();
      else out.push_back(x);
    }
    return out;
  }
  bool owns(const Token& x) const override { return gens_.contains(x); }
  std::vector<Token> generators() const override { return gens_.finite_symbols(); }
  Token inverse(const Token& x) const override { return gens_.inverse(x); }

 private:
  GeneratorSet gens_;
  std::string name_;
};

OraclePtr tagged(OraclePtr o, const std::string& tag) {
  if (tag.empty()) return o;
  return std::make_shared<TaggedOracle>(std::move(o), tag);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BuiltStructure parse() {
    BuiltStructure b = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return b;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("<expr>", 1, pos_ + 1, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    skip_space();
    int v = 0;
    auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(p - text_.data());
    return v;
  }

  // Text up to the next top-level ';' or ')'.
  std::string_view until_separator() {
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (depth == 0 && (c == ';' || c == ')')) break;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  BuiltStructure expr() {
    std::size_t at = pos_;
    std::string head = identifier();
    if (head == "bs") {
      expect(':');
      int m = integer();
      expect(',');
      int n = integer();
      if (m < 2 || n <= m) {
        pos_ = at;
        fail("bs:<m>,<n> needs 2 <= m < n");
      }
      return {bs_structure(m, n), std::make_shared<BSOracle>(m, n)};
    }
    if (head == "finf") {
      auto s = finf_structure();
      return {s, std::make_shared<GeneratorFreeOracle>(s->generators(), "finf")};
    }
    if (head == "z") {
      auto s = z_structure();
      return {s, std::make_shared<GeneratorFreeOracle>(s->generators(), "z")};
    }
    if (head == "product" || head == "free") {
      expect('(');
      BuiltStructure g = expr();
      expect(',');
      BuiltStructure h = expr();
      expect(')');
      if (head == "product") {
        ProductTags t = product_tags(*g.structure, *h.structure);
        return {direct_product(g.structure, h.structure),
                std::make_shared<ProductOracle>(tagged(g.oracle, t.g_generators), tagged(h.oracle, t.h_generators))};
      }
      ProductTags t = free_product_tags(*g.structure, *h.structure);
      return {free_product(g.structure, h.structure),
              std::make_shared<FreeProductOracle>(tagged(g.oracle, t.g_generators), tagged(h.oracle, t.h_generators))};
    }
    if (head == "regen") {
      expect('(');
      BuiltStructure base = expr();
      std::vector<GeneratorDefinition> defs;
      std::vector<std::pair<Token, Word>> expansions;
      while (eat(';')) {
        std::string name = identifier();
        if (name.empty()) fail("expected a generator name");
        expect('=');
        std::size_t word_at = pos_;
        Word w = generator_word(until_separator(), base.structure->generators(), word_at);
        bool trivial = w.size() == 1 && w[0] == "EPS";
        defs.push_back({name, trivial ? std::nullopt : std::optional<Word>(w)});
        expansions.emplace_back(name, trivial ? Word{} : w);
      }
      expect(')');
      if (defs.empty()) fail("regen needs at least one generator");
      return {change_generators(base.structure, defs),
              std::make_shared<RegenOracle>(base.oracle, std::move(expansions))};
    }
    pos_ = at;
    fail(head.empty() ? "expected a structure" : "unknown structure '" + head + "'");
  }

  Word generator_word(std::string_view text, const GeneratorSet& gens, std::size_t at) {
    Word w = split_words(text);
    if (w.empty()) {
      pos_ = at;
      fail("empty generator word (use EPS)");
    }
    if (w.size() != 1 || w[0] == "EPS" || gens.contains(w[0])) return w;
    // Greedy longest match over the finite generator names.
    Word out;
    const std::string& run = w[0];
    auto symbols = gens.finite_symbols();
    std::size_t i = 0;
    while (i < run.size()) {
      std::size_t best = 0;
      for (const auto& g : symbols)
        if (g.size() > best && run.compare(i, g.size(), g) == 0) best = g.size();
      if (best == 0) {
        pos_ = at;
        fail("cannot split '" + run + "' into generators");
      }
      out.push_back(run.substr(i, best));
      i += best;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BuiltStructure build_expression(std::string_view text) { return Parser(text).parse(); }

OraclePtr oracle_expression(std::string_view text) {
  auto trimmed = split_words(text);
  if (trimmed.size() == 1 && trimmed[0] == "free") return std::make_shared<FreeGroupOracle>();
  return build_expression(text).oracle;
}

}  // namespace cga
