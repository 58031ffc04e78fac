#include "cga/automaton_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "cga/errors.hpp"

namespace cga {

namespace {

struct Tok {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Tok> tokenize_line(std::string_view line) {
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

CounterInstruction parse_entry(std::string_view e) {
  if (e == ".") return CounterInstruction::noop();
  if (e == "Z") return CounterInstruction::set_zero();
  if (e == "=0") return CounterInstruction::test_zero();
  if (e == "!0") return CounterInstruction::test_nonzero();
  if (e.size() >= 2 && (e[0] == '+' || e[0] == '-')) {
    std::int32_t v = 0;
    auto [p, ec] = std::from_chars(e.data() + 1, e.data() + e.size(), v);
    if (ec == std::errc() && p == e.data() + e.size() && v >= 1)
      return e[0] == '+' ? CounterInstruction::inc(v) : CounterInstruction::dec(v);
  }
  throw std::invalid_argument("unknown counter instruction '" + std::string(e) + "'");
}

std::string format_entry(const CounterInstruction& c) {
  switch (c.kind) {
    case CounterInstruction::Kind::noop: return ".";
    case CounterInstruction::Kind::inc: return "+" + std::to_string(c.amount);
    case CounterInstruction::Kind::dec: return "-" + std::to_string(c.amount);
    case CounterInstruction::Kind::test_zero: return "=0";
    case CounterInstruction::Kind::test_nonzero: return "!0";
    case CounterInstruction::Kind::set_zero: return "Z";
  }
  return "?";
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

InstructionProgram parse_program(std::string_view text, std::size_t counters) {
  std::string compact;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  InstructionProgram p(counters);
  if (compact == "-") return p;
  if (compact.empty()) throw std::invalid_argument("missing program");
  for (const auto& step_text : split(compact, ';')) {
    auto entries = split(step_text, ',');
    if (entries.size() != counters)
      throw std::invalid_argument("step '" + step_text + "' has " + std::to_string(entries.size()) +
                                  " entries, expected " + std::to_string(counters));
    std::vector<CounterInstruction> step;
    for (const auto& e : entries) step.push_back(parse_entry(e));
    p.add_step(step);
  }
  return p;
}

std::string format_program(const InstructionProgram& p) {
  if (p.empty()) return "-";
  std::string out;
  for (std::size_t s = 0; s < p.steps(); ++s) {
    if (s) out += ';';
    auto step = p.step(s);
    for (std::size_t i = 0; i < step.size(); ++i) {
      if (i) out += ',';
      out += format_entry(step[i]);
    }
  }
  return out;
}

CounterAutomaton parse_automaton(std::string_view text, const std::string& source) {
  std::optional<std::string> name;
  AlphabetPtr alphabet;
  std::optional<std::size_t> counters;
  std::optional<bool> blind, deterministic;
  std::optional<AutomatonBuilder> builder;
  std::unordered_map<std::string, StateId> states;
  bool have_start = false, have_accept = false;
  std::size_t line_no = 0;

  auto fail = [&](std::size_t col, const std::string& msg) -> ParseError {
    return ParseError(source, line_no, col, msg);
  };
  auto need_states = [&](const Tok& t) {
    if (!builder) throw fail(t.column, "'" + t.text + "' must follow automaton, alphabet, counters and states");
  };
  auto lookup_state = [&](const Tok& t) {
    auto it = states.find(t.text);
    if (it == states.end()) throw fail(t.column, "unknown state '" + t.text + "'");
    return it->second;
  };
  auto parse_bool = [&](const Tok& t) {
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    throw fail(t.column, "expected true or false, got '" + t.text + "'");
  };

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokenize_line(line);
    if (toks.empty() || toks[0].text[0] == '#') continue;
    const std::string& dir = toks[0].text;
    auto args = std::vector<Tok>(toks.begin() + 1, toks.end());
    auto exactly = [&](std::size_t n) {
      if (args.size() != n)
        throw fail(toks[0].column, "'" + dir + "' expects " + std::to_string(n) + " argument(s)");
    };
    if (dir == "automaton") {
      exactly(1);
      if (name) throw fail(toks[0].column, "duplicate 'automaton' directive");
      name = args[0].text;
    } else if (dir == "alphabet") {
      if (alphabet) throw fail(toks[0].column, "duplicate 'alphabet' directive");
      std::vector<Token> tokens;
      for (const auto& a : args) {
        if (a.text == "EPS") throw fail(a.column, "EPS cannot be an alphabet token");
        tokens.push_back(a.text);
      }
      try {
        alphabet = make_alphabet(std::move(tokens));
      } catch (const std::invalid_argument& e) {
        throw fail(toks[0].column, e.what());
      }
    } else if (dir == "counters") {
      exactly(1);
      if (counters) throw fail(toks[0].column, "duplicate 'counters' directive");
      std::size_t k = 0;
      auto [p, ec] = std::from_chars(args[0].text.data(), args[0].text.data() + args[0].text.size(), k);
      if (ec != std::errc() || p != args[0].text.data() + args[0].text.size())
        throw fail(args[0].column, "counter count must be a non-negative integer");
      counters = k;
    } else if (dir == "blind") {
      exactly(1);
      blind = parse_bool(args[0]);
    } else if (dir == "deterministic") {
      exactly(1);
      deterministic = parse_bool(args[0]);
    } else if (dir == "states") {
      if (builder) throw fail(toks[0].column, "duplicate 'states' directive");
      if (!name || !alphabet || !counters)
        throw fail(toks[0].column, "'states' must follow automaton, alphabet and counters");
      if (args.empty()) throw fail(toks[0].column, "at least one state is required");
      builder.emplace(*name, alphabet, *counters);
      for (const auto& a : args) {
        if (!states.emplace(a.text, builder->add_state(a.text)).second)
          throw fail(a.column, "duplicate state '" + a.text + "'");
      }
    } else if (dir == "start") {
      exactly(1);
      need_states(toks[0]);
      if (have_start) throw fail(toks[0].column, "duplicate 'start' directive");
      builder->set_start(lookup_state(args[0]));
      have_start = true;
    } else if (dir == "accept") {
      need_states(toks[0]);
      if (have_accept) throw fail(toks[0].column, "duplicate 'accept' directive");
      for (const auto& a : args) builder->set_accepting(lookup_state(a));
      have_accept = true;
    } else if (dir == "trans") {
      need_states(toks[0]);
      if (args.size() < 4) throw fail(toks[0].column, "'trans' expects <src> <label|EPS> <program> <dst>");
      StateId from = lookup_state(args[0]);
      StateId to = lookup_state(args.back());
      Letter label = kEpsilon;
      if (args[1].text != "EPS") {
        auto l = alphabet->find(args[1].text);
        if (!l) throw fail(args[1].column, "label '" + args[1].text + "' is not in the alphabet");
        label = *l;
      }
      std::string program;
      for (std::size_t i = 2; i + 1 < args.size(); ++i) program += args[i].text;
      try {
        builder->add_transition(from, label, parse_program(program, *counters), to);
      } catch (const std::invalid_argument& e) {
        throw fail(args[2].column, e.what());
      }
    } else {
      throw fail(toks[0].column, "unknown directive '" + dir + "'");
    }
  }
  ++line_no;
  if (!builder) throw fail(1, "missing automaton, alphabet, counters or states directive");
  if (!have_start) throw fail(1, "missing 'start' directive");
  builder->set_blind(blind.value_or(false));
  builder->set_deterministic(deterministic.value_or(false));
  return std::move(*builder).build();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
}

CounterAutomaton load_automaton(const std::filesystem::path& path) {
  return parse_automaton(read_file(path), path.string());
}

std::string format_automaton(const CounterAutomaton& m) {
  // Generated names can collide or contain blanks; fall back to positional names then.
  std::vector<std::string> names(m.num_states());
  std::unordered_map<std::string, int> seen;
  bool usable = true;
  for (StateId s = 0; s < m.num_states() && usable; ++s) {
    const auto& n = m.state_name(s);
    usable = !n.empty() && n.find_first_of(" \t\r\n") == std::string::npos && seen.emplace(n, 0).second;
  }
  for (StateId s = 0; s < m.num_states(); ++s) names[s] = usable ? m.state_name(s) : "q" + std::to_string(s);
  std::string out;
  out += "automaton " + (m.name().empty() ? std::string("M") : m.name()) + "\n";
  out += "alphabet";
  for (const auto& t : m.alphabet().tokens()) out += " " + t;
  out += "\ncounters " + std::to_string(m.counters()) + "\n";
  out += std::string("blind ") + (m.declared_blind() ? "true" : "false") + "\n";
  if (m.declared_deterministic()) out += "deterministic true\n";
  out += "states";
  for (StateId s = 0; s < m.num_states(); ++s) out += " " + names[s];
  out += "\nstart " + names[m.start()] + "\naccept";
  for (StateId s : m.accepting_states()) out += " " + names[s];
  out += "\n";
  for (const auto& t : m.transitions()) {
    out += "trans " + names[t.from] + " " +
           (t.label == kEpsilon ? std::string("EPS") : m.alphabet().token(t.label)) + " " +
           format_program(t.program) + " " + names[t.to] + "\n";
  }
  return out;
}

void save_automaton(const CounterAutomaton& m, const std::filesystem::path& path) {
  write_file(path, format_automaton(m));
}

}  // namespace cga
