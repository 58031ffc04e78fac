#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cga/automaton.hpp"

namespace cga {

InstructionProgram parse_program(std::string_view text, std::size_t counters);
std::string format_program(const InstructionProgram& p);

// Throws ParseError carrying line and column.
CounterAutomaton parse_automaton(std::string_view text, const std::string& source = "<input>");
CounterAutomaton load_automaton(const std::filesystem::path& path);
std::string format_automaton(const CounterAutomaton& m);
void save_automaton(const CounterAutomaton& m, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace cga
