#pragma once

// Problem files: a line-oriented declarative format with the sections
// [context], [expr], [form], [field], [system] and [task]. The grammar is
// documented in docs/problem-format.md.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pluricas/calculus.hpp"
#include "pluricas/forms.hpp"
#include "pluricas/parser.hpp"
#include "pluricas/reduction.hpp"

namespace pluricas {

/// Malformed or unresolvable problem input; the message names file and line.
class ProblemError : public Error {
public:
  ProblemError(const std::string& source, int line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

struct TaskSpec {
  std::string kind;
  std::string name;
  std::map<std::string, std::string> options;
  int line = 0;
};

struct Problem {
  std::string source;
  ContextPtr context;
  NameTable exprs;
  std::map<std::string, LagrangianForm> forms;
  std::map<std::string, EvolutionaryField> fields;
  std::map<std::string, EquationSystem> systems;
  std::vector<TaskSpec> tasks;
};

Problem parse_problem(std::string_view text, const std::string& source);

/// Reads and parses a file; unreadable files raise ProblemError.
Problem load_problem(const std::string& path);

} // namespace pluricas
