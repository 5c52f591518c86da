#pragma once

// Task execution, text/JSON reports and the command-line entry point.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "pluricas/problem.hpp"

namespace pluricas {

struct TaskResult {
  std::string name;
  std::string kind;
  bool pass = false;
  /// Canonical text of whatever has to vanish for the task to pass.
  std::string residual;
  /// Ordered key/value details; values are strings, numbers or string arrays.
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct RunReport {
  std::string command;
  std::string source;
  std::vector<TaskResult> tasks;

  bool all_pass() const;
};

/// Task kinds understood by run_tasks; identical to the CLI subcommands except selftest.
const std::vector<std::string>& task_kinds();

/// Resolves every option of every task first (ProblemError on a bad
/// reference, option or expression), then executes them in order. Library
/// errors raised while executing a task mark that task FAIL.
RunReport run_tasks(const Problem& problem, const std::vector<const TaskSpec*>& tasks,
                    const std::string& command);

/// First line is run metadata; everything after it is deterministic.
std::string render_text(const RunReport& report);
std::string render_json(const RunReport& report);

/// Text of the bundled sine-Gordon problem file run by `selftest`.
std::string_view bundled_problem();

/// argv without the program name. Returns 0 if every executed check passes,
/// 1 if one fails, 2 on usage or input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pluricas
