#include "pluricas/problem.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace pluricas {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-')
      return false;
  return true;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;)
    out.push_back(w);
  return out;
}

class ProblemParser {
public:
  ProblemParser(std::string_view text, std::string source) : text_(text) {
    problem_.source = std::move(source);
  }

  Problem parse() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (auto hash = raw.find('#'); hash != std::string::npos)
        raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty())
        continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          fail("malformed section header");
        section_ = trim(std::string_view(line).substr(1, line.size() - 2));
        static const std::set<std::string> known{"context", "expr", "form", "field", "system", "task"};
        if (!known.count(section_))
          fail("unknown section [" + section_ + "]");
        if (section_ == "context" && context_seen_)
          fail("context is declared more than once");
        if (section_ == "context")
          context_seen_ = true;
        else
          finish_context();
        continue;
      }
      if (section_.empty())
        fail("content outside of any section");
      try {
        dispatch(line);
      } catch (const ProblemError&) {
        throw;
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    finish_context();
    return std::move(problem_);
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ProblemError(problem_.source, line_, what);
  }

  void finish_context() {
    if (problem_.context)
      return;
    if (indep_.empty() || dep_.empty())
      fail("[context] must declare 'independent' and 'dependent' before other sections");
    try {
      problem_.context = make_context(indep_, dep_);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  void dispatch(const std::string& line) {
    if (section_ == "context")
      context_line(line);
    else if (section_ == "expr")
      expr_line(line);
    else if (section_ == "form")
      form_line(line);
    else if (section_ == "field")
      field_line(line);
    else if (section_ == "system")
      system_line(line);
    else
      task_line(line);
  }

  std::pair<std::string, std::string> split_assignment(const std::string& line, char sep = '=') {
    auto eq = line.find(sep);
    if (eq == std::string::npos)
      fail(std::string("expected '") + sep + "'");
    return {trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1))};
  }

  void context_line(const std::string& line) {
    auto [key, value] = split_assignment(line);
    auto words = split_words(value);
    if (words.empty())
      fail("empty variable list");
    if (key == "independent") {
      if (!indep_.empty())
        fail("'independent' declared twice");
      indep_ = words;
    } else if (key == "dependent") {
      if (!dep_.empty())
        fail("'dependent' declared twice");
      dep_ = words;
    } else {
      fail("unknown context key '" + key + "'");
    }
  }

  void claim_name(const std::string& name) {
    if (!is_identifier(name) || name.find('-') != std::string::npos)
      fail("invalid name '" + name + "'");
    const auto& ctx = *problem_.context;
    if (name == "sin" || name == "cos" || ctx.independent_index(name) >= 0 ||
        ctx.dependent_index(name) >= 0)
      fail("name '" + name + "' is reserved");
    if (!names_.insert(name).second)
      fail("name '" + name + "' is already defined");
  }

  Expr expression(const std::string& text) {
    try {
      return parse_expr(text, problem_.context, &problem_.exprs);
    } catch (const ParseError& e) {
      fail(std::string("in expression '") + text + "': " + e.what());
    }
  }

  void expr_line(const std::string& line) {
    auto [name, text] = split_assignment(line);
    claim_name(name);
    problem_.exprs.emplace(name, expression(text));
  }

  /// NAME(a,b,...) on the left of a coefficient line.
  std::pair<std::string, std::vector<std::string>> call_head(const std::string& lhs) {
    auto open = lhs.find('(');
    if (open == std::string::npos || lhs.back() != ')')
      fail("expected NAME(...)");
    std::string name = trim(std::string_view(lhs).substr(0, open));
    std::vector<std::string> args;
    std::stringstream inner(lhs.substr(open + 1, lhs.size() - open - 2));
    for (std::string a; std::getline(inner, a, ',');)
      args.push_back(trim(a));
    return {name, args};
  }

  void form_line(const std::string& line) {
    const auto& ctx = problem_.context;
    if (line.find('=') == std::string::npos) {
      // NAME : degree K
      auto [name, rest] = split_assignment(line, ':');
      auto words = split_words(rest);
      if (words.size() != 2 || words[0] != "degree")
        fail("expected 'NAME : degree K'");
      int degree = 0;
      try {
        degree = std::stoi(words[1]);
      } catch (const std::exception&) {
        fail("degree must be an integer");
      }
      if (degree < 0)
        fail("degree must be non-negative");
      claim_name(name);
      problem_.forms.emplace(name, LagrangianForm(ctx, static_cast<std::size_t>(degree)));
      return;
    }
    auto [lhs, text] = split_assignment(line);
    auto [name, args] = call_head(lhs);
    IndexTuple tuple;
    for (const auto& a : args) {
      const int i = ctx->independent_index(a);
      if (i < 0)
        fail("'" + a + "' is not an independent variable");
      tuple.push_back(static_cast<std::size_t>(i));
    }
    auto it = problem_.forms.find(name);
    if (it == problem_.forms.end()) {
      claim_name(name);
      it = problem_.forms.emplace(name, LagrangianForm(ctx, tuple.size())).first;
    }
    it->second.set(tuple, expression(text));
  }

  void field_line(const std::string& line) {
    const auto& ctx = problem_.context;
    auto [lhs, text] = split_assignment(line);
    std::string name = lhs;
    int dep = 0;
    if (lhs.find('(') != std::string::npos) {
      auto [n, args] = call_head(lhs);
      if (args.size() != 1 || (dep = ctx->dependent_index(args[0])) < 0)
        fail("field component must name one dependent variable");
      name = n;
    } else if (ctx->num_dependent() != 1) {
      fail("with several dependent variables write NAME(u) = ...");
    }
    auto it = problem_.fields.find(name);
    if (it == problem_.fields.end()) {
      claim_name(name);
      it = problem_.fields.emplace(name, EvolutionaryField::zero(ctx)).first;
    }
    std::vector<Expr> chars = it->second.characteristics();
    chars[static_cast<std::size_t>(dep)] = expression(text);
    it->second = EvolutionaryField(ctx, std::move(chars));
  }

  void system_line(const std::string& line) {
    const auto& ctx = problem_.context;
    auto colon = line.find(':');
    auto eq = line.find('=');
    if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
      // NAME : LEAD = RHS
      std::string name = trim(std::string_view(line).substr(0, colon));
      auto [lead_text, rhs_text] = split_assignment(line.substr(colon + 1));
      Expr lead = expression(lead_text);
      if (lead.size() != 1 || lead.terms().begin()->second != 1 ||
          lead.terms().begin()->first.size() != 1 ||
          lead.terms().begin()->first.front().atom.kind != AtomKind::Jet ||
          lead.terms().begin()->first.front().power != 1)
        fail("rule lead must be a single jet variable");
      JetVar v = lead.terms().begin()->first.front().atom.var;
      auto it = problem_.systems.find(name);
      std::vector<Rule> rules;
      if (it == problem_.systems.end())
        claim_name(name);
      else
        rules = it->second.rules();
      rules.push_back({v, expression(rhs_text)});
      problem_.systems.insert_or_assign(name, EquationSystem(ctx, std::move(rules)));
      return;
    }
    // NAME = A + B + ...
    auto [name, rest] = split_assignment(line);
    claim_name(name);
    std::optional<EquationSystem> combined;
    std::stringstream parts(rest);
    for (std::string part; std::getline(parts, part, '+');) {
      part = trim(part);
      auto it = problem_.systems.find(part);
      if (it == problem_.systems.end())
        fail("unknown system '" + part + "'");
      combined = combined ? combined->combined(it->second) : it->second;
    }
    if (!combined)
      fail("empty system combination");
    problem_.systems.emplace(name, *combined);
  }

  void task_line(const std::string& line) {
    auto words = split_words(line);
    if (words.size() < 2)
      fail("expected 'KIND NAME key=value ...'");
    TaskSpec task{words[0], words[1], {}, line_};
    if (!is_identifier(task.name))
      fail("invalid task name '" + task.name + "'");
    for (const auto& t : problem_.tasks)
      if (t.name == task.name)
        fail("task '" + task.name + "' is already defined");
    for (std::size_t k = 2; k < words.size(); ++k) {
      auto eq = words[k].find('=');
      if (eq == std::string::npos || eq == 0)
        fail("expected key=value, got '" + words[k] + "'");
      if (!task.options.emplace(words[k].substr(0, eq), words[k].substr(eq + 1)).second)
        fail("option '" + words[k].substr(0, eq) + "' given twice");
    }
    problem_.tasks.push_back(std::move(task));
  }

  std::string_view text_;
  Problem problem_;
  std::string section_;
  int line_ = 0;
  bool context_seen_ = false;
  std::vector<std::string> indep_, dep_;
  std::set<std::string> names_;
};

} // namespace

Problem parse_problem(std::string_view text, const std::string& source) {
  return ProblemParser(text, source).parse();
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ProblemError(path, 0, "cannot read problem file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

} // namespace pluricas
