#include "pluricas/driver.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "pluricas/bundled_problem.inc"
#include "pluricas/symmetry.hpp"

namespace pluricas {

namespace {

using Json = nlohmann::ordered_json;

std::string show(const Expr& e) { return print_expr(e); }

std::string tuple_label(const IndexTuple& t, const Context& ctx) {
  std::string out;
  for (std::size_t i : t)
    out += ctx.independent().at(i);
  return out;
}

/// Splits at commas outside parentheses and brackets.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(' || c == '[')
      ++depth;
    else if (c == ')' || c == ']')
      --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

/// Option access for one task. Every lookup happens before execution.
class Options {
public:
  Options(const Problem& p, const TaskSpec& t) : p_(p), t_(t) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ProblemError(p_.source, t_.line, "task '" + t_.name + "': " + what);
  }

  std::optional<std::string> take(const std::string& key) {
    used_.insert(key);
    auto it = t_.options.find(key);
    if (it == t_.options.end())
      return std::nullopt;
    if (it->second.empty())
      fail("option '" + key + "' has an empty value");
    return it->second;
  }

  std::string need(const std::string& key) {
    auto v = take(key);
    if (!v)
      fail("missing option '" + key + "'");
    return *v;
  }

  Expr expr(const std::string& text) const {
    try {
      return parse_expr(text, p_.context, &p_.exprs);
    } catch (const Error& e) {
      fail("in expression '" + text + "': " + e.what());
    }
  }

  std::vector<Expr> exprs(const std::string& text) const {
    std::vector<Expr> out;
    for (const auto& part : split_top_level(text))
      out.push_back(expr(part));
    return out;
  }

  /// One entry per independent variable.
  std::vector<Expr> components(const std::string& key) {
    auto out = exprs(need(key));
    if (out.size() != p_.context->num_independent())
      fail("'" + key + "' needs " + std::to_string(p_.context->num_independent()) +
           " comma-separated entries, got " + std::to_string(out.size()));
    return out;
  }

  const EquationSystem& system(const std::string& name) const {
    auto it = p_.systems.find(name);
    if (it == p_.systems.end())
      fail("unknown system '" + name + "'");
    return it->second;
  }

  const LagrangianForm& form(const std::string& name) const {
    auto it = p_.forms.find(name);
    if (it == p_.forms.end())
      fail("unknown form '" + name + "'");
    return it->second;
  }

  /// A named field, or an inline characteristic when there is one dependent variable.
  EvolutionaryField field(const std::string& text) const {
    if (auto it = p_.fields.find(text); it != p_.fields.end())
      return it->second;
    if (p_.context->num_dependent() != 1)
      fail("unknown field '" + text + "'");
    return EvolutionaryField(p_.context, {expr(text)});
  }

  bool flag(const std::string& key) {
    auto v = take(key);
    if (!v)
      return false;
    if (*v == "true" || *v == "yes")
      return true;
    if (*v == "false" || *v == "no")
      return false;
    fail("option '" + key + "' must be true or false");
  }

  std::optional<long> integer(const std::string& key, long min) {
    auto v = take(key);
    if (!v)
      return std::nullopt;
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(*v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v->size() || n < min)
      fail("option '" + key + "' must be an integer >= " + std::to_string(min));
    return n;
  }

  int dep() {
    auto v = take("dep");
    if (!v)
      return 0;
    const int d = p_.context->dependent_index(*v);
    if (d < 0)
      fail("'" + *v + "' is not a dependent variable");
    return d;
  }

  /// `xy` (single-letter names) or `x,y`.
  MultiIndex directions(const std::string& text) const {
    const auto& ctx = *p_.context;
    std::vector<int> counts(ctx.num_independent(), 0);
    std::vector<std::string> names;
    if (text.find(',') == std::string::npos && ctx.single_letter_independents())
      for (char c : text)
        names.emplace_back(1, c);
    else
      names = split_top_level(text);
    for (const auto& n : names) {
      const int i = ctx.independent_index(n);
      if (i < 0)
        fail("'" + n + "' is not an independent variable");
      ++counts[static_cast<std::size_t>(i)];
    }
    return MultiIndex(std::move(counts));
  }

  void finish() const {
    for (const auto& [key, value] : t_.options)
      if (!used_.count(key))
        fail("unknown option '" + key + "' for " + t_.kind);
  }

  const Context& context() const { return *p_.context; }
  const ContextPtr& context_ptr() const { return p_.context; }

private:
  const Problem& p_;
  const TaskSpec& t_;
  std::set<std::string> used_;
};

/// Collects the conditions a task must meet; each contributes a residual text.
class Checks {
public:
  void add(const std::string& label, bool ok, const std::string& residual) {
    items_.push_back({label, ok, residual});
  }
  void add(const std::string& label, const Expr& residual) {
    add(label, residual.is_zero(), show(residual));
  }

  void finish(TaskResult& r) const {
    r.pass = std::all_of(items_.begin(), items_.end(), [](const Item& i) { return i.ok; });
    if (items_.empty()) {
      r.residual = "none";
    } else if (items_.size() == 1) {
      r.residual = items_.front().residual;
    } else if (r.pass) {
      r.residual = "0";
    } else {
      std::string out;
      for (const auto& i : items_)
        if (!i.ok)
          out += (out.empty() ? "" : "; ") + i.label + ": " + i.residual;
      r.residual = out;
    }
    if (!items_.empty()) {
      Json checks = Json::object();
      for (const auto& i : items_)
        checks[i.label] = i.ok ? "ok" : "failed";
      r.details["checks"] = checks;
    }
  }

private:
  struct Item {
    std::string label;
    bool ok;
    std::string residual;
  };
  std::vector<Item> items_;
};

/// "0" or "xyz: expr; ..." over the nonzero coefficients.
std::string form_text(const LagrangianForm& f) {
  std::string out;
  for (const auto& [tuple, c] : f.coefficients())
    if (!c.is_zero())
      out += (out.empty() ? "" : "; ") + tuple_label(tuple, *f.context()) + ": " + show(c);
  return out.empty() ? "0" : out;
}

LagrangianForm difference(const LagrangianForm& a, const LagrangianForm& b) {
  LagrangianForm out(a.context(), a.degree());
  for (const auto& t : increasing_tuples(a.dimension(), a.degree()))
    out.set(t, a.coefficient(t) - b.coefficient(t));
  return out;
}

Json coefficient_list(const LagrangianForm& f) {
  Json list = Json::array();
  for (const auto& t : increasing_tuples(f.dimension(), f.degree()))
    list.push_back(tuple_label(t, *f.context()) + ": " + show(f.coefficient(t)));
  return list;
}

Json component_list(const std::vector<Expr>& v, const Context& ctx) {
  Json list = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i)
    list.push_back(ctx.independent()[i] + ": " + show(v[i]));
  return list;
}

Expr divergence_of(const ContextPtr& ctx, const std::vector<Expr>& v) {
  return divergence(ctx, std::span<const Expr>(v));
}

using Runner = std::function<void(TaskResult&)>;

Runner prepare_check_symmetry(Options& o) {
  Expr L = o.expr(o.need("lagrangian"));
  EvolutionaryField V = o.field(o.need("field"));
  std::vector<Expr> W = o.components("witnesses");
  std::optional<EquationSystem> S;
  if (auto s = o.take("system"))
    S = o.system(*s);
  const ContextPtr ctx = o.context_ptr();
  return [=](TaskResult& r) {
    auto cert = check_variational_symmetry(L, V, W, S ? &*S : nullptr);
    r.details["D_phi L"] = show(prolong_apply(V, L));
    r.details["divergence"] = show(divergence_of(ctx, W));
    Checks c;
    if (S) {
      r.details["raw-residual"] = show(cert.residual);
      c.add("on-shell residual", *cert.reduced_residual);
      r.details["certificate"] = cert.exact() ? "exact" : (cert.on_shell() ? "on-shell" : "none");
    } else {
      c.add("residual", cert.residual);
      r.details["certificate"] = cert.exact() ? "exact" : "none";
    }
    c.finish(r);
  };
}

Runner prepare_euler(Options& o) {
  Expr f = o.expr(o.need("expr"));
  const int dep = o.dep();
  std::optional<Expr> expect;
  if (auto e = o.take("expect"))
    expect = o.expr(*e);
  std::optional<EquationSystem> S;
  if (auto s = o.take("vanishes-on"))
    S = o.system(*s);
  return [=](TaskResult& r) {
    Expr el = euler_operator(f, dep);
    r.details["euler"] = show(el);
    Checks c;
    if (expect)
      c.add("expect", el - *expect);
    if (S)
      c.add("vanishes-on", reduce(el, *S));
    c.finish(r);
  };
}

Runner prepare_reduce(Options& o) {
  Expr f = o.expr(o.need("expr"));
  const EquationSystem S = o.system(o.need("system"));
  std::optional<MultiIndex> diff;
  if (auto d = o.take("diff"))
    diff = o.directions(*d);
  std::optional<Expr> expect;
  if (auto e = o.take("expect"))
    expect = o.expr(*e);
  const bool consequence = o.flag("consequence");
  const bool want_divergence = o.flag("divergence");
  return [=](TaskResult& r) {
    Expr input = diff ? total_derivative(f, *diff) : f;
    if (diff)
      r.details["differentiated"] = show(input);
    Expr nf = reduce(input, S);
    r.details["normal-form"] = show(nf);
    Checks c;
    if (expect)
      c.add("expect", nf - *expect);
    if (consequence)
      c.add("consequence", nf);
    if (want_divergence) {
      const auto& ctx = *S.context();
      std::string images;
      bool zero = true;
      for (std::size_t a = 0; a < ctx.num_dependent(); ++a) {
        Expr image = euler_operator(nf, static_cast<int>(a));
        zero = zero && image.is_zero();
        images += (a ? "; " : "") + show(image);
      }
      r.details["euler-image"] = images;
      c.add("total-divergence", zero, images);
    }
    c.finish(r);
  };
}

Runner prepare_dform(Options& o) {
  const LagrangianForm F = o.form(o.need("form"));
  std::optional<LagrangianForm> expect;
  if (auto e = o.take("expect")) {
    expect = o.form(*e);
    if (expect->degree() != F.degree() + 1)
      o.fail("expected form '" + *e + "' must have degree " + std::to_string(F.degree() + 1));
  }
  const bool expect_zero = o.flag("expect-zero");
  return [=](TaskResult& r) {
    LagrangianForm d = exterior_derivative(F);
    r.details["degree"] = d.degree();
    r.details["coefficients"] = coefficient_list(d);
    Checks c;
    if (expect) {
      LagrangianForm diff = difference(d, *expect);
      c.add("expect", diff.is_zero(), form_text(diff));
    }
    if (expect_zero)
      c.add("zero", d.is_zero(), form_text(d));
    c.finish(r);
  };
}

Runner prepare_closure(Options& o) {
  const LagrangianForm F = o.form(o.need("form"));
  const EquationSystem S = o.system(o.need("system"));
  std::optional<LagrangianForm> expect;
  if (auto e = o.take("expect-raw")) {
    expect = o.form(*e);
    if (expect->degree() != F.degree() + 1)
      o.fail("expected form '" + *e + "' must have degree " + std::to_string(F.degree() + 1));
  }
  return [=](TaskResult& r) {
    const auto entries = closure_residual(F, S);
    const Context& ctx = *F.context();
    Json raw = Json::array(), reduced = Json::array();
    LagrangianForm reduced_form(F.context(), F.degree() + 1), raw_form = reduced_form;
    for (const auto& e : entries) {
      raw.push_back(tuple_label(e.tuple, ctx) + ": " + show(e.raw));
      reduced.push_back(tuple_label(e.tuple, ctx) + ": " + show(e.reduced));
      raw_form.set(e.tuple, e.raw);
      reduced_form.set(e.tuple, e.reduced);
    }
    r.details["raw"] = raw;
    r.details["reduced"] = reduced;
    Checks c;
    c.add("closed on solutions", reduced_form.is_zero(), form_text(reduced_form));
    if (expect) {
      LagrangianForm diff = difference(raw_form, *expect);
      c.add("expect-raw", diff.is_zero(), form_text(diff));
    }
    c.finish(r);
  };
}

Runner prepare_derive_el(Options& o) {
  const LagrangianForm F = o.form(o.need("form"));
  const int dep = o.dep();
  const auto count = o.integer("count", 0);
  return [=](TaskResult& r) {
    const auto sys = multi_time_el(F, dep);
    const Context& ctx = *F.context();
    std::size_t trivial = 0;
    Json nontrivial = Json::array();
    for (const auto& eq : sys.equations) {
      if (eq.trivial)
        ++trivial;
      else
        nontrivial.push_back(eq.tag.describe(ctx) + " = " + show(eq.expr));
    }
    r.details["equations"] = sys.equations.size();
    r.details["identically-zero"] = trivial;
    r.details["nontrivial"] = nontrivial;
    Checks c;
    if (count) {
      const bool ok = sys.equations.size() == static_cast<std::size_t>(*count);
      c.add("count", ok,
            ok ? "0" : std::to_string(sys.equations.size()) + " equations, expected " + std::to_string(*count));
    }
    c.finish(r);
  };
}

Runner prepare_classify_el(Options& o) {
  const LagrangianForm F = o.form(o.need("form"));
  const EquationSystem S = o.system(o.need("system"));
  const int dep = o.dep();
  const long independent = o.integer("independent", 0).value_or(0);
  std::vector<Expr> targets;
  if (auto m = o.take("match"))
    targets = o.exprs(*m);
  return [=](TaskResult& r) {
    const auto sys = multi_time_el(F, dep);
    const auto cls = classify_el_system(sys, S);
    const Context& ctx = *F.context();
    auto tags = [&](const std::vector<std::size_t>& idx) {
      Json list = Json::array();
      for (std::size_t n : idx)
        list.push_back(sys.equations[n].tag.describe(ctx) + " = " + show(cls.reduced[n]));
      return list;
    };
    r.details["equations"] = sys.equations.size();
    r.details["identically-zero"] = cls.identically_zero.size();
    r.details["reducible"] = cls.reducible.size();
    r.details["independent"] = cls.independent.size();
    r.details["independent-equations"] = tags(cls.independent);
    Checks c;
    const bool count_ok = cls.independent.size() == static_cast<std::size_t>(independent);
    c.add("independent", count_ok,
          count_ok ? "0"
                   : std::to_string(cls.independent.size()) + " independent, expected " +
                         std::to_string(independent));
    if (!targets.empty()) {
      // Equal to a target up to sign; every target must be hit.
      std::vector<bool> hit(targets.size(), false);
      std::string unmatched;
      Json matches = Json::array();
      for (const auto& eq : sys.equations) {
        if (eq.trivial)
          continue;
        bool found = false;
        for (std::size_t t = 0; t < targets.size(); ++t)
          if (eq.expr == targets[t] || eq.expr == -targets[t]) {
            hit[t] = found = true;
            matches.push_back(eq.tag.describe(ctx) + " -> " + (eq.expr == targets[t] ? "+" : "-") +
                              "(" + show(targets[t]) + ")");
            break;
          }
        if (!found)
          unmatched += (unmatched.empty() ? "" : "; ") + eq.tag.describe(ctx) + " = " + show(eq.expr);
      }
      for (std::size_t t = 0; t < targets.size(); ++t)
        if (!hit[t])
          unmatched += (unmatched.empty() ? "" : "; ") + std::string("no equation for ") + show(targets[t]);
      r.details["matches"] = matches;
      c.add("match", unmatched.empty(), unmatched.empty() ? "0" : unmatched);
    }
    c.finish(r);
  };
}

Runner prepare_conservation(Options& o) {
  Expr L = o.expr(o.need("lagrangian"));
  EvolutionaryField V = o.field(o.need("field"));
  std::vector<Expr> W = o.components("witnesses");
  std::optional<std::vector<Expr>> expect;
  if (o.take("expect"))
    expect = o.components("expect");
  const ContextPtr ctx = o.context_ptr();
  return [=](TaskResult& r) {
    auto F = conservation_law(L, V, W);
    r.details["fluxes"] = component_list(F, *ctx);
    Expr source = Expr::constant(ctx, 0);
    for (std::size_t a = 0; a < ctx->num_dependent(); ++a)
      source += V[a] * euler_operator(L, static_cast<int>(a));
    r.details["characteristic-form"] = show(source);
    Checks c;
    c.add("noether identity", divergence_of(ctx, F) - source);
    if (expect) {
      std::vector<Expr> diff;
      for (std::size_t i = 0; i < F.size(); ++i)
        diff.push_back(F[i] - (*expect)[i]);
      const bool ok = std::all_of(diff.begin(), diff.end(), [](const Expr& e) { return e.is_zero(); });
      std::string text;
      for (std::size_t i = 0; i < diff.size(); ++i)
        if (!diff[i].is_zero())
          text += (text.empty() ? "" : "; ") + ctx->independent()[i] + ": " + show(diff[i]);
      c.add("expect", ok, ok ? "0" : text);
    }
    c.finish(r);
  };
}

Runner prepare_witness_search(Options& o) {
  const ContextPtr ctx = o.context_ptr();
  Expr f;
  auto e = o.take("expr");
  auto lag = o.take("lagrangian");
  auto fld = o.take("field");
  if (e && !lag && !fld)
    f = o.expr(*e);
  else if (!e && lag && fld)
    f = prolong_apply(o.field(*fld), o.expr(*lag));
  else
    o.fail("give either 'expr' or both 'lagrangian' and 'field'");
  WitnessAnsatz ansatz;
  ansatz.max_order = static_cast<int>(o.integer("order", 0).value_or(ansatz.max_order));
  ansatz.max_degree = static_cast<int>(o.integer("degree", 1).value_or(ansatz.max_degree));
  if (o.take("trig"))
    ansatz.allow_trig = o.flag("trig");
  ansatz.max_unknowns = static_cast<std::size_t>(
      o.integer("max-unknowns", 1).value_or(static_cast<long>(ansatz.max_unknowns)));
  std::optional<std::vector<Expr>> compare;
  if (o.take("compare"))
    compare = o.components("compare");
  const bool expect_failure = o.flag("expect-failure");
  return [=](TaskResult& r) {
    r.details["target"] = show(f);
    r.details["ansatz"] = ansatz.describe();
    Checks c;
    try {
      auto W = find_divergence_witnesses(ctx, f, ansatz);
      r.details["witnesses"] = component_list(W, *ctx);
      if (expect_failure)
        c.add("not-a-divergence", false, "witnesses found");
      else
        c.add("verification", divergence_of(ctx, W) - f);
      if (compare) {
        r.details["compare-divergence"] = show(divergence_of(ctx, *compare) - f);
        c.add("compare", divergence_of(ctx, *compare) - f);
      }
    } catch (const NotADivergence& nd) {
      std::string images;
      for (std::size_t a = 0; a < nd.euler_images().size(); ++a)
        images += (a ? "; " : "") + show(nd.euler_images()[a]);
      r.details["euler-image"] = images;
      c.add("not-a-divergence", expect_failure, expect_failure ? "0" : images);
    }
    c.finish(r);
  };
}

const std::vector<std::pair<std::string, Runner (*)(Options&)>>& preparers() {
  static const std::vector<std::pair<std::string, Runner (*)(Options&)>> table{
      {"check-symmetry", prepare_check_symmetry},
      {"euler", prepare_euler},
      {"reduce", prepare_reduce},
      {"dform", prepare_dform},
      {"closure", prepare_closure},
      {"derive-el", prepare_derive_el},
      {"classify-el", prepare_classify_el},
      {"conservation", prepare_conservation},
      {"witness-search", prepare_witness_search},
  };
  return table;
}

Runner prepare(const Problem& problem, const TaskSpec& task) {
  Options o(problem, task);
  for (const auto& [kind, fn] : preparers())
    if (kind == task.kind) {
      Runner run = fn(o);
      o.finish();
      return run;
    }
  o.fail("unknown task kind '" + task.kind + "'");
}

void render_details(std::ostringstream& os, const Json& details) {
  for (const auto& [key, value] : details.items()) {
    if (value.is_array() && value.empty()) {
      os << "  " << key << ": []\n";
    } else if (value.is_array()) {
      os << "  " << key << ":\n";
      for (const auto& item : value)
        os << "    - " << (item.is_string() ? item.get<std::string>() : item.dump()) << '\n';
    } else if (value.is_object()) {
      os << "  " << key << ":\n";
      for (const auto& [k, v] : value.items())
        os << "    " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    } else {
      os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
         << '\n';
    }
  }
}

constexpr const char* kVersion = "0.1.0";
constexpr const char* kBundledSource = "<bundled>/sine_gordon.problem";

} // namespace

bool RunReport::all_pass() const {
  return std::all_of(tasks.begin(), tasks.end(), [](const TaskResult& t) { return t.pass; });
}

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> out;
    for (const auto& [kind, fn] : preparers())
      out.push_back(kind);
    return out;
  }();
  return kinds;
}

RunReport run_tasks(const Problem& problem, const std::vector<const TaskSpec*>& tasks,
                    const std::string& command) {
  std::vector<Runner> runners;
  for (const TaskSpec* t : tasks)
    runners.push_back(prepare(problem, *t));

  RunReport report{command, problem.source, {}};
  for (std::size_t n = 0; n < tasks.size(); ++n) {
    TaskResult r;
    r.name = tasks[n]->name;
    r.kind = tasks[n]->kind;
    try {
      runners[n](r);
    } catch (const Error& e) {
      r.pass = false;
      r.residual = "error";
      r.details["error"] = e.what();
    }
    report.tasks.push_back(std::move(r));
  }
  return report;
}

std::string render_text(const RunReport& report) {
  std::ostringstream os;
  os << "# pluricas report: version=" << kVersion << " command=" << report.command
     << " source=" << report.source << '\n';
  std::size_t passed = 0;
  for (const auto& t : report.tasks) {
    passed += t.pass;
    os << '\n'
       << "task: " << t.name << '\n'
       << "kind: " << t.kind << '\n'
       << "status: " << (t.pass ? "PASS" : "FAIL") << '\n'
       << "residual: " << t.residual << '\n';
    if (!t.details.empty()) {
      os << "details:\n";
      render_details(os, t.details);
    }
  }
  os << "\nsummary: " << report.tasks.size() << " tasks, " << passed << " passed, "
     << report.tasks.size() - passed << " failed\n";
  return os.str();
}

std::string render_json(const RunReport& report) {
  Json doc = Json::object();
  doc["version"] = kVersion;
  doc["command"] = report.command;
  doc["source"] = report.source;
  Json tasks = Json::array();
  std::size_t passed = 0;
  for (const auto& t : report.tasks) {
    passed += t.pass;
    Json j = Json::object();
    j["task"] = t.name;
    j["kind"] = t.kind;
    j["status"] = t.pass ? "PASS" : "FAIL";
    j["residual"] = t.residual;
    j["details"] = t.details;
    tasks.push_back(std::move(j));
  }
  doc["tasks"] = std::move(tasks);
  doc["summary"] = Json{{"total", report.tasks.size()},
                        {"passed", passed},
                        {"failed", report.tasks.size() - passed}};
  return doc.dump(2) + "\n";
}

std::string_view bundled_problem() { return kBundledProblemText; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pluricas: exact verification of variational symmetries and pluri-Lagrangian 2-forms"};
  app.require_subcommand(1);
  std::string problem_path, task_name, json_path;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"check-symmetry", "verify D_phi L = Div M, exactly or modulo a system"},
      {"euler", "compute variational derivatives"},
      {"reduce", "normal forms modulo an equation system"},
      {"dform", "exterior derivative of a Lagrangian form"},
      {"closure", "closedness of a form on solutions of a system"},
      {"derive-el", "multi-time Euler-Lagrange equations of a 2-form"},
      {"classify-el", "classify multi-time Euler-Lagrange equations modulo a system"},
      {"conservation", "Noether fluxes of a variational symmetry"},
      {"witness-search", "search for divergence witnesses"},
      {"selftest", "run every task of the bundled sine-Gordon problem (or of --problem)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* opt = sub->add_option("--problem", problem_path, "problem file");
    if (name != "selftest")
      opt->required();
    sub->add_option("--task", task_name, "run only the named task");
    sub->add_option("--json", json_path, "also write a JSON report to this path");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Problem problem;
  try {
    if (!problem_path.empty())
      problem = load_problem(problem_path);
    else
      problem = parse_problem(bundled_problem(), kBundledSource);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::vector<const TaskSpec*> selected;
  for (const auto& t : problem.tasks) {
    if (!task_name.empty() && t.name != task_name)
      continue;
    if (command != "selftest" && t.kind != command) {
      if (!task_name.empty()) {
        err << "error: " << problem.source << ":" << t.line << ": task '" << t.name << "' is a "
            << t.kind << " task, not " << command << '\n';
        return 2;
      }
      continue;
    }
    selected.push_back(&t);
  }
  if (selected.empty()) {
    err << "error: " << problem.source << ": no "
        << (task_name.empty() ? (command == "selftest" ? std::string() : command + " ")
                              : "task named '" + task_name + "' among the ")
        << "tasks to run\n";
    return 2;
  }

  RunReport report;
  try {
    report = run_tasks(problem, selected, command);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  out << render_text(report);
  if (!json_path.empty()) {
    std::ofstream js(json_path, std::ios::binary);
    if (!js || !(js << render_json(report))) {
      err << "error: cannot write JSON report to " << json_path << '\n';
      return 2;
    }
  }
  return report.all_pass() ? 0 : 1;
}

} // namespace pluricas
