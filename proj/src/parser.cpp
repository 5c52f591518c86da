#include "pluricas/parser.hpp"

#include <cctype>
#include <sstream>

namespace pluricas {

namespace {

class Parser {
public:
  Parser(std::string_view text, const Context& ctx, const NameTable* names)
      : text_(text), ctx_(ctx), names_(names) {}

  RawExpr parse() {
    RawExpr e = expr();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError(what, at);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      fail(std::string("expected '") + c + "'");
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  RawExpr expr() {
    std::vector<RawExpr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(RawExpr::neg(term()));
      else
        break;
    }
    return terms.size() == 1 ? std::move(terms.front()) : RawExpr::sum(std::move(terms));
  }

  RawExpr term() {
    std::vector<RawExpr> factors;
    factors.push_back(unary());
    while (accept('*'))
      factors.push_back(unary());
    return factors.size() == 1 ? std::move(factors.front()) : RawExpr::product(std::move(factors));
  }

  RawExpr unary() {
    if (accept('-'))
      return RawExpr::neg(unary());
    return power();
  }

  RawExpr power() {
    RawExpr base = primary();
    if (!accept('^'))
      return base;
    const bool negative = accept('-');
    skip_space();
    const std::size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("exponent must be an integer literal");
    mpz_class n(read_digits());
    if (!n.fits_slong_p())
      fail_at("exponent too large", at);
    long e = n.get_si();
    if (peek() == '^')
      fail("chained exponents are not allowed; use parentheses");
    return RawExpr::power(std::move(base), negative ? -e : e);
  }

  std::string read_digits() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  RawExpr primary() {
    const char c = peek();
    if (c == '\0')
      fail("unexpected end of expression");
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num(read_digits());
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          fail("expected denominator after '/'");
        const std::size_t at = pos_;
        mpz_class den(read_digits());
        if (den == 0)
          fail_at("zero denominator", at);
        Rational q(num, den);
        q.canonicalize();
        return RawExpr::num(q);
      }
      return RawExpr::num(Rational(num));
    }
    if (accept('(')) {
      RawExpr inner = expr();
      expect(')');
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(c)))
      fail("unexpected '" + std::string(1, c) + "'");

    const std::size_t at = pos_;
    const std::string name = read_identifier();
    if ((name == "sin" || name == "cos") && peek() == '(')
      return trig(name == "sin");

    const int dep = ctx_.dependent_index(name);
    if (dep >= 0)
      return RawExpr::jet(JetVar{dep, jet_suffix()});
    if (names_) {
      if (auto it = names_->find(name); it != names_->end())
        return RawExpr::embed(it->second);
    }
    if (ctx_.independent_index(name) >= 0)
      fail_at("independent variable '" + name + "' cannot appear in an expression", at);
    fail_at("unknown variable '" + name + "'", at);
  }

  MultiIndex jet_suffix() {
    const std::size_t n = ctx_.num_independent();
    if (pos_ < text_.size() && text_[pos_] == '_') {
      ++pos_;
      std::vector<int> counts(n, 0);
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        const int i = ctx_.independent_index(std::string(1, text_[pos_]));
        if (i < 0)
          fail("'" + std::string(1, text_[pos_]) + "' is not an independent variable");
        ++counts[i];
        ++pos_;
      }
      if (pos_ == start)
        fail("expected derivative letters after '_'");
      return MultiIndex(std::move(counts));
    }
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      std::vector<int> counts;
      do {
        skip_space();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
          fail("expected a derivative count");
        const std::size_t at = pos_;
        mpz_class k(read_digits());
        if (!k.fits_sint_p())
          fail_at("derivative count too large", at);
        counts.push_back(static_cast<int>(k.get_si()));
      } while (accept(','));
      expect(']');
      if (counts.size() != n)
        fail("bracket multi-index needs " + std::to_string(n) + " entries");
      return MultiIndex(std::move(counts));
    }
    return MultiIndex(n);
  }

  RawExpr trig(bool is_sin) {
    expect('(');
    const std::size_t inner_at = pos_;
    RawExpr inner = expr();
    expect(')');
    if (inner.kind != RawExpr::Kind::Jet || !inner.var.idx.is_zero())
      fail_at(std::string(is_sin ? "sin" : "cos") +
                  " takes a single order-0 dependent variable as argument",
              inner_at);
    return is_sin ? RawExpr::sin(inner.var.dep) : RawExpr::cos(inner.var.dep);
  }

  std::string_view text_;
  const Context& ctx_;
  const NameTable* names_;
  std::size_t pos_ = 0;
};

std::string print_atom(const Atom& atom, const Context& ctx) {
  switch (atom.kind) {
  case AtomKind::Jet:
    return print_jet(atom.var, ctx);
  case AtomKind::Sin:
    return "sin(" + ctx.dependent().at(atom.var.dep) + ")";
  case AtomKind::Cos:
    return "cos(" + ctx.dependent().at(atom.var.dep) + ")";
  }
  return {};
}

} // namespace

RawExpr parse_raw(std::string_view text, const Context& ctx, const NameTable* names) {
  return Parser(text, ctx, names).parse();
}

Expr parse_expr(std::string_view text, const ContextPtr& ctx, const NameTable* names) {
  if (!ctx)
    throw ContextError("parsing needs a context");
  return normalize(parse_raw(text, *ctx, names), ctx);
}

std::string print_jet(const JetVar& v, const Context& ctx) {
  std::string out = ctx.dependent().at(v.dep);
  if (v.idx.is_zero())
    return out;
  if (ctx.single_letter_independents()) {
    out += '_';
    for (std::size_t i = 0; i < v.idx.size(); ++i)
      out.append(static_cast<std::size_t>(v.idx[i]), ctx.independent()[i][0]);
    return out;
  }
  out += '[';
  for (std::size_t i = 0; i < v.idx.size(); ++i) {
    if (i)
      out += ',';
    out += std::to_string(v.idx[i]);
  }
  return out + ']';
}

std::string print_expr(const Expr& e, const Context& ctx) {
  if (e.is_zero())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [factors, coeff] : e.terms()) {
    const bool negative = coeff < 0;
    const Rational magnitude = negative ? Rational(-coeff) : coeff;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    bool need_star = false;
    if (factors.empty() || magnitude != 1) {
      os << magnitude.get_str();
      need_star = true;
    }
    for (const auto& f : factors) {
      if (need_star)
        os << '*';
      os << print_atom(f.atom, ctx);
      if (f.power > 1)
        os << '^' << f.power;
      need_star = true;
    }
  }
  return os.str();
}

std::string print_expr(const Expr& e) {
  if (e.context())
    return print_expr(e, *e.context());
  if (!e.is_constant())
    throw ContextError("cannot print a non-constant expression without a context");
  return e.is_zero() ? "0" : e.terms().begin()->second.get_str();
}

} // namespace pluricas
