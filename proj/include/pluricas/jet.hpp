#pragma once

// Differential functions on a jet space: polynomials with exact rational
// coefficients in the jet variables u^a_I and the trigonometric atoms
// sin(u^a), cos(u^a). Every Expr is kept in a canonical form, so equality
// of canonical forms decides equality of differential functions.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pluricas/errors.hpp"

namespace pluricas {

using Rational = mpq_class;

/// Names of the independent variables x^1..x^p and dependent variables u^1..u^q.
class Context {
public:
  /// Throws ContextError on empty, duplicate or reserved names.
  Context(std::vector<std::string> independent, std::vector<std::string> dependent);

  const std::vector<std::string>& independent() const noexcept { return indep_; }
  const std::vector<std::string>& dependent() const noexcept { return dep_; }
  std::size_t num_independent() const noexcept { return indep_.size(); }
  std::size_t num_dependent() const noexcept { return dep_.size(); }

  /// Index of a name, or -1.
  int independent_index(const std::string& name) const;
  int dependent_index(const std::string& name) const;

  /// True when every independent name is a single character, so that the
  /// subscript notation u_xxy is unambiguous.
  bool single_letter_independents() const noexcept;

  bool operator==(const Context& other) const = default;

private:
  std::vector<std::string> indep_;
  std::vector<std::string> dep_;
};

using ContextPtr = std::shared_ptr<const Context>;

ContextPtr make_context(std::vector<std::string> independent,
                        std::vector<std::string> dependent);

/// Derivative counts, one per independent variable.
class MultiIndex {
public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t size) : counts_(size, 0) {}
  explicit MultiIndex(std::vector<int> counts);

  static MultiIndex unit(std::size_t size, std::size_t direction);

  std::size_t size() const noexcept { return counts_.size(); }
  int operator[](std::size_t i) const { return counts_[i]; }
  const std::vector<int>& counts() const noexcept { return counts_; }
  int order() const noexcept;
  bool is_zero() const noexcept { return order() == 0; }

  /// Componentwise <=.
  bool divides(const MultiIndex& other) const;

  MultiIndex shifted(std::size_t direction, int by = 1) const;
  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; throws std::invalid_argument unless other.divides(*this).
  MultiIndex operator-(const MultiIndex& other) const;

  bool operator==(const MultiIndex& other) const = default;
  /// Graded lexicographic: total order first, then the counts lexicographically.
  std::strong_ordering operator<=>(const MultiIndex& other) const;

private:
  std::vector<int> counts_;
};

/// The generator u^dep_idx.
struct JetVar {
  int dep = 0;
  MultiIndex idx;

  bool operator==(const JetVar&) const = default;
  std::strong_ordering operator<=>(const JetVar& other) const;
};

enum class AtomKind { Jet, Sin, Cos };

/// A jet variable, or sin/cos of an order-0 dependent variable (then var.idx is zero).
struct Atom {
  AtomKind kind = AtomKind::Jet;
  JetVar var;

  bool operator==(const Atom&) const = default;
  std::strong_ordering operator<=>(const Atom& other) const;
};

struct Factor {
  Atom atom;
  unsigned power = 1;

  bool operator==(const Factor&) const = default;
  std::strong_ordering operator<=>(const Factor& other) const;
};

/// Sorted by atom, no repeated atoms, powers >= 1, cos powers <= 1.
using FactorList = std::vector<Factor>;

/// Polynomial degree in the jet variables (trig atoms excluded).
unsigned jet_degree(const FactorList& factors);

class Expr {
public:
  using TermMap = std::map<FactorList, Rational>;

  /// The zero function, not bound to any context.
  Expr() = default;
  /// A context-free constant.
  Expr(const Rational& value); // NOLINT(google-explicit-constructor)
  Expr(long value);            // NOLINT(google-explicit-constructor)

  static Expr constant(ContextPtr ctx, const Rational& value);
  static Expr jet(ContextPtr ctx, JetVar var);
  static Expr jet(ContextPtr ctx, int dep, std::vector<int> counts);
  static Expr sin(ContextPtr ctx, int dep);
  static Expr cos(ContextPtr ctx, int dep);
  /// Builds coeff * factors, applying the cos^2 rewrite.
  static Expr monomial(ContextPtr ctx, const Rational& coeff, FactorList factors);

  /// Wraps a term map built exclusively through accumulate().
  static Expr from_terms(ContextPtr ctx, TermMap terms);

  const ContextPtr& context() const noexcept { return ctx_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const;

  /// Coefficient of a factor list (zero if absent).
  Rational coefficient(const FactorList& factors) const;

  Expr operator-() const;
  Expr& operator+=(const Expr& other);
  Expr& operator-=(const Expr& other);
  Expr& operator*=(const Expr& other);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);

  Expr pow(unsigned exponent) const;
  Expr scaled(const Rational& factor) const;

  /// Canonical equality; context-free operands compare equal to bound ones
  /// with the same terms.
  friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

  /// Adds coeff * factors into `terms`, rewriting cos^k with k >= 2.
  static void accumulate(TermMap& terms, const Rational& coeff, const FactorList& factors);

private:
  Expr(ContextPtr ctx, TermMap terms) : ctx_(std::move(ctx)), terms_(std::move(terms)) {}
  void adopt_context(const Expr& other);

  ContextPtr ctx_;
  TermMap terms_;
};

/// Product of two sorted factor lists (powers of equal atoms add up; the
/// cos^2 rewrite is left to Expr::accumulate).
FactorList merge_factors(const FactorList& a, const FactorList& b);

/// Throws ContextError unless the two contexts are compatible (either null,
/// identical, or structurally equal).
void check_same_context(const ContextPtr& a, const ContextPtr& b);

/// Unnormalized expression tree, the input of normalize().
struct RawExpr {
  enum class Kind { Number, Jet, Sin, Cos, Sum, Product, Neg, Pow, Value };

  Kind kind = Kind::Number;
  Rational number;
  JetVar var;
  long exponent = 0;
  std::vector<RawExpr> children;
  std::shared_ptr<const Expr> value;

  static RawExpr num(const Rational& q);
  static RawExpr jet(JetVar v);
  static RawExpr sin(int dep);
  static RawExpr cos(int dep);
  static RawExpr sum(std::vector<RawExpr> terms);
  static RawExpr product(std::vector<RawExpr> factors);
  static RawExpr neg(RawExpr operand);
  static RawExpr power(RawExpr base, long exponent);
  /// Embeds an already canonical expression.
  static RawExpr embed(Expr e);
};

/// Canonical form of a raw tree. Throws UnsupportedOperation on negative
/// exponents and ContextError on indices outside `ctx`.
Expr normalize(const RawExpr& raw, const ContextPtr& ctx);

/// Formal partial derivative with respect to the jet variable v. For an
/// order-0 v this also differentiates sin(v) and cos(v).
Expr partial(const Expr& f, const JetVar& v);

struct OrderInfo {
  /// Componentwise maximum multi-index per dependent variable.
  std::vector<MultiIndex> max_index;
  /// Whether the dependent variable occurs at all (trig atoms count as order 0).
  std::vector<bool> present;
  int max_total = 0;
};

OrderInfo max_order(const Expr& f, const Context& ctx);

/// Jet variables occurring in f. With `with_trig_bases`, sin(u^a)/cos(u^a)
/// contribute the order-0 variable u^a.
std::set<JetVar> jet_variables(const Expr& f, bool with_trig_bases = true);

} // namespace pluricas
