#pragma once

// Expression grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] INTEGER)?
//   primary := INTEGER ['/' INTEGER]
//            | '(' expr ')'
//            | ('sin' | 'cos') '(' expr ')'       argument must be an order-0 variable
//            | DEP                                  e.g. u
//            | DEP '_' LETTERS                      e.g. u_xxy, letters name independents
//            | DEP '[' INTEGER (',' INTEGER)* ']'   e.g. u[2,1,0]
//            | NAME                                 a previously defined expression
//
// There is no implicit multiplication and no bare independent variable.

#include <map>
#include <string>
#include <string_view>

#include "pluricas/jet.hpp"

namespace pluricas {

using NameTable = std::map<std::string, Expr>;

/// Parses into a raw tree (named references are embedded as canonical values).
RawExpr parse_raw(std::string_view text, const Context& ctx, const NameTable* names = nullptr);

/// parse_raw followed by normalize. Throws ParseError, ContextError or UnsupportedOperation.
Expr parse_expr(std::string_view text, const ContextPtr& ctx, const NameTable* names = nullptr);

/// Deterministic rendering that parse_expr reads back to the same Expr.
std::string print_expr(const Expr& e, const Context& ctx);
std::string print_expr(const Expr& e);

std::string print_jet(const JetVar& v, const Context& ctx);

} // namespace pluricas
