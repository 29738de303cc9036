#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "slnt/series.hpp"

namespace slnt {

/// Grammar accepted by parse_potential, also printed by the CLI help.
inline constexpr std::string_view kPotentialGrammar =
    "expr    := term (('+' | '-') term)*\n"
    "term    := unary (('*' | '/') unary)*\n"
    "unary   := '-' unary | power\n"
    "power   := primary ('^' unary)?        (right associative)\n"
    "primary := number | 'r' | name | '(' expr ')'\n"
    "The exponent must be a constant integer expression (no r, no parameters).\n"
    "Every name other than r must be bound with --param name=value.";

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Constant, Variable, Parameter, Negate, Add, Sub, Mul, Div, Pow };

  Kind kind = Kind::Constant;
  double value = 0.0;  // Constant literal, or the bound value of a Parameter
  std::string name;    // Parameter name
  int exponent = 0;    // Pow
  ExprPtr lhs;         // operand of Negate / Pow, left operand of binary nodes
  ExprPtr rhs;         // right operand of binary nodes; Div keeps its denominator here
};

bool structurally_equal(const Expr& a, const Expr& b);

/// An immutable potential V(r) with its parameter bindings.
class PotentialSpec {
 public:
  PotentialSpec(ExprPtr root, std::map<std::string, double> params, std::string provenance);

  const Expr& root() const noexcept { return *root_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  const std::string& provenance() const noexcept { return provenance_; }

  /// V(r). Throws Domain when the value is not finite.
  double value(double r) const;
  /// Taylor jet of V about r0 through the given order.
  TaylorJet jet(double r0, int order) const;

  /// Re-parseable source text (fully parenthesized).
  std::string to_string() const;

 private:
  ExprPtr root_;
  std::map<std::string, double> params_;
  std::string provenance_;
};

/// Raw derivatives [V(r0), V'(r0), ..., V^(M)(r0)].
struct PotentialDerivatives {
  double r0 = 0.0;
  std::vector<double> values;
};

PotentialSpec parse_potential(std::string_view source, const std::map<std::string, double>& params = {});

/// Built-in families: "harmonic" (r^2), "coulomb" (-1/r), "npo" (r^2 + b r^2/(1 + c r^2), needs b and c).
PotentialSpec builtin_potential(std::string_view name, const std::map<std::string, double>& params = {});
std::vector<std::string> builtin_names();

PotentialDerivatives derivatives_at(const PotentialSpec& spec, double r0, int max_order);

}  // namespace slnt
