#include "slnt/potential.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "slnt/errors.hpp"

namespace slnt {

namespace {

ExprPtr make_constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Constant;
  e->value = v;
  return e;
}

ExprPtr make_variable() {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Variable;
  return e;
}

ExprPtr make_parameter(std::string name, double value) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Parameter;
  e->name = std::move(name);
  e->value = value;
  return e;
}

ExprPtr make_unary(Expr::Kind kind, ExprPtr operand, int exponent = 0) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(operand);
  e->exponent = exponent;
  return e;
}

ExprPtr make_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr negate(ExprPtr operand) {
  // A negated literal is stored as a negative constant so that printing and
  // re-parsing round-trips.
  if (operand->kind == Expr::Kind::Constant) return make_constant(-operand->value);
  return make_unary(Expr::Kind::Negate, std::move(operand));
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// Recursive-descent parser

class Parser {
 public:
  Parser(std::string_view src, const std::map<std::string, double>& params) : src_(src), params_(params) {}

  ExprPtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Expr::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Expr::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Expr::Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Expr::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return negate(unary());
    return power();
  }

  ExprPtr power() {
    auto base = primary();
    skip_ws();
    if (!accept('^')) return base;
    const std::size_t exponent_pos = pos_;
    auto exponent = unary();
    return make_unary(Expr::Kind::Pow, base, fold_integer(*exponent, exponent_pos));
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::general);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make_constant(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(src_.substr(start, pos_ - start));
    if (name == "r") return make_variable();
    auto it = params_.find(name);
    if (it == params_.end()) {
      pos_ = start;
      fail("unbound parameter '" + name + "'");
    }
    return make_parameter(name, it->second);
  }

  int fold_integer(const Expr& e, std::size_t at) const {
    const double v = fold(e, at);
    if (!std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 1e6) {
      throw ParseError("exponent must be an integer, got " + format_number(v), at);
    }
    return static_cast<int>(v);
  }

  double fold(const Expr& e, std::size_t at) const {
    switch (e.kind) {
      case Expr::Kind::Constant: return e.value;
      case Expr::Kind::Variable: throw ParseError("exponent may not depend on r", at);
      case Expr::Kind::Parameter: throw ParseError("exponent may not use parameter '" + e.name + "'", at);
      case Expr::Kind::Negate: return -fold(*e.lhs, at);
      case Expr::Kind::Add: return fold(*e.lhs, at) + fold(*e.rhs, at);
      case Expr::Kind::Sub: return fold(*e.lhs, at) - fold(*e.rhs, at);
      case Expr::Kind::Mul: return fold(*e.lhs, at) * fold(*e.rhs, at);
      case Expr::Kind::Div: return fold(*e.lhs, at) / fold(*e.rhs, at);
      case Expr::Kind::Pow: return std::pow(fold(*e.lhs, at), e.exponent);
    }
    return 0.0;
  }

  std::string_view src_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Evaluation over doubles and jets

double eval_value(const Expr& e, double r) {
  switch (e.kind) {
    case Expr::Kind::Constant:
    case Expr::Kind::Parameter: return e.value;
    case Expr::Kind::Variable: return r;
    case Expr::Kind::Negate: return -eval_value(*e.lhs, r);
    case Expr::Kind::Add: return eval_value(*e.lhs, r) + eval_value(*e.rhs, r);
    case Expr::Kind::Sub: return eval_value(*e.lhs, r) - eval_value(*e.rhs, r);
    case Expr::Kind::Mul: return eval_value(*e.lhs, r) * eval_value(*e.rhs, r);
    case Expr::Kind::Div: {
      const double den = eval_value(*e.rhs, r);
      if (den == 0.0) throw Error(ErrorCode::Domain, "pole of V at r = " + format_number(r));
      return eval_value(*e.lhs, r) / den;
    }
    case Expr::Kind::Pow: {
      const double base = eval_value(*e.lhs, r);
      if (e.exponent < 0 && base == 0.0) throw Error(ErrorCode::Domain, "pole of V at r = " + format_number(r));
      return std::pow(base, e.exponent);
    }
  }
  return 0.0;
}

TaylorJet eval_jet(const Expr& e, double r0, int order) {
  switch (e.kind) {
    case Expr::Kind::Constant:
    case Expr::Kind::Parameter: return TaylorJet::constant(r0, e.value, order);
    case Expr::Kind::Variable: return TaylorJet::variable(r0, order);
    case Expr::Kind::Negate: return -eval_jet(*e.lhs, r0, order);
    case Expr::Kind::Add: return eval_jet(*e.lhs, r0, order) + eval_jet(*e.rhs, r0, order);
    case Expr::Kind::Sub: return eval_jet(*e.lhs, r0, order) - eval_jet(*e.rhs, r0, order);
    case Expr::Kind::Mul: return jet_mul(eval_jet(*e.lhs, r0, order), eval_jet(*e.rhs, r0, order));
    case Expr::Kind::Div: return jet_div(eval_jet(*e.lhs, r0, order), eval_jet(*e.rhs, r0, order));
    case Expr::Kind::Pow: return jet_pow(eval_jet(*e.lhs, r0, order), e.exponent);
  }
  return TaylorJet::constant(r0, 0.0, order);
}

void print(const Expr& e, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*e.lhs, out);
    out += op;
    print(*e.rhs, out);
    out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::Constant:
      if (std::signbit(e.value)) {
        out += '(' + format_number(e.value) + ')';
      } else {
        out += format_number(e.value);
      }
      break;
    case Expr::Kind::Variable: out += 'r'; break;
    case Expr::Kind::Parameter: out += e.name; break;
    case Expr::Kind::Negate:
      out += "(-";
      print(*e.lhs, out);
      out += ')';
      break;
    case Expr::Kind::Add: binary(" + "); break;
    case Expr::Kind::Sub: binary(" - "); break;
    case Expr::Kind::Mul: binary("*"); break;
    case Expr::Kind::Div: binary("/"); break;
    case Expr::Kind::Pow:
      out += '(';
      print(*e.lhs, out);
      out += '^';
      if (e.exponent < 0) {
        out += '(' + std::to_string(e.exponent) + ')';
      } else {
        out += std::to_string(e.exponent);
      }
      out += ')';
      break;
  }
}

void require_params(std::string_view name, const std::map<std::string, double>& params,
                    std::initializer_list<const char*> needed) {
  for (const char* p : needed) {
    if (!params.contains(p)) {
      throw Error(ErrorCode::Config, "builtin '" + std::string(name) + "' needs parameter '" + p + "'");
    }
  }
  for (const auto& [key, v] : params) {
    bool known = false;
    for (const char* p : needed) known = known || key == p;
    if (!known) throw Error(ErrorCode::Config, "builtin '" + std::string(name) + "' has no parameter '" + key + "'");
  }
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Constant: return a.value == b.value;
    case Expr::Kind::Variable: return true;
    case Expr::Kind::Parameter: return a.name == b.name && a.value == b.value;
    case Expr::Kind::Negate: return structurally_equal(*a.lhs, *b.lhs);
    case Expr::Kind::Pow: return a.exponent == b.exponent && structurally_equal(*a.lhs, *b.lhs);
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

PotentialSpec::PotentialSpec(ExprPtr root, std::map<std::string, double> params, std::string provenance)
    : root_(std::move(root)), params_(std::move(params)), provenance_(std::move(provenance)) {
  if (!root_) throw Error(ErrorCode::Usage, "potential has no expression");
}

double PotentialSpec::value(double r) const {
  const double v = eval_value(*root_, r);
  if (!std::isfinite(v)) throw Error(ErrorCode::Domain, "V is not finite at r = " + format_number(r));
  return v;
}

TaylorJet PotentialSpec::jet(double r0, int order) const { return eval_jet(*root_, r0, order); }

std::string PotentialSpec::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

PotentialSpec parse_potential(std::string_view source, const std::map<std::string, double>& params) {
  Parser parser(source, params);
  auto root = parser.parse();
  // Keep only the bindings the expression uses.
  std::set<std::string> used;
  auto collect = [&](auto&& self, const Expr& e) -> void {
    if (e.kind == Expr::Kind::Parameter) used.insert(e.name);
    if (e.lhs) self(self, *e.lhs);
    if (e.rhs) self(self, *e.rhs);
  };
  collect(collect, *root);
  std::map<std::string, double> bound;
  for (const auto& name : used) bound.emplace(name, params.at(name));
  return PotentialSpec(std::move(root), std::move(bound), std::string(source));
}

std::vector<std::string> builtin_names() { return {"coulomb", "harmonic", "npo"}; }

PotentialSpec builtin_potential(std::string_view name, const std::map<std::string, double>& params) {
  using K = Expr::Kind;
  if (name == "harmonic") {
    require_params(name, params, {});
    return PotentialSpec(make_unary(K::Pow, make_variable(), 2), {}, "builtin:harmonic");
  }
  if (name == "coulomb") {
    require_params(name, params, {});
    return PotentialSpec(make_binary(K::Div, make_constant(-1.0), make_variable()), {}, "builtin:coulomb");
  }
  if (name == "npo") {
    require_params(name, params, {"b", "c"});
    const double b = params.at("b");
    const double c = params.at("c");
    auto r2 = [] { return make_unary(K::Pow, make_variable(), 2); };
    auto numerator = make_binary(K::Mul, make_parameter("b", b), r2());
    auto denominator = make_binary(K::Add, make_constant(1.0), make_binary(K::Mul, make_parameter("c", c), r2()));
    auto root = make_binary(K::Add, r2(), make_binary(K::Div, numerator, denominator));
    return PotentialSpec(root, params, "builtin:npo");
  }
  throw Error(ErrorCode::Config, "unknown builtin potential '" + std::string(name) + "'");
}

PotentialDerivatives derivatives_at(const PotentialSpec& spec, double r0, int max_order) {
  if (max_order < 2) throw Error(ErrorCode::Usage, "derivatives_at needs max_order >= 2");
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw Error(ErrorCode::Domain, "expansion point r0 = " + format_number(r0) + " must be positive");
  }
  const TaylorJet jet = spec.jet(r0, max_order);
  PotentialDerivatives d{r0, {}};
  d.values.reserve(static_cast<std::size_t>(max_order) + 1);
  for (int k = 0; k <= max_order; ++k) {
    const double v = jet.derivative(k);
    if (!std::isfinite(v)) throw Error(ErrorCode::Domain, "V is not smooth at r0 = " + format_number(r0));
    d.values.push_back(v);
  }
  return d;
}

}  // namespace slnt
