#include "ident/problem.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "ident/errors.hpp"

namespace ident {

namespace {

enum class Tok {
  ident,
  number,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  lparen,
  rparen,
  comma,
  colon,
  pipe,
  equals,
  eof,
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  SourcePos pos;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::number: return "number";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::colon: return "':'";
    case Tok::pipe: return "'|'";
    case Tok::equals: return "'='";
    case Tok::eof: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        advance(text[i]);
        ++i;
      }
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    SourcePos pos{line, col};
    auto punct = [&](Tok k) {
      out.push_back(Token{k, std::string(1, c), pos});
      advance(c);
      ++i;
    };
    switch (c) {
      case '{': punct(Tok::lbrace); continue;
      case '}': punct(Tok::rbrace); continue;
      case '[': punct(Tok::lbracket); continue;
      case ']': punct(Tok::rbracket); continue;
      case '(': punct(Tok::lparen); continue;
      case ')': punct(Tok::rparen); continue;
      case ',': punct(Tok::comma); continue;
      case ':': punct(Tok::colon); continue;
      case '|': punct(Tok::pipe); continue;
      case '=': punct(Tok::equals); continue;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        word.push_back(text[i]);
        advance(text[i]);
        ++i;
      }
      out.push_back(Token{Tok::ident, std::move(word), pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::string num;
      if (c == '-') {
        num.push_back(c);
        advance(c);
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw SyntaxError("expected digits after '-'", pos.line, pos.col);
      }
      bool dot = false;
      while (i < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i])) ||
              (text[i] == '.' && !dot))) {
        if (text[i] == '.') dot = true;
        num.push_back(text[i]);
        advance(text[i]);
        ++i;
      }
      if (num.back() == '.')
        throw SyntaxError("malformed number '" + num + "'", pos.line, pos.col);
      out.push_back(Token{Tok::number, std::move(num), pos});
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos.line,
                      pos.col);
  }
  out.push_back(Token{Tok::eof, "", SourcePos{line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ProblemSpec run() {
    ProblemSpec spec;
    bool have_universe = false, have_observe = false;
    while (peek().kind != Tok::eof) {
      const Token& t = peek();
      if (t.kind != Tok::ident)
        throw SyntaxError(std::string("expected a statement, found ") +
                              tok_name(t.kind),
                          t.pos.line, t.pos.col);
      if (t.text == "universe") {
        if (have_universe)
          throw DuplicateDeclaration("universe already declared", t.pos.line,
                                     t.pos.col);
        spec.universe = parse_universe();
        have_universe = true;
      } else if (t.text == "observe") {
        if (have_observe)
          throw DuplicateDeclaration("observation list already declared",
                                     t.pos.line, t.pos.col);
        spec.observe = parse_observe();
        have_observe = true;
      } else if (t.text == "estimand") {
        spec.estimands.push_back(parse_estimand());
      } else if (t.text == "assume") {
        spec.assumptions.push_back(parse_assume());
      } else if (t.text == "given") {
        if (spec.has_given)
          throw DuplicateDeclaration("given block already declared", t.pos.line,
                                     t.pos.col);
        spec.given = parse_given();
        spec.has_given = true;
      } else {
        throw SyntaxError("unknown statement '" + t.text + "'", t.pos.line,
                          t.pos.col);
      }
    }
    if (!have_universe)
      throw SyntaxError("document declares no universe", 1, 1);
    if (!have_observe)
      throw SyntaxError("document declares no observation list", 1, 1);
    if (spec.estimands.empty())
      throw SyntaxError("document declares no estimand", 1, 1);
    validate(spec);
    return spec;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t j = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[j];
  }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  Token expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind)
      throw SyntaxError(std::string("expected ") + what + ", found " +
                            (t.kind == Tok::ident || t.kind == Tok::number
                                 ? "'" + t.text + "'"
                                 : tok_name(t.kind)),
                        t.pos.line, t.pos.col);
    return take();
  }
  Token expect_keyword(const std::string& word) {
    const Token& t = peek();
    if (t.kind != Tok::ident || t.text != word)
      throw SyntaxError("expected '" + word + "'", t.pos.line, t.pos.col);
    return take();
  }
  Rat number(const Token& t) {
    try {
      return Rat::parse_decimal(t.text);
    } catch (const Error& e) {
      throw SyntaxError(e.what(), t.pos.line, t.pos.col);
    }
  }

  UniverseDecl parse_universe() {
    UniverseDecl u;
    u.pos = expect_keyword("universe").pos;
    Token kind = expect(Tok::ident, "'grid' or 'population'");
    if (kind.text == "grid")
      u.kind = UniverseKind::grid;
    else if (kind.text == "population")
      u.kind = UniverseKind::population;
    else
      throw SyntaxError("expected 'grid' or 'population', found '" + kind.text +
                            "'",
                        kind.pos.line, kind.pos.col);
    expect(Tok::lbrace, "'{'");
    while (peek().kind != Tok::rbrace) {
      Token decl = expect(Tok::ident, "'variable', 'grid_step' or 'units'");
      if (decl.text == "variable") {
        VariableDecl v;
        Token name = expect(Tok::ident, "variable name");
        v.name = name.text;
        v.pos = name.pos;
        for (const auto& prev : u.variables)
          if (prev.name == v.name)
            throw DuplicateDeclaration("variable '" + v.name + "' already declared",
                                       name.pos.line, name.pos.col);
        expect(Tok::lbrace, "'{'");
        expect_keyword("support");
        expect(Tok::colon, "':'");
        expect(Tok::lbracket, "'['");
        while (true) {
          Token n = expect(Tok::number, "support value");
          Rat r = number(n);
          if (std::find(v.support.begin(), v.support.end(), r) != v.support.end())
            throw DuplicateDeclaration("duplicate support value " + r.to_string(),
                                       n.pos.line, n.pos.col);
          v.support.push_back(r);
          if (peek().kind == Tok::comma) {
            take();
            continue;
          }
          break;
        }
        expect(Tok::rbracket, "']'");
        expect(Tok::rbrace, "'}'");
        u.variables.push_back(std::move(v));
      } else if (decl.text == "grid_step") {
        if (u.kind != UniverseKind::grid)
          throw SyntaxError("'grid_step' is only valid in a grid universe",
                            decl.pos.line, decl.pos.col);
        if (u.grid_step)
          throw DuplicateDeclaration("grid_step already declared", decl.pos.line,
                                     decl.pos.col);
        expect(Tok::colon, "':'");
        Token n = expect(Tok::number, "grid step");
        Rat r = number(n);
        if (r.num() <= 0)
          throw SyntaxError("grid_step must be positive", n.pos.line, n.pos.col);
        u.grid_step = r;
      } else if (decl.text == "units") {
        if (u.kind != UniverseKind::population)
          throw SyntaxError("'units' is only valid in a population universe",
                            decl.pos.line, decl.pos.col);
        if (u.units)
          throw DuplicateDeclaration("units already declared", decl.pos.line,
                                     decl.pos.col);
        expect(Tok::colon, "':'");
        Token n = expect(Tok::number, "unit count");
        Rat r = number(n);
        if (r.den() != 1 || r.num() <= 0)
          throw SyntaxError("units must be a positive integer", n.pos.line,
                            n.pos.col);
        u.units = r.num();
      } else {
        throw SyntaxError("expected 'variable', 'grid_step' or 'units', found '" +
                              decl.text + "'",
                          decl.pos.line, decl.pos.col);
      }
    }
    expect(Tok::rbrace, "'}'");
    if (u.variables.empty())
      throw SyntaxError("universe declares no variables", u.pos.line, u.pos.col);
    if (u.kind == UniverseKind::grid && !u.grid_step)
      throw SyntaxError("grid universe requires grid_step", u.pos.line, u.pos.col);
    if (u.kind == UniverseKind::population && !u.units)
      throw SyntaxError("population universe requires units", u.pos.line,
                        u.pos.col);
    return u;
  }

  std::vector<Expr> parse_observe() {
    expect_keyword("observe");
    expect(Tok::lbrace, "'{'");
    std::vector<Expr> exprs;
    while (true) {
      exprs.push_back(parse_expr());
      if (peek().kind == Tok::comma) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::rbrace, "'}'");
    return exprs;
  }

  EstimandDecl parse_estimand() {
    EstimandDecl e;
    e.pos = expect_keyword("estimand").pos;
    Token name = expect(Tok::ident, "estimand name");
    e.name = name.text;
    expect(Tok::lbrace, "'{'");
    e.expr = parse_expr();
    expect(Tok::rbrace, "'}'");
    return e;
  }

  AssumeDecl parse_assume() {
    AssumeDecl a;
    a.pos = expect_keyword("assume").pos;
    Token name = expect(Tok::ident, "assumption name");
    a.name = name.text;
    a.pos = name.pos;
    expect(Tok::lparen, "'('");
    while (true) {
      AssumeArg arg;
      const Token& t = peek();
      arg.pos = t.pos;
      if (t.kind == Tok::ident) {
        arg.ident = take().text;
      } else if (t.kind == Tok::number) {
        arg.number = number(take());
      } else {
        throw SyntaxError(std::string("expected argument, found ") +
                              tok_name(t.kind),
                          t.pos.line, t.pos.col);
      }
      a.args.push_back(std::move(arg));
      if (peek().kind == Tok::comma) {
        take();
        continue;
      }
      break;
    }
    expect(Tok::rparen, "')'");
    return a;
  }

  std::vector<GivenBinding> parse_given() {
    expect_keyword("given");
    expect(Tok::lbrace, "'{'");
    std::vector<GivenBinding> out;
    while (peek().kind != Tok::rbrace) {
      GivenBinding b;
      b.expr = parse_expr();
      b.pos = b.expr.pos;
      expect(Tok::equals, "'='");
      if (peek().kind == Tok::lbracket) {
        take();
        b.is_list = true;
        while (true) {
          b.values.push_back(number(expect(Tok::number, "probability")));
          if (peek().kind == Tok::comma) {
            take();
            continue;
          }
          break;
        }
        expect(Tok::rbracket, "']'");
      } else {
        b.values.push_back(number(expect(Tok::number, "value")));
      }
      out.push_back(std::move(b));
      if (peek().kind == Tok::comma) take();  // separators optional
    }
    expect(Tok::rbrace, "'}'");
    return out;
  }

  Expr parse_expr() {
    Expr e;
    Token head = expect(Tok::ident, "expression");
    e.pos = head.pos;
    if (head.text == "expect")
      e.kind = ExprKind::expect;
    else if (head.text == "prob")
      e.kind = ExprKind::prob;
    else if (head.text == "dist")
      e.kind = ExprKind::dist;
    else if (head.text == "mean_diff")
      e.kind = ExprKind::mean_diff;
    else
      throw SyntaxError(
          "expected 'expect', 'prob', 'dist' or 'mean_diff', found '" +
              head.text + "'",
          head.pos.line, head.pos.col);
    expect(Tok::lparen, "'('");
    e.var = expect(Tok::ident, "variable name").text;
    if (e.kind == ExprKind::mean_diff) {
      expect(Tok::comma, "','");
      e.var2 = expect(Tok::ident, "variable name").text;
      expect(Tok::rparen, "')'");
      return e;
    }
    if (e.kind == ExprKind::prob) {
      expect(Tok::equals, "'='");
      e.value = number(expect(Tok::number, "value"));
    }
    if (peek().kind == Tok::pipe) {
      take();
      e.cond_var = expect(Tok::ident, "variable name").text;
      expect(Tok::equals, "'='");
      e.cond_value = number(expect(Tok::number, "value"));
    }
    expect(Tok::rparen, "')'");
    return e;
  }

  void validate(const ProblemSpec& spec) {
    std::unordered_set<std::string> vars;
    for (const auto& v : spec.universe.variables) vars.insert(v.name);
    auto check_var = [&](const std::string& name, SourcePos pos) {
      if (!vars.count(name))
        throw UnknownIdentifier("undeclared variable '" + name + "'", pos.line,
                                pos.col);
    };
    auto check_expr = [&](const Expr& e) {
      check_var(e.var, e.pos);
      if (e.kind == ExprKind::mean_diff) check_var(e.var2, e.pos);
      if (e.cond_var) check_var(*e.cond_var, e.pos);
    };
    for (const auto& e : spec.observe) check_expr(e);
    std::unordered_set<std::string> estimand_names;
    for (const auto& d : spec.estimands) {
      if (!estimand_names.insert(d.name).second)
        throw DuplicateDeclaration("estimand '" + d.name + "' already declared",
                                   d.pos.line, d.pos.col);
      check_expr(d.expr);
    }
    std::unordered_set<std::string> assume_labels;
    for (const auto& a : spec.assumptions) {
      validate_assume(a, vars);
      if (!assume_labels.insert(assume_to_string(a)).second)
        throw DuplicateDeclaration(
            "assumption " + assume_to_string(a) + " already declared",
            a.pos.line, a.pos.col);
    }
    for (std::size_t i = 0; i < spec.given.size(); ++i) {
      const GivenBinding& b = spec.given[i];
      check_expr(b.expr);
      bool observed = false;
      for (const auto& o : spec.observe) observed = observed || expr_equal(o, b.expr);
      if (!observed)
        throw SyntaxError("given binds " + expr_to_string(b.expr) +
                              " which is not in the observation list",
                          b.pos.line, b.pos.col);
      for (std::size_t j = 0; j < i; ++j)
        if (expr_equal(spec.given[j].expr, b.expr))
          throw DuplicateDeclaration(
              expr_to_string(b.expr) + " already bound in given", b.pos.line,
              b.pos.col);
      if (b.is_list != (b.expr.kind == ExprKind::dist))
        throw SyntaxError(b.is_list
                              ? "only dist(...) takes a probability list"
                              : "dist(...) must be bound to a probability list",
                          b.pos.line, b.pos.col);
      if (b.is_list) {
        for (const auto& v : spec.universe.variables)
          if (v.name == b.expr.var && b.values.size() != v.support.size())
            throw SyntaxError("dist(" + v.name + ") binding needs " +
                                  std::to_string(v.support.size()) +
                                  " probabilities",
                              b.pos.line, b.pos.col);
      }
    }
  }

  void validate_assume(const AssumeDecl& a,
                       const std::unordered_set<std::string>& vars) {
    auto need = [&](bool ok, const char* shape) {
      if (!ok)
        throw SyntaxError("assumption " + a.name + " expects " + shape,
                          a.pos.line, a.pos.col);
    };
    auto var_arg = [&](const AssumeArg& arg) {
      need(arg.ident.has_value(), signature(a.name));
      if (!vars.count(*arg.ident))
        throw UnknownIdentifier("undeclared variable '" + *arg.ident + "'",
                                arg.pos.line, arg.pos.col);
    };
    auto num_arg = [&](const AssumeArg& arg) {
      need(arg.number.has_value(), signature(a.name));
    };
    if (a.name == "bounded") {
      need(a.args.size() == 3, signature(a.name));
      var_arg(a.args[0]);
      num_arg(a.args[1]);
      num_arg(a.args[2]);
      if (*a.args[2].number < *a.args[1].number)
        throw SyntaxError("bounded: lower bound exceeds upper bound", a.pos.line,
                          a.pos.col);
    } else if (a.name == "randomized") {
      need(a.args.size() == 1, signature(a.name));
      var_arg(a.args[0]);
    } else if (a.name == "independent") {
      need(a.args.size() == 2, signature(a.name));
      var_arg(a.args[0]);
      var_arg(a.args[1]);
      need(*a.args[0].ident != *a.args[1].ident,
           "two distinct variables: independent(A, B)");
    } else if (a.name == "fixed") {
      need(a.args.size() == 2, signature(a.name));
      var_arg(a.args[0]);
      num_arg(a.args[1]);
    } else {
      throw UnknownIdentifier("unknown assumption '" + a.name +
                                  "' (builtins: bounded, randomized, "
                                  "independent, fixed)",
                              a.pos.line, a.pos.col);
    }
  }

  static const char* signature(const std::string& name) {
    if (name == "bounded") return "bounded(variable, lo, hi)";
    if (name == "randomized") return "randomized(variable)";
    if (name == "independent") return "independent(A, B)";
    return "fixed(variable, value)";
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

bool expr_equal(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.var == b.var && a.var2 == b.var2 &&
         a.value == b.value && a.cond_var == b.cond_var &&
         a.cond_value == b.cond_value;
}

std::string expr_to_string(const Expr& e) {
  std::string out;
  switch (e.kind) {
    case ExprKind::expect: out = "expect(" + e.var; break;
    case ExprKind::prob: out = "prob(" + e.var + " = " + e.value->to_string(); break;
    case ExprKind::dist: out = "dist(" + e.var; break;
    case ExprKind::mean_diff: return "mean_diff(" + e.var + ", " + e.var2 + ")";
  }
  if (e.cond_var)
    out += " | " + *e.cond_var + " = " + e.cond_value->to_string();
  return out + ")";
}

std::string assume_to_string(const AssumeDecl& a) {
  std::string out = a.name + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += a.args[i].ident ? *a.args[i].ident : a.args[i].number->to_string();
  }
  return out + ")";
}

bool spec_equal(const ProblemSpec& a, const ProblemSpec& b) {
  auto var_eq = [](const VariableDecl& x, const VariableDecl& y) {
    return x.name == y.name && x.support == y.support;
  };
  if (a.universe.kind != b.universe.kind ||
      a.universe.grid_step != b.universe.grid_step ||
      a.universe.units != b.universe.units ||
      a.universe.variables.size() != b.universe.variables.size())
    return false;
  for (std::size_t i = 0; i < a.universe.variables.size(); ++i)
    if (!var_eq(a.universe.variables[i], b.universe.variables[i])) return false;
  if (a.observe.size() != b.observe.size()) return false;
  for (std::size_t i = 0; i < a.observe.size(); ++i)
    if (!expr_equal(a.observe[i], b.observe[i])) return false;
  if (a.estimands.size() != b.estimands.size()) return false;
  for (std::size_t i = 0; i < a.estimands.size(); ++i)
    if (a.estimands[i].name != b.estimands[i].name ||
        !expr_equal(a.estimands[i].expr, b.estimands[i].expr))
      return false;
  if (a.assumptions.size() != b.assumptions.size()) return false;
  for (std::size_t i = 0; i < a.assumptions.size(); ++i)
    if (assume_to_string(a.assumptions[i]) != assume_to_string(b.assumptions[i]))
      return false;
  if (a.has_given != b.has_given || a.given.size() != b.given.size()) return false;
  for (std::size_t i = 0; i < a.given.size(); ++i) {
    if (!expr_equal(a.given[i].expr, b.given[i].expr) ||
        a.given[i].is_list != b.given[i].is_list ||
        a.given[i].values != b.given[i].values)
      return false;
  }
  return true;
}

ProblemSpec parse(const std::string& text) { return Parser(text).run(); }

std::string print(const ProblemSpec& spec) {
  std::ostringstream os;
  os << "universe "
     << (spec.universe.kind == UniverseKind::grid ? "grid" : "population")
     << " {\n";
  for (const auto& v : spec.universe.variables) {
    os << "  variable " << v.name << " { support: [";
    for (std::size_t i = 0; i < v.support.size(); ++i) {
      if (i) os << ", ";
      os << v.support[i].to_string();
    }
    os << "] }\n";
  }
  if (spec.universe.grid_step)
    os << "  grid_step: " << spec.universe.grid_step->to_string() << "\n";
  if (spec.universe.units) os << "  units: " << *spec.universe.units << "\n";
  os << "}\n";
  if (!spec.observe.empty()) {
    os << "\nobserve {\n";
    for (std::size_t i = 0; i < spec.observe.size(); ++i)
      os << "  " << expr_to_string(spec.observe[i])
         << (i + 1 < spec.observe.size() ? "," : "") << "\n";
    os << "}\n";
  }
  for (const auto& e : spec.estimands)
    os << "\nestimand " << e.name << " { " << expr_to_string(e.expr) << " }\n";
  for (const auto& a : spec.assumptions)
    os << "\nassume " << assume_to_string(a) << "\n";
  if (spec.has_given) {
    os << "\ngiven {\n";
    for (const auto& b : spec.given) {
      os << "  " << expr_to_string(b.expr) << " = ";
      if (b.is_list) {
        os << "[";
        for (std::size_t i = 0; i < b.values.size(); ++i) {
          if (i) os << ", ";
          os << b.values[i].to_string();
        }
        os << "]";
      } else {
        os << b.values[0].to_string();
      }
      os << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace ident
