#include "momentforge/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "momentforge/errors.hpp"

namespace momentforge {

namespace {

enum class Tok {
  End,        // end of input
  Newline,
  Ident,
  Number,
  KwWhile, KwIf, KwElse, KwEnd, KwTrue, KwFalse, KwNot, KwAnd, KwOr,
  Assign,     // =
  Eq, Ne, Lt, Gt, Le, Ge,
  Plus, Minus, Star, Slash, Power,
  Comma, Colon, Semi,
  LParen, RParen, LBrace, RBrace,
};

struct Token {
  Tok kind;
  std::string text;
  Rational number;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_spaces_and_comments();
      if (pos_ >= src_.size()) break;
      int line = line_, col = col_;
      char c = src_[pos_];
      if (c == '\n') {
        advance();
        if (!out.empty() && out.back().kind != Tok::Newline) {
          out.push_back({Tok::Newline, "\n", Rational(0), line, col});
        }
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          ident.push_back(src_[pos_]);
          advance();
        }
        Tok kind = keyword(ident);
        out.push_back({kind, ident, Rational(0), line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && pos_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::string num;
        bool seen_dot = false;
        while (pos_ < src_.size()) {
          char d = src_[pos_];
          if (std::isdigit(static_cast<unsigned char>(d))) {
            num.push_back(d);
          } else if (d == '.' && !seen_dot) {
            seen_dot = true;
            num.push_back(d);
          } else {
            break;
          }
          advance();
        }
        auto val = try_rational_from_string(num);
        if (!val) throw SyntaxError("bad number literal '" + num + "'", line, col);
        out.push_back({Tok::Number, num, *val, line, col});
        continue;
      }
      auto two = [&](char a, char b) {
        return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
      };
      if (two('*', '*')) { advance(); advance(); out.push_back({Tok::Power, "**", Rational(0), line, col}); continue; }
      if (two('=', '=')) { advance(); advance(); out.push_back({Tok::Eq, "==", Rational(0), line, col}); continue; }
      if (two('!', '=')) { advance(); advance(); out.push_back({Tok::Ne, "!=", Rational(0), line, col}); continue; }
      if (two('<', '=')) { advance(); advance(); out.push_back({Tok::Le, "<=", Rational(0), line, col}); continue; }
      if (two('>', '=')) { advance(); advance(); out.push_back({Tok::Ge, ">=", Rational(0), line, col}); continue; }
      Tok kind;
      switch (c) {
        case '=': kind = Tok::Assign; break;
        case '<': kind = Tok::Lt; break;
        case '>': kind = Tok::Gt; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case ',': kind = Tok::Comma; break;
        case ':': kind = Tok::Colon; break;
        case ';': kind = Tok::Semi; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        default:
          throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance();
      out.push_back({kind, std::string(1, c), Rational(0), line, col});
    }
    out.push_back({Tok::End, "", Rational(0), line_, col_});
    return out;
  }

 private:
  static Tok keyword(const std::string& ident) {
    if (ident == "while") return Tok::KwWhile;
    if (ident == "if") return Tok::KwIf;
    if (ident == "else") return Tok::KwElse;
    if (ident == "end") return Tok::KwEnd;
    if (ident == "true") return Tok::KwTrue;
    if (ident == "false") return Tok::KwFalse;
    if (ident == "not") return Tok::KwNot;
    if (ident == "and") return Tok::KwAnd;
    if (ident == "or") return Tok::KwOr;
    return Tok::Ident;
  }

  void skip_spaces_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program parse() {
    Program p;
    skip_separators();
    // Init statements until 'while'.
    while (!at(Tok::KwWhile)) {
      if (at(Tok::End)) throw err("expected 'while' loop");
      p.init.push_back(parse_statement());
      expect_separator_or(Tok::KwWhile);
    }
    expect(Tok::KwWhile, "expected 'while'");
    p.guard = parse_bool();
    expect(Tok::Colon, "expected ':' after loop condition");
    p.body = parse_block();
    skip_separators();
    if (!at(Tok::End)) throw err("unexpected trailing input after loop");
    return p;
  }

 private:
  const Token& cur() const { return toks_[idx_]; }
  bool at(Tok k) const { return cur().kind == k; }
  const Token& next() { return toks_[idx_++]; }

  SyntaxError err(const std::string& msg) const {
    return SyntaxError(msg + " (got '" + cur().text + "')", cur().line, cur().col);
  }

  void expect(Tok k, const std::string& msg) {
    if (!at(k)) throw err(msg);
    ++idx_;
  }

  void skip_separators() {
    while (at(Tok::Newline) || at(Tok::Semi)) ++idx_;
  }

  void expect_separator_or(Tok stop) {
    if (at(stop)) return;
    if (!at(Tok::Newline) && !at(Tok::Semi) && !at(Tok::KwEnd) && !at(Tok::End)) {
      throw err("expected newline or ';' between statements");
    }
    skip_separators();
  }

  // Statements until 'end' (consumed); 'else' is left for the caller.
  std::vector<Statement> parse_block() {
    std::vector<Statement> out;
    skip_separators();
    while (!at(Tok::KwEnd) && !at(Tok::KwElse)) {
      if (at(Tok::End)) throw err("missing 'end'");
      out.push_back(parse_statement());
      if (!at(Tok::KwEnd) && !at(Tok::KwElse)) {
        if (!at(Tok::Newline) && !at(Tok::Semi)) throw err("expected newline or ';'");
        skip_separators();
      }
    }
    if (at(Tok::KwEnd)) ++idx_;
    return out;
  }

  Statement parse_statement() {
    if (at(Tok::KwIf)) return parse_if();
    return parse_assign();
  }

  Statement parse_if() {
    IfStmt stmt;
    stmt.loc = {cur().line, cur().col};
    expect(Tok::KwIf, "expected 'if'");
    while (true) {
      IfBranch br;
      br.cond = parse_bool();
      expect(Tok::Colon, "expected ':' after condition");
      skip_separators();
      std::vector<Statement> body;
      while (!at(Tok::KwEnd) && !at(Tok::KwElse)) {
        if (at(Tok::End)) throw err("missing 'end' in if statement");
        body.push_back(parse_statement());
        if (!at(Tok::KwEnd) && !at(Tok::KwElse)) {
          if (!at(Tok::Newline) && !at(Tok::Semi)) throw err("expected newline or ';'");
          skip_separators();
        }
      }
      br.body = std::move(body);
      stmt.branches.push_back(std::move(br));
      if (at(Tok::KwEnd)) {
        ++idx_;
        break;
      }
      // at 'else'
      ++idx_;
      if (at(Tok::KwIf)) {
        ++idx_;
        continue;  // else if: next branch
      }
      expect(Tok::Colon, "expected ':' after 'else'");
      skip_separators();
      std::vector<Statement> ebody;
      while (!at(Tok::KwEnd)) {
        if (at(Tok::End) || at(Tok::KwElse)) throw err("missing 'end' in else branch");
        ebody.push_back(parse_statement());
        if (!at(Tok::KwEnd)) {
          if (!at(Tok::Newline) && !at(Tok::Semi)) throw err("expected newline or ';'");
          skip_separators();
        }
      }
      ++idx_;  // consume 'end'
      stmt.else_body = std::move(ebody);
      break;
    }
    Statement s;
    s.node = std::move(stmt);
    return s;
  }

  Statement parse_assign() {
    AssignStmt a;
    a.loc = {cur().line, cur().col};
    if (!at(Tok::Ident)) throw err("expected an assignment");
    a.targets.push_back(next().text);
    while (at(Tok::Comma)) {
      ++idx_;
      if (!at(Tok::Ident)) throw err("expected variable name after ','");
      a.targets.push_back(next().text);
    }
    expect(Tok::Assign, "expected '='");
    a.values.push_back(parse_rhs());
    while (at(Tok::Comma)) {
      ++idx_;
      a.values.push_back(parse_rhs());
    }
    if (a.targets.size() != a.values.size()) {
      throw SyntaxError("simultaneous assignment has " + std::to_string(a.targets.size()) +
                            " targets but " + std::to_string(a.values.size()) + " values",
                        a.loc.line, a.loc.col);
    }
    Statement s;
    s.node = std::move(a);
    return s;
  }

  Rhs parse_rhs() {
    // Distribution call: Ident '(' at the start of a right-hand side.
    if (at(Tok::Ident) && toks_[idx_ + 1].kind == Tok::LParen) {
      return parse_dist_call();
    }
    Categorical cat;
    cat.options.push_back(CatOption{parse_poly(), nullptr});
    while (at(Tok::LBrace)) {
      ++idx_;
      ExprPtr prob = parse_poly();
      expect(Tok::RBrace, "expected '}' after probability");
      cat.options.back().prob = prob;
      if (at(Tok::Newline) || at(Tok::Semi) || at(Tok::Comma) || at(Tok::KwEnd) ||
          at(Tok::End) || at(Tok::KwElse)) {
        break;  // trailing probability with no further option
      }
      cat.options.push_back(CatOption{parse_poly(), nullptr});
    }
    Rhs r;
    r.node = std::move(cat);
    return r;
  }

  Rhs parse_dist_call() {
    Token name = next();
    expect(Tok::LParen, "expected '('");
    DistCall call;
    auto kind = dist_kind_from_name(name.text);
    if (!kind) {
      throw Error(ErrorCode::UnsupportedDistribution,
                  "unknown distribution '" + name.text + "' at line " +
                      std::to_string(name.line));
    }
    call.kind = *kind;
    if (!at(Tok::RParen)) {
      call.params.push_back(parse_poly());
      while (at(Tok::Comma)) {
        ++idx_;
        call.params.push_back(parse_poly());
      }
    }
    expect(Tok::RParen, "expected ')'");
    Rhs r;
    r.node = std::move(call);
    return r;
  }

  // Polynomial / constant expression (context validated later).
  ExprPtr parse_poly() { return parse_additive(); }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      bool plus = at(Tok::Plus);
      ++idx_;
      ExprPtr rhs = parse_multiplicative();
      e = expr_binary(plus ? Expr::Kind::Add : Expr::Kind::Sub, e, rhs);
    }
    return e;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      bool mul = at(Tok::Star);
      ++idx_;
      ExprPtr rhs = parse_unary();
      e = expr_binary(mul ? Expr::Kind::Mul : Expr::Kind::Div, e, rhs);
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus)) {
      ++idx_;
      return expr_neg(parse_unary());
    }
    if (at(Tok::Plus)) {
      ++idx_;
      return parse_unary();
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (at(Tok::Power)) {
      const Token& op = cur();
      ++idx_;
      if (!at(Tok::Number) || !rational_is_integer(cur().number) || cur().number < 0) {
        throw SyntaxError("exponent must be a non-negative integer literal", op.line, op.col);
      }
      unsigned long e = cur().number.get_num().get_ui();
      ++idx_;
      return expr_pow(base, static_cast<unsigned>(e));
    }
    return base;
  }

  ExprPtr parse_atom() {
    if (at(Tok::Number)) {
      Token t = next();
      return expr_number(t.number, {t.line, t.col});
    }
    if (at(Tok::Ident)) {
      Token t = next();
      if (at(Tok::LParen)) {
        throw SyntaxError("function calls are only allowed as a whole right-hand side",
                          t.line, t.col);
      }
      return expr_ident(t.text, {t.line, t.col});
    }
    if (at(Tok::LParen)) {
      ++idx_;
      ExprPtr e = parse_additive();
      expect(Tok::RParen, "expected ')'");
      return e;
    }
    throw err("expected an expression");
  }

  // Boolean expressions: or < and < not < comparison.
  BoolPtr parse_bool() { return parse_or(); }

  BoolPtr parse_or() {
    BoolPtr a = parse_and();
    while (at(Tok::KwOr)) {
      ++idx_;
      a = bool_or(a, parse_and());
    }
    return a;
  }

  BoolPtr parse_and() {
    BoolPtr a = parse_not();
    while (at(Tok::KwAnd)) {
      ++idx_;
      a = bool_and(a, parse_not());
    }
    return a;
  }

  BoolPtr parse_not() {
    if (at(Tok::KwNot)) {
      ++idx_;
      return bool_not(parse_not());
    }
    return parse_bool_atom();
  }

  BoolPtr parse_bool_atom() {
    if (at(Tok::KwTrue)) {
      ++idx_;
      return bool_true();
    }
    if (at(Tok::KwFalse)) {
      ++idx_;
      return bool_false();
    }
    if (at(Tok::LParen)) {
      // Could be a parenthesized boolean or the left side of a comparison.
      std::size_t save = idx_;
      ++idx_;
      try {
        BoolPtr inner = parse_or();
        if (at(Tok::RParen) && !is_cmp(toks_[idx_ + 1].kind)) {
          ++idx_;
          return inner;
        }
      } catch (const SyntaxError&) {
        // fall through to comparison parse
      }
      idx_ = save;
    }
    ExprPtr lhs = parse_poly();
    CmpOp op;
    switch (cur().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default:
        throw err("expected a comparison operator");
    }
    ++idx_;
    ExprPtr rhs = parse_poly();
    return bool_cmp(op, lhs, rhs);
  }

  static bool is_cmp(Tok k) {
    return k == Tok::Eq || k == Tok::Ne || k == Tok::Lt || k == Tok::Gt || k == Tok::Le ||
           k == Tok::Ge;
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

class Validator {
 public:
  explicit Validator(Program& p) : p_(p) {}

  void run() {
    p_.reclassify();
    if (p_.body.empty()) {
      fail(ErrorCode::ValidationError, "loop body must not be empty");
    }
    for (auto& s : p_.init) visit_statement(s);
    for (auto& s : p_.body) visit_statement(s);
    number_draws(p_.init);
    number_draws(p_.body);
  }

 private:
  void visit_statement(Statement& s) {
    if (s.is_assign()) {
      for (auto& rhs : s.assign().values) visit_rhs(rhs);
    } else {
      for (auto& br : s.if_stmt().branches) {
        for (auto& inner : br.body) visit_statement(inner);
      }
      for (auto& inner : s.if_stmt().else_body) visit_statement(inner);
    }
  }

  void visit_rhs(Rhs& rhs) {
    if (rhs.is_categorical()) {
      visit_categorical(rhs.categorical());
    } else {
      visit_dist(rhs.dist());
    }
  }

  bool is_const_expr(const ExprPtr& e) const {
    std::set<std::string> ids;
    expr_collect_idents(e, ids);
    for (const auto& id : ids) {
      if (p_.variables.count(id)) return false;
    }
    return true;
  }

  // Evaluates a constant expression to a rational when it has no symbols.
  std::optional<Rational> numeric_value(const ExprPtr& e) const {
    if (!e) return std::nullopt;
    switch (e->kind) {
      case Expr::Kind::Number: return e->number;
      case Expr::Kind::Ident: return std::nullopt;
      case Expr::Kind::Neg: {
        auto v = numeric_value(e->lhs);
        if (!v) return std::nullopt;
        return -*v;
      }
      case Expr::Kind::Pow: {
        auto v = numeric_value(e->lhs);
        if (!v) return std::nullopt;
        return rational_pow(*v, e->exponent);
      }
      default: {
        auto a = numeric_value(e->lhs);
        auto b = numeric_value(e->rhs);
        if (!a || !b) return std::nullopt;
        switch (e->kind) {
          case Expr::Kind::Add: return *a + *b;
          case Expr::Kind::Sub: return *a - *b;
          case Expr::Kind::Mul: return *a * *b;
          case Expr::Kind::Div:
            if (*b == 0) fail(ErrorCode::ValidationError, "division by zero in constant");
            return *a / *b;
          default: return std::nullopt;
        }
      }
    }
  }

  void visit_categorical(Categorical& cat) {
    bool all_numeric = true;
    Rational sum(0);
    std::size_t given = 0;
    for (std::size_t i = 0; i < cat.options.size(); ++i) {
      const auto& opt = cat.options[i];
      if (!opt.prob) {
        if (i + 1 != cat.options.size()) {
          fail(ErrorCode::ProbabilityError, "only the last probability may be omitted");
        }
        continue;
      }
      ++given;
      if (!is_const_expr(opt.prob)) {
        fail(ErrorCode::ProbabilityError, "probabilities must be constant expressions");
      }
      auto v = numeric_value(opt.prob);
      if (!v) {
        all_numeric = false;
        continue;
      }
      if (*v < 0 || *v > 1) {
        fail(ErrorCode::ProbabilityError,
             "probability " + rational_to_string(*v) + " outside [0,1]");
      }
      sum += *v;
    }
    if (all_numeric && given > 0) {
      bool last_omitted = cat.options.back().prob == nullptr;
      if (last_omitted) {
        if (sum > 1) {
          fail(ErrorCode::ProbabilityError,
               "given probabilities sum to " + rational_to_string(sum) + " > 1");
        }
      } else if (given == cat.options.size() && sum != 1) {
        fail(ErrorCode::ProbabilityError,
             "probabilities sum to " + rational_to_string(sum) + ", expected 1");
      }
    }
    for (const auto& opt : cat.options) visit_poly(opt.value);
  }

  void visit_poly(const ExprPtr& e) {
    if (!e) return;
    if (e->kind == Expr::Kind::Div) {
      // Division is constant-only; allow poly/const as multiplication by an
      // inverse constant.
      if (!is_const_expr(e->rhs)) {
        fail(ErrorCode::ValidationError,
             "division by an expression containing program variables");
      }
      visit_poly(e->lhs);
      return;
    }
    visit_poly(e->lhs);
    visit_poly(e->rhs);
  }

  void visit_dist(DistCall& d) {
    std::size_t arity;
    switch (d.kind) {
      case DistKind::Bernoulli: arity = 1; break;
      case DistKind::Normal: arity = 2; break;
      case DistKind::Uniform: arity = 2; break;
      case DistKind::Laplace: arity = 2; break;
      case DistKind::Exponential: arity = 1; break;
    }
    if (d.params.size() != arity) {
      fail(ErrorCode::ValidationError,
           std::string(dist_kind_name(d.kind)) + " expects " + std::to_string(arity) +
               " parameter(s), got " + std::to_string(d.params.size()));
    }
    for (const auto& p : d.params) visit_poly(p);
    if (d.kind == DistKind::Exponential && !d.rate_over_poly) {
      // Split Exponential(c/p) into the rate-over-polynomial special form.
      const ExprPtr& arg = d.params[0];
      if (arg->kind == Expr::Kind::Div && is_const_expr(arg->lhs) && !is_const_expr(arg->rhs)) {
        ExprPtr num = arg->lhs;
        ExprPtr den = arg->rhs;
        d.params = {num, den};
        d.rate_over_poly = true;
      } else if (!is_const_expr(arg)) {
        fail(ErrorCode::ValidationError,
             "Exponential parameter must be constant or of the form const/poly");
      }
    }
  }

  void number_draws(std::vector<Statement>& stmts) {
    for (auto& s : stmts) {
      if (s.is_assign()) {
        for (auto& rhs : s.assign().values) {
          if (rhs.is_categorical()) {
            rhs.categorical().draw_id = next_draw_++;
          } else {
            rhs.dist().draw_id = next_draw_++;
          }
        }
      } else {
        for (auto& br : s.if_stmt().branches) number_draws(br.body);
        number_draws(s.if_stmt().else_body);
      }
    }
  }

  Program& p_;
  unsigned next_draw_ = 1;
};

}  // namespace

Program parse_program(const std::string& source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  Program p = parser.parse();
  Validator(p).run();
  return p;
}

std::pair<std::string, unsigned> parse_goal(const std::string& text) {
  auto bad = [&]() {
    fail(ErrorCode::UsageError, "goal must have the form E(var^k) or E(var): '" + text + "'");
  };
  std::size_t i = 0;
  auto skip_ws = [&]() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i >= text.size() || text[i] != 'E') bad();
  ++i;
  skip_ws();
  if (i >= text.size() || text[i] != '(') bad();
  ++i;
  skip_ws();
  std::string name;
  while (i < text.size() &&
         (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
    name.push_back(text[i]);
    ++i;
  }
  if (name.empty()) bad();
  skip_ws();
  unsigned k = 1;
  if (i < text.size() && text[i] == '^') {
    ++i;
    skip_ws();
    std::string digits;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits.push_back(text[i]);
      ++i;
    }
    if (digits.empty()) bad();
    k = static_cast<unsigned>(std::stoul(digits));
  }
  skip_ws();
  if (i >= text.size() || text[i] != ')') bad();
  ++i;
  skip_ws();
  if (i != text.size()) bad();
  if (k == 0) fail(ErrorCode::UsageError, "moment order k must be >= 1");
  return {name, k};
}

}  // namespace momentforge
