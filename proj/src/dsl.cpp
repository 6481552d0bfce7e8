#include "germlab/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace germlab::dsl {

bool operator==(const CodeSyntax& a, const CodeSyntax& b) {
  if (a.exp.has_value() != b.exp.has_value()) return false;
  if (a.exp) return *a.exp == *b.exp;
  auto ta = a.poly, tb = b.poly;
  while (!ta.empty() && ta.back() == 0) ta.pop_back();
  while (!tb.empty() && tb.back() == 0) tb.pop_back();
  return ta == tb;
}

bool operator==(const RatTermSyntax& a, const RatTermSyntax& b) {
  return a.negated == b.negated && a.alternating == b.alternating &&
         a.num == b.num && a.den == b.den;
}

bool operator==(const RatSyntax& a, const RatSyntax& b) { return a.terms == b.terms; }

bool operator==(const AnchorSyntax& a, const AnchorSyntax& b) {
  if (a.gen.has_value() != b.gen.has_value()) return false;
  if (a.gen && !(*a.gen == *b.gen)) return false;
  return a.list == b.list;
}

bool structurally_equal(const GermExpr& a, const GermExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::pl: return a.code == b.code;
    case ExprKind::rat: return a.rat == b.rat;
    case ExprKind::table:
      return a.table_start == b.table_start && a.table_head == b.table_head &&
             a.code == b.code;
    case ExprKind::ref: return a.name == b.name;
    case ExprKind::compose:
    case ExprKind::mul:
    case ExprKind::add:
    case ExprKind::div:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    case ExprKind::scale:
      return a.factor == b.factor && structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::inv:
    case ExprKind::switch_map:
    case ExprKind::minor:
      return structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::diag: {
      if (a.family.size() != b.family.size()) return false;
      for (std::size_t i = 0; i < a.family.size(); ++i)
        if (!structurally_equal(*a.family[i], *b.family[i])) return false;
      return true;
    }
    case ExprKind::pinch:
      return a.pinch_dir == b.pinch_dir && a.anchors == b.anchors &&
             structurally_equal(*a.lhs, *b.lhs);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Scanner

namespace {

struct Scanner {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Scanner(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& expected) const {
    throw parse_error(line, col, expected);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  // Skips spaces, tabs and comments; newlines are significant.
  void skip_blanks() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  void skip_all_whitespace() {
    while (!eof()) {
      skip_blanks();
      if (!eof() && peek() == '\n') advance();
      else break;
    }
  }

  bool eat(char c) {
    skip_blanks();
    if (!eof() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("'") + c + "'");
  }

  bool peek_char(char c) {
    skip_blanks();
    return !eof() && peek() == c;
  }

  std::optional<std::string> try_ident() {
    skip_blanks();
    if (eof() || !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      return std::nullopt;
    std::string s;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      s.push_back(advance());
    return s;
  }

  std::string ident() {
    auto s = try_ident();
    if (!s) fail("identifier");
    return *s;
  }

  bool eat_word(const std::string& w) {
    skip_blanks();
    std::size_t save_pos = pos;
    int save_line = line, save_col = col;
    auto s = try_ident();
    if (s && *s == w) return true;
    pos = save_pos;
    line = save_line;
    col = save_col;
    return false;
  }

  std::optional<Int> try_int() {
    skip_blanks();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) return std::nullopt;
    std::string s;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
      s.push_back(advance());
    return Int(s);
  }

  Int integer() {
    auto v = try_int();
    if (!v) fail("integer");
    return *v;
  }

  SourcePos here() {
    skip_blanks();
    return SourcePos{line, col};
  }
};

// ---------------------------------------------------------------------------
// Generator expressions.
//
//   code := term (('+'|'-') term)*
//   term := INT | INT '*' atom | atom
//   atom := 'j' ['^' INT] | INT '^' 'j'
//
// Either every term is polynomial or the whole expression is one c*b^j term.

struct CodeTerm {
  bool is_exp = false;
  Int coeff = 1;
  long power = 1;  // poly: exponent of j
  Int base = 0;    // exp: b
};

CodeTerm parse_code_term(Scanner& sc, const char* var) {
  CodeTerm t;
  bool have_coeff = false;
  if (auto n = sc.try_int()) {
    t.coeff = *n;
    have_coeff = true;
    if (sc.peek_char('^')) {
      sc.expect('^');
      if (!sc.eat_word(var)) sc.fail(std::string("'") + var + "' exponent");
      t.is_exp = true;
      t.base = t.coeff;
      t.coeff = 1;
      if (t.base < 2) sc.fail("exponential base >= 2");
      return t;
    }
    if (!sc.eat('*')) {
      t.power = 0;  // plain constant
      return t;
    }
  }
  if (auto n = sc.try_int()) {
    // coeff * base ^ var
    sc.expect('^');
    if (!sc.eat_word(var)) sc.fail(std::string("'") + var + "' exponent");
    t.is_exp = true;
    t.base = *n;
    if (t.base < 2) sc.fail("exponential base >= 2");
    return t;
  }
  if (!sc.eat_word(var)) sc.fail(have_coeff ? "'j', base or integer" : "generator term");
  if (sc.eat('^')) {
    Int p = sc.integer();
    if (!p.fits_slong_p() || p.get_si() > 64) sc.fail("power <= 64");
    t.power = p.get_si();
  }
  return t;
}

CodeSyntax parse_code(Scanner& sc, const char* var = "j") {
  CodeSyntax out;
  std::vector<std::pair<CodeTerm, bool>> terms;  // term, negated
  bool neg = sc.eat('-');
  terms.emplace_back(parse_code_term(sc, var), neg);
  while (true) {
    if (sc.eat('+')) terms.emplace_back(parse_code_term(sc, var), false);
    else if (sc.eat('-')) terms.emplace_back(parse_code_term(sc, var), true);
    else break;
  }
  bool any_exp = false;
  for (auto& [t, n] : terms) any_exp = any_exp || t.is_exp;
  if (any_exp) {
    if (terms.size() != 1 || terms[0].second)
      sc.fail("a single positive c*b^j term (certified class)");
    out.exp = ExpGen{terms[0].first.coeff, terms[0].first.base};
    return out;
  }
  for (auto& [t, n] : terms) {
    std::size_t p = static_cast<std::size_t>(t.power);
    if (out.poly.size() <= p) out.poly.resize(p + 1, Int(0));
    out.poly[p] += n ? -t.coeff : t.coeff;
  }
  while (!out.poly.empty() && out.poly.back() == 0) out.poly.pop_back();
  return out;
}

// ---------------------------------------------------------------------------
// Rational profile expressions.
//
//   ratexpr := ratterm (('+'|'-') ratterm)*
//   ratterm := ['(-1)^j' '*'] INT ['/' den]
//   den     := atom | '(' code ')'

RatTermSyntax parse_rat_term(Scanner& sc) {
  RatTermSyntax t;
  // (-1)^j prefix
  {
    std::size_t save_pos = sc.pos;
    int save_line = sc.line, save_col = sc.col;
    if (sc.eat('(')) {
      if (sc.eat('-')) {
        auto one = sc.try_int();
        if (one && *one == 1 && sc.eat(')') && sc.eat('^') && sc.eat_word("j")) {
          t.alternating = true;
          sc.expect('*');
        } else {
          sc.pos = save_pos;
          sc.line = save_line;
          sc.col = save_col;
        }
      } else {
        sc.pos = save_pos;
        sc.line = save_line;
        sc.col = save_col;
      }
    }
  }
  t.num = sc.integer();
  if (sc.eat('/')) {
    if (sc.eat('(')) {
      t.den = parse_code(sc);
      sc.expect(')');
    } else {
      CodeTerm a = parse_code_term(sc, "j");
      if (a.is_exp) {
        t.den.exp = ExpGen{a.coeff, a.base};
      } else {
        std::size_t p = static_cast<std::size_t>(a.power);
        t.den.poly.assign(p + 1, Int(0));
        t.den.poly[p] = a.coeff;
      }
    }
  }
  return t;
}

RatSyntax parse_ratexpr(Scanner& sc) {
  RatSyntax out;
  bool neg = sc.eat('-');
  RatTermSyntax first = parse_rat_term(sc);
  first.negated = neg;
  out.terms.push_back(std::move(first));
  while (true) {
    if (sc.eat('+')) {
      out.terms.push_back(parse_rat_term(sc));
    } else if (sc.eat('-')) {
      RatTermSyntax t = parse_rat_term(sc);
      t.negated = true;
      out.terms.push_back(std::move(t));
    } else {
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Germ expressions.

ExprPtr parse_expr(Scanner& sc);

ExprPtr make(ExprKind k, SourcePos pos) {
  auto e = std::make_shared<GermExpr>();
  e->kind = k;
  e->pos = pos;
  return e;
}

ExprPtr parse_primary(Scanner& sc) {
  SourcePos pos = sc.here();
  if (sc.eat('(')) {
    ExprPtr e = parse_expr(sc);
    sc.expect(')');
    return e;
  }
  auto word = sc.try_ident();
  if (!word) sc.fail("germ expression");

  if (*word == "pl") {
    sc.expect('{');
    if (!sc.eat_word("k")) sc.fail("'k(j) ='");
    sc.expect('(');
    if (!sc.eat_word("j")) sc.fail("'j'");
    sc.expect(')');
    sc.expect('=');
    auto e = make(ExprKind::pl, pos);
    e->code = parse_code(sc);
    sc.expect('}');
    return e;
  }
  if (*word == "rat") {
    sc.expect('{');
    if (!sc.eat_word("v")) sc.fail("'v(j) ='");
    sc.expect('(');
    if (!sc.eat_word("j")) sc.fail("'j'");
    sc.expect(')');
    sc.expect('=');
    auto e = make(ExprKind::rat, pos);
    e->rat = parse_ratexpr(sc);
    sc.expect('}');
    return e;
  }
  if (*word == "table") {
    sc.expect('{');
    if (!sc.eat_word("start")) sc.fail("'start ='");
    sc.expect('=');
    Int st = sc.integer();
    if (!st.fits_slong_p()) sc.fail("start index in range");
    sc.expect(';');
    sc.expect('[');
    auto e = make(ExprKind::table, pos);
    e->table_start = st.get_si();
    if (!sc.peek_char(']')) {
      e->table_head.push_back(sc.integer());
      while (sc.eat(',')) e->table_head.push_back(sc.integer());
    }
    sc.expect(']');
    sc.expect(';');
    if (!sc.eat_word("tail")) sc.fail("'tail k(j) ='");
    if (!sc.eat_word("k")) sc.fail("'k(j) ='");
    sc.expect('(');
    if (!sc.eat_word("j")) sc.fail("'j'");
    sc.expect(')');
    sc.expect('=');
    e->code = parse_code(sc);
    sc.expect('}');
    return e;
  }
  if (*word == "inv" || *word == "switch" || *word == "minor") {
    sc.expect('(');
    auto e = make(*word == "inv"      ? ExprKind::inv
                  : *word == "switch" ? ExprKind::switch_map
                                      : ExprKind::minor,
                  pos);
    e->lhs = parse_expr(sc);
    sc.expect(')');
    return e;
  }
  if (*word == "diag") {
    sc.expect('(');
    auto e = make(ExprKind::diag, pos);
    e->family.push_back(parse_expr(sc));
    while (sc.eat(',')) e->family.push_back(parse_expr(sc));
    sc.expect(')');
    return e;
  }
  if (*word == "scale") {
    sc.expect('(');
    Int num = sc.integer();
    Int den = 1;
    if (sc.eat('/')) den = sc.integer();
    sc.expect(',');
    auto e = make(ExprKind::scale, pos);
    e->factor = Rat(num, den);
    if (!e->factor.is_positive()) sc.fail("positive scale factor");
    e->lhs = parse_expr(sc);
    sc.expect(')');
    return e;
  }
  if (*word == "pinch") {
    sc.expect('(');
    auto e = make(ExprKind::pinch, pos);
    if (sc.eat_word("lower")) e->pinch_dir = PinchDirection::lower;
    else if (sc.eat_word("upper")) e->pinch_dir = PinchDirection::upper;
    else sc.fail("'lower' or 'upper'");
    sc.expect(',');
    e->lhs = parse_expr(sc);
    sc.expect(',');
    if (!sc.eat_word("anchors")) sc.fail("'anchors ='");
    sc.expect('=');
    if (sc.eat('[')) {
      do {
        Int v = sc.integer();
        if (!v.fits_slong_p()) sc.fail("anchor index in range");
        e->anchors.list.push_back(v.get_si());
      } while (sc.eat(','));
      sc.expect(']');
    } else {
      e->anchors.gen = parse_code(sc, "k");
      if (!e->anchors.gen->is_poly()) sc.fail("polynomial anchor generator in k");
    }
    sc.expect(')');
    return e;
  }

  // Plain reference.
  auto e = make(ExprKind::ref, pos);
  e->name = *word;
  return e;
}

ExprPtr parse_composition(Scanner& sc) {
  ExprPtr e = parse_primary(sc);
  while (sc.eat('.')) {
    auto n = make(ExprKind::compose, e->pos);
    n->lhs = e;
    n->rhs = parse_primary(sc);
    e = n;
  }
  return e;
}

ExprPtr parse_product(Scanner& sc) {
  ExprPtr e = parse_composition(sc);
  while (true) {
    if (sc.eat('*')) {
      auto n = make(ExprKind::mul, e->pos);
      n->lhs = e;
      n->rhs = parse_composition(sc);
      e = n;
    } else if (sc.eat('/')) {
      auto n = make(ExprKind::div, e->pos);
      n->lhs = e;
      n->rhs = parse_composition(sc);
      e = n;
    } else {
      break;
    }
  }
  return e;
}

ExprPtr parse_expr(Scanner& sc) {
  ExprPtr e = parse_product(sc);
  while (sc.eat('+')) {
    auto n = make(ExprKind::add, e->pos);
    n->lhs = e;
    n->rhs = parse_product(sc);
    e = n;
  }
  return e;
}

}  // namespace

Defs parse_germ_file(const std::string& text) {
  Scanner sc(text);
  Defs defs;
  while (true) {
    sc.skip_all_whitespace();
    if (sc.eof()) break;
    std::string name = sc.ident();
    sc.expect(':');
    ExprPtr e = parse_expr(sc);
    for (const auto& [n, _] : defs)
      if (n == name) sc.fail("a fresh name ('" + name + "' is already defined)");
    defs.emplace_back(name, e);
    sc.skip_blanks();
    if (!sc.eof() && sc.peek() != '\n') sc.fail("end of line");
  }
  return defs;
}

ExprPtr parse_expr_text(const std::string& text) {
  Scanner sc(text);
  ExprPtr e = parse_expr(sc);
  sc.skip_all_whitespace();
  if (!sc.eof()) sc.fail("end of input");
  return e;
}

// ---------------------------------------------------------------------------
// Printer.  Binary operators print fully parenthesized, so the round trip
// is structural identity.

namespace {

std::string format_code(const CodeSyntax& c, const char* var = "j") {
  if (c.exp) {
    std::string s;
    if (c.exp->c != 1) s += c.exp->c.get_str() + "*";
    s += c.exp->b.get_str() + "^" + var;
    return s;
  }
  std::string s;
  bool first = true;
  for (long p = static_cast<long>(c.poly.size()) - 1; p >= 0; --p) {
    const Int& co = c.poly[static_cast<std::size_t>(p)];
    if (co == 0) continue;
    Int mag = ::abs(co);
    if (first) {
      if (co < 0) s += "-";
      first = false;
    } else {
      s += co < 0 ? " - " : " + ";
    }
    if (p == 0) {
      s += mag.get_str();
    } else {
      if (mag != 1) s += mag.get_str() + "*";
      s += var;
      if (p > 1) s += "^" + std::to_string(p);
    }
  }
  if (first) s = "0";
  return s;
}

std::string format_rat(const RatSyntax& r) {
  std::string s;
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    const auto& t = r.terms[i];
    if (i == 0) {
      if (t.negated) s += "-";
    } else {
      s += t.negated ? " - " : " + ";
    }
    if (t.alternating) s += "(-1)^j * ";
    s += t.num.get_str();
    bool unit_den = t.den.is_poly() && t.den.poly.empty();
    if (!unit_den) s += "/(" + format_code(t.den) + ")";
  }
  return s;
}

}  // namespace

std::string format_expr(const GermExpr& e) {
  switch (e.kind) {
    case ExprKind::pl:
      return "pl { k(j) = " + format_code(e.code) + " }";
    case ExprKind::rat:
      return "rat { v(j) = " + format_rat(e.rat) + " }";
    case ExprKind::table: {
      std::string s = "table { start = " + std::to_string(e.table_start) + "; [";
      for (std::size_t i = 0; i < e.table_head.size(); ++i) {
        if (i) s += ", ";
        s += e.table_head[i].get_str();
      }
      s += "]; tail k(j) = " + format_code(e.code) + " }";
      return s;
    }
    case ExprKind::ref: return e.name;
    case ExprKind::compose:
      return "(" + format_expr(*e.lhs) + " . " + format_expr(*e.rhs) + ")";
    case ExprKind::mul:
      return "(" + format_expr(*e.lhs) + " * " + format_expr(*e.rhs) + ")";
    case ExprKind::add:
      return "(" + format_expr(*e.lhs) + " + " + format_expr(*e.rhs) + ")";
    case ExprKind::div:
      return "(" + format_expr(*e.lhs) + " / " + format_expr(*e.rhs) + ")";
    case ExprKind::scale: {
      std::string f = e.factor.num().get_str();
      if (e.factor.den() != 1) f += "/" + e.factor.den().get_str();
      return "scale(" + f + ", " + format_expr(*e.lhs) + ")";
    }
    case ExprKind::inv: return "inv(" + format_expr(*e.lhs) + ")";
    case ExprKind::switch_map: return "switch(" + format_expr(*e.lhs) + ")";
    case ExprKind::minor: return "minor(" + format_expr(*e.lhs) + ")";
    case ExprKind::diag: {
      std::string s = "diag(";
      for (std::size_t i = 0; i < e.family.size(); ++i) {
        if (i) s += ", ";
        s += format_expr(*e.family[i]);
      }
      return s + ")";
    }
    case ExprKind::pinch: {
      std::string s = "pinch(";
      s += e.pinch_dir == PinchDirection::lower ? "lower" : "upper";
      s += ", " + format_expr(*e.lhs) + ", anchors = ";
      if (e.anchors.gen) {
        s += format_code(*e.anchors.gen, "k");
      } else {
        s += "[";
        for (std::size_t i = 0; i < e.anchors.list.size(); ++i) {
          if (i) s += ", ";
          s += std::to_string(e.anchors.list[i]);
        }
        s += "]";
      }
      return s + ")";
    }
  }
  return "?";
}

std::string format_defs(const Defs& defs) {
  std::string s;
  for (const auto& [name, e] : defs) s += name + ": " + format_expr(*e) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Compilation.

namespace {

Rat eval_rat_syntax(const RatSyntax& r, long j) {
  Rat acc(0);
  for (const auto& t : r.terms) {
    Rat den(1);
    if (t.den.exp) {
      den = Rat(t.den.exp->eval(j));
    } else if (!t.den.poly.empty()) {
      PolyGen p{t.den.poly};
      Int d = p.eval(Int(j));
      if (d == 0) throw division_by_zero();
      den = Rat(d);
    }
    Rat v = Rat(t.num) / den;
    if (t.alternating && (j % 2 != 0)) v = -v;
    if (t.negated) v = -v;
    acc += v;
  }
  return acc;
}

}  // namespace

Env::Env(Defs defs, CompileContext ctx) : ctx_(ctx) {
  for (auto& [name, e] : defs) {
    order_.push_back(name);
    defs_[name] = e;
  }
}

bool Env::has(const std::string& name) const { return defs_.count(name) > 0; }

std::vector<std::string> Env::names() const { return order_; }

const Compiled& Env::lookup(const std::string& name) {
  auto it = memo_.find(name);
  if (it != memo_.end()) return it->second;
  auto d = defs_.find(name);
  if (d == defs_.end()) throw error("undefined germ '" + name + "'");
  if (!in_progress_.insert(name).second)
    throw error("germ '" + name + "' is defined in terms of itself");
  Compiled c = compile(*d->second);
  in_progress_.erase(name);
  return memo_.emplace(name, std::move(c)).first->second;
}

Compiled Env::compile(const GermExpr& e) {
  switch (e.kind) {
    case ExprKind::pl: {
      CodeGen g;
      if (e.code.exp) g = *e.code.exp;
      else g = PolyGen{e.code.poly};
      return PLGerm(1, std::move(g));
    }
    case ExprKind::rat: {
      RatSyntax r = e.rat;
      return RatGerm(1, [r](long j) { return eval_rat_syntax(r, j); });
    }
    case ExprKind::table: {
      CodeGen g;
      if (e.code.exp) g = *e.code.exp;
      else g = PolyGen{e.code.poly};
      return PLGerm(e.table_start, std::move(g), e.table_head);
    }
    case ExprKind::ref: return lookup(e.name);
    case ExprKind::compose: {
      Compiled a = compile(*e.lhs), b = compile(*e.rhs);
      const auto* pa = std::get_if<PLGerm>(&a);
      const auto* pb = std::get_if<PLGerm>(&b);
      if (!pa || !pb) throw error("composition requires pl germs");
      return compose(*pa, *pb);
    }
    case ExprKind::mul: {
      Compiled a = compile(*e.lhs), b = compile(*e.rhs);
      const auto* pa = std::get_if<PLGerm>(&a);
      const auto* pb = std::get_if<PLGerm>(&b);
      if (pa && pb) return mul(*pa, *pb);
      return mul(as_rat_germ(a), as_rat_germ(b));
    }
    case ExprKind::add:
      return add(as_rat_germ(compile(*e.lhs)), as_rat_germ(compile(*e.rhs)));
    case ExprKind::div:
      return div(as_rat_germ(compile(*e.lhs)), as_rat_germ(compile(*e.rhs)));
    case ExprKind::scale:
      return scale(e.factor, as_rat_germ(compile(*e.lhs)));
    case ExprKind::inv: {
      Compiled a = compile(*e.lhs);
      const auto* pa = std::get_if<PLGerm>(&a);
      if (!pa) throw error("inv requires a pl germ");
      return invert(*pa, InvertMode::interpolate);
    }
    case ExprKind::switch_map: {
      Compiled a = compile(*e.lhs);
      const auto* pa = std::get_if<PLGerm>(&a);
      if (!pa) throw error("switch requires a pl germ");
      return invert(*pa, InvertMode::anchors_only);
    }
    case ExprKind::minor:
      return minorize_to_pl(as_rat_germ(compile(*e.lhs)), ctx_.horizon).germ;
    case ExprKind::diag: {
      std::vector<PLGerm> members;
      for (const auto& f : e.family) {
        Compiled c = compile(*f);
        const auto* p = std::get_if<PLGerm>(&c);
        if (!p) throw error("diag members must be pl germs");
        members.push_back(*p);
      }
      return diagonal_below(PLFamily(std::move(members)));
    }
    case ExprKind::pinch: {
      AnchorSeq seq;
      if (e.anchors.gen) {
        PolyGen p{e.anchors.gen->poly};
        long prev = 0;
        for (long k = 1;; ++k) {
          Int v = p.eval(Int(k));
          if (v < 1) throw error("anchor generator produced a nonpositive index");
          if (v <= prev) throw error("anchor generator must be strictly increasing");
          if (!v.fits_slong_p() || v.get_si() > ctx_.horizon) break;
          prev = v.get_si();
          seq.indices.push_back(prev);
        }
      } else {
        seq.indices = e.anchors.list;
      }
      return pinch(e.pinch_dir, as_rat_germ(compile(*e.lhs)), seq);
    }
  }
  throw error("unhandled expression");
}

GridFn as_grid_fn(const Compiled& c) {
  if (const auto* p = std::get_if<PLGerm>(&c)) return view(*p);
  return view(std::get<RatGerm>(c));
}

RatGerm as_rat_germ(const Compiled& c) {
  if (const auto* p = std::get_if<PLGerm>(&c)) return to_rat_germ(*p);
  return std::get<RatGerm>(c);
}

// ---------------------------------------------------------------------------
// Net files.

NetFile parse_net_file(const std::string& text) {
  NetFile net;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string germ_lines;

  auto trim = [](std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, b - a + 1);
  };
  auto note_node = [&net](const std::string& n) {
    for (const auto& existing : net.nodes)
      if (existing == n) return;
    net.nodes.push_back(n);
  };
  auto split_list = [&trim](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, ',')) {
      cur = trim(cur);
      if (!cur.empty()) out.push_back(cur);
    }
    return out;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.rfind("poset:", 0) == 0) {
      for (const auto& edge : split_list(line.substr(6))) {
        std::size_t lt = edge.find('<');
        if (lt == std::string::npos)
          throw parse_error(lineno, 1, "edge of the form 'a < b'");
        std::string a = trim(edge.substr(0, lt));
        std::string b = trim(edge.substr(lt + 1));
        if (a.empty() || b.empty())
          throw parse_error(lineno, 1, "edge of the form 'a < b'");
        note_node(a);
        note_node(b);
        net.edges.emplace_back(a, b);
      }
      continue;
    }
    if (line.rfind("node ", 0) == 0) {
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw parse_error(lineno, 1, "'node <name> = <germ>'");
      std::string n = trim(line.substr(5, eq - 5));
      std::string g = trim(line.substr(eq + 1));
      if (n.empty() || g.empty()) throw parse_error(lineno, 1, "'node <name> = <germ>'");
      note_node(n);
      net.assignment[n] = g;
      continue;
    }
    if (line.rfind("target", 0) == 0 && line.find('=') != std::string::npos &&
        line.find(':') == std::string::npos) {
      net.target = trim(line.substr(line.find('=') + 1));
      continue;
    }
    if (line.rfind("tests", 0) == 0 && line.find('=') != std::string::npos &&
        line.find(':') > line.find('=')) {
      net.tests = split_list(line.substr(line.find('=') + 1));
      continue;
    }
    // Anything else is a germ definition line.
    germ_lines += line;
    germ_lines += "\n";
  }
  net.defs = parse_germ_file(germ_lines);
  return net;
}

}  // namespace germlab::dsl
