#ifndef GERMLAB_DSL_HPP
#define GERMLAB_DSL_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "germlab/construct.hpp"
#include "germlab/germ.hpp"

namespace germlab::dsl {

struct SourcePos {
  int line = 0;
  int col = 0;
};

// Certified-class generator syntax: an integer polynomial in j, or a single
// c*b^j term.  Enforced at parse time so pl{} bodies stay decidable.
struct CodeSyntax {
  std::vector<Int> poly;       // coeff[i] * j^i; used when exp is absent
  std::optional<ExpGen> exp;   // c * b^j
  bool is_poly() const { return !exp.has_value(); }
};
bool operator==(const CodeSyntax& a, const CodeSyntax& b);

// One summand of a rat{} profile: [-] [(-1)^j *] num / den.
struct RatTermSyntax {
  bool negated = false;
  bool alternating = false;
  Int num = 1;
  CodeSyntax den;  // empty poly means the constant 1
};
bool operator==(const RatTermSyntax& a, const RatTermSyntax& b);

struct RatSyntax {
  std::vector<RatTermSyntax> terms;
};
bool operator==(const RatSyntax& a, const RatSyntax& b);

// Anchor input for pinch: explicit index list or a polynomial in k (k = 1,
// 2, ... instantiated up to the horizon at compile time).
struct AnchorSyntax {
  std::vector<long> list;
  std::optional<CodeSyntax> gen;
};
bool operator==(const AnchorSyntax& a, const AnchorSyntax& b);

enum class ExprKind {
  pl, rat, table, ref,
  compose, mul, add, div,
  scale, inv, switch_map, diag, minor, pinch,
};

struct GermExpr;
using ExprPtr = std::shared_ptr<GermExpr>;

struct GermExpr {
  ExprKind kind;
  SourcePos pos;

  CodeSyntax code;               // pl, table tail
  RatSyntax rat;                 // rat
  long table_start = 1;          // table
  std::vector<Int> table_head;   // table
  std::string name;              // ref
  ExprPtr lhs, rhs;              // binary ops
  Rat factor = Rat(1);           // scale
  std::vector<ExprPtr> family;   // diag
  PinchDirection pinch_dir = PinchDirection::lower;  // pinch
  AnchorSyntax anchors;          // pinch
};

bool structurally_equal(const GermExpr& a, const GermExpr& b);

// Ordered named definitions, as written.
using Defs = std::vector<std::pair<std::string, ExprPtr>>;

Defs parse_germ_file(const std::string& text);
ExprPtr parse_expr_text(const std::string& text);

std::string format_expr(const GermExpr& e);
std::string format_defs(const Defs& defs);

// ---------------------------------------------------------------------------
// Compilation to germ values.

using Compiled = std::variant<PLGerm, RatGerm>;

struct CompileContext {
  long horizon = 10000;
};

class Env {
 public:
  Env(Defs defs, CompileContext ctx);

  bool has(const std::string& name) const;
  const Compiled& lookup(const std::string& name);
  Compiled compile(const GermExpr& e);
  std::vector<std::string> names() const;

 private:
  std::map<std::string, ExprPtr> defs_;
  std::vector<std::string> order_;
  std::map<std::string, Compiled> memo_;
  std::set<std::string> in_progress_;
  CompileContext ctx_;
};

GridFn as_grid_fn(const Compiled& c);
RatGerm as_rat_germ(const Compiled& c);

// ---------------------------------------------------------------------------
// Net files.  Sections: poset: edges, node assignments, target, tests;
// germ definitions may appear inline with the same `name: expr` grammar.

struct NetFile {
  Defs defs;
  std::vector<std::string> nodes;  // in order of first mention
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> assignment;  // node -> germ name
  std::string target;                             // germ name or "0"
  std::vector<std::string> tests;
};

NetFile parse_net_file(const std::string& text);

}  // namespace germlab::dsl

#endif
