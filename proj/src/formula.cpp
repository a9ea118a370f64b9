#include "sitl/formula.hpp"

#include <cctype>
#include <stdexcept>

namespace sitl {

void Interval::validate() const {
  if (lo < 0) throw std::invalid_argument("interval lower bound must be >= 0");
  if (!hi_inf) {
    if (lo > hi) throw std::invalid_argument("interval with lo > hi");
    if (lo == hi) throw std::invalid_argument("singleton interval");
  }
  if (hi_inf && hi_closed)
    throw std::invalid_argument("closed infinite endpoint");
}

std::string Interval::str() const {
  std::string s = lo_closed ? "[" : "(";
  s += rat_str(lo) + ",";
  s += hi_inf ? "inf" : rat_str(hi);
  s += hi_closed ? "]" : ")";
  return s;
}

FormulaPtr Formula::mk_true() {
  static FormulaPtr t = std::make_shared<Formula>();
  return t;
}
FormulaPtr Formula::atom(std::string name) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Atom;
  f->name = std::move(name);
  return f;
}
FormulaPtr Formula::mk_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Not;
  f->kids = {std::move(a)};
  return f;
}
FormulaPtr Formula::mk_and(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->op = Op::And;
  f->kids = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr Formula::mk_or(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->op = Op::Or;
  f->kids = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr Formula::until(Interval iv, FormulaPtr a, FormulaPtr b) {
  iv.validate();
  auto f = std::make_shared<Formula>();
  f->op = Op::Until;
  f->iv = iv;
  f->kids = {std::move(a), std::move(b)};
  return f;
}
FormulaPtr Formula::eventually(Interval iv, FormulaPtr a) {
  iv.validate();
  auto f = std::make_shared<Formula>();
  f->op = Op::Eventually;
  f->iv = iv;
  f->kids = {std::move(a)};
  return f;
}
FormulaPtr Formula::always(Interval iv, FormulaPtr a) {
  iv.validate();
  auto f = std::make_shared<Formula>();
  f->op = Op::Always;
  f->iv = iv;
  f->kids = {std::move(a)};
  return f;
}

std::string formula_str(const Formula& f) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::True: return "T";
    case Op::Atom: return f.name;
    case Op::Not: return "!(" + formula_str(*f.kids[0]) + ")";
    case Op::And: return "(" + formula_str(*f.kids[0]) + " & " + formula_str(*f.kids[1]) + ")";
    case Op::Or: return "(" + formula_str(*f.kids[0]) + " | " + formula_str(*f.kids[1]) + ")";
    case Op::Until:
      return "(" + formula_str(*f.kids[0]) + " U" + f.iv.str() + " " + formula_str(*f.kids[1]) + ")";
    case Op::Eventually: return "F" + f.iv.str() + "(" + formula_str(*f.kids[0]) + ")";
    case Op::Always: return "G" + f.iv.str() + "(" + formula_str(*f.kids[0]) + ")";
  }
  return "?";
}

bool formula_equal(const Formula& a, const Formula& b) {
  return formula_str(a) == formula_str(b);
}

static void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op == Formula::Op::Atom) out.insert(f.name);
  for (auto& k : f.kids) collect_atoms(*k, out);
}

std::set<std::string> formula_atoms(const Formula& f) {
  std::set<std::string> s;
  collect_atoms(f, s);
  return s;
}

// ---------------------------------------------------------------------------
// Parser: precedence climbing over  |  <  &  <  U  <  !  (tightest last).
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;
  const std::set<std::string>* declared;

  explicit Parser(const std::string& t, const std::set<std::string>* d)
      : text(t), declared(d) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) { ++pos; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    if (pos >= text.size() || !(std::islower(static_cast<unsigned char>(text[pos]))))
      fail("expected identifier");
    while (pos < text.size() &&
           (std::islower(static_cast<unsigned char>(text[pos])) ||
            std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  Rat number() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == '/'))
      ++pos;
    if (start == pos) fail("expected number");
    try {
      return parse_rat(text.substr(start, pos - start));
    } catch (const std::exception& e) {
      fail(std::string("bad number: ") + e.what());
    }
  }

  Interval interval() {
    skip_ws();
    Interval iv;
    if (eat('(')) iv.lo_closed = false;
    else if (eat('[')) iv.lo_closed = true;
    else fail("expected interval after temporal operator");
    iv.lo = number();
    if (!eat(',')) fail("expected ',' in interval");
    skip_ws();
    if (text.compare(pos, 3, "inf") == 0) {
      pos += 3;
      iv.hi_inf = true;
    } else {
      iv.hi = number();
    }
    if (eat(')')) iv.hi_closed = false;
    else if (eat(']')) iv.hi_closed = true;
    else fail("expected ')' or ']' closing interval");
    try {
      iv.validate();
    } catch (const std::exception& e) {
      fail(e.what());
    }
    return iv;
  }

  FormulaPtr primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      auto f = parse_or();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (c == '!') { ++pos; return Formula::mk_not(primary()); }
    if (c == 'T') { ++pos; return Formula::mk_true(); }
    if (text.compare(pos, 3, "_|_") == 0) {
      pos += 3;
      return Formula::mk_not(Formula::mk_true());
    }
    if (c == 'F') { ++pos; auto iv = interval(); return Formula::eventually(iv, primary()); }
    if (c == 'G') { ++pos; auto iv = interval(); return Formula::always(iv, primary()); }
    if (std::islower(static_cast<unsigned char>(c))) {
      size_t at = pos;
      std::string name = ident();
      if (declared && !declared->count(name)) {
        pos = at;
        fail("unknown identifier: " + name);
      }
      return Formula::atom(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  FormulaPtr parse_until() { // right-associative, binds tighter than &
    auto lhs = primary();
    skip_ws();
    if (pos < text.size() && text[pos] == 'U') {
      ++pos;
      auto iv = interval();
      auto rhs = parse_until();
      return Formula::until(iv, lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    auto lhs = parse_until();
    while (peek() == '&') {
      ++pos;
      lhs = Formula::mk_and(lhs, parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    auto lhs = parse_and();
    while (peek() == '|') {
      ++pos;
      lhs = Formula::mk_or(lhs, parse_and());
    }
    return lhs;
  }
};

} // namespace

FormulaPtr parse_formula(const std::string& text, FormulaMode mode,
                         const std::set<std::string>* declared) {
  (void)mode; // tree shape is shared; atom alphabet is the caller's contract
  Parser p(text, declared);
  auto f = p.parse_or();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Pr / Pr^-1
// ---------------------------------------------------------------------------

void PropPredMap::add(const std::string& prop, const std::string& pred) {
  if (prop2pred_.count(prop) || pred2prop_.count(pred))
    throw std::invalid_argument("PropPredMap entries must be injective");
  prop2pred_[prop] = pred;
  pred2prop_[pred] = prop;
}

PropPredMap PropPredMap::from_predicates(const std::vector<std::string>& preds) {
  PropPredMap m;
  int i = 1;
  for (auto& mu : preds) m.add("p" + std::to_string(i++), mu);
  return m;
}

const std::string& PropPredMap::prop_of(const std::string& pred) const {
  auto it = pred2prop_.find(pred);
  if (it == pred2prop_.end()) throw std::invalid_argument("unmapped predicate: " + pred);
  return it->second;
}

const std::string& PropPredMap::pred_of(const std::string& prop) const {
  auto it = prop2pred_.find(prop);
  if (it == prop2pred_.end()) throw std::invalid_argument("unmapped proposition: " + prop);
  return it->second;
}

static FormulaPtr subst(const FormulaPtr& f,
                        const std::map<std::string, std::string>& table) {
  using Op = Formula::Op;
  switch (f->op) {
    case Op::True: return f;
    case Op::Atom: {
      auto it = table.find(f->name);
      if (it == table.end())
        throw std::invalid_argument("unmapped atom: " + f->name);
      return Formula::atom(it->second);
    }
    case Op::Not: return Formula::mk_not(subst(f->kids[0], table));
    case Op::And: return Formula::mk_and(subst(f->kids[0], table), subst(f->kids[1], table));
    case Op::Or: return Formula::mk_or(subst(f->kids[0], table), subst(f->kids[1], table));
    case Op::Until: return Formula::until(f->iv, subst(f->kids[0], table), subst(f->kids[1], table));
    case Op::Eventually: return Formula::eventually(f->iv, subst(f->kids[0], table));
    case Op::Always: return Formula::always(f->iv, subst(f->kids[0], table));
  }
  return f;
}

FormulaPtr pr(const FormulaPtr& phi, const PropPredMap& map) {
  return subst(phi, map.pred_to_prop());
}

FormulaPtr pr_inv(const FormulaPtr& phi, const PropPredMap& map) {
  return subst(phi, map.prop_to_pred());
}

// ---------------------------------------------------------------------------
// Rewriting to the core operator set.
//
// Supported temporal intervals: left endpoint 0 (open or closed), right
// endpoint finite or inf.  Identities (oracle-validated in test_formula):
//   G_I a           == !F_I !a
//   a | b           == !(!a & !b)
//   F_(0,inf) a     == T U_(0,inf) a
//   F_[0,hi> a      == a | F_(0,hi> a
//   a U_[lo..> b    == b | (a U_(lo..> b)        (left-closed peel)
//   a U_(0,inf) b   == core until
//   a U_(0,b> c     == (a U_(0,inf) c) & F_(0,b> c
// Note the left-closed *until* peel differs from the one-sided rewrite the
// spec sketched; the peeled form is the one the oracle confirms.
// ---------------------------------------------------------------------------

namespace {

CorePtr core_true() {
  static CorePtr t = std::make_shared<Core>();
  return t;
}
CorePtr core_prop(std::string name) {
  auto c = std::make_shared<Core>();
  c->op = Core::Op::Prop;
  c->name = std::move(name);
  return c;
}
CorePtr core_not(CorePtr a) {
  auto c = std::make_shared<Core>();
  c->op = Core::Op::Not;
  c->kids = {std::move(a)};
  return c;
}
CorePtr core_and(CorePtr a, CorePtr b) {
  auto c = std::make_shared<Core>();
  c->op = Core::Op::And;
  c->kids = {std::move(a), std::move(b)};
  return c;
}
CorePtr core_or(CorePtr a, CorePtr b) {
  return core_not(core_and(core_not(std::move(a)), core_not(std::move(b))));
}
CorePtr core_until(CorePtr a, CorePtr b) {
  auto c = std::make_shared<Core>();
  c->op = Core::Op::Until;
  c->kids = {std::move(a), std::move(b)};
  return c;
}
CorePtr core_ev(const Rat& b, bool right_closed, CorePtr a) {
  if (b <= 0) throw std::invalid_argument("bounded eventually needs b > 0");
  auto c = std::make_shared<Core>();
  c->op = Core::Op::EvBounded;
  c->bound = b;
  c->right_closed = right_closed;
  c->kids = {std::move(a)};
  return c;
}

void check_supported(const Interval& iv) {
  if (iv.lo != 0)
    throw UnsupportedInterval("unsupported interval " + iv.str() +
                              ": lower bound must be 0");
}

CorePtr rewrite(const FormulaPtr& f);

CorePtr rewrite_eventually(const Interval& iv, const FormulaPtr& arg) {
  check_supported(iv);
  CorePtr a = rewrite(arg);
  CorePtr open_part;
  if (iv.hi_inf) open_part = core_until(core_true(), a);
  else open_part = core_ev(iv.hi, iv.hi_closed, a);
  if (iv.lo_closed) return core_or(a, open_part); // F_[0,..> a == a | F_(0,..> a
  return open_part;
}

CorePtr rewrite(const FormulaPtr& f) {
  using Op = Formula::Op;
  switch (f->op) {
    case Op::True: return core_true();
    case Op::Atom: return core_prop(f->name);
    case Op::Not: return core_not(rewrite(f->kids[0]));
    case Op::And: return core_and(rewrite(f->kids[0]), rewrite(f->kids[1]));
    case Op::Or: return core_or(rewrite(f->kids[0]), rewrite(f->kids[1]));
    case Op::Always: {
      check_supported(f->iv);
      return core_not(rewrite_eventually(f->iv, Formula::mk_not(f->kids[0])));
    }
    case Op::Eventually: return rewrite_eventually(f->iv, f->kids[0]);
    case Op::Until: {
      check_supported(f->iv);
      CorePtr a = rewrite(f->kids[0]);
      CorePtr b = rewrite(f->kids[1]);
      CorePtr open_until = core_until(a, b);
      if (!f->iv.hi_inf) // a U_(0,b> c == (a U c) & F_(0,b> c
        open_until = core_and(open_until, core_ev(f->iv.hi, f->iv.hi_closed, b));
      if (f->iv.lo_closed) return core_or(b, open_until); // peel t''=t
      return open_until;
    }
  }
  return core_true();
}

} // namespace

CorePtr rewrite_to_core(const FormulaPtr& phi) { return rewrite(phi); }

std::string core_str(const Core& c) {
  using Op = Core::Op;
  switch (c.op) {
    case Op::True: return "T";
    case Op::Prop: return c.name;
    case Op::Not: return "!(" + core_str(*c.kids[0]) + ")";
    case Op::And: return "(" + core_str(*c.kids[0]) + " & " + core_str(*c.kids[1]) + ")";
    case Op::Until: return "(" + core_str(*c.kids[0]) + " U " + core_str(*c.kids[1]) + ")";
    case Op::EvBounded:
      return "F(0," + rat_str(c.bound) + (c.right_closed ? "]" : ")") + "(" +
             core_str(*c.kids[0]) + ")";
  }
  return "?";
}

FormulaPtr core_to_formula(const CorePtr& c) {
  using Op = Core::Op;
  switch (c->op) {
    case Op::True: return Formula::mk_true();
    case Op::Prop: return Formula::atom(c->name);
    case Op::Not: return Formula::mk_not(core_to_formula(c->kids[0]));
    case Op::And:
      return Formula::mk_and(core_to_formula(c->kids[0]), core_to_formula(c->kids[1]));
    case Op::Until: {
      Interval iv;
      iv.lo = 0;
      iv.hi_inf = true;
      return Formula::until(iv, core_to_formula(c->kids[0]), core_to_formula(c->kids[1]));
    }
    case Op::EvBounded: {
      Interval iv;
      iv.lo = 0;
      iv.hi = c->bound;
      iv.hi_closed = c->right_closed;
      return Formula::eventually(iv, core_to_formula(c->kids[0]));
    }
  }
  return Formula::mk_true();
}

static void check_core(const Core& c) {
  if (c.op == Core::Op::EvBounded && c.bound <= 0)
    throw std::invalid_argument("core eventually with non-positive bound");
  for (auto& k : c.kids) check_core(*k);
}

CorePtr formula_tree(const CorePtr& core) {
  check_core(*core);
  return core;
}

size_t core_node_count(const Core& c) {
  size_t n = 1;
  for (auto& k : c.kids) n += core_node_count(*k);
  return n;
}

} // namespace sitl
