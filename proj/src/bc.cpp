#include "sitl/bc.hpp"

#include <algorithm>
#include <stdexcept>

namespace sitl {

BcPtr Bc::mk_true() {
  static BcPtr t = std::make_shared<Bc>(Bc{Kind::True, "", true, {}});
  return t;
}

BcPtr Bc::mk_false() {
  static BcPtr f = std::make_shared<Bc>(Bc{Kind::False, "", true, {}});
  return f;
}

BcPtr Bc::lit(std::string name, bool positive) {
  return std::make_shared<Bc>(Bc{Kind::Lit, std::move(name), positive, {}});
}

BcPtr Bc::negate(BcPtr a) {
  switch (a->kind) {
    case Kind::True: return mk_false();
    case Kind::False: return mk_true();
    case Kind::Lit: return lit(a->atom, !a->positive);
    case Kind::Not: return a->kids[0];
    default: break;
  }
  return std::make_shared<Bc>(Bc{Kind::Not, "", true, {std::move(a)}});
}

static BcPtr nary(Bc::Kind k, std::vector<BcPtr> xs) {
  // flatten same-kind children, fold constants, dedupe literals
  std::vector<BcPtr> flat;
  const bool is_and = (k == Bc::Kind::And);
  for (auto& x : xs) {
    if (!x) continue;
    if (x->kind == k) {
      for (auto& c : x->kids) flat.push_back(c);
    } else if (x->kind == (is_and ? Bc::Kind::True : Bc::Kind::False)) {
      continue; // neutral element
    } else if (x->kind == (is_and ? Bc::Kind::False : Bc::Kind::True)) {
      return is_and ? Bc::mk_false() : Bc::mk_true(); // absorbing
    } else {
      flat.push_back(x);
    }
  }
  // dedupe by structural key; detect complementary literal pairs
  std::map<std::string, BcPtr> seen;
  for (auto& x : flat) seen.emplace(bc_str(*x), x);
  for (auto& [key, x] : seen) {
    if (x->kind == Bc::Kind::Lit) {
      Bc  comp{Bc::Kind::Lit, x->atom, !x->positive, {}};
      if (seen.count(bc_str(comp)))
        return is_and ? Bc::mk_false() : Bc::mk_true();
    }
  }
  if (seen.empty()) return is_and ? Bc::mk_true() : Bc::mk_false();
  if (seen.size() == 1) return seen.begin()->second;
  std::vector<BcPtr> kids;
  for (auto& [key, x] : seen) kids.push_back(x);
  return std::make_shared<Bc>(Bc{k, "", true, std::move(kids)});
}

BcPtr Bc::conj(std::vector<BcPtr> xs) { return nary(Kind::And, std::move(xs)); }
BcPtr Bc::disj(std::vector<BcPtr> xs) { return nary(Kind::Or, std::move(xs)); }
BcPtr Bc::conj2(BcPtr a, BcPtr b) { return conj({std::move(a), std::move(b)}); }
BcPtr Bc::disj2(BcPtr a, BcPtr b) { return disj({std::move(a), std::move(b)}); }

bool bc_eval(const Bc& f, const std::map<std::string, bool>& val) {
  switch (f.kind) {
    case Bc::Kind::True: return true;
    case Bc::Kind::False: return false;
    case Bc::Kind::Lit: {
      auto it = val.find(f.atom);
      if (it == val.end()) throw std::invalid_argument("unvalued atom: " + f.atom);
      return f.positive ? it->second : !it->second;
    }
    case Bc::Kind::Not: return !bc_eval(*f.kids[0], val);
    case Bc::Kind::And:
      for (auto& k : f.kids)
        if (!bc_eval(*k, val)) return false;
      return true;
    case Bc::Kind::Or:
      for (auto& k : f.kids)
        if (bc_eval(*k, val)) return true;
      return false;
  }
  return false;
}

void bc_atoms(const Bc& f, std::set<std::string>& out) {
  if (f.kind == Bc::Kind::Lit) out.insert(f.atom);
  for (auto& k : f.kids) bc_atoms(*k, out);
}

std::set<std::string> bc_atoms(const Bc& f) {
  std::set<std::string> s;
  bc_atoms(f, s);
  return s;
}

std::string bc_str(const Bc& f) {
  switch (f.kind) {
    case Bc::Kind::True: return "T";
    case Bc::Kind::False: return "F";
    case Bc::Kind::Lit: return f.positive ? f.atom : "!" + f.atom;
    case Bc::Kind::Not: return "!(" + bc_str(*f.kids[0]) + ")";
    case Bc::Kind::And:
    case Bc::Kind::Or: {
      std::string s = "(";
      for (size_t i = 0; i < f.kids.size(); ++i) {
        if (i) s += f.kind == Bc::Kind::And ? " & " : " | ";
        s += bc_str(*f.kids[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

BcPtr bc_rename(const Bc& f, const std::map<std::string, std::string>& table) {
  switch (f.kind) {
    case Bc::Kind::True: return Bc::mk_true();
    case Bc::Kind::False: return Bc::mk_false();
    case Bc::Kind::Lit: {
      auto it = table.find(f.atom);
      if (it == table.end()) throw std::invalid_argument("unmapped atom: " + f.atom);
      return Bc::lit(it->second, f.positive);
    }
    case Bc::Kind::Not: return Bc::negate(bc_rename(*f.kids[0], table));
    case Bc::Kind::And:
    case Bc::Kind::Or: {
      std::vector<BcPtr> kids;
      for (auto& k : f.kids) kids.push_back(bc_rename(*k, table));
      return f.kind == Bc::Kind::And ? Bc::conj(std::move(kids))
                                     : Bc::disj(std::move(kids));
    }
  }
  return Bc::mk_true();
}

namespace {

// DNF via recursive distribution with early contradiction pruning.
std::vector<Conjunct> dnf_rec(const Bc& f, bool neg) {
  switch (f.kind) {
    case Bc::Kind::True:
      if (neg) return {};
      return {Conjunct{}};
    case Bc::Kind::False:
      if (neg) return {Conjunct{}};
      return {};
    case Bc::Kind::Lit: {
      Conjunct c;
      (f.positive != neg ? c.pos : c.neg).insert(f.atom);
      return {c};
    }
    case Bc::Kind::Not:
      return dnf_rec(*f.kids[0], !neg);
    case Bc::Kind::And:
    case Bc::Kind::Or: {
      bool distribute = (f.kind == Bc::Kind::And) != neg;
      if (!distribute) { // disjunction: concatenate branches
        std::vector<Conjunct> out;
        for (auto& k : f.kids) {
          auto sub = dnf_rec(*k, neg);
          out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
      }
      std::vector<Conjunct> acc = {Conjunct{}};
      for (auto& k : f.kids) {
        auto sub = dnf_rec(*k, neg);
        std::vector<Conjunct> next;
        for (auto& a : acc)
          for (auto& b : sub) {
            Conjunct c = a;
            c.pos.insert(b.pos.begin(), b.pos.end());
            c.neg.insert(b.neg.begin(), b.neg.end());
            bool clash = false;
            for (auto& p : c.pos)
              if (c.neg.count(p)) { clash = true; break; }
            if (!clash) next.push_back(std::move(c));
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
  }
  return {};
}

} // namespace

std::vector<Conjunct> bc_dnf(const Bc& f) {
  auto out = dnf_rec(f, false);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Conjunct& a, const Conjunct& b) {
                          return a.pos == b.pos && a.neg == b.neg;
                        }),
            out.end());
  return out;
}

static bool taut_check(const Bc& f, const Bc& g, bool equiv) {
  std::set<std::string> atoms = bc_atoms(f);
  bc_atoms(g, atoms);
  if (atoms.size() > 20)
    throw std::runtime_error("truth table too large: " + std::to_string(atoms.size()) + " atoms");
  std::vector<std::string> names(atoms.begin(), atoms.end());
  const size_t n = names.size();
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    std::map<std::string, bool> val;
    for (size_t i = 0; i < n; ++i) val[names[i]] = (mask >> i) & 1;
    bool a = bc_eval(f, val), b = bc_eval(g, val);
    if (equiv ? (a != b) : (a && !b)) return false;
  }
  return true;
}

bool bc_taut_implies(const Bc& f, const Bc& g) { return taut_check(f, g, false); }
bool bc_equiv(const Bc& f, const Bc& g) { return taut_check(f, g, true); }

bool bc_sat(const Bc& f) { return !bc_dnf(f).empty(); }

BcPtr bc_from_conjunct(const Conjunct& c) {
  std::vector<BcPtr> lits;
  for (auto& p : c.pos) lits.push_back(Bc::lit(p, true));
  for (auto& n : c.neg) lits.push_back(Bc::lit(n, false));
  return Bc::conj(std::move(lits));
}

} // namespace sitl
