#include "sitl/predicates.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "sitl/simplex.hpp"

namespace sitl {

Rat PredicateDef::margin(const RatVec& x) const {
  if (kind == Kind::Halfspace) return dot(a, x) + b;
  RatVec d = vec_sub(mat_apply(L, x), c);
  return eps * eps - norm_sq(d);
}

void PredicateSet::add(PredicateDef def) {
  if (def.name.empty()) throw std::invalid_argument("predicate needs a name");
  if (def.kind == PredicateDef::Kind::Halfspace) {
    if (def.a.size() != dimension)
      throw std::invalid_argument("halfspace dimension mismatch: " + def.name);
  } else {
    if (def.L.cols != dimension || def.L.rows != def.c.size())
      throw std::invalid_argument("ball dimension mismatch: " + def.name);
    if (def.eps <= 0) throw std::invalid_argument("ball eps must be > 0: " + def.name);
  }
  defs_[def.name] = std::move(def);
}

const PredicateDef& PredicateSet::get(const std::string& name) const {
  auto it = defs_.find(name);
  if (it == defs_.end()) throw std::invalid_argument("unknown predicate: " + name);
  return it->second;
}

std::vector<std::string> PredicateSet::names() const {
  std::vector<std::string> out;
  for (auto& [k, v] : defs_) out.push_back(k);
  return out;
}

bool PredicateSet::eval_bc(const Bc& f, const RatVec& x) const {
  switch (f.kind) {
    case Bc::Kind::True: return true;
    case Bc::Kind::False: return false;
    case Bc::Kind::Lit: {
      bool v = eval_pred(f.atom, x);
      return f.positive ? v : !v;
    }
    case Bc::Kind::Not: return !eval_bc(*f.kids[0], x);
    case Bc::Kind::And:
      for (auto& k : f.kids)
        if (!eval_bc(*k, x)) return false;
      return true;
    case Bc::Kind::Or:
      for (auto& k : f.kids)
        if (eval_bc(*k, x)) return true;
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// JSON config
// ---------------------------------------------------------------------------

namespace {

Rat json_rat(const nlohmann::json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) {
    // decimals arrive as text through dump-parsing; parse from printed form
    char buf[64];
    snprintf(buf, sizeof buf, "%.12f", j.get<double>());
    return parse_rat(buf);
  }
  throw std::invalid_argument("expected rational in config");
}

RatVec json_vec(const nlohmann::json& j) {
  RatVec v;
  for (auto& e : j) v.push_back(json_rat(e));
  return v;
}

} // namespace

PredicateSet PredicateSet::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  PredicateSet s;
  s.dimension = j.at("dimension").get<size_t>();
  if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
  for (auto& [name, pj] : j.at("predicates").items()) {
    PredicateDef d;
    d.name = name;
    std::string kind = pj.at("kind").get<std::string>();
    if (kind == "halfspace") {
      d.kind = PredicateDef::Kind::Halfspace;
      d.a = json_vec(pj.at("a"));
      d.b = json_rat(pj.at("b"));
    } else if (kind == "ball") {
      d.kind = PredicateDef::Kind::Ball;
      auto rows = pj.at("L");
      d.L = RatMat(rows.size(), s.dimension);
      size_t r = 0;
      for (auto& row : rows) {
        auto v = json_vec(row);
        if (v.size() != s.dimension)
          throw std::invalid_argument("ball map row width mismatch: " + name);
        for (size_t c = 0; c < v.size(); ++c) d.L.at(r, c) = v[c];
        ++r;
      }
      d.c = json_vec(pj.at("c"));
      d.eps = json_rat(pj.at("eps"));
    } else {
      throw std::invalid_argument("unknown predicate kind: " + kind);
    }
    s.add(std::move(d));
  }
  if (j.contains("box")) {
    Box b;
    b.lo = json_vec(j.at("box").at("lo"));
    b.hi = json_vec(j.at("box").at("hi"));
    if (b.lo.size() != s.dimension || b.hi.size() != s.dimension)
      throw std::invalid_argument("box dimension mismatch");
    s.box = b;
  }
  if (j.contains("x0")) {
    s.x0 = json_vec(j.at("x0"));
    if (s.x0.size() != s.dimension) throw std::invalid_argument("x0 dimension mismatch");
  }
  return s;
}

std::string PredicateSet::to_json() const {
  nlohmann::ordered_json j;
  j["dimension"] = dimension;
  j["seed"] = seed;
  nlohmann::ordered_json preds;
  for (auto& [name, d] : defs_) {
    nlohmann::ordered_json pj;
    if (d.kind == PredicateDef::Kind::Halfspace) {
      pj["kind"] = "halfspace";
      nlohmann::ordered_json av;
      for (auto& x : d.a) av.push_back(rat_str(x));
      pj["a"] = av;
      pj["b"] = rat_str(d.b);
    } else {
      pj["kind"] = "ball";
      nlohmann::ordered_json rows;
      for (size_t r = 0; r < d.L.rows; ++r) {
        nlohmann::ordered_json row;
        for (size_t c = 0; c < d.L.cols; ++c) row.push_back(rat_str(d.L.at(r, c)));
        rows.push_back(row);
      }
      pj["L"] = rows;
      nlohmann::ordered_json cv;
      for (auto& x : d.c) cv.push_back(rat_str(x));
      pj["c"] = cv;
      pj["eps"] = rat_str(d.eps);
    }
    preds[name] = pj;
  }
  j["predicates"] = preds;
  if (box) {
    nlohmann::ordered_json bj, lo, hi;
    for (auto& x : box->lo) lo.push_back(rat_str(x));
    for (auto& x : box->hi) hi.push_back(rat_str(x));
    bj["lo"] = lo;
    bj["hi"] = hi;
    j["box"] = bj;
  }
  if (!x0.empty()) {
    nlohmann::ordered_json xv;
    for (auto& x : x0) xv.push_back(rat_str(x));
    j["x0"] = xv;
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Conjunct decision
// ---------------------------------------------------------------------------

namespace {

struct SplitConjunct {
  std::vector<const PredicateDef*> hs_pos, hs_neg, ball_pos, ball_neg;
};

// Exact feasibility for affine literals only.  Positive halfspaces are
// closed, negated ones strict; strictness via a maximized slack delta:
// feasible iff optimum delta > 0 (or no negated literals and LP feasible).
std::optional<RatVec> affine_feasible(const SplitConjunct& sc, size_t dim,
                                      const std::optional<Box>& box) {
  // variables: x = xp - xn (free split), delta
  LinearProgram lp;
  lp.n = 2 * dim + 1;
  const size_t d_idx = 2 * dim;
  auto row_from = [&](const RatVec& a, bool negated) {
    std::vector<Rat> row(lp.n, Rat(0));
    for (size_t i = 0; i < dim; ++i) {
      row[i] = negated ? a[i] : -a[i];
      row[dim + i] = negated ? -a[i] : a[i];
    }
    return row;
  };
  for (auto* h : sc.hs_pos) { // a.x + b >= 0  ->  -a.x <= b
    lp.add_le(row_from(h->a, false), h->b);
  }
  for (auto* h : sc.hs_neg) { // a.x + b < 0  ->  a.x + delta <= -b
    auto row = row_from(h->a, true);
    row[d_idx] = 1;
    lp.add_le(std::move(row), -h->b);
  }
  if (box) { // keep witnesses inside the box when one is configured
    for (size_t i = 0; i < dim; ++i) {
      std::vector<Rat> row(lp.n, Rat(0));
      row[i] = 1; row[dim + i] = -1;
      lp.add_le(row, box->hi[i]);
      std::vector<Rat> row2(lp.n, Rat(0));
      row2[i] = -1; row2[dim + i] = 1;
      lp.add_le(row2, -box->lo[i]);
    }
  }
  std::vector<Rat> cap(lp.n, Rat(0));
  cap[d_idx] = 1;
  lp.add_le(cap, Rat(1)); // bound delta so the LP cannot be unbounded
  lp.objective.assign(lp.n, Rat(0));
  lp.objective[d_idx] = 1;
  auto res = solve_lp(lp);
  if (res.status != LpResult::Status::Optimal) return std::nullopt;
  if (!sc.hs_neg.empty() && res.value <= 0) return std::nullopt;
  RatVec x(dim);
  for (size_t i = 0; i < dim; ++i) x[i] = res.x[i] - res.x[dim + i];
  return x;
}

// sqrt comparison helpers on exact squares: ||v|| > bound  with bound >= 0
bool norm_gt(const RatVec& v, const Rat& bound) {
  if (bound < 0) return true;
  return norm_sq(v) > bound * bound;
}
bool norm_le(const RatVec& v, const Rat& bound) { return !norm_gt(v, bound); }

std::string join_names(const std::vector<const PredicateDef*>& ps,
                       const std::vector<int>& sel) {
  std::string s;
  for (size_t i = 0; i < ps.size(); ++i) {
    if (!sel[i]) continue;
    if (!s.empty()) s += (sel[i] > 0 ? " + " : " - ");
    else if (sel[i] < 0) s += "-";
    s += ps[i]->name;
  }
  return s;
}

// Unsat certificate over positive balls: a sign combination sigma with
// sum sigma_i L_i = 0 forces ||sum sigma_i c_i|| <= sum eps_i on any
// common point; violation proves emptiness.
std::optional<std::string> ball_sign_certificate(
    const std::vector<const PredicateDef*>& balls) {
  const size_t k = balls.size();
  if (k == 0 || k > 8) return std::nullopt;
  size_t r = balls[0]->L.rows; // certificates need equal codomain size
  for (auto* b : balls)
    if (b->L.rows != r) return std::nullopt;
  size_t combos = 1;
  for (size_t i = 0; i < k; ++i) combos *= 3;
  std::vector<int> sel(k);
  for (size_t code = 1; code < combos; ++code) {
    size_t c = code;
    for (size_t i = 0; i < k; ++i) { sel[i] = int(c % 3) - 1; c /= 3; }
    // sum sigma_i L_i
    RatMat acc(r, balls[0]->L.cols);
    RatVec cc(r, Rat(0));
    Rat eps_sum = 0;
    bool any = false;
    for (size_t i = 0; i < k; ++i) {
      if (!sel[i]) continue;
      any = true;
      for (size_t rr = 0; rr < r; ++rr)
        for (size_t col = 0; col < acc.cols; ++col)
          acc.at(rr, col) += Rat(sel[i]) * balls[i]->L.at(rr, col);
      for (size_t rr = 0; rr < r; ++rr) cc[rr] += Rat(sel[i]) * balls[i]->c[rr];
      eps_sum += balls[i]->eps;
    }
    if (!any || !acc.is_zero()) continue;
    if (norm_gt(cc, eps_sum))
      return "zero-combination " + join_names(balls, sel) + ": ||sum c|| > sum eps";
  }
  return std::nullopt;
}

bool same_map(const PredicateDef& a, const PredicateDef& b) {
  if (a.L.rows != b.L.rows || a.L.cols != b.L.cols) return false;
  return a.L.a == b.L.a;
}

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

} // namespace

SatResult FeasibilityOracle::sat_conjunct(const Conjunct& cj) const {
  const size_t dim = set_.dimension;
  SplitConjunct sc;
  for (auto& n : cj.pos) {
    auto& d = set_.get(n);
    (d.kind == PredicateDef::Kind::Halfspace ? sc.hs_pos : sc.ball_pos).push_back(&d);
  }
  for (auto& n : cj.neg) {
    auto& d = set_.get(n);
    (d.kind == PredicateDef::Kind::Halfspace ? sc.hs_neg : sc.ball_neg).push_back(&d);
  }

  auto validate = [&](const RatVec& x) -> bool {
    for (auto* p : sc.hs_pos) if (!(p->margin(x) >= 0)) return false;
    for (auto* p : sc.ball_pos) if (!(p->margin(x) >= 0)) return false;
    for (auto* p : sc.hs_neg) if (!(p->margin(x) < 0)) return false;
    for (auto* p : sc.ball_neg) if (!(p->margin(x) < 0)) return false;
    return true;
  };

  // ---- exact unsat certificates --------------------------------------
  // single positive ball infeasible on its own (c unreachable by L)
  for (auto* b : sc.ball_pos) {
    RatVec xls = least_squares(b->L, b->c);
    RatVec res = vec_sub(mat_apply(b->L, xls), b->c);
    if (norm_gt(res, b->eps))
      return {SatResult::Verdict::Unsat, std::nullopt,
              "ball " + b->name + " has empty preimage"};
  }
  // pairwise same-map separation:  ||c - c'|| > eps + eps'
  for (size_t i = 0; i < sc.ball_pos.size(); ++i)
    for (size_t j = i + 1; j < sc.ball_pos.size(); ++j) {
      auto *a = sc.ball_pos[i], *b = sc.ball_pos[j];
      if (!same_map(*a, *b)) continue;
      if (norm_gt(vec_sub(a->c, b->c), a->eps + b->eps))
        return {SatResult::Verdict::Unsat, std::nullopt,
                "disjoint balls " + a->name + ", " + b->name};
    }
  // zero sign-combination certificate across maps
  if (auto cert = ball_sign_certificate(sc.ball_pos))
    return {SatResult::Verdict::Unsat, std::nullopt, *cert};
  // positive ball contained in a negated ball on the same map:
  // ||c_a - c_b|| + eps_a <= eps_b
  for (auto* a : sc.ball_pos)
    for (auto* b : sc.ball_neg) {
      if (!same_map(*a, *b)) continue;
      Rat bound = b->eps - a->eps;
      if (bound >= 0 && norm_le(vec_sub(a->c, b->c), bound))
        return {SatResult::Verdict::Unsat, std::nullopt,
                "ball " + a->name + " inside negated " + b->name};
    }
  // negated ball with empty complement cannot happen (eps finite), skip.

  // ---- exact sat -------------------------------------------------------
  if (sc.ball_pos.empty() && sc.ball_neg.empty()) {
    if (auto x = affine_feasible(sc, dim, set_.box))
      return {SatResult::Verdict::Sat, x, "affine LP"};
    return {SatResult::Verdict::Unsat, std::nullopt, "affine LP infeasible"};
  }

  // stacked solve: a common exact preimage of all positive ball centers
  if (!sc.ball_pos.empty()) {
    size_t rows = 0;
    for (auto* b : sc.ball_pos) rows += b->L.rows;
    RatMat A(rows, dim);
    RatVec rhs(rows);
    size_t r = 0;
    for (auto* b : sc.ball_pos) {
      for (size_t i = 0; i < b->L.rows; ++i, ++r) {
        for (size_t c2 = 0; c2 < dim; ++c2) A.at(r, c2) = b->L.at(i, c2);
        rhs[r] = b->c[i];
      }
    }
    if (auto x = solve_linear(A, rhs)) {
      if (validate(*x))
        return {SatResult::Verdict::Sat, x, "stacked center preimage"};
    }
    // weighted least squares fallback: nearest point to all centers
    RatVec x = least_squares(A, rhs);
    if (validate(x))
      return {SatResult::Verdict::Sat, x, "least squares point"};
  }

  // negated balls (and possibly halfspaces) only: try the affine relaxation
  if (sc.ball_pos.empty()) {
    SplitConjunct affine_only{sc.hs_pos, sc.hs_neg, {}, {}};
    if (auto x = affine_feasible(affine_only, dim, set_.box)) {
      if (validate(*x))
        return {SatResult::Verdict::Sat, x, "affine point avoiding balls"};
    } else {
      return {SatResult::Verdict::Unsat, std::nullopt, "affine fragment infeasible"};
    }
  }

  // ---- deterministic sampling fallback --------------------------------
  if (!set_.box)
    return {SatResult::Verdict::Unknown, std::nullopt, "no bounding box for sampling"};
  const Box& box = *set_.box;
  uint64_t h = set_.seed;
  for (auto& n : cj.pos) for (char ch : n) h = mix(h, uint64_t(ch));
  for (auto& n : cj.neg) for (char ch : n) h = mix(h, uint64_t(ch) + 131);
  const int grid = dim <= 2 ? 16 : (dim <= 4 ? 7 : 4);
  std::vector<size_t> idx(dim, 0);
  const Rat jdenom(grid * 8);
  while (true) {
    RatVec x(dim);
    uint64_t hh = h;
    for (size_t i = 0; i < dim; ++i) hh = mix(hh, idx[i]);
    for (size_t i = 0; i < dim; ++i) {
      Rat span = box.hi[i] - box.lo[i];
      Rat base = box.lo[i] + span * Rat(2 * idx[i] + 1) / Rat(2 * grid);
      hh = mix(hh, i);
      Rat jitter = span * Rat(int64_t(hh % 17) - 8) / (jdenom * 17);
      x[i] = base + jitter;
    }
    if (validate(x))
      return {SatResult::Verdict::Sat, x, "sampled witness"};
    size_t i = 0;
    while (i < dim && ++idx[i] == size_t(grid)) idx[i++] = 0;
    if (i == dim) break;
  }
  return {SatResult::Verdict::Unknown, std::nullopt, "sampling exhausted"};
}

SatResult FeasibilityOracle::sat(const Bc& f) const {
  std::string key = bc_str(f);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  SatResult out;
  auto conjs = bc_dnf(f);
  if (conjs.empty()) {
    out = {SatResult::Verdict::Unsat, std::nullopt, "propositionally false"};
  } else {
    bool any_unknown = false;
    std::string why;
    for (auto& cj : conjs) {
      auto r = sat_conjunct(cj);
      if (r.verdict == SatResult::Verdict::Sat) { out = r; break; }
      if (r.verdict == SatResult::Verdict::Unknown) any_unknown = true;
      if (!why.empty()) why += "; ";
      why += r.certificate;
    }
    if (out.verdict != SatResult::Verdict::Sat) {
      if (any_unknown) {
        out = {SatResult::Verdict::Unknown, std::nullopt, why};
        ++unknown_count;
      } else {
        out = {SatResult::Verdict::Unsat, std::nullopt, why};
      }
    }
  }
  if (out.witness && !set_.eval_bc(f, *out.witness))
    throw std::logic_error("witness failed direct validation");
  cache_[key] = out;
  return out;
}

EntailResult FeasibilityOracle::entails(const Bc& f, const Bc& g) const {
  auto counter = sat(*Bc::conj2(std::make_shared<Bc>(f), Bc::negate(std::make_shared<Bc>(g))));
  switch (counter.verdict) {
    case SatResult::Verdict::Unsat: return {Entail::Yes, std::nullopt};
    case SatResult::Verdict::Sat: return {Entail::No, counter.witness};
    default: return {Entail::Unknown, std::nullopt};
  }
}

RatVec FeasibilityOracle::witness(const Bc& f) const {
  auto r = sat(f);
  if (r.verdict != SatResult::Verdict::Sat)
    throw std::runtime_error("witness requested for non-Sat combination: " + bc_str(f));
  return *r.witness;
}

bool FeasibilityOracle::semantically_equal(const Bc& f, const Bc& g) const {
  return entails(f, g).verdict == Entail::Yes &&
         entails(g, f).verdict == Entail::Yes;
}

} // namespace sitl
