#include "addbasis/parse.hpp"

#include <cctype>

#include "addbasis/bitvec.hpp"

namespace addbasis {
namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("parse error at position " + std::to_string(i) + ": " + msg);
  }

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool done() {
    skip_ws();
    return i >= s.size();
  }

  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  bool eat(char c) {
    if (peek() != c) return false;
    ++i;
    return true;
  }

  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected ") + what);
  }

  int64_t integer() {
    skip_ws();
    size_t start = i;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
      neg = s[i] == '-';
      ++i;
    }
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
      i = start;
      fail("expected an integer");
    }
    int64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      int64_t d = s[i] - '0';
      if (v > (INT64_MAX - d) / 10) {
        i = start;
        fail("integer out of range");
      }
      v = v * 10 + d;
      ++i;
    }
    return neg ? -v : v;
  }

  std::vector<int64_t> tuple() {
    expect('(', "'('");
    std::vector<int64_t> vals;
    vals.push_back(integer());
    while (eat(',')) vals.push_back(integer());
    expect(')', "')'");
    return vals;
  }
};

// One residue-class ray or line as a canonical set: the right tail a + pN,
// the left tail a - pN, or the full line a + pZ, in torsion column cflat.
PeriodicSet class_ray(const AmbientGroup& amb, int64_t cflat, int64_t a,
                      int64_t p, bool up, bool down) {
  const int64_t C = amb.torsion_size();
  BitVec win{size_t(0)};
  BitVec right{size_t(C * p)}, left{size_t(C * p)};
  int64_t m = floor_mod(a, p);
  if (up) right.set(size_t(cflat * p + m));
  if (down) left.set(size_t(cflat * p + m));
  // lo == hi puts every member in the tail patterns: n >= hi for the right
  // tail, n < lo for the left.  Anchoring at a (a + 1 for a pure left tail)
  // starts each tail exactly at a.
  int64_t lo = (up || !down) ? a : a + 1;
  return PeriodicSet::make(amb, p, lo, lo, win, right, left);
}

}  // namespace

PeriodicSet parse_set(const std::string& text) {
  Cursor cur{text};

  std::vector<int64_t> torsion;
  cur.skip_ws();
  if (text.compare(cur.i, 2, "C=") == 0) {
    cur.i += 2;
    for (;;) {
      size_t at = cur.i;
      int64_t d = cur.integer();
      if (d < 2) {
        cur.i = at;
        cur.fail("torsion factor must be at least 2");
      }
      torsion.push_back(d);
      if (!cur.eat('x')) break;
    }
    cur.expect(';', "';' after the torsion prefix");
  }
  const AmbientGroup amb{torsion};
  const size_t K = torsion.size();

  PeriodicSet acc = PeriodicSet::empty(amb);
  std::vector<GroupElement> points;
  bool any_clause = false;

  do {
    if (cur.done()) {
      if (any_clause) cur.fail("expected a clause after ','");
      break;
    }
    any_clause = true;

    std::vector<int64_t> prefix;
    bool have_prefix = false;
    if (cur.peek() == '(') {
      prefix = cur.tuple();
      if (prefix.size() != K) cur.fail("torsion prefix arity mismatch");
      have_prefix = true;
    }

    if (cur.eat('{')) {
      if (!cur.eat('}')) {
        do {
          if (!have_prefix && cur.peek() == '(') {
            std::vector<int64_t> t = cur.tuple();
            if (t.size() != K + 1) cur.fail("point tuple arity mismatch");
            int64_t n = t.back();
            t.pop_back();
            points.push_back(GroupElement{t, n});
          } else {
            int64_t n = cur.integer();
            std::vector<int64_t> c = have_prefix ? prefix
                                                 : std::vector<int64_t>(K, 0);
            points.push_back(GroupElement{c, n});
          }
        } while (cur.eat(','));
        cur.expect('}', "'}' or ','");
      }
    } else {
      int64_t a = cur.integer();
      char sign = cur.peek();
      if (sign != '+' && sign != '-') cur.fail("expected '+' or '-' after the anchor");
      ++cur.i;
      size_t at = cur.i;
      int64_t p = cur.integer();
      if (p <= 0) {
        cur.i = at;
        cur.fail("period must be positive");
      }
      char kind = cur.peek();
      if (kind == 'N')
        ++cur.i;
      else if (kind == 'Z' && sign == '+')
        ++cur.i;
      else
        cur.fail(sign == '+' ? "expected 'N' or 'Z'" : "expected 'N'");
      std::vector<int64_t> c = have_prefix ? prefix : std::vector<int64_t>(K, 0);
      int64_t cflat = amb.flatten(c);
      acc = unite(acc, class_ray(amb, cflat, a, p, sign == '+',
                                 kind == 'Z' || sign == '-'));
    }
  } while (cur.eat(','));

  if (!any_clause) cur.fail("expected a set literal");
  if (!cur.done()) cur.fail("unexpected trailing input");
  if (!points.empty()) acc = unite(acc, PeriodicSet::from_points(amb, points));
  return acc;
}

std::vector<GroupElement> parse_elements(const std::string& text,
                                         const AmbientGroup& amb) {
  // A literal without its own torsion prefix is read in `amb` directly, so
  // point tuples and zero-coordinate defaults resolve against it.
  size_t first = 0;
  while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first])))
    ++first;
  std::string full = text;
  if (!amb.torsion().empty() && text.compare(first, 2, "C=") != 0) {
    std::string prefix = "C=";
    const auto& tf = amb.torsion();
    for (size_t i = 0; i < tf.size(); ++i) {
      if (i) prefix += "x";
      prefix += std::to_string(tf[i]);
    }
    full = prefix + "; " + text;
  }
  PeriodicSet ps = parse_set(full);
  if (!ps.is_finite())
    throw PreconditionError("parse_elements: literal must denote a finite set");
  if (!(ps.ambient() == amb))
    throw PreconditionError("parse_elements: literal ambient does not match");
  return ps.window_points();
}

std::string element_literal(const GroupElement& e, const AmbientGroup& amb) {
  if (amb.torsion().empty()) return std::to_string(e.n);
  std::string s = "(";
  for (int64_t c : e.torsion) s += std::to_string(c) + ",";
  return s + std::to_string(e.n) + ")";
}

}  // namespace addbasis
