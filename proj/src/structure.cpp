#include "addbasis/structure.hpp"

#include <algorithm>
#include <sstream>

namespace addbasis {

namespace {

PeriodicSet single_ray(const AmbientGroup& amb, int64_t cflat, int64_t start, int64_t step,
                       bool up) {
  int64_t C = amb.torsion_size();
  BitVec right{size_t(C * step)}, left{size_t(C * step)};
  BitVec& pat = up ? right : left;
  pat.set(size_t(cflat * step + floor_mod(start, step)));
  // Right patterns govern n >= hi, left patterns n < lo; either way the
  // boundary is placed so that start itself belongs to the ray.
  int64_t edge = up ? start : start + 1;
  return PeriodicSet::make(amb, step, edge, edge, BitVec(0), std::move(right), std::move(left));
}

std::vector<GroupElement> sorted_elements(const PeriodicSet& s) {
  if (!s.is_finite()) throw InternalError("expected a finite set");
  std::vector<GroupElement> out = s.window_points();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PeriodicSet torsion_half_line(const AmbientGroup& amb, int dir) {
  if (dir != 1 && dir != -1) throw PreconditionError("direction must be +1 or -1");
  int64_t C = amb.torsion_size();
  BitVec full{size_t(C)};
  full.set_all();
  BitVec empty{size_t(C)};
  if (dir == 1)
    return PeriodicSet::make(amb, 1, 0, 0, BitVec(0), std::move(full), std::move(empty));
  return PeriodicSet::make(amb, 1, 1, 1, BitVec(0), std::move(empty), std::move(full));
}

PeriodicSet orbit_ray(const AmbientGroup& amb, const GroupElement& x) {
  if (x.n == 0) throw PreconditionError("orbit_ray needs an element of infinite order");
  // Torsion order of x's finite part: after o steps the orbit repeats its
  // class, so xN is a union of o rays with pure-z step o*|x.n|.
  int64_t o = 1;
  for (size_t i = 0; i < amb.rank(); ++i) {
    int64_t d = amb.torsion()[i];
    int64_t t = floor_mod(x.torsion[i], d);
    int64_t oi = d / std::gcd(d, t == 0 ? d : t);
    o = o / std::gcd(o, oi) * oi;
  }
  PeriodicSet out = PeriodicSet::from_points(amb, {zero_element(amb)});
  GroupElement cur = zero_element(amb);
  for (int64_t k = 0; k < o; ++k) {
    out = unite(out, single_ray(amb, amb.flatten(cur.torsion), cur.n, o * std::abs(x.n), x.n > 0));
    cur = add(amb, cur, x);
  }
  return out;
}

SemigroupT validate_semigroup(const PeriodicSet& s) {
  if (s.is_finite()) throw PreconditionError("a translatable semigroup is infinite");
  if (!subset_of(minkowski_sum(s, s), s)) {
    // Name a witness pair for the error message.
    std::vector<GroupElement> pts = s.window_points();
    for (auto& [c, r] : s.right_classes())
      pts.push_back(GroupElement{s.ambient().unflatten(c), s.hi() + floor_mod(r - s.hi(), s.period())});
    for (auto& [c, r] : s.left_classes())
      pts.push_back(
          GroupElement{s.ambient().unflatten(c), s.lo() - 1 - floor_mod(s.lo() - 1 - r, s.period())});
    for (const auto& a : pts)
      for (const auto& b : pts) {
        GroupElement t = add(s.ambient(), a, b);
        if (!s.member(t))
          throw VerificationError("not closed under addition: " + to_string(a) + " + " + to_string(b) + " escapes the set");
      }
    throw VerificationError("not closed under addition");
  }

  // Translatability generators: window elements plus the first tail element
  // of each occupied residue class (see header for the reduction argument).
  std::vector<GroupElement> gens = s.window_points();
  for (auto& [c, r] : s.right_classes())
    gens.push_back(GroupElement{s.ambient().unflatten(c), s.hi() + floor_mod(r - s.hi(), s.period())});
  for (auto& [c, r] : s.left_classes())
    gens.push_back(
        GroupElement{s.ambient().unflatten(c), s.lo() - 1 - floor_mod(s.lo() - 1 - r, s.period())});
  for (const auto& g : gens) {
    PeriodicSet missed = subtract(s, translate(s, g));
    if (!missed.is_finite())
      throw VerificationError("translatability violated at " + to_string(g));
  }
  return SemigroupT(s);
}

Subgroup grothendieck(const SemigroupT& t) {
  Subgroup g = subgroup_from_periodic(difference_set(t.set()));
  if (!(g == Subgroup::whole(t.ambient())))
    throw VerificationError(
        "difference set generates a proper subgroup; the representation's ambient group is not "
        "the Grothendieck group");
  return g;
}

StructureReport structure_decompose(const SemigroupT& t) {
  const PeriodicSet& s = t.set();
  const AmbientGroup& amb = t.ambient();
  StructureReport rep;

  if (difference_set(s) == s) {
    rep.kind = StructureReport::Kind::group;
    rep.x = zero_element(amb);
    return rep;
  }

  // Direction of the infinite ray.  A non-group T cannot have both tails
  // occupied (closure would force the whole group), and it has at least one
  // because T is infinite.
  int dir = s.bounded_below() ? 1 : -1;

  // x = least element of T \ (-T) in (direction-major z, torsion-lex) order.
  PeriodicSet excess = subtract(s, negate_set(s));
  if (excess.is_empty())
    throw VerificationError("inconsistent certificate: T = -T but T - T differs from T");
  int64_t best_n = 0;
  bool have = false;
  std::vector<int64_t> best_coords;
  int64_t from = dir == 1 ? excess.min_n() : excess.max_n();
  for (int64_t step = 0; !have; ++step) {
    int64_t n = from + dir * step;
    for (int64_t c = 0; c < amb.torsion_size(); ++c) {
      if (!excess.member(c, n)) continue;
      std::vector<int64_t> coords = amb.unflatten(c);
      if (!have || coords < best_coords) {
        have = true;
        best_n = n;
        best_coords = coords;
      }
    }
  }
  rep.x = GroupElement{best_coords, best_n};

  PeriodicSet remainder = subtract(s, translate(s, rep.x));
  if (!remainder.is_finite())
    throw VerificationError("inconsistent certificate: T \\ (x+T) is infinite");
  rep.R = sorted_elements(remainder);

  if (!(minkowski_sum(remainder, orbit_ray(amb, rep.x)) == s))
    throw VerificationError("inconsistent certificate: R + xN does not rebuild T");

  rep.kind = StructureReport::Kind::cofinite_to;
  rep.torsion = amb.torsion();
  std::vector<GroupElement> tgens;
  for (size_t i = 0; i < amb.rank(); ++i) {
    std::vector<int64_t> coords(amb.rank(), 0);
    coords[i] = 1;
    tgens.push_back(GroupElement{std::move(coords), 0});
  }
  rep.C = Subgroup::from_generators(amb, tgens);

  PeriodicSet normal = torsion_half_line(amb, dir);
  PeriodicSet diff = unite(subtract(s, normal), subtract(normal, s));
  if (!diff.is_finite())
    throw VerificationError("inconsistent certificate: T is not asymptotic to C + uN");
  rep.sym_diff = sorted_elements(diff);
  return rep;
}

SemigroupT t_cap_H(const SemigroupT& t, const Subgroup& h) {
  if (!h.finite_index()) throw PreconditionError("t_cap_H requires a finite-index subgroup");
  Reembedding re(h);
  PeriodicSet inter = intersect(t.set(), h.as_periodic());
  SemigroupT result = validate_semigroup(re.transport(inter));
  grothendieck(result);
  return result;
}

GroupElement translate_into(const SemigroupT& t, const std::vector<GroupElement>& f) {
  if (f.empty()) throw PreconditionError("translate_into needs a nonempty set");
  const PeriodicSet& s = t.set();
  const AmbientGroup& amb = t.ambient();
  int dir = s.bounded_below() ? 1 : -1;
  int64_t fmin = f[0].n, fmax = f[0].n;
  for (const auto& g : f) {
    fmin = std::min(fmin, g.n);
    fmax = std::max(fmax, g.n);
  }
  int64_t base = dir == 1 ? s.hi() - fmin : s.lo() - 1 - fmax;
  for (int64_t step = 0; step < 8 * s.period(); ++step) {
    for (int64_t c = 0; c < amb.torsion_size(); ++c) {
      GroupElement cand{amb.unflatten(c), base + dir * step};
      bool ok = true;
      for (const auto& g : f)
        if (!s.member(add(amb, cand, g))) {
          ok = false;
          break;
        }
      if (ok) return cand;
    }
  }
  throw VerificationError("no translate of the sample fits inside T near the tail");
}

std::string StructureReport::to_string() const {
  std::ostringstream out;
  if (kind == Kind::group) {
    out << "group";
    return out.str();
  }
  out << "cofinite_to(C = ";
  if (torsion.empty()) {
    out << "0";
  } else {
    for (size_t i = 0; i < torsion.size(); ++i) out << (i ? "x" : "") << "C" << torsion[i];
  }
  out << ", x = " << addbasis::to_string(x) << ", R = {";
  for (size_t i = 0; i < R.size(); ++i) out << (i ? ", " : "") << addbasis::to_string(R[i]);
  out << "}), sym_diff = {";
  for (size_t i = 0; i < sym_diff.size(); ++i)
    out << (i ? ", " : "") << addbasis::to_string(sym_diff[i]);
  out << "}";
  return out.str();
}

}  // namespace addbasis
