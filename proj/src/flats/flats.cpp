#include "qpoly/flats/flats.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <stdexcept>

#include "qpoly/algebra/budget.hpp"
#include "qpoly/algebra/errors.hpp"
#include "qpoly/algebra/textio.hpp"

namespace qpoly::flats {

using algebra::SubspaceLattice;

namespace {

bool leq(const SubspaceLattice& lat, std::size_t a, std::size_t b) { return lat.sum_index(a, b) == b; }

std::string text(const SubspaceLattice& lat, std::size_t i) { return lat.at(i).to_string(); }

std::string point_text(const SubspaceLattice& lat, std::size_t p) { return text(lat, lat.dim_begin(1) + p); }

// Keeps the first failure in index order so reports do not depend on scheduling.
struct FirstFailure {
  std::mutex mu;
  std::size_t at = SIZE_MAX;
  std::string witness;
  void offer(std::size_t i, std::string w) {
    std::lock_guard lock(mu);
    if (i < at) {
      at = i;
      witness = std::move(w);
    }
  }
  Check check() const { return Check{at == SIZE_MAX, witness}; }
};

// Up-covers of each member of a family closed under intersection, ids into `members`.
std::vector<std::vector<std::uint32_t>> cover_relation(const SubspaceLattice& lat, const std::vector<std::uint32_t>& members) {
  const std::size_t n = members.size();
  std::vector<std::vector<std::uint32_t>> up(n);
  algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a) {
      std::vector<std::uint32_t> above;
      for (std::uint32_t c = 0; c < n; ++c)
        if (c != a && leq(lat, members[a], members[c])) above.push_back(c);
      for (auto c : above) {
        bool minimal = true;
        for (auto d : above)
          if (d != c && leq(lat, members[d], members[c])) {
            minimal = false;
            break;
          }
        if (minimal) up[a].push_back(c);
      }
    }
  });
  return up;
}

std::vector<std::vector<std::uint32_t>> invert(const std::vector<std::vector<std::uint32_t>>& up) {
  std::vector<std::vector<std::uint32_t>> down(up.size());
  for (std::uint32_t a = 0; a < up.size(); ++a)
    for (auto b : up[a]) down[b].push_back(a);
  return down;
}

// Longest and shortest chain lengths from `bottom`, members sorted by dimension.
void heights(const std::vector<std::vector<std::uint32_t>>& down, std::uint32_t bottom, std::vector<int>& lo, std::vector<int>& hi) {
  const std::size_t n = down.size();
  lo.assign(n, -1);
  hi.assign(n, -1);
  lo[bottom] = hi[bottom] = 0;
  for (std::size_t f = 0; f < n; ++f) {
    for (auto g : down[f]) {
      if (hi[g] < 0) continue;
      hi[f] = std::max(hi[f], hi[g] + 1);
      lo[f] = lo[f] < 0 ? lo[g] + 1 : std::min(lo[f], lo[g] + 1);
    }
  }
}

}  // namespace

std::size_t closure_index(const QPolymatroid& m, std::size_t v) {
  const auto& lat = m.lattice();
  const QRat& r = m.rank_at(v);
  std::size_t c = v;
  for (std::size_t p = 0; p < lat.num_points(); ++p) {
    if (lat.point_in(c, p)) continue;
    std::size_t w = lat.join_point(v, p);
    if (w != v && m.rank_at(w) == r) c = lat.join_point(c, p);
  }
  return c;
}

Subspace closure(const QPolymatroid& m, const Subspace& v) {
  const auto& lat = m.lattice();
  return lat.at(closure_index(m, lat.index_of(v)));
}

Subspace closure_fixpoint(const QPolymatroid& m, const Subspace& v) {
  const auto& lat = m.lattice();
  std::size_t c = lat.index_of(v);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t p = 0; p < lat.num_points(); ++p) {
      std::size_t w = lat.join_point(c, p);
      if (w != c && m.rank_at(w) == m.rank_at(c)) {
        c = w;
        grew = true;
      }
    }
  }
  return lat.at(c);
}

std::vector<std::uint32_t> closure_table(const QPolymatroid& m) {
  const auto& lat = m.lattice();
  m.table();
  std::vector<std::uint32_t> cl(lat.size());
  algebra::parallel_for(lat.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) cl[i] = static_cast<std::uint32_t>(closure_index(m, i));
  });
  return cl;
}

bool is_flat(const QPolymatroid& m, const Subspace& f) {
  const auto& lat = m.lattice();
  std::size_t i = lat.index_of(f);
  return closure_index(m, i) == i;
}

std::size_t FlatLattice::id_of(const Subspace& f) const {
  std::int32_t id = flat_of[m.lattice().index_of(f)];
  if (id < 0) throw std::invalid_argument(f.to_string() + " is not a flat");
  return static_cast<std::size_t>(id);
}

FlatLattice flats_all(const QPolymatroid& m) {
  FlatLattice out{m, {}, {}, {}, {}, {}, 0, 0};
  const auto& lat = m.lattice();
  out.closure = closure_table(m);
  out.flat_of.assign(lat.size(), -1);
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (out.closure[i] == i) {
      out.flat_of[i] = static_cast<std::int32_t>(out.index.size());
      out.index.push_back(static_cast<std::uint32_t>(i));
    }
  // Every cover of F is cl(F + P) for a point P outside F; keep the minimal ones.
  const std::size_t n = out.index.size();
  out.up.assign(n, {});
  algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t f = b; f < e; ++f) {
      std::set<std::uint32_t> cand;
      for (std::size_t p = 0; p < lat.num_points(); ++p) {
        std::size_t w = lat.join_point(out.index[f], p);
        if (w != out.index[f]) cand.insert(out.closure[w]);
      }
      for (auto c : cand) {
        bool minimal = true;
        for (auto d : cand)
          if (d != c && leq(lat, d, c)) {
            minimal = false;
            break;
          }
        if (minimal) out.up[f].push_back(static_cast<std::uint32_t>(out.flat_of[c]));
      }
      std::sort(out.up[f].begin(), out.up[f].end());
    }
  });
  out.down = invert(out.up);
  out.bottom = static_cast<std::uint32_t>(out.flat_of[out.closure[lat.zero_index()]]);
  out.top = static_cast<std::uint32_t>(out.flat_of[lat.full_index()]);
  return out;
}

std::vector<std::uint32_t> hyperplanes(const FlatLattice& lat) {
  if (lat.size() == 1) return {};
  return lat.down[lat.top];
}

std::uint32_t meet(const FlatLattice& lat, std::uint32_t a, std::uint32_t b) {
  std::int32_t id = lat.flat_of[lat.m.lattice().intersect_index(lat.index[a], lat.index[b])];
  if (id < 0) throw PropertyViolation("intersection of flats is not a flat");
  return static_cast<std::uint32_t>(id);
}

std::uint32_t join(const FlatLattice& lat, std::uint32_t a, std::uint32_t b) {
  return static_cast<std::uint32_t>(lat.flat_of[lat.closure[lat.m.lattice().sum_index(lat.index[a], lat.index[b])]]);
}

const std::vector<std::uint32_t>& covers(const FlatLattice& lat, std::uint32_t f) { return lat.up.at(f); }

std::vector<int> chain_heights(const FlatLattice& lat) {
  std::vector<int> lo, hi;
  heights(lat.down, lat.bottom, lo, hi);
  return hi;
}

int chain_height(const FlatLattice& lat, std::uint32_t f) { return chain_heights(lat).at(f); }

bool ClosureReport::ok() const {
  return cl1.ok && cl2.ok && cl3.ok && f1.ok && f2.ok && intersection_formula.ok && rank_preserved.ok;
}

ClosureReport closure_axioms_check(const FlatLattice& fl) {
  const auto& lat = fl.m.lattice();
  const auto& cl = fl.closure;
  const std::size_t n = lat.size();
  FirstFailure c1, c2, c3, rk, inter, f2;
  algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      if (!leq(lat, v, cl[v])) c1.offer(v, text(lat, v) + " is not inside its closure");
      if (cl[cl[v]] != cl[v]) c3.offer(v, "cl(cl(" + text(lat, v) + ")) != cl(" + text(lat, v) + ")");
      if (fl.m.rank_at(cl[v]) != fl.m.rank_at(v)) rk.offer(v, "rank changes under closure at " + text(lat, v));
      for (std::size_t p = 0; p < lat.num_points(); ++p) {
        std::size_t w = lat.join_point(v, p);
        if (w != v && !leq(lat, cl[v], cl[w])) {
          c2.offer(v, "cl(" + text(lat, v) + ") not inside cl(" + text(lat, w) + ")");
          break;
        }
      }
      std::size_t meet_all = lat.full_index();
      for (auto f : fl.index)
        if (leq(lat, v, f)) meet_all = lat.intersect_index(meet_all, f);
      if (meet_all != cl[v]) inter.offer(v, "intersection of flats above " + text(lat, v) + " is " + text(lat, meet_all));
    }
  });
  algebra::parallel_for(fl.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a)
      for (std::size_t c = a + 1; c < fl.size(); ++c) {
        std::size_t i = lat.intersect_index(fl.index[a], fl.index[c]);
        if (fl.flat_of[i] < 0) {
          f2.offer(a, text(lat, fl.index[a]) + " meet " + text(lat, fl.index[c]) + " = " + text(lat, i) + " is not a flat");
          break;
        }
      }
  });
  ClosureReport r;
  r.cl1 = c1.check();
  r.cl2 = c2.check();
  r.cl3 = c3.check();
  r.rank_preserved = rk.check();
  r.intersection_formula = inter.check();
  r.f2 = f2.check();
  if (fl.flat_of[lat.full_index()] < 0) r.f1 = Check{false, "E is not a flat"};
  return r;
}

bool QMatroidReport::ok() const { return cl4.ok && f3.ok && semimodular.ok && chains.ok && hyperplane_ranks.ok; }

namespace {

// F3, semimodularity and chain lengths on an intersection-closed family with cover relation.
void lattice_checks(const SubspaceLattice& lat, const std::vector<std::uint32_t>& members,
                    const std::vector<std::vector<std::uint32_t>>& up, const std::vector<std::vector<std::uint32_t>>& down,
                    std::uint32_t bottom, const std::function<std::uint32_t(std::size_t)>& member_of_join,
                    const std::function<std::int32_t(std::size_t)>& member_id, QMatroidReport& r) {
  const std::size_t n = members.size();
  FirstFailure f3, semi;
  algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t f = b; f < e; ++f) {
      for (std::size_t p = 0; p < lat.num_points(); ++p) {
        if (lat.point_in(members[f], p)) continue;
        int count = 0;
        for (auto g : up[f]) count += lat.point_in(members[g], p);
        if (count != 1) {
          f3.offer(f, std::to_string(count) + " covers of " + text(lat, members[f]) + " contain " + point_text(lat, p));
          break;
        }
      }
    }
  });
  algebra::parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a) {
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a) continue;
        std::int32_t mt = member_id(lat.intersect_index(members[a], members[c]));
        if (mt < 0) continue;
        if (std::find(up[mt].begin(), up[mt].end(), a) == up[mt].end()) continue;
        std::uint32_t jn = member_of_join(lat.sum_index(members[a], members[c]));
        if (std::find(up[c].begin(), up[c].end(), jn) == up[c].end()) {
          semi.offer(a, text(lat, members[a]) + " covers the meet with " + text(lat, members[c]) + " but the join " +
                            text(lat, members[jn]) + " does not cover " + text(lat, members[c]));
          break;
        }
      }
    }
  });
  r.f3 = f3.check();
  r.semimodular = semi.check();
  std::vector<int> lo, hi;
  heights(down, bottom, lo, hi);
  for (std::size_t f = 0; f < n; ++f)
    if (lo[f] != hi[f]) {
      r.chains = Check{false, "maximal chains up to " + text(lat, members[f]) + " have lengths " + std::to_string(lo[f]) +
                                  " and " + std::to_string(hi[f])};
      break;
    }
}

}  // namespace

QMatroidReport qmatroid_axioms_check(const FlatLattice& fl) {
  const auto& lat = fl.m.lattice();
  QMatroidReport r;
  // cl(V + P) = cl(cl(V) + P), so checking V over the flats covers every V.
  FirstFailure cl4;
  const std::size_t np = lat.num_points();
  algebra::parallel_for(fl.size(), [&](std::size_t b, std::size_t e) {
    std::vector<std::uint32_t> cx(np);
    for (std::size_t f = b; f < e; ++f) {
      std::size_t v = fl.index[f];
      for (std::size_t p = 0; p < np; ++p) cx[p] = fl.closure[lat.join_point(v, p)];
      bool bad = false;
      for (std::size_t x = 0; x < np && !bad; ++x) {
        if (lat.point_in(v, x)) continue;
        for (std::size_t y = 0; y < np; ++y) {
          if (y == x || lat.point_in(v, y)) continue;
          if (lat.point_in(cx[x], y) != lat.point_in(cx[y], x)) {
            std::string xs = point_text(lat, x), ys = point_text(lat, y), vs = text(lat, v);
            bool fwd = lat.point_in(cx[x], y);
            cl4.offer(f, "V=" + vs + ", x=" + (fwd ? xs : ys) + ", y=" + (fwd ? ys : xs) + ": <y> <= cl(V+<x>) but <x> not <= cl(V+<y>)");
            bad = true;
            break;
          }
        }
      }
    }
  });
  r.cl4 = cl4.check();
  lattice_checks(
      lat, fl.index, fl.up, fl.down, fl.bottom,
      [&](std::size_t i) { return static_cast<std::uint32_t>(fl.flat_of[fl.closure[i]]); },
      [&](std::size_t i) { return fl.flat_of[i]; }, r);
  std::set<QRat> ranks;
  for (auto h : hyperplanes(fl)) ranks.insert(fl.rank(h));
  r.hyperplane_rank_values.assign(ranks.begin(), ranks.end());
  if (ranks.size() > 1) {
    std::string w = "hyperplane ranks";
    for (const auto& x : ranks) w += " " + qpm::to_string(x);
    r.hyperplane_ranks = Check{false, w};
  }
  return r;
}

namespace {

struct FlatFamily {
  std::shared_ptr<const SubspaceLattice> lat;
  std::vector<std::uint32_t> members;  // sorted lattice indices
  std::vector<std::int32_t> id;
  std::vector<std::vector<std::uint32_t>> up, down;
  std::uint32_t bottom = 0;
  bool intersection_closed = true;
  std::string f2_witness;
};

FlatFamily family(const algebra::FieldPtr& field, int ell, const std::vector<Subspace>& flats) {
  FlatFamily fam;
  fam.lat = SubspaceLattice::get(field, ell);
  const auto& lat = *fam.lat;
  for (const auto& f : flats) {
    if (f.ambient() != ell) throw std::invalid_argument("flat " + f.to_string() + " has the wrong ambient dimension");
    fam.members.push_back(static_cast<std::uint32_t>(lat.index_of(f)));
  }
  std::sort(fam.members.begin(), fam.members.end());
  if (std::adjacent_find(fam.members.begin(), fam.members.end()) != fam.members.end())
    throw std::invalid_argument("flat listed twice");
  fam.id.assign(lat.size(), -1);
  for (std::size_t i = 0; i < fam.members.size(); ++i) fam.id[fam.members[i]] = static_cast<std::int32_t>(i);
  for (std::size_t a = 0; a < fam.members.size() && fam.intersection_closed; ++a)
    for (std::size_t b = a + 1; b < fam.members.size(); ++b) {
      std::size_t i = lat.intersect_index(fam.members[a], fam.members[b]);
      if (fam.id[i] < 0) {
        fam.intersection_closed = false;
        fam.f2_witness = text(lat, fam.members[a]) + " meet " + text(lat, fam.members[b]) + " = " + text(lat, i) + " is missing";
        break;
      }
    }
  if (fam.intersection_closed && !fam.members.empty()) {
    fam.up = cover_relation(lat, fam.members);
    fam.down = invert(fam.up);
    fam.bottom = 0;  // the intersection of all members has the smallest index
    for (std::size_t i = 0; i < fam.members.size(); ++i)
      if (leq(lat, fam.members[i], fam.members[fam.bottom]) && i != fam.bottom) fam.bottom = static_cast<std::uint32_t>(i);
  }
  return fam;
}

// Smallest member above V; unique when the family is intersection-closed.
std::uint32_t member_closure(const FlatFamily& fam, std::size_t v) {
  std::size_t best = SIZE_MAX;
  for (std::size_t i = 0; i < fam.members.size(); ++i)
    if (leq(*fam.lat, v, fam.members[i]) && (best == SIZE_MAX || leq(*fam.lat, fam.members[i], fam.members[best]))) best = i;
  return static_cast<std::uint32_t>(best);
}

}  // namespace

QMatroidReport flat_axioms_check(const algebra::FieldPtr& field, int ell, const std::vector<Subspace>& flats) {
  QMatroidReport r;
  r.cl4 = Check{true, "not applicable"};
  auto fam = family(field, ell, flats);
  const auto& lat = *fam.lat;
  if (fam.members.empty() || fam.members.back() != lat.full_index()) {
    r.f3 = Check{false, "(F1) E is not in the collection"};
    return r;
  }
  if (!fam.intersection_closed) {
    r.f3 = Check{false, "(F2) " + fam.f2_witness};
    return r;
  }
  lattice_checks(
      lat, fam.members, fam.up, fam.down, fam.bottom, [&](std::size_t i) { return member_closure(fam, i); },
      [&](std::size_t i) { return fam.id[i]; }, r);
  std::vector<int> lo, hi;
  heights(fam.down, fam.bottom, lo, hi);
  std::set<int> hr;
  for (auto h : fam.down[fam.id[lat.full_index()]]) hr.insert(hi[h]);
  for (int h : hr) r.hyperplane_rank_values.push_back(QRat(h));
  if (hr.size() > 1) r.hyperplane_ranks = Check{false, "hyperplane heights differ"};
  return r;
}

QPolymatroid qmatroid_from_flats(const algebra::FieldPtr& field, int ell, const std::vector<Subspace>& flats) {
  auto rep = flat_axioms_check(field, ell, flats);
  if (!rep.f3.ok) throw PropertyViolation("flat axioms fail: " + rep.f3.witness);
  auto fam = family(field, ell, flats);
  const auto& lat = *fam.lat;
  std::vector<int> lo, hi;
  heights(fam.down, fam.bottom, lo, hi);
  std::vector<QRat> table(lat.size());
  algebra::parallel_for(lat.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) table[v] = hi[member_closure(fam, v)];
  });
  return QPolymatroid::from_table(field, ell, std::move(table), "heights of a flat lattice");
}

QPolymatroid from_flat_ranks(const FlatLattice& fl) {
  const auto& lat = fl.m.lattice();
  std::vector<QRat> ranks(fl.size());
  for (std::size_t f = 0; f < fl.size(); ++f) ranks[f] = fl.rank(f);
  std::vector<QRat> table(lat.size());
  algebra::parallel_for(lat.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      std::size_t meet_all = lat.full_index();
      for (auto f : fl.index)
        if (leq(lat, v, f)) meet_all = lat.intersect_index(meet_all, f);
      table[v] = ranks[fl.flat_of[meet_all]];
    }
  });
  return QPolymatroid::from_table(fl.m.field(), fl.m.ell(), std::move(table), "flat ranks of (" + fl.m.provenance() + ")");
}

nlohmann::json to_json(const FlatLattice& fl) {
  using nlohmann::json;
  const auto& f = *fl.m.field();
  json out;
  out["format"] = "flat-lattice";
  out["q"] = std::to_string(f.p()) + "^" + std::to_string(f.e());
  out["modulus"] = f.modulus_string();
  out["ell"] = fl.m.ell();
  json nodes = json::array(), edges = json::array();
  for (std::size_t i = 0; i < fl.size(); ++i) {
    json rows = json::array();
    const auto& s = fl.at(i);
    if (!s.is_zero()) {
      std::string t = s.to_string();
      for (std::size_t a = 0, b; a <= t.size(); a = b + 1) {
        b = t.find(',', a);
        if (b == std::string::npos) b = t.size();
        rows.push_back(t.substr(a, b - a));
      }
    }
    nodes.push_back({{"subspace", rows}, {"rank", qpm::to_fraction(fl.rank(i))}});
    for (auto u : fl.up[i]) edges.push_back({i, u});
  }
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  return out;
}

std::vector<Subspace> flats_from_json(const nlohmann::json& j, algebra::FieldPtr* field_out, int* ell_out) {
  try {
    if (!j.is_object() || j.value("format", "") != "flat-lattice") throw ParseError("expected a flat-lattice document");
    std::string q = j.at("q").is_string() ? j["q"].get<std::string>() : std::to_string(j["q"].get<int>());
    auto field = algebra::parse_field(q, j.value("modulus", ""));
    int ell = j.at("ell").get<int>();
    std::vector<Subspace> out;
    for (const auto& node : j.at("nodes")) {
      std::string t;
      for (const auto& r : node.at("subspace")) t += (t.empty() ? "" : ",") + r.get<std::string>();
      out.push_back(algebra::parse_subspace(t.empty() ? "0" : t, field, ell));
    }
    if (field_out) *field_out = field;
    if (ell_out) *ell_out = ell;
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace qpoly::flats
