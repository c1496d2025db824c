#include "qpoly/qpm/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>

#include "qpoly/algebra/budget.hpp"

namespace qpoly::qpm {

using algebra::Field;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes:
      return "yes";
    case Verdict::no:
      return "no";
    default:
      return "unknown";
  }
}

bool check_isomorphism(const QPolymatroid& a, const QPolymatroid& b, const Mat& alpha) {
  if (a.ell() != b.ell() || !a.field()->same_as(*b.field())) return false;
  if (alpha.rows() != a.ell() || alpha.cols() != a.ell() || !algebra::is_invertible(alpha)) return false;
  const auto& lat = a.lattice();
  const auto& tb = b.table();
  const auto& ta = a.table();
  std::atomic<bool> ok{true};
  algebra::parallel_for(lat.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi && ok; ++i)
      if (tb[lat.index_of(algebra::image(lat.at(i), alpha))] != ta[i]) ok = false;
  });
  return ok;
}

namespace {

// Vectors of F_q^l encoded as sum v_s q^s.
struct Codec {
  const Field* f;
  int ell;
  std::uint64_t q;
  std::uint64_t total;

  std::uint64_t encode(std::span<const Elem> v) const {
    std::uint64_t c = 0;
    for (int s = ell - 1; s >= 0; --s) c = c * q + v[s];
    return c;
  }
  std::vector<Elem> decode(std::uint64_t c) const {
    std::vector<Elem> v(ell);
    for (int s = 0; s < ell; ++s) {
      v[s] = static_cast<Elem>(c % q);
      c /= q;
    }
    return v;
  }
  std::uint64_t add(std::uint64_t x, std::uint64_t y) const {
    if (q == 2) return x ^ y;
    std::uint64_t out = 0;
    std::uint64_t pw = 1;
    for (int s = 0; s < ell; ++s) {
      out += pw * f->add(static_cast<Elem>(x % q), static_cast<Elem>(y % q));
      x /= q;
      y /= q;
      pw *= q;
    }
    return out;
  }
  std::uint64_t scale(Elem c, std::uint64_t x) const {
    if (c == 1) return x;
    std::uint64_t out = 0;
    std::uint64_t pw = 1;
    for (int s = 0; s < ell; ++s) {
      out += pw * f->mul(c, static_cast<Elem>(x % q));
      x /= q;
      pw *= q;
    }
    return out;
  }
};

struct Prep {
  const SubspaceLattice* lat = nullptr;
  Codec codec;
  std::vector<std::int32_t> pt;  // code -> point index, -1 for 0
  std::vector<std::vector<std::uint64_t>> basis_codes;
  std::vector<std::vector<std::size_t>> by_level;  // level j+1 lists subspaces needing e_j
  std::vector<int> ida, idb;
  std::vector<int> class_a, class_b;  // point profile classes
};

// Point profile: counts of (dim, value id) over subspaces containing the point.
std::vector<std::vector<std::uint32_t>> point_profiles(const SubspaceLattice& lat, const std::vector<int>& ids, int nv) {
  const std::size_t np = lat.num_points();
  const int width = (lat.ell() + 1) * nv;
  std::vector<std::vector<std::uint32_t>> prof(np, std::vector<std::uint32_t>(width, 0));
  algebra::parallel_for(np, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p)
      for (std::size_t i = 0; i < lat.size(); ++i)
        if (lat.point_in(i, p)) ++prof[p][lat.dim_of(i) * nv + ids[i]];
  });
  return prof;
}

class Search {
 public:
  Search(const Prep& pr, std::atomic<std::uint64_t>& nodes, std::uint64_t budget, std::atomic<bool>& stop)
      : pr_(pr), nodes_(nodes), budget_(budget), stop_(stop) {
    img_.assign(pr.codec.total, 0);
    used_.assign(pr.codec.total, 0);
    used_[0] = 1;
    a_.assign(pr.codec.ell, 0);
  }

  bool budget_hit() const { return budget_hit_; }
  const std::vector<std::uint64_t>& rows() const { return a_; }

  // Tries a fixed image for e_0, then completes recursively.
  bool run_from(std::uint64_t first) {
    if (!place(0, first)) return false;
    bool ok = extend(1);
    unplace(0);
    return ok;
  }

 private:
  bool place(int j, std::uint64_t w) {
    if (used_[w]) return false;
    const Codec& c = pr_.codec;
    std::uint64_t base = 1;
    for (int s = 0; s < j; ++s) base *= c.q;
    for (Elem k = 1; k < c.q; ++k) {
      std::uint64_t kw = c.scale(k, w);
      for (std::uint64_t x = 0; x < base; ++x) {
        std::uint64_t y = c.add(img_[x], kw);
        img_[x + k * base] = y;
        used_[y] = 1;
      }
    }
    a_[j] = w;
    const auto& lat = *pr_.lat;
    for (std::size_t i : pr_.by_level[j + 1]) {
      std::size_t r = lat.zero_index();
      for (auto bc : pr_.basis_codes[i]) r = lat.join_point(r, static_cast<std::size_t>(pr_.pt[img_[bc]]));
      if (pr_.idb[r] != pr_.ida[i]) {
        unplace(j);
        return false;
      }
    }
    return true;
  }

  void unplace(int j) {
    const Codec& c = pr_.codec;
    std::uint64_t base = 1;
    for (int s = 0; s < j; ++s) base *= c.q;
    for (std::uint64_t x = base; x < base * c.q; ++x) used_[img_[x]] = 0;
  }

  bool extend(int j) {
    const Codec& c = pr_.codec;
    if (j == c.ell) return true;
    std::uint64_t ej = 1;
    for (int s = 0; s < j; ++s) ej *= c.q;
    const int want = pr_.class_a[ej];
    for (std::uint64_t w = 1; w < c.total; ++w) {
      if (stop_) return false;
      if (pr_.class_b[w] != want || used_[w]) continue;
      if (++nodes_ > budget_) {
        budget_hit_ = true;
        stop_ = true;
        return false;
      }
      if (!place(j, w)) continue;
      if (extend(j + 1)) return true;
      unplace(j);
    }
    return false;
  }

  const Prep& pr_;
  std::atomic<std::uint64_t>& nodes_;
  std::uint64_t budget_;
  std::atomic<bool>& stop_;
  bool budget_hit_ = false;
  std::vector<std::uint64_t> img_;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint64_t> a_;
};

}  // namespace

EquivalenceResult find_equivalence(const QPolymatroid& a, const QPolymatroid& b, std::uint64_t node_budget) {
  EquivalenceResult res;
  if (!a.field()->same_as(*b.field()) || a.ell() != b.ell()) {
    res.verdict = Verdict::no;
    res.reason = "different ground spaces";
    return res;
  }
  const int ell = a.ell();
  const auto& lat = a.lattice();
  const auto& ta = a.table();
  const auto& tb = b.table();
  if (ell == 0) {
    res.verdict = ta[0] == tb[0] ? Verdict::yes : Verdict::no;
    if (res.verdict == Verdict::yes) res.witness = Mat(a.field(), 0, 0);
    res.reason = "zero-dimensional ground space";
    return res;
  }

  Prep pr;
  pr.lat = &lat;
  std::map<QRat, int> values;
  for (const auto& r : ta) values.emplace(r, 0);
  for (const auto& r : tb) values.emplace(r, 0);
  int nv = 0;
  for (auto& [k, v] : values) v = nv++;
  pr.ida.resize(lat.size());
  pr.idb.resize(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    pr.ida[i] = values[ta[i]];
    pr.idb[i] = values[tb[i]];
  }

  for (int d = 0; d <= ell; ++d) {
    std::vector<int> ha(pr.ida.begin() + lat.dim_begin(d), pr.ida.begin() + lat.dim_end(d));
    std::vector<int> hb(pr.idb.begin() + lat.dim_begin(d), pr.idb.begin() + lat.dim_end(d));
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) {
      res.verdict = Verdict::no;
      res.reason = "rank histograms differ in dimension " + std::to_string(d);
      return res;
    }
  }

  auto pa = point_profiles(lat, pr.ida, nv);
  auto pb = point_profiles(lat, pr.idb, nv);
  {
    auto sa = pa;
    auto sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) {
      res.verdict = Verdict::no;
      res.reason = "point profiles differ";
      return res;
    }
    std::map<std::vector<std::uint32_t>, int> cls;
    for (const auto& p : sa) cls.emplace(p, static_cast<int>(cls.size()));
    for (const auto& p : pa) pr.class_a.push_back(cls[p]);
    for (const auto& p : pb) pr.class_b.push_back(cls[p]);
  }

  pr.codec = Codec{a.field().get(), ell, a.field()->q(), 1};
  for (int s = 0; s < ell; ++s) pr.codec.total *= pr.codec.q;
  pr.pt.assign(pr.codec.total, -1);
  for (std::uint64_t c = 1; c < pr.codec.total; ++c) pr.pt[c] = static_cast<std::int32_t>(lat.point_of(pr.codec.decode(c)));
  // From here on point classes are indexed by vector code.
  {
    std::vector<int> ca(pr.codec.total, -1), cb(pr.codec.total, -1);
    for (std::uint64_t c = 1; c < pr.codec.total; ++c) {
      ca[c] = pr.class_a[pr.pt[c]];
      cb[c] = pr.class_b[pr.pt[c]];
    }
    pr.class_a = std::move(ca);
    pr.class_b = std::move(cb);
  }
  pr.basis_codes.resize(lat.size());
  pr.by_level.assign(ell + 1, {});
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Subspace& v = lat.at(i);
    int level = 0;
    for (int r = 0; r < v.dim(); ++r) {
      auto row = v.basis().row(r);
      pr.basis_codes[i].push_back(pr.codec.encode(row));
      for (int s = ell - 1; s >= level; --s)
        if (row[s]) {
          level = s + 1;
          break;
        }
    }
    pr.by_level[level].push_back(i);
  }

  std::vector<std::uint64_t> firsts;
  const int want0 = pr.class_a[1];
  for (std::size_t p = 0; p < lat.num_points(); ++p) {
    std::uint64_t c = pr.codec.encode(lat.at(lat.dim_begin(1) + p).basis().row(0));
    if (pr.class_b[c] == want0) firsts.push_back(c);
  }
  std::sort(firsts.begin(), firsts.end());

  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> best{firsts.size()};
  std::atomic<bool> budget_hit{false};
  std::vector<std::vector<std::uint64_t>> found(firsts.size());
  algebra::parallel_for(firsts.size(), [&](std::size_t lo, std::size_t hi) {
    Search s(pr, nodes, node_budget, stop);
    for (std::size_t i = lo; i < hi; ++i) {
      if (i > best || stop) break;
      if (++nodes > node_budget) {
        budget_hit = true;
        stop = true;
        break;
      }
      if (s.run_from(firsts[i])) {
        found[i] = s.rows();
        std::size_t cur = best;
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
        break;
      }
      if (s.budget_hit()) budget_hit = true;
    }
  });
  res.nodes = nodes;
  if (best < firsts.size()) {
    Mat w(a.field(), ell, ell);
    for (int j = 0; j < ell; ++j) {
      auto v = pr.codec.decode(found[best][j]);
      for (int s = 0; s < ell; ++s) w(j, s) = v[s];
    }
    if (!check_isomorphism(a, b, w)) throw std::logic_error("equivalence search produced an invalid witness");
    res.verdict = Verdict::yes;
    res.witness = std::move(w);
    res.reason = "witness found";
    return res;
  }
  if (budget_hit) {
    res.verdict = Verdict::unknown;
    res.reason = "node budget of " + std::to_string(node_budget) + " exhausted";
    return res;
  }
  res.verdict = Verdict::no;
  res.reason = "search exhausted";
  return res;
}

}  // namespace qpoly::qpm
