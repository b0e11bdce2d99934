#include "graphkit/operad.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace graphkit {

namespace {

using nlohmann::json;

bool is_perm(const Perm& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= (int)p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::vector<Perm> all_perms(int n) {
  Perm p = identity_perm(n);
  std::vector<Perm> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::string perm_key(const Perm& p) {
  std::string out;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out;
}

Perm parse_perm_key(const std::string& key) {
  Perm p;
  size_t start = 0;
  while (start <= key.size()) {
    size_t comma = key.find(',', start);
    std::string part = key.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      p.push_back(std::stoi(part));
    } catch (...) {
      throw std::invalid_argument("bad permutation key \"" + key + "\"");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!is_perm(p))
    throw std::invalid_argument("permutation key \"" + key +
                                "\" is not a permutation");
  return p;
}

// Where the d-positions of a grafting land in the spliced profile: slot i0
// is replaced by the m-1 grafted entries, later positions shift by m-2.
int spliced_position(int t, int i0, int m) { return t < i0 ? t : t + m - 2; }

// The permutation of the composite induced by permuting the outer argument
// by sigma before grafting into the slot sigma sends to i0. m is the
// grafted profile's length, p0 = sigma^{-1}(i0).
Perm transported_inner(const Perm& sigma, int i0, int p0, int m) {
  const int n = (int)sigma.size();
  Perm out(n + m - 2);
  for (int q = 0; q < p0; ++q) out[q] = spliced_position(sigma[q], i0, m);
  for (int q = p0; q <= p0 + m - 2; ++q) out[q] = i0 + (q - p0);
  for (int q = p0 + m - 1; q < n + m - 2; ++q)
    out[q] = spliced_position(sigma[q - (m - 2)], i0, m);
  return out;
}

// The permutation of the composite induced by permuting the grafted
// argument by tau (which must fix its last position). n is the outer
// profile's length.
Perm transported_outer(const Perm& tau, int i0, int n) {
  const int m = (int)tau.size();
  Perm out(n + m - 2);
  std::iota(out.begin(), out.end(), 0);
  for (int t = 0; t < m - 1; ++t) out[i0 + t] = i0 + tau[t];
  return out;
}

const char* kBadColourChars = ",()|;=";

bool name_has(const std::string& s, const char* bad) {
  return s.find_first_of(bad) != std::string::npos;
}

}  // namespace

std::string profile_key(const Profile& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += p[i];
  }
  return out + ")";
}

Profile parse_profile_key(const std::string& key) {
  if (key.size() < 2 || key.front() != '(' || key.back() != ')')
    throw std::invalid_argument("profile key must look like \"(a,b)\":  " +
                                key);
  Profile p;
  std::string body = key.substr(1, key.size() - 2);
  if (body.empty()) return p;
  size_t start = 0;
  while (true) {
    size_t comma = body.find(',', start);
    if (comma == std::string::npos) {
      p.push_back(body.substr(start));
      break;
    }
    p.push_back(body.substr(start, comma - start));
    start = comma + 1;
  }
  return p;
}

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose_perms(const Perm& s, const Perm& t) {
  if (s.size() != t.size())
    throw std::invalid_argument("compose_perms: size mismatch");
  Perm r(t.size());
  for (size_t j = 0; j < t.size(); ++j) r[j] = s[t[j]];
  return r;
}

Perm invert_perm(const Perm& p) {
  Perm r(p.size());
  for (size_t j = 0; j < p.size(); ++j) r[p[j]] = (int)j;
  return r;
}

Profile apply_perm(const Perm& p, const Profile& c) {
  if (p.size() != c.size())
    throw std::invalid_argument("apply_perm: size mismatch");
  Profile r(c.size());
  for (size_t j = 0; j < c.size(); ++j) r[j] = c[p[j]];
  return r;
}

Profile splice_profiles(const Profile& a, int i, const Profile& b) {
  if (i < 1 || i > (int)b.size())
    throw std::invalid_argument("splice_profiles: index out of range");
  if (a.empty()) throw std::invalid_argument("splice_profiles: empty profile");
  if (a.back() != b[i - 1])
    throw std::invalid_argument("splice_profiles: colour mismatch");
  Profile r(b.begin(), b.begin() + (i - 1));
  r.insert(r.end(), a.begin(), a.end() - 1);
  r.insert(r.end(), b.begin() + i, b.end());
  return r;
}

std::optional<std::string> try_circ(const CyclicOperad& o,
                                    const std::string& a, int i,
                                    const std::string& b) {
  auto pa = o.profile_of.find(a);
  auto pb = o.profile_of.find(b);
  if (pa == o.profile_of.end())
    throw std::invalid_argument("circ: unknown operation " + a);
  if (pb == o.profile_of.end())
    throw std::invalid_argument("circ: unknown operation " + b);
  splice_profiles(pa->second, i, pb->second);
  auto it = o.comp.find({a, i, b});
  if (it == o.comp.end()) return std::nullopt;
  return it->second;
}

std::string circ(const CyclicOperad& o, const std::string& a, int i,
                 const std::string& b) {
  auto r = try_circ(o, a, i, b);
  if (!r)
    throw std::out_of_range("circ: composite of " + a + " into slot " +
                            std::to_string(i) + " of " + b +
                            " is outside the stored tables");
  return *r;
}

std::string sigma_act(const CyclicOperad& o, const Perm& p,
                      const std::string& a) {
  auto pa = o.profile_of.find(a);
  if (pa == o.profile_of.end())
    throw std::invalid_argument("sigma_act: unknown operation " + a);
  if (p.size() != pa->second.size())
    throw std::invalid_argument("sigma_act: permutation length mismatch");
  auto ia = o.act.find(a);
  if (ia != o.act.end()) {
    auto ip = ia->second.find(p);
    if (ip != ia->second.end()) return ip->second;
  }
  throw std::invalid_argument("sigma_act: no table entry for " + a +
                              " under [" + perm_key(p) + "]");
}

std::vector<std::string> validate_cyclic_operad(const CyclicOperad& o) {
  std::vector<std::string> out;

  if (o.colours.empty()) out.push_back("operad: no colours");
  std::set<std::string> cset;
  for (const auto& c : o.colours) {
    if (c.empty() || name_has(c, kBadColourChars))
      out.push_back("operad: colour name \"" + c +
                    "\" is empty or uses ,()|;=");
    if (!cset.insert(c).second)
      out.push_back("operad: duplicate colour " + c);
  }

  std::set<std::string> names;
  for (const auto& [key, list] : o.ops) {
    Profile p;
    try {
      p = parse_profile_key(key);
    } catch (const std::invalid_argument& e) {
      out.push_back(std::string("operad: ") + e.what());
      continue;
    }
    if (p.empty()) {
      out.push_back("operad: empty profile " + key);
      continue;
    }
    if (profile_key(p) != key)
      out.push_back("operad: non-canonical profile key " + key);
    for (const auto& c : p)
      if (!cset.count(c))
        out.push_back("operad: profile " + key + " uses unknown colour " + c);
    if (list.empty())
      out.push_back("operad: profile " + key + " lists no operations");
    for (const auto& name : list) {
      if (name.empty() || name_has(name, "|;"))
        out.push_back("operad: operation name \"" + name +
                      "\" is empty or uses | or ;");
      if (!names.insert(name).second)
        out.push_back("operad: duplicate operation name " + name);
      auto it = o.profile_of.find(name);
      if (it == o.profile_of.end() || it->second != p)
        out.push_back("operad: profile_of disagrees with ops for " + name);
    }
  }
  for (const auto& [name, p] : o.profile_of)
    if (!names.count(name))
      out.push_back("operad: profile_of names unknown operation " + name);
  if (!out.empty()) return out;

  for (const auto& c : o.colours) {
    auto it = o.units.find(c);
    if (it == o.units.end()) {
      out.push_back("operad: no unit for colour " + c);
      continue;
    }
    auto pu = o.profile_of.find(it->second);
    if (pu == o.profile_of.end() || pu->second != Profile{c, c})
      out.push_back("operad: unit for " + c +
                    " is unknown or off the profile (" + c + "," + c + ")");
  }
  for (const auto& [c, u] : o.units)
    if (!cset.count(c))
      out.push_back("operad: unit for unknown colour " + c);

  for (const auto& name : names) {
    const Profile& prof = o.profile_of.at(name);
    const int k = (int)prof.size();
    auto ia = o.act.find(name);
    if (ia == o.act.end()) {
      out.push_back("operad: no action table for " + name);
      continue;
    }
    if ((long)ia->second.size() != factorial(k))
      out.push_back("operad: action table for " + name +
                    " misses permutations");
    for (const auto& [p, img] : ia->second) {
      if ((int)p.size() != k || !is_perm(p)) {
        out.push_back("operad: bad permutation [" + perm_key(p) + "] on " +
                      name);
        continue;
      }
      auto pi = o.profile_of.find(img);
      if (pi == o.profile_of.end())
        out.push_back("operad: action of " + name + " hits unknown " + img);
      else if (pi->second != apply_perm(p, prof))
        out.push_back("operad: action of " + name + " under [" + perm_key(p) +
                      "] lands off the permuted profile");
    }
    auto idp = ia->second.find(identity_perm(k));
    if (idp == ia->second.end() || idp->second != name)
      out.push_back("operad: identity permutation moves " + name);
  }
  for (const auto& [name, _] : o.act)
    if (!names.count(name))
      out.push_back("operad: action table for unknown operation " + name);
  if (!out.empty()) return out;

  // act is a right action: acting by s then t is acting by their composite
  for (const auto& name : names) {
    const int k = (int)o.profile_of.at(name).size();
    auto perms = all_perms(k);
    for (const Perm& s : perms) {
      const std::string& mid = o.act.at(name).at(s);
      for (const Perm& t : perms) {
        const std::string& lhs = o.act.at(mid).at(t);
        const std::string& rhs = o.act.at(name).at(compose_perms(s, t));
        if (lhs != rhs)
          out.push_back("operad: action law fails on " + name + " via [" +
                        perm_key(s) + "] then [" + perm_key(t) + "]");
      }
    }
  }

  // comp entries are well typed
  for (const auto& [key, r] : o.comp) {
    const auto& [a, i, b] = key;
    std::string where =
        a + " o_" + std::to_string(i) + " " + b + " -> " + r;
    if (!names.count(a) || !names.count(b) || !names.count(r)) {
      out.push_back("operad: composition names unknown operation: " + where);
      continue;
    }
    Profile spliced;
    try {
      spliced = splice_profiles(o.profile_of.at(a), i, o.profile_of.at(b));
    } catch (const std::invalid_argument& e) {
      out.push_back("operad: composition outside its domain (" +
                    std::string(e.what()) + "): " + where);
      continue;
    }
    if (o.profile_of.at(r) != spliced)
      out.push_back("operad: composite lands off the spliced profile: " +
                    where);
  }

  // comp covers its whole domain: every colour-matching pair whose spliced
  // profile carries operations
  for (const auto& [na, pa] : o.profile_of)
    for (const auto& [nb, pb] : o.profile_of)
      for (int i = 1; i <= (int)pb.size(); ++i) {
        if (pa.back() != pb[i - 1]) continue;
        Profile spliced = splice_profiles(pa, i, pb);
        if (spliced.empty() || !o.ops.count(profile_key(spliced))) continue;
        if (!o.comp.count({na, i, nb}))
          out.push_back("operad: composition missing for " + na + " o_" +
                        std::to_string(i) + " " + nb);
      }
  if (!out.empty()) return out;

  // unit laws
  for (const auto& name : names) {
    const Profile& prof = o.profile_of.at(name);
    auto right = try_circ(o, name, 1, o.units.at(prof.back()));
    if (!right || *right != name)
      out.push_back("operad: grafting " + name +
                    " into its last colour's unit fails the unit law");
    for (int i = 1; i <= (int)prof.size(); ++i) {
      auto left = try_circ(o, o.units.at(prof[i - 1]), i, name);
      if (!left || *left != name)
        out.push_back("operad: unit grafted into slot " + std::to_string(i) +
                      " of " + name + " fails the unit law");
    }
  }

  // the unit is fixed by the transposition; this follows from the unit laws
  // and full inner equivariance, and degeneracy actions on decorated trees
  // need it because a vertex lands on an edge with no preferred end order
  for (const auto& [c, u] : o.units)
    if (o.act.at(u).at(Perm{1, 0}) != u)
      out.push_back("operad: the unit at colour " + c +
                    " is not transposition invariant");

  // equivariance in the outer argument: permuting b and grafting into the
  // moved slot equals permuting the composite
  for (const auto& [key, r] : o.comp) {
    const auto& [a, i, b] = key;
    const int i0 = i - 1;
    const int m = (int)o.profile_of.at(a).size();
    const int n = (int)o.profile_of.at(b).size();
    for (const Perm& s : all_perms(n)) {
      int p0 = 0;
      while (s[p0] != i0) ++p0;
      const std::string& sb = o.act.at(b).at(s);
      auto lhs = try_circ(o, a, p0 + 1, sb);
      Perm sprime = transported_inner(s, i0, p0, m);
      const std::string& rhs = o.act.at(r).at(sprime);
      if (!lhs)
        out.push_back("operad: composition missing for the permuted form of " +
                      a + " o_" + std::to_string(i) + " " + b);
      else if (*lhs != rhs)
        out.push_back("operad: outer equivariance fails on " + a + " o_" +
                      std::to_string(i) + " " + b + " under [" + perm_key(s) +
                      "]");
    }
  }

  // equivariance in the grafted argument, for permutations keeping the
  // grafting colour last
  for (const auto& [key, r] : o.comp) {
    const auto& [a, i, b] = key;
    const int i0 = i - 1;
    const int m = (int)o.profile_of.at(a).size();
    const int n = (int)o.profile_of.at(b).size();
    for (const Perm& t : all_perms(m)) {
      if (t[m - 1] != m - 1) continue;
      const std::string& ta = o.act.at(a).at(t);
      auto lhs = try_circ(o, ta, i, b);
      Perm tprime = transported_outer(t, i0, n);
      const std::string& rhs = o.act.at(r).at(tprime);
      if (!lhs)
        out.push_back("operad: composition missing for the permuted form of " +
                      a + " o_" + std::to_string(i) + " " + b);
      else if (*lhs != rhs)
        out.push_back("operad: inner equivariance fails on " + a + " o_" +
                      std::to_string(i) + " " + b + " under [" + perm_key(t) +
                      "]");
    }
  }

  // sequential associativity: graft a into b, then that into slot j of c,
  // against grafting b into c first. Positions where the first composite
  // sits inside b's block, i.e. i < |b|.
  for (const auto& [key1, r1] : o.comp) {
    const auto& [a, i, b] = key1;
    const int m = (int)o.profile_of.at(b).size();
    if (i > m - 1) continue;
    auto lo = o.comp.lower_bound({r1, 0, ""});
    auto hi = o.comp.upper_bound(
        {r1, std::numeric_limits<int>::max(), std::string()});
    for (auto it = lo; it != hi; ++it) {
      const auto& [r1b, j, c] = it->first;
      const std::string& lhs = it->second;
      auto bc = try_circ(o, b, j, c);
      if (!bc) continue;
      auto rhs = try_circ(o, a, i + j - 1, *bc);
      if (!rhs)
        out.push_back("operad: associativity instance not closed for " + a +
                      ", " + b + ", " + c);
      else if (*rhs != lhs)
        out.push_back("operad: associativity fails on " + a + " o_" +
                      std::to_string(i) + " " + b + " o_" + std::to_string(j) +
                      " " + c);
    }
  }

  return out;
}

std::vector<std::string> validate_morphism(const OperadMorphism& f,
                                           const CyclicOperad& o,
                                           const CyclicOperad& p) {
  std::vector<std::string> out;
  for (const auto& c : o.colours) {
    auto it = f.colour_map.find(c);
    if (it == f.colour_map.end())
      out.push_back("morphism: colour " + c + " unmapped");
    else if (std::find(p.colours.begin(), p.colours.end(), it->second) ==
             p.colours.end())
      out.push_back("morphism: colour " + c + " lands outside the target");
  }
  for (const auto& [name, prof] : o.profile_of) {
    auto it = f.op_map.find(name);
    if (it == f.op_map.end()) {
      out.push_back("morphism: operation " + name + " unmapped");
      continue;
    }
    auto pi = p.profile_of.find(it->second);
    if (pi == p.profile_of.end()) {
      out.push_back("morphism: operation " + name +
                    " lands outside the target");
      continue;
    }
    Profile want;
    for (const auto& c : prof) {
      auto ci = f.colour_map.find(c);
      if (ci == f.colour_map.end()) break;
      want.push_back(ci->second);
    }
    if (want.size() == prof.size() && pi->second != want)
      out.push_back("morphism: operation " + name +
                    " lands off the renamed profile");
  }
  if (!out.empty()) return out;

  for (const auto& [c, u] : o.units) {
    auto pu = p.units.find(f.colour_map.at(c));
    if (pu == p.units.end() || f.op_map.at(u) != pu->second)
      out.push_back("morphism: unit at colour " + c + " not preserved");
  }

  for (const auto& [name, table] : o.act) {
    auto pt = p.act.find(f.op_map.at(name));
    for (const auto& [s, img] : table) {
      bool ok = false;
      if (pt != p.act.end()) {
        auto ps = pt->second.find(s);
        ok = ps != pt->second.end() && f.op_map.at(img) == ps->second;
      }
      if (!ok)
        out.push_back("morphism: action square fails on " + name +
                      " under [" + perm_key(s) + "]");
    }
  }

  for (const auto& [key, r] : o.comp) {
    const auto& [a, i, b] = key;
    auto pr = try_circ(p, f.op_map.at(a), i, f.op_map.at(b));
    if (!pr)
      out.push_back("morphism: target misses the composite of " + a +
                    " o_" + std::to_string(i) + " " + b);
    else if (*pr != f.op_map.at(r))
      out.push_back("morphism: composition square fails on " + a + " o_" +
                    std::to_string(i) + " " + b);
  }
  return out;
}

namespace {

void enumerate_profiles(const std::vector<std::string>& colours, int max_arity,
                        const std::function<void(const Profile&)>& fn) {
  Profile p;
  std::function<void()> rec = [&]() {
    if (!p.empty()) fn(p);
    if ((int)p.size() == max_arity) return;
    for (const auto& c : colours) {
      p.push_back(c);
      rec();
      p.pop_back();
    }
  };
  rec();
}

}  // namespace

CyclicOperad terminal_operad(const std::vector<std::string>& colours,
                             int max_arity) {
  if (colours.empty() || max_arity < 2)
    throw std::invalid_argument(
        "terminal_operad: need colours and max_arity >= 2");
  CyclicOperad o;
  o.colours = colours;
  auto name_of = [](const Profile& p) { return "t@" + profile_key(p); };
  enumerate_profiles(colours, max_arity, [&](const Profile& p) {
    std::string name = name_of(p);
    o.ops[profile_key(p)].push_back(name);
    o.profile_of[name] = p;
  });
  for (const auto& c : colours) o.units[c] = name_of(Profile{c, c});
  for (const auto& [name, prof] : o.profile_of)
    for (const Perm& p : all_perms((int)prof.size()))
      o.act[name][p] = name_of(apply_perm(p, prof));
  for (const auto& [na, pa] : o.profile_of)
    for (const auto& [nb, pb] : o.profile_of)
      for (int i = 1; i <= (int)pb.size(); ++i) {
        if (pa.back() != pb[i - 1]) continue;
        Profile spliced = splice_profiles(pa, i, pb);
        if (spliced.empty() || (int)spliced.size() > max_arity) continue;
        o.comp[{na, i, nb}] = name_of(spliced);
      }
  return o;
}

namespace {

// An operation of the relational operad: its profile and the set of
// accepted bit tuples, tuple x stored at bit index sum x[j] << j.
struct RelOp {
  Profile prof;
  unsigned long long mask = 0;
};

std::string rel_name(const RelOp& r) {
  std::ostringstream os;
  os << "r" << std::hex << r.mask << "@" << profile_key(r.prof);
  return os.str();
}

RelOp rel_act(const RelOp& r, const Perm& p) {
  const int k = (int)r.prof.size();
  RelOp out;
  out.prof = apply_perm(p, r.prof);
  for (int idx = 0; idx < (1 << k); ++idx) {
    if (!(r.mask >> idx & 1ull)) continue;
    int nidx = 0;
    for (int j = 0; j < k; ++j) nidx |= (idx >> p[j] & 1) << j;
    out.mask |= 1ull << nidx;
  }
  return out;
}

// Relational join: graft a into slot i0 (0-based) of b, matching a's last
// coordinate against b's i0th and keeping all the rest.
RelOp rel_join(const RelOp& a, int i0, const RelOp& b) {
  const int ka = (int)a.prof.size();
  const int kb = (int)b.prof.size();
  RelOp out;
  out.prof = splice_profiles(a.prof, i0 + 1, b.prof);
  for (int x = 0; x < (1 << ka); ++x) {
    if (!(a.mask >> x & 1ull)) continue;
    int s = x >> (ka - 1) & 1;
    for (int y = 0; y < (1 << kb); ++y) {
      if (!(b.mask >> y & 1ull) || (y >> i0 & 1) != s) continue;
      int z = 0;
      for (int q = 0; q < i0; ++q) z |= (y >> q & 1) << q;
      for (int t = 0; t < ka - 1; ++t) z |= (x >> t & 1) << (i0 + t);
      for (int q = i0 + 1; q < kb; ++q) z |= (y >> q & 1) << (q + ka - 2);
      out.mask |= 1ull << z;
    }
  }
  return out;
}

}  // namespace

CyclicOperad relational_operad(const std::vector<std::string>& colours,
                               const std::vector<RelationSeed>& seeds,
                               int max_arity) {
  if (colours.empty() || max_arity < 2 || max_arity > 6)
    throw std::invalid_argument(
        "relational_operad: need colours and 2 <= max_arity <= 6");
  std::map<std::string, RelOp> all;
  std::vector<std::string> work;
  auto add = [&](const RelOp& r) {
    std::string name = rel_name(r);
    if (all.emplace(name, r).second) work.push_back(name);
  };
  for (const auto& c : colours) {
    RelOp diag;
    diag.prof = {c, c};
    diag.mask = 0b1001;
    add(diag);
  }
  for (const auto& seed : seeds) {
    if (seed.profile.empty() || (int)seed.profile.size() > max_arity)
      throw std::invalid_argument("relational_operad: seed arity out of range");
    for (const auto& c : seed.profile)
      if (std::find(colours.begin(), colours.end(), c) == colours.end())
        throw std::invalid_argument("relational_operad: seed colour " + c +
                                    " is not in the colour list");
    RelOp r;
    r.prof = seed.profile;
    for (const auto& tup : seed.tuples) {
      if (tup.size() != seed.profile.size())
        throw std::invalid_argument(
            "relational_operad: tuple length off the profile");
      int idx = 0;
      for (size_t j = 0; j < tup.size(); ++j) {
        if (tup[j] != 0 && tup[j] != 1)
          throw std::invalid_argument("relational_operad: tuples are over 0/1");
        idx |= tup[j] << j;
      }
      r.mask |= 1ull << idx;
    }
    add(r);
  }

  while (!work.empty()) {
    std::string name = work.back();
    work.pop_back();
    RelOp r = all.at(name);
    const int k = (int)r.prof.size();
    for (const Perm& p : all_perms(k)) add(rel_act(r, p));
    std::vector<std::pair<std::string, RelOp>> snapshot(all.begin(),
                                                        all.end());
    for (const auto& [on, other] : snapshot) {
      for (int i0 = 0; i0 < (int)other.prof.size(); ++i0) {
        int len = k + (int)other.prof.size() - 2;
        if (len >= 1 && len <= max_arity && r.prof.back() == other.prof[i0])
          add(rel_join(r, i0, other));
      }
      for (int i0 = 0; i0 < k; ++i0) {
        int len = (int)other.prof.size() + k - 2;
        if (len >= 1 && len <= max_arity && other.prof.back() == r.prof[i0])
          add(rel_join(other, i0, r));
      }
    }
  }

  CyclicOperad o;
  o.colours = colours;
  std::map<std::string, std::vector<std::pair<unsigned long long, std::string>>>
      per_profile;
  for (const auto& [name, r] : all) {
    o.profile_of[name] = r.prof;
    per_profile[profile_key(r.prof)].push_back({r.mask, name});
  }
  for (auto& [key, list] : per_profile) {
    std::sort(list.begin(), list.end());
    for (auto& [_, name] : list) o.ops[key].push_back(name);
  }
  for (const auto& c : colours) {
    RelOp diag;
    diag.prof = {c, c};
    diag.mask = 0b1001;
    o.units[c] = rel_name(diag);
  }
  for (const auto& [name, r] : all)
    for (const Perm& p : all_perms((int)r.prof.size()))
      o.act[name][p] = rel_name(rel_act(r, p));
  for (const auto& [na, a] : all)
    for (const auto& [nb, b] : all)
      for (int i = 1; i <= (int)b.prof.size(); ++i) {
        if (a.prof.back() != b.prof[i - 1]) continue;
        int len = (int)a.prof.size() + (int)b.prof.size() - 2;
        if (len < 1 || len > max_arity) continue;
        o.comp[{na, i, nb}] = rel_name(rel_join(a, i - 1, b));
      }
  return o;
}

std::string operad_to_json(const CyclicOperad& o) {
  json j;
  j["colours"] = o.colours;
  json ops = json::object();
  for (const auto& [key, list] : o.ops) ops[key] = list;
  j["ops"] = ops;
  json units = json::object();
  for (const auto& [c, u] : o.units) units[c] = u;
  j["units"] = units;
  json act = json::object();
  for (const auto& [name, table] : o.act) {
    json one = json::object();
    for (const auto& [p, img] : table) one[perm_key(p)] = img;
    act[name] = one;
  }
  j["act"] = act;
  json comp = json::object();
  for (const auto& [key, r] : o.comp) {
    const auto& [a, i, b] = key;
    comp[a][std::to_string(i)][b] = r;
  }
  j["comp"] = comp;
  return j.dump(2);
}

CyclicOperad operad_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("operad: bad JSON: ") + e.what());
  }
  for (const char* field : {"colours", "ops", "units", "act", "comp"})
    if (!j.contains(field))
      throw std::invalid_argument(std::string("operad: missing \"") + field +
                                  "\"");
  CyclicOperad o;
  for (const json& c : j["colours"]) {
    if (!c.is_string())
      throw std::invalid_argument("operad: colours must be strings");
    o.colours.push_back(c.get<std::string>());
  }
  if (!j["ops"].is_object())
    throw std::invalid_argument("operad: \"ops\" must be an object");
  for (auto it = j["ops"].begin(); it != j["ops"].end(); ++it) {
    Profile p = parse_profile_key(it.key());
    for (const json& name : it.value()) {
      if (!name.is_string())
        throw std::invalid_argument("operad: operation names must be strings");
      o.ops[it.key()].push_back(name.get<std::string>());
      o.profile_of[name.get<std::string>()] = p;
    }
  }
  for (auto it = j["units"].begin(); it != j["units"].end(); ++it) {
    if (!it.value().is_string())
      throw std::invalid_argument("operad: units must name operations");
    o.units[it.key()] = it.value().get<std::string>();
  }
  for (auto it = j["act"].begin(); it != j["act"].end(); ++it) {
    for (auto pt = it.value().begin(); pt != it.value().end(); ++pt) {
      if (!pt.value().is_string())
        throw std::invalid_argument("operad: action values must be strings");
      o.act[it.key()][parse_perm_key(pt.key())] =
          pt.value().get<std::string>();
    }
  }
  for (auto at = j["comp"].begin(); at != j["comp"].end(); ++at)
    for (auto it = at.value().begin(); it != at.value().end(); ++it) {
      int i = -1;
      try {
        i = std::stoi(it.key());
      } catch (...) {
        throw std::invalid_argument("operad: bad composition index \"" +
                                    it.key() + "\"");
      }
      for (auto bt = it.value().begin(); bt != it.value().end(); ++bt) {
        if (!bt.value().is_string())
          throw std::invalid_argument(
              "operad: composition values must be strings");
        o.comp[{at.key(), i, bt.key()}] = bt.value().get<std::string>();
      }
    }
  return o;
}

}  // namespace graphkit
