#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sheafcoh/cli.hpp"
#include "sheafcoh/errors.hpp"

namespace sheafcoh::cli {

namespace {

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InputError(where + ": unknown key \"" + key + "\"");
  }
}

const Json& required(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing key \"" + key + "\"");
  return *it;
}

Integer parse_integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InputError(where + ": expected an integer");
}

Json integer_json(const Integer& v) {
  if (v.fits_int64()) return v.to_int64();
  return v.to_string();
}

std::size_t parse_size(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

std::size_t element_index(const site::Poset& x, const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": element names must be strings");
  auto idx = x.index_of(j.get<std::string>());
  if (!idx) throw InputError(where + ": unknown element \"" + j.get<std::string>() + "\"");
  return *idx;
}

site::Poset parse_poset(const Json& j, const std::string& where) {
  only_keys(j, {"elements", "relations"}, where);
  const Json& el = required(j, "elements", where);
  if (!el.is_array()) throw InputError(where + ".elements: expected an array");
  std::vector<std::string> names;
  for (const auto& e : el) {
    if (!e.is_string()) throw InputError(where + ".elements: names must be strings");
    names.push_back(e.get<std::string>());
  }
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) throw InputError(where + ".elements: duplicate element name");
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  if (auto it = j.find("relations"); it != j.end()) {
    if (!it->is_array()) throw InputError(where + ".relations: expected an array");
    for (const auto& r : *it) {
      if (!r.is_array() || r.size() != 2) throw InputError(where + ".relations: each relation is a pair [lower, upper]");
      auto find = [&](const Json& n) {
        if (!n.is_string()) throw InputError(where + ".relations: element names must be strings");
        for (std::size_t i = 0; i < names.size(); ++i)
          if (names[i] == n.get<std::string>()) return i;
        throw InputError(where + ".relations: unknown element \"" + n.get<std::string>() + "\"");
      };
      rel.emplace_back(find(r[0]), find(r[1]));
    }
  }
  return site::Poset::from_relations(std::move(names), rel);
}

Json serialize_poset(const site::Poset& x) {
  Json j = Json::object();
  j["elements"] = x.names();
  Json rel = Json::array();
  for (auto [a, b] : x.covers()) rel.push_back(Json::array({x.name(a), x.name(b)}));
  j["relations"] = std::move(rel);
  return j;
}

Json serialize_complex(const chains::FreeComplex& c) {
  Json j = Json::object();
  j["lo"] = c.lo;
  j["ranks"] = c.ranks;
  Json d = Json::array();
  for (const auto& m : c.differentials) d.push_back(serialize_matrix(m));
  j["differentials"] = std::move(d);
  return j;
}

chains::FreeComplex parse_complex(const Json& j, const std::string& where) {
  only_keys(j, {"lo", "ranks", "differentials"}, where);
  chains::FreeComplex c;
  const Json& lo = required(j, "lo", where);
  if (!lo.is_number_integer()) throw InputError(where + ".lo: expected an integer");
  c.lo = lo.get<int>();
  const Json& ranks = required(j, "ranks", where);
  if (!ranks.is_array()) throw InputError(where + ".ranks: expected an array");
  for (const auto& r : ranks) c.ranks.push_back(parse_size(r, where + ".ranks"));
  const Json& diffs = required(j, "differentials", where);
  if (!diffs.is_array()) throw InputError(where + ".differentials: expected an array");
  if (c.ranks.empty() ? !diffs.empty() : diffs.size() + 1 != c.ranks.size())
    throw InputError(where + ".differentials: need one matrix between consecutive terms");
  for (std::size_t i = 0; i < diffs.size(); ++i)
    c.differentials.push_back(parse_matrix(diffs[i], c.ranks[i + 1], c.ranks[i], where + ".differentials"));
  std::string why;
  if (!c.verify(&why)) throw InputError(where + ": " + why);
  return c;
}

}  // namespace

Json serialize_matrix(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(integer_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMatrix parse_matrix(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": matrix must be a nested array");
  IntMatrix m(rows, cols);
  if (rows == 0 || cols == 0) {
    // Degenerate shapes: [] or a list of empty rows.
    if (j.empty()) return m;
  }
  if (j.size() != rows) throw InputError(where + ": matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InputError(where + ": matrix row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = parse_integer(j[i][k], where);
  }
  return m;
}

Json serialize_group(const abgroup::FpAbGroup& g) {
  // Short form when the presentation is exactly one cyclic relation per generator.
  std::vector<Integer> orders(g.ambient_rank(), Integer(0));
  const IntMatrix& rel = g.relations();
  bool simple = true;
  for (std::size_t c = 0; c < rel.cols() && simple; ++c) {
    std::size_t nonzero = 0, at = 0;
    for (std::size_t i = 0; i < rel.rows(); ++i)
      if (!rel(i, c).is_zero()) {
        ++nonzero;
        at = i;
      }
    simple = nonzero == 1 && rel(at, c).sign() > 0 && orders[at].is_zero();
    if (simple) orders[at] = rel(at, c);
  }
  Json j = Json::object();
  if (simple && abgroup::FpAbGroup::from_invariant_factors(orders).relations() == rel) {
    Json arr = Json::array();
    for (const auto& o : orders) arr.push_back(integer_json(o));
    j["invariant_factors"] = std::move(arr);
    return j;
  }
  j["ambient_rank"] = g.ambient_rank();
  j["relations"] = serialize_matrix(rel);
  return j;
}

abgroup::FpAbGroup parse_group(const Json& j, const std::string& where) {
  auto cyclic = [&](const Json& list) {
    if (!list.is_array()) throw InputError(where + ": expected a list of cyclic orders");
    std::vector<Integer> orders;
    for (const auto& o : list) {
      Integer v = parse_integer(o, where);
      if (v.sign() < 0) throw InputError(where + ": cyclic orders must be non-negative");
      orders.push_back(v);
    }
    return abgroup::FpAbGroup::from_invariant_factors(orders);
  };
  if (j.is_array()) return cyclic(j);
  if (!j.is_object()) throw InputError(where + ": expected a group");
  if (j.contains("invariant_factors")) {
    only_keys(j, {"invariant_factors"}, where);
    return cyclic(j["invariant_factors"]);
  }
  only_keys(j, {"ambient_rank", "relations"}, where);
  std::size_t rank = parse_size(required(j, "ambient_rank", where), where + ".ambient_rank");
  std::size_t cols = 0;
  auto it = j.find("relations");
  if (it != j.end() && it->is_array() && !it->empty() && (*it)[0].is_array()) cols = (*it)[0].size();
  if (it == j.end()) return abgroup::FpAbGroup(rank, IntMatrix(rank, 0));
  return abgroup::FpAbGroup(rank, parse_matrix(*it, rank, cols, where + ".relations"));
}

Instance parse_instance(const Json& j) {
  only_keys(j, {"name", "poset", "sheaf", "coefficients", "perfect_complex", "map"}, "instance");
  Instance inst;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw InputError("instance.name: expected a string");
    inst.name = it->get<std::string>();
  }
  inst.poset = parse_poset(required(j, "poset", "instance"), "poset");
  const site::Poset& x = inst.poset;

  const Json& sj = required(j, "sheaf", "instance");
  only_keys(sj, {"stalks", "restrictions"}, "sheaf");
  const Json& stalks_j = required(sj, "stalks", "sheaf");
  if (!stalks_j.is_object()) throw InputError("sheaf.stalks: expected an object keyed by element");
  std::vector<abgroup::FpAbGroup> stalks(x.size());
  std::vector<bool> given(x.size(), false);
  for (const auto& [key, value] : stalks_j.items()) {
    auto idx = x.index_of(key);
    if (!idx) throw InputError("sheaf.stalks: unknown element \"" + key + "\"");
    stalks[*idx] = parse_group(value, "sheaf.stalks." + key);
    given[*idx] = true;
  }
  for (std::size_t e = 0; e < x.size(); ++e)
    if (!given[e]) throw InputError("sheaf.stalks: missing stalk for \"" + x.name(e) + "\"");
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, IntMatrix>> maps;
  if (auto it = sj.find("restrictions"); it != sj.end()) {
    if (!it->is_array()) throw InputError("sheaf.restrictions: expected an array");
    for (const auto& r : *it) {
      only_keys(r, {"from", "to", "matrix"}, "sheaf.restrictions");
      std::size_t a = element_index(x, required(r, "from", "sheaf.restrictions"), "sheaf.restrictions");
      std::size_t b = element_index(x, required(r, "to", "sheaf.restrictions"), "sheaf.restrictions");
      const std::string where = "sheaf.restrictions " + x.name(a) + " -> " + x.name(b);
      for (const auto& [key, m] : maps)
        if (key == std::make_pair(a, b)) throw InputError(where + ": given twice");
      maps.push_back({{a, b}, parse_matrix(required(r, "matrix", where.c_str()), stalks[b].ambient_rank(),
                                           stalks[a].ambient_rank(), where)});
    }
  }
  inst.sheaf = site::Sheaf::from_covers(x, std::move(stalks), maps);

  if (auto it = j.find("coefficients"); it != j.end()) inst.coefficients = parse_group(*it, "coefficients");
  if (auto it = j.find("perfect_complex"); it != j.end()) inst.perfect_complex = parse_complex(*it, "perfect_complex");
  if (auto it = j.find("map"); it != j.end()) {
    only_keys(*it, {"target", "assignment"}, "map");
    site::MonotoneMap f;
    f.source = x;
    f.target = parse_poset(required(*it, "target", "map"), "map.target");
    const Json& asg = required(*it, "assignment", "map");
    if (!asg.is_object()) throw InputError("map.assignment: expected an object keyed by element");
    f.assignment.assign(x.size(), 0);
    std::vector<bool> seen(x.size(), false);
    for (const auto& [key, value] : asg.items()) {
      auto idx = x.index_of(key);
      if (!idx) throw InputError("map.assignment: unknown source element \"" + key + "\"");
      f.assignment[*idx] = element_index(f.target, value, "map.assignment");
      seen[*idx] = true;
    }
    for (std::size_t e = 0; e < x.size(); ++e)
      if (!seen[e]) throw InputError("map.assignment: missing value for \"" + x.name(e) + "\"");
    std::string why;
    if (!f.verify(&why)) throw InputError(why);
    inst.map = std::move(f);
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed instance document: ") + e.what());
  }
  return parse_instance(j);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

Json serialize_instance(const Instance& inst) {
  Json j = Json::object();
  if (!inst.name.empty()) j["name"] = inst.name;
  const site::Poset& x = inst.poset;
  j["poset"] = serialize_poset(x);
  Json sheaf = Json::object();
  Json stalks = Json::object();
  for (std::size_t e = 0; e < x.size(); ++e) stalks[x.name(e)] = serialize_group(inst.sheaf.stalk(e));
  sheaf["stalks"] = std::move(stalks);
  Json rest = Json::array();
  for (auto [a, b] : x.covers()) {
    if (inst.sheaf.stalk(a).ambient_rank() == 0 || inst.sheaf.stalk(b).ambient_rank() == 0) continue;
    Json r = Json::object();
    r["from"] = x.name(a);
    r["to"] = x.name(b);
    r["matrix"] = serialize_matrix(inst.sheaf.restriction_matrix(a, b));
    rest.push_back(std::move(r));
  }
  sheaf["restrictions"] = std::move(rest);
  j["sheaf"] = std::move(sheaf);
  if (inst.coefficients) j["coefficients"] = serialize_group(*inst.coefficients);
  if (inst.perfect_complex) j["perfect_complex"] = serialize_complex(*inst.perfect_complex);
  if (inst.map) {
    Json m = Json::object();
    m["target"] = serialize_poset(inst.map->target);
    Json asg = Json::object();
    for (std::size_t e = 0; e < x.size(); ++e) asg[x.name(e)] = inst.map->target.name(inst.map->assignment[e]);
    m["assignment"] = std::move(asg);
    j["map"] = std::move(m);
  }
  return j;
}

namespace {

bool is_flat(const Json& j) {
  if (!j.is_array()) return !j.is_structured();
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

bool is_matrix_like(const Json& j) {
  return is_flat(j) ||
         (j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_array() && is_flat(e); }));
}

// Scalar arrays and matrices stay on one line; everything else is indented.
void pretty(const Json& j, int indent, std::string& out) {
  bool inline_form = is_matrix_like(j);
  if (!inline_form && j.is_object() && std::all_of(j.begin(), j.end(), is_matrix_like))
    inline_form = j.dump().size() <= 100;
  if (inline_form || j.empty()) {
    out += j.dump();
    return;
  }
  std::string pad(indent + 2, ' ');
  bool obj = j.is_object();
  out += obj ? "{\n" : "[\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (obj) out += Json(it.key()).dump() + ": ";
    pretty(it.value(), indent + 2, out);
  }
  out += "\n" + std::string(indent, ' ') + (obj ? "}" : "]");
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  pretty(j, 0, out);
  return out + "\n";
}

// ---------------------------------------------------------------- fixtures

site::Poset pc4() {
  return site::Poset::from_relations({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

site::Poset ss6() {
  return site::Poset::from_relations({"a", "b", "c", "d", "p", "q"},
                                     {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {2, 5}, {3, 5}});
}

Instance fixture(const std::string& name, long long stalk, std::optional<long long> coefficients) {
  Instance inst;
  if (name == "PC4") inst.poset = pc4();
  else if (name == "SS6") inst.poset = ss6();
  else if (name == "point") inst.poset = site::Poset::point();
  else throw InputError("unknown fixture \"" + name + "\" (known: PC4, SS6, point)");
  inst.name = name;
  inst.sheaf = site::constant_sheaf(inst.poset, abgroup::FpAbGroup::cyclic(Integer(stalk)));
  if (coefficients) inst.coefficients = abgroup::FpAbGroup::cyclic(Integer(*coefficients));
  return inst;
}

}  // namespace sheafcoh::cli
