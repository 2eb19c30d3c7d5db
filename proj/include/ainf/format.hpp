#pragma once

// JSON instance files. See docs/format.md for the layout. Emission is
// deterministic: object keys are sorted and scalars are exact strings.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ainf/bifib.hpp"
#include "ainf/generator.hpp"

namespace ainf {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* format_name = "ainf-instance";
inline constexpr int format_version = 1;

/// Raised for malformed or inconsistent input files. `path` names the
/// offending field, e.g. "structures.mu.products.2".
class InputError : public Error {
 public:
  InputError(const std::string& path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct FieldSpec {
  std::uint64_t prime = 0;  // 0 for the rationals

  bool rational() const { return prime == 0; }
  std::string to_string() const { return prime ? "F" + std::to_string(prime) : std::string("Q"); }

  /// "Q" or "F<p>".
  static FieldSpec parse(const std::string& s) {
    FieldSpec f;
    if (s == "Q") return f;
    if (s.size() > 1 && s[0] == 'F' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
      f.prime = std::stoull(s.substr(1));
      if (!is_prime(f.prime) || f.prime > ModP::max_modulus) throw InputError("field", "modulus " + s.substr(1) + " is not a prime below 2^31");
      return f;
    }
    throw InputError("field", "expected Q or F<p>, got '" + s + "'");
  }

  /// Default from AINF_FIELD, else the rationals.
  static FieldSpec from_environment() {
    const char* v = std::getenv("AINF_FIELD");
    if (!v || !*v) return FieldSpec{};
    return parse(v);
  }

  template <Field K>
  K unit() const {
    if constexpr (std::is_same_v<K, ModP>) {
      return ModP(1, prime);
    } else {
      return K::from_int(1);
    }
  }

  template <Field K>
  K parse_scalar(const std::string& s) const {
    if constexpr (std::is_same_v<K, ModP>) {
      return ModP::parse(s, prime);
    } else {
      return K::parse(s);
    }
  }

  /// Canonical string; prime-field values are reduced into 0..p-1.
  template <Field K>
  std::string emit_scalar(const K& x) const {
    if constexpr (std::is_same_v<K, ModP>) {
      return (x * ModP(1, prime)).to_string();
    } else {
      return x.to_string();
    }
  }

  template <Field K>
  bool is_zero(const K& x) const {
    if constexpr (std::is_same_v<K, ModP>) {
      return (x * ModP(1, prime)).is_zero();
    } else {
      return x.is_zero();
    }
  }
};

struct Metadata {
  int truncation = 4;
  std::optional<std::uint64_t> seed;
  std::string tool_version = ainf::tool_version;
};

template <Field K>
struct NamedComplex {
  std::string space;
  ChainComplex<K> value;
};
template <Field K>
struct NamedStructure {
  std::string complex;
  AInfAlgebra<K> value;
};
template <Field K>
struct NamedMorphism {
  std::string source, target;
  AInfMorphism<K> value;
};
template <Field K>
struct NamedHomotopy {
  std::string from, to;
  AInfHomotopy<K> value;
};
struct NamedEquivalence {
  std::string source, target;  // complexes
  std::string f, g, h;         // maps
  std::optional<std::string> k;
};
struct NamedCertificate {
  std::string left, right, S, T, eta;
};
struct NamedTransfer {
  std::string structure, F, G, H;
};

/// Everything one file holds. All cross references are by name.
template <Field K>
struct Bundle {
  FieldSpec field;
  Metadata metadata;
  std::map<std::string, GradedSpace> spaces;
  std::map<std::string, NamedComplex<K>> complexes;
  std::map<std::string, MultiMap<K>> maps;
  std::map<std::string, NamedStructure<K>> structures;
  std::map<std::string, NamedMorphism<K>> morphisms;
  std::map<std::string, NamedHomotopy<K>> homotopies;
  std::map<std::string, NamedEquivalence> equivalences;
  std::map<std::string, NamedCertificate> certificates;
  std::map<std::string, NamedTransfer> transfers;

  /// Name of the space object equal to s.
  std::string space_name(const GradedSpace& s) const {
    for (const auto& [n, v] : spaces)
      if (v == s) return n;
    throw Error("space " + s.name() + " is not registered in the bundle");
  }
  std::string complex_name(const ChainComplex<K>& c) const {
    for (const auto& [n, v] : complexes)
      if (v.value == c) return n;
    throw Error("complex over " + c.space().name() + " is not registered in the bundle");
  }
  std::string structure_name(const AInfAlgebra<K>& a) const {
    for (const auto& [n, v] : structures)
      if (v.value == a) return n;
    throw Error("structure over " + a.space().name() + " is not registered in the bundle");
  }
  std::string morphism_name(const AInfMorphism<K>& m) const {
    for (const auto& [n, v] : morphisms)
      if (v.value == m) return n;
    throw Error("morphism is not registered in the bundle");
  }

  /// Registration helpers; each returns the name used, which gets a numeric
  /// suffix when taken. With reuse_equal an equal object already present is
  /// returned instead; the ends of morphisms and homotopies are registered
  /// that way. Spaces are keyed by their own name.
  std::string add_space(const GradedSpace& s) {
    const std::string& name = s.base_name();
    if (s.shift() != 0) throw Error("only unsuspended spaces are stored");
    auto it = spaces.find(name);
    if (it != spaces.end()) {
      if (!(it->second == s)) throw Error("two different spaces named '" + name + "'");
      return name;
    }
    spaces.emplace(name, s);
    return name;
  }
  std::string add_complex(const std::string& name, const ChainComplex<K>& c) {
    for (const auto& [n, v] : complexes)
      if (v.value == c) return n;
    const std::string s = add_space(c.space());
    const std::string fresh = unique_name(complexes, name);
    complexes.emplace(fresh, NamedComplex<K>{s, c});
    return fresh;
  }
  std::string add_map(const std::string& name, const MultiMap<K>& m) {
    add_space(m.source());
    add_space(m.target());
    const std::string fresh = unique_name(maps, name);
    maps.emplace(fresh, m);
    return fresh;
  }
  std::string add_structure(const std::string& name, const AInfAlgebra<K>& a, bool reuse_equal = false) {
    if (reuse_equal)
      for (const auto& [n, v] : structures)
        if (v.value == a) return n;
    const std::string c = add_complex(a.space().base_name(), a.complex());
    const std::string fresh = unique_name(structures, name);
    structures.emplace(fresh, NamedStructure<K>{c, a});
    return fresh;
  }
  std::string add_morphism(const std::string& name, const AInfMorphism<K>& m, bool reuse_equal = false) {
    if (reuse_equal)
      for (const auto& [n, v] : morphisms)
        if (v.value == m) return n;
    const std::string s = add_structure(name + ".source", m.source(), true);
    const std::string t = add_structure(name + ".target", m.target(), true);
    const std::string fresh = unique_name(morphisms, name);
    morphisms.emplace(fresh, NamedMorphism<K>{s, t, m});
    return fresh;
  }
  std::string add_homotopy(const std::string& name, const AInfHomotopy<K>& h) {
    const std::string f = add_morphism(name + ".from", h.from(), true);
    const std::string t = add_morphism(name + ".to", h.to(), true);
    const std::string fresh = unique_name(homotopies, name);
    homotopies.emplace(fresh, NamedHomotopy<K>{f, t, h});
    return fresh;
  }

 private:
  /// `base`, or `base_2`, `base_3`, ... when taken.
  template <class Map>
  static std::string unique_name(const Map& m, const std::string& base) {
    if (!m.count(base)) return base;
    for (int i = 2;; ++i) {
      std::string n = base + "_" + std::to_string(i);
      if (!m.count(n)) return n;
    }
  }
};

namespace detail {

using json = nlohmann::json;

inline std::string join_degrees(const std::vector<int>& ds) {
  std::string s;
  for (std::size_t i = 0; i < ds.size(); ++i) s += (i ? "," : "") + std::to_string(ds[i]);
  return s;
}

inline int parse_int(const std::string& path, const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw InputError(path, "'" + s + "' is not an integer");
  }
  if (pos != s.size() || v < -1000000 || v > 1000000) throw InputError(path, "'" + s + "' is not a small integer");
  return static_cast<int>(v);
}

inline std::vector<int> parse_degree_key(const std::string& path, const std::string& key) {
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = key.find(',', start);
    out.push_back(parse_int(path, key.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw InputError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string get_string(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) throw InputError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline int get_int(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number_integer()) throw InputError(path + "." + key, "expected an integer");
  return v.get<int>();
}

inline void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw InputError(path, "unknown field '" + it.key() + "'");
  }
}

/// Blocks of a map: "d1,...,dk" -> [[[i1,...,ik], j, "value"], ...] with
/// local indices, j indexing the target degree sum + degree.
template <Field K>
json emit_blocks(const MultiMap<K>& m, const FieldSpec& field) {
  const GradedSpace& s = m.source();
  const GradedSpace& t = m.target();
  std::map<std::string, json> blocks;
  for (const auto& [in, col] : m.columns()) {
    const std::vector<int> tup = decode_tuple(s, m.arity(), in);
    std::vector<int> degs, locs;
    for (int g : tup) {
      degs.push_back(s.degree_of(g));
      locs.push_back(s.local_index(g));
    }
    json& block = blocks[join_degrees(degs)];
    if (block.is_null()) block = json::array();
    for (const auto& [out, x] : col) {
      if (field.is_zero(x)) continue;
      block.push_back(json::array({locs, t.local_index(static_cast<int>(out)), field.emit_scalar(x)}));
    }
    if (block.empty()) blocks.erase(join_degrees(degs));
  }
  json out = json::object();
  for (auto& [k, v] : blocks) out[k] = std::move(v);
  return out;
}

template <Field K>
MultiMap<K> parse_blocks(const json& blocks, const std::string& path, const GradedSpace& s, const GradedSpace& t,
                         int arity, int degree, const FieldSpec& field) {
  if (!blocks.is_object()) throw InputError(path, "blocks must be an object keyed by degree tuples");
  MultiMap<K> m(s, t, arity, degree);
  const TupleCodec in_codec(s.dim(), arity);
  for (auto it = blocks.begin(); it != blocks.end(); ++it) {
    const std::string bpath = path + "[\"" + it.key() + "\"]";
    const std::vector<int> degs = parse_degree_key(bpath, it.key());
    if (static_cast<int>(degs.size()) != arity) throw InputError(bpath, "degree tuple length differs from the arity");
    int out_deg = degree;
    for (int d : degs) {
      if (s.dim(d) == 0) throw InputError(bpath, "source space has no basis in degree " + std::to_string(d));
      out_deg += d;
    }
    if (!it.value().is_array()) throw InputError(bpath, "expected an array of entries");
    std::size_t idx = 0;
    for (const json& e : it.value()) {
      const std::string epath = bpath + "[" + std::to_string(idx++) + "]";
      if (!e.is_array() || e.size() != 3 || !e[0].is_array() || !e[1].is_number_integer() || !e[2].is_string())
        throw InputError(epath, "entry must be [[input indices], output index, \"value\"]");
      if (static_cast<int>(e[0].size()) != arity) throw InputError(epath, "wrong number of input indices");
      std::vector<int> tup;
      for (std::size_t i = 0; i < e[0].size(); ++i) {
        if (!e[0][i].is_number_integer()) throw InputError(epath, "input index must be an integer");
        const int li = e[0][i].get<int>();
        if (li < 0 || li >= s.dim(degs[i]))
          throw InputError(epath, "input index " + std::to_string(li) + " out of range in degree " + std::to_string(degs[i]));
        tup.push_back(s.global_index(degs[i], li));
      }
      const int lo = e[1].get<int>();
      if (lo < 0 || lo >= t.dim(out_deg))
        throw InputError(epath, "output index " + std::to_string(lo) + " out of range in degree " + std::to_string(out_deg));
      K x;
      try {
        x = field.parse_scalar<K>(e[2].get<std::string>());
      } catch (const InputError&) {
        throw;
      } catch (const Error& err) {
        throw InputError(epath, err.what());
      }
      if (!m.at(in_codec.encode(tup), static_cast<Code>(t.global_index(out_deg, lo))).is_zero())
        throw InputError(epath, "duplicate entry");
      m.add_code(in_codec.encode(tup), static_cast<Code>(t.global_index(out_deg, lo)), x);
    }
  }
  return m;
}

/// {"degree": d, "blocks": {...}} for a component whose shape is implied.
template <Field K>
json emit_component(const MultiMap<K>& m, const FieldSpec& field) {
  return json{{"degree", m.degree()}, {"blocks", emit_blocks(m, field)}};
}

template <Field K>
MultiMap<K> parse_component(const json& j, const std::string& path, const GradedSpace& s, const GradedSpace& t,
                            int arity, int expected_degree, const FieldSpec& field) {
  only_keys(j, path, {"degree", "blocks"});
  const int degree = get_int(j, path, "degree");
  if (degree != expected_degree)
    throw InputError(path, "degree profile violation: degree " + std::to_string(degree) + ", expected " +
                               std::to_string(expected_degree));
  return parse_blocks<K>(member(j, path, "blocks"), path + ".blocks", s, t, arity, degree, field);
}

template <Field K>
json emit_components(const std::map<int, MultiMap<K>>& comps, const FieldSpec& field) {
  json out = json::object();
  for (const auto& [k, m] : comps) out[std::to_string(k)] = emit_component(m, field);
  return out;
}

/// Parses {"k": component} with k in [lo, truncation]; degree of arity k is k + offset.
template <Field K>
std::map<int, MultiMap<K>> parse_components(const json& j, const std::string& path, const GradedSpace& s,
                                            const GradedSpace& t, int lo, int truncation, int offset,
                                            const FieldSpec& field) {
  if (!j.is_object()) throw InputError(path, "expected an object keyed by arity");
  std::map<int, MultiMap<K>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string cpath = path + "." + it.key();
    const int k = parse_int(cpath, it.key());
    if (k < lo || k > truncation)
      throw InputError(cpath, "arity " + std::to_string(k) + " outside " + std::to_string(lo) + ".." +
                                  std::to_string(truncation));
    out.emplace(k, parse_component<K>(it.value(), cpath, s, t, k, k + offset, field));
  }
  return out;
}

template <class Map>
const typename Map::mapped_type& resolve(const Map& m, const std::string& path, const std::string& kind,
                                         const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) throw InputError(path, "undefined " + kind + " '" + name + "'");
  return it->second;
}

}  // namespace detail

/// Reads only the field descriptor (to choose the scalar type).
inline FieldSpec peek_field(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("", "top level must be an object");
  auto it = j.find("field");
  if (it == j.end()) return FieldSpec::from_environment();
  detail::only_keys(*it, "field", {"kind", "modulus"});
  const std::string kind = detail::get_string(*it, "field", "kind");
  if (kind == "rational") return FieldSpec{};
  if (kind == "prime") {
    const int p = detail::get_int(*it, "field", "modulus");
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)) || static_cast<std::uint64_t>(p) > ModP::max_modulus)
      throw InputError("field.modulus", "not a prime below 2^31");
    return FieldSpec{static_cast<std::uint64_t>(p)};
  }
  throw InputError("field.kind", "expected \"rational\" or \"prime\"");
}

inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("", std::string("malformed JSON: ") + e.what());
  }
}

template <Field K>
Bundle<K> parse_bundle(const nlohmann::json& j) {
  using detail::get_string;
  using detail::member;
  using detail::resolve;
  Bundle<K> b;
  b.field = peek_field(j);
  detail::only_keys(j, "", {"format", "version", "field", "metadata", "spaces", "complexes", "maps", "structures",
                            "morphisms", "homotopies", "equivalences", "certificates", "transfers"});
  if (j.contains("format") && (!j["format"].is_string() || j["format"] != format_name))
    throw InputError("format", std::string("expected \"") + format_name + "\"");
  if (j.contains("version") && (!j["version"].is_number_integer() || j["version"] != format_version))
    throw InputError("version", "unsupported format version");

  if (j.contains("metadata")) {
    const auto& m = j["metadata"];
    detail::only_keys(m, "metadata", {"truncation", "seed", "tool_version"});
    if (m.contains("truncation")) {
      b.metadata.truncation = detail::get_int(m, "metadata", "truncation");
      if (b.metadata.truncation < 1 || b.metadata.truncation > 12)
        throw InputError("metadata.truncation", "must be in 1..12");
    }
    if (m.contains("seed")) {
      if (!m["seed"].is_number_unsigned()) throw InputError("metadata.seed", "expected a non-negative integer");
      b.metadata.seed = m["seed"].get<std::uint64_t>();
    }
    if (m.contains("tool_version")) b.metadata.tool_version = get_string(m, "metadata", "tool_version");
  }
  auto section = [&](const char* key) -> const nlohmann::json& {
    static const nlohmann::json empty = nlohmann::json::object();
    auto it = j.find(key);
    if (it == j.end()) return empty;
    if (!it->is_object()) throw InputError(key, "expected an object keyed by name");
    return *it;
  };
  auto check_fresh = [&](const std::string& path, const std::string& name) {
    if (name.empty()) throw InputError(path, "empty name");
  };

  for (const auto& [name, v] : section("spaces").items()) {
    const std::string path = "spaces." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"dims"});
    const auto& dims = member(v, path, "dims");
    if (!dims.is_object()) throw InputError(path + ".dims", "expected an object keyed by degree");
    std::map<int, int> d;
    for (const auto& [deg, n] : dims.items()) {
      if (!n.is_number_integer() || n.template get<int>() < 1)
        throw InputError(path + ".dims." + deg, "dimension must be a positive integer");
      d[detail::parse_int(path + ".dims", deg)] = n.template get<int>();
    }
    try {
      b.spaces.emplace(name, GradedSpace(name, d));
    } catch (const Error& e) {
      throw InputError(path, e.what());
    }
  }
  for (const auto& [name, v] : section("complexes").items()) {
    const std::string path = "complexes." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"space", "differential"});
    const std::string sname = get_string(v, path, "space");
    const GradedSpace& s = resolve(b.spaces, path + ".space", "space", sname);
    MultiMap<K> d = detail::parse_component<K>(member(v, path, "differential"), path + ".differential", s, s, 1, -1,
                                               b.field);
    try {
      b.complexes.emplace(name, NamedComplex<K>{sname, ChainComplex<K>(s, d)});
    } catch (const Error& e) {
      throw InputError(path, e.what());
    }
  }
  for (const auto& [name, v] : section("maps").items()) {
    const std::string path = "maps." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"source", "target", "arity", "degree", "blocks"});
    const GradedSpace& s = resolve(b.spaces, path + ".source", "space", get_string(v, path, "source"));
    const GradedSpace& t = resolve(b.spaces, path + ".target", "space", get_string(v, path, "target"));
    const int arity = detail::get_int(v, path, "arity");
    if (arity < 1 || arity > 12) throw InputError(path + ".arity", "must be in 1..12");
    const int degree = detail::get_int(v, path, "degree");
    b.maps.emplace(name, detail::parse_blocks<K>(member(v, path, "blocks"), path + ".blocks", s, t, arity, degree,
                                                 b.field));
  }
  for (const auto& [name, v] : section("structures").items()) {
    const std::string path = "structures." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"complex", "truncation", "products"});
    const std::string cname = get_string(v, path, "complex");
    const ChainComplex<K>& c = resolve(b.complexes, path + ".complex", "complex", cname).value;
    int n = b.metadata.truncation;
    if (v.contains("truncation")) n = detail::get_int(v, path, "truncation");
    if (n < 1 || n > 12) throw InputError(path + ".truncation", "must be in 1..12");
    std::map<int, MultiMap<K>> prods;
    if (v.contains("products"))
      prods = detail::parse_components<K>(v["products"], path + ".products", c.space(), c.space(), 2, n, -2, b.field);
    b.structures.emplace(name, NamedStructure<K>{cname, AInfAlgebra<K>(c, prods, n)});
  }
  for (const auto& [name, v] : section("morphisms").items()) {
    const std::string path = "morphisms." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"source", "target", "components"});
    const std::string sn = get_string(v, path, "source");
    const std::string tn = get_string(v, path, "target");
    const AInfAlgebra<K>& s = resolve(b.structures, path + ".source", "structure", sn).value;
    const AInfAlgebra<K>& t = resolve(b.structures, path + ".target", "structure", tn).value;
    if (s.truncation() != t.truncation()) throw InputError(path, "source and target truncations differ");
    std::map<int, MultiMap<K>> comps;
    if (v.contains("components"))
      comps = detail::parse_components<K>(v["components"], path + ".components", s.space(), t.space(), 1,
                                          s.truncation(), -1, b.field);
    b.morphisms.emplace(name, NamedMorphism<K>{sn, tn, AInfMorphism<K>(s, t, comps)});
  }
  for (const auto& [name, v] : section("homotopies").items()) {
    const std::string path = "homotopies." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"from", "to", "components"});
    const std::string fn = get_string(v, path, "from");
    const std::string tn = get_string(v, path, "to");
    const AInfMorphism<K>& f = resolve(b.morphisms, path + ".from", "morphism", fn).value;
    const AInfMorphism<K>& t = resolve(b.morphisms, path + ".to", "morphism", tn).value;
    if (!(f.source() == t.source()) || !(f.target() == t.target()))
      throw InputError(path, "bordering morphisms have different ends");
    std::map<int, MultiMap<K>> comps;
    if (v.contains("components"))
      comps = detail::parse_components<K>(v["components"], path + ".components", f.source().space(),
                                          f.target().space(), 1, f.truncation(), 0, b.field);
    b.homotopies.emplace(name, NamedHomotopy<K>{fn, tn, AInfHomotopy<K>(f, t, comps)});
  }
  for (const auto& [name, v] : section("equivalences").items()) {
    const std::string path = "equivalences." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"source", "target", "f", "g", "h", "k"});
    NamedEquivalence e;
    e.source = get_string(v, path, "source");
    e.target = get_string(v, path, "target");
    resolve(b.complexes, path + ".source", "complex", e.source);
    resolve(b.complexes, path + ".target", "complex", e.target);
    e.f = get_string(v, path, "f");
    e.g = get_string(v, path, "g");
    e.h = get_string(v, path, "h");
    for (const std::string* m : {&e.f, &e.g, &e.h}) resolve(b.maps, path, "map", *m);
    if (v.contains("k")) {
      e.k = get_string(v, path, "k");
      resolve(b.maps, path + ".k", "map", *e.k);
    }
    b.equivalences.emplace(name, e);
  }
  for (const auto& [name, v] : section("certificates").items()) {
    const std::string path = "certificates." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"left", "right", "S", "T", "eta"});
    NamedCertificate c{get_string(v, path, "left"), get_string(v, path, "right"), get_string(v, path, "S"),
                       get_string(v, path, "T"), get_string(v, path, "eta")};
    for (const std::string* m : {&c.left, &c.right, &c.S, &c.T}) resolve(b.morphisms, path, "morphism", *m);
    resolve(b.homotopies, path + ".eta", "homotopy", c.eta);
    b.certificates.emplace(name, c);
  }
  for (const auto& [name, v] : section("transfers").items()) {
    const std::string path = "transfers." + name;
    check_fresh(path, name);
    detail::only_keys(v, path, {"structure", "F", "G", "H"});
    NamedTransfer t{get_string(v, path, "structure"), get_string(v, path, "F"), get_string(v, path, "G"),
                    get_string(v, path, "H")};
    resolve(b.structures, path + ".structure", "structure", t.structure);
    resolve(b.morphisms, path + ".F", "morphism", t.F);
    resolve(b.morphisms, path + ".G", "morphism", t.G);
    resolve(b.homotopies, path + ".H", "homotopy", t.H);
    b.transfers.emplace(name, t);
  }
  return b;
}

template <Field K>
nlohmann::json emit_bundle(const Bundle<K>& b) {
  using json = nlohmann::json;
  json j = json::object();
  j["format"] = format_name;
  j["version"] = format_version;
  j["field"] = b.field.rational() ? json{{"kind", "rational"}}
                                  : json{{"kind", "prime"}, {"modulus", b.field.prime}};
  json meta{{"truncation", b.metadata.truncation}, {"tool_version", b.metadata.tool_version}};
  if (b.metadata.seed) meta["seed"] = *b.metadata.seed;
  j["metadata"] = meta;
  auto put = [&](const char* key, const std::string& name, json v) {
    if (!j.contains(key)) j[key] = json::object();
    j[key][name] = std::move(v);
  };
  for (const auto& [n, s] : b.spaces) {
    json dims = json::object();
    for (const auto& [deg, d] : s.dims()) dims[std::to_string(deg)] = d;
    put("spaces", n, json{{"dims", dims}});
  }
  for (const auto& [n, c] : b.complexes)
    put("complexes", n, json{{"space", c.space}, {"differential", detail::emit_component(c.value.differential(), b.field)}});
  for (const auto& [n, m] : b.maps)
    put("maps", n,
        json{{"source", b.space_name(m.source())},
             {"target", b.space_name(m.target())},
             {"arity", m.arity()},
             {"degree", m.degree()},
             {"blocks", detail::emit_blocks(m, b.field)}});
  for (const auto& [n, s] : b.structures)
    put("structures", n,
        json{{"complex", s.complex},
             {"truncation", s.value.truncation()},
             {"products", detail::emit_components(s.value.products(), b.field)}});
  for (const auto& [n, m] : b.morphisms)
    put("morphisms", n,
        json{{"source", m.source}, {"target", m.target}, {"components", detail::emit_components(m.value.components(), b.field)}});
  for (const auto& [n, h] : b.homotopies)
    put("homotopies", n,
        json{{"from", h.from}, {"to", h.to}, {"components", detail::emit_components(h.value.components(), b.field)}});
  for (const auto& [n, e] : b.equivalences) {
    json v{{"source", e.source}, {"target", e.target}, {"f", e.f}, {"g", e.g}, {"h", e.h}};
    if (e.k) v["k"] = *e.k;
    put("equivalences", n, v);
  }
  for (const auto& [n, c] : b.certificates)
    put("certificates", n, json{{"left", c.left}, {"right", c.right}, {"S", c.S}, {"T", c.T}, {"eta", c.eta}});
  for (const auto& [n, t] : b.transfers)
    put("transfers", n, json{{"structure", t.structure}, {"F", t.F}, {"G", t.G}, {"H", t.H}});
  return j;
}

namespace detail {

/// Objects are indented with sorted keys; an array of arrays gets one
/// element per line; any other array without objects stays on one line.
inline void write_pretty(std::string& out, const nlohmann::json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  std::function<std::string(const nlohmann::json&)> inline_json = [&](const nlohmann::json& x) {
    if (!x.is_array()) return x.dump();
    std::string s = "[";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + inline_json(x[i]);
    return s + "]";
  };
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + nlohmann::json(it.key()).dump() + ": ";
      write_pretty(out, it.value(), indent + 2);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += close + "}";
  } else if (j.is_array() && !j.empty() &&
             std::all_of(j.begin(), j.end(), [](const nlohmann::json& x) { return x.is_array(); })) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) out += pad + inline_json(j[i]) + (i + 1 < j.size() ? ",\n" : "\n");
    out += close + "]";
  } else {
    out += inline_json(j);
  }
}

}  // namespace detail

/// Canonical text: sorted keys, two-space indentation, one map entry per
/// line, trailing newline.
template <Field K>
std::string emit_text(const Bundle<K>& b) {
  std::string out;
  detail::write_pretty(out, emit_bundle(b), 0);
  return out + "\n";
}

template <Field K>
Bundle<K> parse_text(const std::string& text) {
  return parse_bundle<K>(parse_json_text(text));
}

// ---------------------------------------------------------------------------
// Rebuilding typed objects from a bundle.

template <Field K>
HomotopyEquivalenceData<K> equivalence_data(const Bundle<K>& b, const NamedEquivalence& e) {
  HomotopyEquivalenceData<K> d{b.maps.at(e.f), b.maps.at(e.g), b.maps.at(e.h), std::nullopt};
  if (e.k) d.k = b.maps.at(*e.k);
  return d;
}

template <Field K>
SquareCertificate<K> certificate(const Bundle<K>& b, const NamedCertificate& c) {
  return SquareCertificate<K>{b.morphisms.at(c.left).value, b.morphisms.at(c.right).value, b.morphisms.at(c.S).value,
                              b.morphisms.at(c.T).value, b.homotopies.at(c.eta).value};
}

}  // namespace ainf
