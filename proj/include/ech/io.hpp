#pragma once

// Serialization: the complex interchange format (JSON), orbit catalog
// files, tower exports, the consum block sidecar, and the CSV renderers.
//
// Interchange complexes name entries by generator id, never by index, so a
// file survives reordering and round-trips losslessly. Malformed syntax or
// field types throw ParseError; id-level problems (duplicates, pairs naming
// unknown generators) throw ValidationError carrying every offender.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "connect.hpp"
#include "errors.hpp"
#include "filtration.hpp"
#include "flow.hpp"
#include "models.hpp"
#include "orbits.hpp"
#include "rational.hpp"
#include "spectral.hpp"

namespace ech {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline const ordered_json& need(const ordered_json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string(where) + " is missing '" + key + "'");
  return j.at(key);
}

inline std::string need_string(const ordered_json& j, const char* key, const char* where) {
  const ordered_json& v = need(j, key, where);
  if (!v.is_string()) throw ParseError(std::string(where) + "." + key + " must be a string");
  return v.get<std::string>();
}

inline std::int64_t need_int(const ordered_json& j, const char* key, const char* where) {
  const ordered_json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ParseError(std::string(where) + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

inline Rational need_rational(const ordered_json& j, const char* key, const char* where) {
  const ordered_json& v = need(j, key, where);
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string())
    throw ParseError(std::string(where) + "." + key + " must be a \"p/q\" string");
  return Rational::parse(v.get<std::string>());
}

inline std::vector<std::int64_t> int_array(const ordered_json& v, const char* where) {
  if (!v.is_array()) throw ParseError(std::string(where) + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer())
      throw ParseError(std::string(where) + " must contain only integers");
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

// Quote a CSV field only when it needs it.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += "\"";
  return q;
}

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

inline ordered_json label_to_json(const ClassLabel& l) {
  ordered_json j;
  j["free"] = l.free;
  j["torsion"] = l.torsion;
  j["moduli"] = l.moduli;
  return j;
}

inline ClassLabel label_from_json(const ordered_json& j) {
  ClassLabel l;
  l.free = detail::int_array(detail::need(j, "free", "class"), "class.free");
  l.torsion = detail::int_array(detail::need(j, "torsion", "class"), "class.torsion");
  l.moduli = detail::int_array(detail::need(j, "moduli", "class"), "class.moduli");
  try {
    normalize(l);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad class label: ") + e.what());
  }
  return l;
}

inline ordered_json complex_to_json(const GradedComplex& c) {
  ordered_json j;
  j["generators"] = ordered_json::array();
  for (const auto& g : c.generators) {
    ordered_json item;
    item["id"] = g.id;
    item["grading"] = g.grading;
    item["action"] = g.action.str();
    if (!g.label.trivial_shape()) item["class"] = label_to_json(g.label);
    j["generators"].push_back(std::move(item));
  }
  auto pairs = [&c](const SparseF2& m) {
    ordered_json arr = ordered_json::array();
    for (index_t jcol = 0; jcol < static_cast<index_t>(m.n_cols()); ++jcol)
      for (index_t i : m.cols[static_cast<std::size_t>(jcol)])
        arr.push_back({c.generators[static_cast<std::size_t>(jcol)].id,
                       c.generators[static_cast<std::size_t>(i)].id});
    return arr;
  };
  j["differential"] = pairs(c.d);
  if (c.u) j["umap"] = pairs(*c.u);
  return j;
}

inline GradedComplex complex_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ParseError("complex file must be a JSON object");
  const ordered_json& gens = detail::need(j, "generators", "complex");
  if (!gens.is_array()) throw ParseError("'generators' must be an array");

  GradedComplex c;
  std::map<std::string, index_t> index;
  ValidationReport rep;
  for (const auto& item : gens) {
    Generator g;
    g.id = detail::need_string(item, "id", "generator");
    if (g.id.empty()) throw ParseError("generator with empty id");
    g.grading = detail::need_int(item, "grading", "generator");
    g.action = detail::need_rational(item, "action", "generator");
    if (item.contains("class")) g.label = label_from_json(item.at("class"));
    auto [it, fresh] = index.emplace(g.id, static_cast<index_t>(c.generators.size()));
    if (!fresh)
      rep.items.push_back({"duplicate-id", "generator id '" + g.id + "' appears twice", true});
    c.generators.push_back(std::move(g));
  }

  const index_t n = c.size();
  auto read_pairs = [&](const ordered_json& arr, const char* what) {
    SparseF2 m = SparseF2::zero(n, n);
    if (!arr.is_array()) throw ParseError(std::string("'") + what + "' must be an array");
    for (const auto& pair : arr) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
        throw ParseError(std::string("'") + what + "' entries must be [source_id, target_id]");
      auto src = index.find(pair[0].get<std::string>());
      auto tgt = index.find(pair[1].get<std::string>());
      if (src == index.end() || tgt == index.end()) {
        rep.items.push_back({"unknown-id",
                             std::string(what) + " entry [" + pair[0].get<std::string>() + ", " +
                                 pair[1].get<std::string>() + "] names a missing generator",
                             true});
        continue;
      }
      if (m.get(tgt->second, src->second))
        rep.items.push_back({"duplicate-pair",
                             std::string(what) + " entry [" + pair[0].get<std::string>() + ", " +
                                 pair[1].get<std::string>() + "] appears twice",
                             true});
      else
        m.toggle(tgt->second, src->second);
    }
    return m;
  };

  c.d = read_pairs(detail::need(j, "differential", "complex"), "differential");
  if (j.contains("umap")) c.u = read_pairs(j.at("umap"), "umap");
  if (!rep.ok()) throw ValidationError(std::move(rep));
  return c;
}

inline std::string render_complex(const GradedComplex& c) { return complex_to_json(c).dump(2) + "\n"; }

inline GradedComplex parse_complex(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  return complex_from_json(j);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline GradedComplex read_complex(const std::string& path) {
  return parse_complex(read_text(path));
}

inline void write_complex(const std::string& path, const GradedComplex& c) {
  write_text(path, render_complex(c));
}

// --------------------------------------------------------------------------
// Orbit catalog files.

inline ordered_json catalog_to_json(const std::vector<Orbit>& orbits) {
  ordered_json arr = ordered_json::array();
  for (const auto& o : orbits) {
    ordered_json item;
    item["id"] = o.id;
    item["kind"] = to_string(o.kind);
    if (o.kind == OrbitKind::elliptic)
      item["rotation"] = o.rotation.str();
    else
      item["winding"] = o.winding;
    item["action"] = o.action.str();
    if (!o.label.trivial_shape()) item["class"] = label_to_json(o.label);
    arr.push_back(std::move(item));
  }
  return arr;
}

inline std::vector<Orbit> catalog_from_json(const ordered_json& arr) {
  if (!arr.is_array()) throw ParseError("orbit catalog must be a JSON array");
  std::vector<Orbit> out;
  for (const auto& item : arr) {
    Orbit o;
    o.id = detail::need_string(item, "id", "orbit");
    o.kind = orbit_kind_from_string(detail::need_string(item, "kind", "orbit"));
    if (o.kind == OrbitKind::elliptic)
      o.rotation = detail::need_rational(item, "rotation", "orbit");
    else
      o.winding = detail::need_int(item, "winding", "orbit");
    o.action = detail::need_rational(item, "action", "orbit");
    if (item.contains("class")) o.label = label_from_json(item.at("class"));
    out.push_back(std::move(o));
  }
  return out;
}

inline std::vector<Orbit> read_catalog(const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad JSON: ") + e.what());
  }
  return catalog_from_json(j);
}

inline void write_catalog(const std::string& path, const std::vector<Orbit>& orbits) {
  write_text(path, catalog_to_json(orbits).dump(2) + "\n");
}

// --------------------------------------------------------------------------
// Tower export: one complex file per level plus an index of thresholds.

inline void export_tower(const std::string& prefix, const FilteredTower& t) {
  ordered_json idx;
  idx["thresholds"] = ordered_json::array();
  idx["levels"] = ordered_json::array();
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    std::string file = prefix + "_level_" + std::to_string(i) + ".json";
    write_complex(file, t.levels[i]);
    idx["thresholds"].push_back(t.thresholds[i].str());
    idx["levels"].push_back(file);
  }
  std::string base = prefix + "_base.json";
  write_complex(base, t.base);
  idx["base"] = base;
  write_text(prefix + "_index.json", idx.dump(2) + "\n");
}

// --------------------------------------------------------------------------
// consum sidecar: the four blocks by cone generator ids.

inline ordered_json blocks_to_json(const ConeAssembly& a) {
  ordered_json j;
  j["n_o"] = a.n_o;
  j["eps"] = a.eps.str();
  auto block = [&](const SparseF2& m, bool src_h, bool tgt_h) {
    ordered_json arr = ordered_json::array();
    const index_t n = a.n_o;
    for (index_t col = 0; col < static_cast<index_t>(m.n_cols()); ++col)
      for (index_t row : m.cols[static_cast<std::size_t>(col)]) {
        index_t s = src_h ? n + col : col;
        index_t t = tgt_h ? n + row : row;
        arr.push_back({a.cone.generators[static_cast<std::size_t>(s)].id,
                       a.cone.generators[static_cast<std::size_t>(t)].id});
      }
    return arr;
  };
  j["blocks"]["d_oo"] = block(a.blocks.d_oo, false, false);
  j["blocks"]["d_oh"] = block(a.blocks.d_oh, true, false);
  j["blocks"]["d_ho"] = block(a.blocks.d_ho, false, true);
  j["blocks"]["d_hh"] = block(a.blocks.d_hh, true, true);
  return j;
}

// --------------------------------------------------------------------------
// CSV renderers.

inline std::string lattice_csv(const EllipsoidModel& m) {
  std::string s = "m,n,action,grading\n";
  for (const auto& row : m.lattice)
    s += std::to_string(row.m) + "," + std::to_string(row.n) + "," + row.action.str() + "," +
         std::to_string(row.grading) + "\n";
  return s;
}

inline std::string spectrum_csv(const SpectrumResult& r) {
  std::string s = "eigenvalue,winding\n";
  for (const auto& e : r.modes)
    s += detail::fmt_double(e.lambda) + "," + std::to_string(e.winding) + "\n";
  return s;
}

inline std::string spectral_csv(const SpectrumTable& t) {
  std::string s = "k,c_k,witness,threshold_index\n";
  for (const auto& row : t.rows)
    s += std::to_string(row.k) + "," + row.c_k.str() + "," + detail::csv_field(row.witness) +
         "," + std::to_string(row.threshold_index) + "\n";
  return s;
}

inline std::string sweep_csv(const SweepResult& r) {
  std::string s = "eps,k,c_k_cone,maxconv,diff,converged\n";
  for (const auto& cell : r.cells) {
    s += cell.eps.str() + "," + std::to_string(cell.k) + ",";
    s += (cell.c_cone ? cell.c_cone->str() : std::string("NA")) + ",";
    s += (cell.target ? cell.target->str() : std::string("NA")) + ",";
    s += (cell.diff ? cell.diff->str() : std::string("NA")) + ",";
    s += cell.converged ? "true" : "false";
    s += "\n";
  }
  return s;
}

}  // namespace ech
