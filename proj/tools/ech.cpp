// Command line driver. Builds models, computes graded homology, assembles
// connected-sum cones, runs the spectral-invariant sweep, and exposes the
// index / flow / spectrum reports, over the JSON and CSV formats of io.hpp.
//
// Exit codes: 0 success, 1 usage or parse failure, 2 validation or
// precondition failure. All output is deterministic for a fixed invocation.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <ech/ech.hpp>

namespace {

using ech::GradedComplex;
using ech::Rational;

// ---------------------------------------------------------------------------
// Output. Every verb renders a header + rows; csv and the aligned human table
// are two renderings of the same cells, so both modes carry the same numbers.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += ech::detail::csv_field(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string render_aligned(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  auto grow = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      width[i] = std::max(width[i], cells[i].size());
  };
  grow(t.header);
  for (const auto& r : t.rows) grow(r);
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += "  ";
      s += cells[i];
      if (i + 1 < cells.size()) s.append(width[i] - cells[i].size(), ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out += s + "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::string render(const Table& t, const std::string& format) {
  return format == "csv" ? render_csv(t) : render_aligned(t);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    ech::write_text(out_path, text);
}

void note(const std::string& text) { std::fputs((text + "\n").c_str(), stderr); }

// ---------------------------------------------------------------------------
// Model specs. A model argument is either a path to a complex file or a
// compact constructor:
//   ellipsoid:a:b[:L]    truncated ellipsoid boundary, rationals as "p/q"
//   s1xs2:N[:eps0]       2N-generator handle model with synthetic actions
//   random:n[:density]   seeded random complex with umap, seed from --seed

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at - start));
    if (at == std::string::npos) break;
    start = at + 1;
  }
  return out;
}

bool has_prefix(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

std::int64_t parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ech::ParseError(std::string("not an integer ") + what + ": '" + s + "'");
  }
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ech::ParseError(std::string("not a number ") + what + ": '" + s + "'");
  }
}

ech::EllipsoidModel parse_ellipsoid(const std::string& spec, const Rational& fallback_l) {
  auto f = split(spec, ':');
  if (f.size() != 3 && f.size() != 4)
    throw ech::ParseError("bad model spec '" + spec + "': want ellipsoid:a:b[:L]");
  Rational a = Rational::parse(f[1]);
  Rational b = Rational::parse(f[2]);
  Rational l = f.size() == 4 ? Rational::parse(f[3]) : fallback_l;
  return ech::ellipsoid(a, b, l);
}

GradedComplex load_model(const std::string& spec, std::uint64_t seed, const Rational& fallback_l) {
  if (has_prefix(spec, "ellipsoid:")) return parse_ellipsoid(spec, fallback_l).complex;
  if (has_prefix(spec, "s1xs2:")) {
    auto f = split(spec, ':');
    if (f.size() != 2 && f.size() != 3)
      throw ech::ParseError("bad model spec '" + spec + "': want s1xs2:N[:eps0]");
    std::int64_t n = parse_int(f[1], "mode count");
    Rational eps0 = f.size() == 3 ? Rational::parse(f[2]) : Rational(1, 1000);
    return ech::s1_x_s2(n, eps0).complex;
  }
  if (has_prefix(spec, "random:")) {
    auto f = split(spec, ':');
    if (f.size() != 2 && f.size() != 3)
      throw ech::ParseError("bad model spec '" + spec + "': want random:n[:density]");
    std::int64_t n = parse_int(f[1], "generator count");
    double density = f.size() == 3 ? parse_double(f[2], "density") : 0.3;
    return ech::random_model(seed, n, density, /*with_u=*/true);
  }
  return ech::read_complex(spec);
}

// Homotopy input for consum: a JSON array of [source_id, target_id] pairs over
// the tensor generators, same orientation as the differential arrays.
ech::SparseF2 read_k_map(const std::string& path, const GradedComplex& tensor_c) {
  ech::ordered_json j;
  try {
    j = ech::ordered_json::parse(ech::read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ech::ParseError(std::string("bad JSON: ") + e.what());
  }
  if (!j.is_array()) throw ech::ParseError("homotopy file must be an array of id pairs");
  auto idx = ech::id_index(tensor_c);
  ech::SparseF2 k = ech::SparseF2::zero(tensor_c.size(), tensor_c.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw ech::ParseError("homotopy entries must be [source_id, target_id] pairs");
    auto src = idx.find(e[0].get<std::string>());
    auto tgt = idx.find(e[1].get<std::string>());
    if (src == idx.end() || tgt == idx.end())
      throw ech::ParseError("homotopy pair names a generator outside the tensor complex");
    if (k.get(tgt->second, src->second))
      throw ech::ParseError("homotopy pair " + e[0].get<std::string>() + " -> " +
                            e[1].get<std::string>() + " appears twice");
    k.toggle(tgt->second, src->second);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Verbs.

int run_homology(const std::string& spec, std::uint64_t seed, const Rational& l, bool u_ranks,
                 const std::string& format) {
  GradedComplex c = load_model(spec, seed, l);
  ech::require_valid(c);
  if (u_ranks && !c.u) throw ech::Error("induced ranks need a umap on the input");
  ech::HomologyResult hs = ech::homology(c);
  Table t;
  t.header = {"grading", "dim"};
  if (u_ranks) t.header.push_back("u_rank");
  for (const auto& [g, n] : hs.dims()) {
    std::vector<std::string> row{std::to_string(g), std::to_string(n)};
    if (u_ranks) {
      auto it = hs.induced_u.find(g);
      row.push_back(std::to_string(it == hs.induced_u.end() ? 0 : ech::rank(it->second)));
    }
    t.rows.push_back(std::move(row));
  }
  emit(render(t, format), "");
  return 0;
}

int run_consum(const std::string& spec1, const std::string& spec2, std::uint64_t seed,
               const Rational& l, const std::string& eps_str, const std::string& k_file,
               const std::string& out, const std::string& format) {
  ech::ConeData data;
  data.c1 = load_model(spec1, seed, l);
  data.c2 = load_model(spec2, seed, l);
  if (!eps_str.empty()) data.eps = Rational::parse(eps_str);
  if (!k_file.empty()) data.k_map = read_k_map(k_file, ech::tensor(data.c1, data.c2));
  ech::ConeAssembly a = ech::assemble_cone(data);

  ech::HomologyResult cone_h = ech::homology(a.cone);
  ech::HomologyResult derived = ech::derived_tensor(data.c1, data.c2);
  auto cone_dims = cone_h.dims();
  auto tensor_dims = derived.dims();

  // Above the shallower factor's top grading the cone is a truncation
  // artifact; those rows are excluded from the comparison rather than failed.
  std::int64_t top1 = 0, top2 = 0;
  for (const auto& g : data.c1.generators) top1 = std::max(top1, g.grading);
  for (const auto& g : data.c2.generators) top2 = std::max(top2, g.grading);
  const std::int64_t frontier = std::min(top1, top2);

  std::set<std::int64_t> gradings;
  for (const auto& [g, n] : cone_dims) gradings.insert(g);
  for (const auto& [g, n] : tensor_dims) gradings.insert(g);

  bool failed = false;
  Table t;
  t.header = {"grading", "cone", "tensor", "status"};
  for (std::int64_t g : gradings) {
    auto ci = cone_dims.find(g);
    auto ti = tensor_dims.find(g);
    std::int64_t cn = ci == cone_dims.end() ? 0 : ci->second;
    std::int64_t tn = ti == tensor_dims.end() ? 0 : ti->second;
    std::string status = g > frontier ? "EXCLUDED" : (cn == tn ? "PASS" : "FAIL");
    if (status == "FAIL") failed = true;
    t.rows.push_back({std::to_string(g), std::to_string(cn), std::to_string(tn), status});
  }
  if (!out.empty()) {
    ech::write_complex(out, a.cone);
    ech::write_text(out + ".blocks.json", ech::blocks_to_json(a).dump(2) + "\n");
  }
  emit(render(t, format), "");
  return failed ? 2 : 0;
}

int run_conjecture(const std::string& spec1, const std::string& spec2, std::uint64_t seed,
                   const Rational& l, std::int64_t kmax, const std::string& eps_csv,
                   const std::string& format, const std::string& out) {
  std::vector<Rational> eps_list;
  for (const auto& tok : split(eps_csv, ',')) eps_list.push_back(Rational::parse(tok));
  GradedComplex c1 = load_model(spec1, seed, l);
  GradedComplex c2 = load_model(spec2, seed, l);
  ech::SweepResult r = ech::conjecture_sweep(c1, c2, kmax, eps_list);
  if (format == "csv") {
    emit(ech::sweep_csv(r), out);
  } else {
    Table t;
    t.header = {"eps", "k", "c_k_cone", "maxconv", "diff", "converged"};
    for (const auto& cell : r.cells)
      t.rows.push_back({cell.eps.str(), std::to_string(cell.k),
                        cell.c_cone ? cell.c_cone->str() : "NA",
                        cell.target ? cell.target->str() : "NA",
                        cell.diff ? cell.diff->str() : "NA",
                        cell.converged ? "true" : "false"});
    emit(render_aligned(t), out);
  }
  if (!r.all_converged) note("note: not all cells converged");
  return 0;
}

int run_spectral(const std::string& spec, std::uint64_t seed, const Rational& l,
                 std::int64_t kmax, const std::string& format, const std::string& out) {
  GradedComplex c = load_model(spec, seed, l);
  ech::SpectrumTable table = ech::c_k_table(ech::full_tower(c), kmax);
  if (table.depth_limited) note("note: " + table.depth_note);
  if (format == "csv") {
    emit(ech::spectral_csv(table), out);
  } else {
    Table t;
    t.header = {"k", "c_k", "witness", "threshold_index"};
    for (const auto& row : table.rows)
      t.rows.push_back({std::to_string(row.k), row.c_k.str(), row.witness,
                        std::to_string(row.threshold_index)});
    emit(render_aligned(t), out);
  }
  return 0;
}

int run_index(const std::string& preset, const std::string& format) {
  Table t;
  t.header = {"quantity", "value"};
  if (preset == "h") {
    std::int64_t cz = ech::cz_iterate(ech::preset_orbit_h(), 1);
    if (format == "csv") {
      t.rows.push_back({"cz_h", std::to_string(cz)});
      emit(render_csv(t), "");
    } else {
      emit("CZ(h)=" + std::to_string(cz) + "\n", "");
    }
    return 0;
  }
  ech::CurveData cd;
  if (preset == "PS")
    cd = ech::preset_ps();
  else if (preset == "PN")
    cd = ech::preset_pn();
  else
    cd = ech::preset_trivial_cylinder(ech::preset_orbit_h());
  ech::IndexCheck chk = ech::check_index_inequality(cd);
  if (format == "csv") {
    t.rows.push_back({"ind", std::to_string(chk.ind)});
    t.rows.push_back({"I", std::to_string(chk.I)});
    t.rows.push_back({"inequality", chk.ok ? "PASS" : "FAIL"});
    t.rows.push_back({"embedded_equality", chk.embedded_equality ? "yes" : "no"});
    emit(render_csv(t), "");
  } else {
    std::string s = "ind=" + std::to_string(chk.ind) + " I=" + std::to_string(chk.I) + "\n";
    s += std::string("inequality ind <= I: ") + (chk.ok ? "PASS" : "FAIL") + "\n";
    s += std::string("embedded equality: ") + (chk.embedded_equality ? "yes" : "no") + "\n";
    emit(s, "");
  }
  return chk.ok ? 0 : 2;
}

int run_flow(const std::optional<double>& t_opt, const std::string& format) {
  Table t;
  t.header = {"quantity", "value", "status"};
  if (t_opt) {
    ech::FlowSample s = ech::weinstein_flow(*t_opt);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        t.rows.push_back({"phi[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                          ech::detail::fmt_double(s.phi[static_cast<std::size_t>(4 * i + j)]),
                          "-"});
    if (*t_opt == 0.0) {
      double dev = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          dev = std::max(dev, std::abs(s.phi[static_cast<std::size_t>(4 * i + j)] -
                                       (i == j ? 1.0 : 0.0)));
      t.rows.push_back(
          {"identity check", ech::detail::fmt_double(dev), dev <= 1e-12 ? "PASS" : "FAIL"});
    }
  }
  ech::FlowReport rep = ech::flow_report();
  auto res = [&](const char* name, double v, double bound) {
    t.rows.push_back({name, ech::detail::fmt_double(v), v <= bound ? "PASS" : "FAIL"});
  };
  res("derivative residual", rep.max_derivative_residual, 1e-6);
  res("group law residual", rep.max_group_residual, 1e-9);
  res("symplectic residual", rep.max_symplectic_residual, 1e-9);
  res("determinant residual", rep.max_det_residual, 1e-9);
  res("block residual", rep.max_block_residual, 1e-9);
  res("eigendirection residual", rep.max_eigendirection_residual, 1e-9);
  t.rows.push_back({"hyperbolic", rep.hyperbolic ? "yes" : "no", rep.hyperbolic ? "PASS" : "FAIL"});
  t.rows.push_back({"rotation free", rep.cz_zero ? "yes" : "no", rep.cz_zero ? "PASS" : "FAIL"});
  t.rows.push_back({"overall", "-", rep.ok() ? "PASS" : "FAIL"});
  emit(render(t, format), "");
  return rep.ok() ? 0 : 2;
}

int run_spectrum(const std::string& s_csv, std::int64_t modes, std::int64_t mesh,
                 const std::string& format, const std::string& out) {
  auto f = split(s_csv, ',');
  if (f.size() != 4) throw ech::ParseError("--S needs four comma-separated entries");
  ech::Mat2 s{parse_double(f[0], "S entry"), parse_double(f[1], "S entry"),
              parse_double(f[2], "S entry"), parse_double(f[3], "S entry")};
  ech::SpectrumResult r = ech::asymptotic_spectrum(s, modes, mesh);
  if (format == "csv") {
    emit(ech::spectrum_csv(r), out);
  } else {
    Table t;
    t.header = {"eigenvalue", "winding"};
    for (const auto& e : r.modes)
      t.rows.push_back({ech::detail::fmt_double(e.lambda), std::to_string(e.winding)});
    emit(render_aligned(t), out);
  }
  // The eigenvalues hugging zero carry the rotation count of the orbit.
  const auto& ms = r.modes;
  std::size_t lo = 0;
  while (lo < ms.size() && ms[lo].lambda <= 0.0) ++lo;
  if (lo > 0 && lo < ms.size())
    note("edge eigenvalues: " + ech::detail::fmt_double(ms[lo - 1].lambda) + " (winding " +
         std::to_string(ms[lo - 1].winding) + ") below zero, " +
         ech::detail::fmt_double(ms[lo].lambda) + " (winding " + std::to_string(ms[lo].winding) +
         ") above; winding sum " + std::to_string(ms[lo - 1].winding + ms[lo].winding));
  return 0;
}

int run_model(const std::string& spec, std::uint64_t seed, const Rational& l,
              const std::string& out, const std::string& lattice_path,
              const std::string& catalog_path, const std::string& tower_prefix) {
  std::optional<ech::EllipsoidModel> em;
  GradedComplex c;
  if (has_prefix(spec, "ellipsoid:")) {
    em = parse_ellipsoid(spec, l);
    c = em->complex;
  } else {
    c = load_model(spec, seed, l);
  }
  if (!lattice_path.empty()) {
    if (!em) throw ech::ParseError("lattice export needs an ellipsoid spec");
    ech::write_text(lattice_path, ech::lattice_csv(*em));
  }
  if (!catalog_path.empty()) {
    if (!em) throw ech::ParseError("catalog export needs an ellipsoid spec");
    ech::write_catalog(catalog_path, em->catalog);
  }
  if (!tower_prefix.empty())
    ech::export_tower(tower_prefix, ech::make_tower(c, ech::auto_thresholds(c)));
  if (!out.empty())
    ech::write_complex(out, c);
  else if (lattice_path.empty() && catalog_path.empty() && tower_prefix.empty())
    emit(ech::render_complex(c), "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"embedded contact homology toolbox"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string l_str = "3";
  std::string spec1, spec2, out;
  std::string eps_str, k_file, eps_csv, preset, s_csv;
  std::string lattice_path, catalog_path, tower_prefix;
  std::int64_t kmax = 10, modes = 64, mesh = 0;
  bool u_ranks = false;
  double t_flag = 0.0;
  // Per-verb defaults: report verbs are tables, data verbs are csv.
  std::string fmt_hom = "table", fmt_consum = "table", fmt_index = "table", fmt_flow = "table";
  std::string fmt_conj = "csv", fmt_spectral = "csv", fmt_spectrum = "csv";

  const auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "seed for random model specs");
    cmd->add_option("--L", l_str, "action cutoff for ellipsoid specs without one");
  };
  const auto add_format = [](CLI::App* cmd, std::string& var) {
    cmd->add_option("--format", var, "output format")->check(CLI::IsMember({"table", "csv"}));
  };

  CLI::App* hom = app.add_subcommand("homology", "graded homology of a complex");
  hom->add_option("model", spec1, "complex file or model spec")->required();
  hom->add_flag("--u-ranks", u_ranks, "append the induced degree -2 ranks");
  add_model_flags(hom);

  CLI::App* consum = app.add_subcommand("consum", "connected sum cone vs derived tensor");
  consum->add_option("first", spec1, "first complex file or model spec")->required();
  consum->add_option("second", spec2, "second complex file or model spec")->required();
  consum->add_option("--eps", eps_str, "action of the handle generator h");
  consum->add_option("--k-file", k_file, "homotopy id pairs over the tensor complex");
  consum->add_option("-o,--out", out, "write the cone complex (and .blocks.json sidecar)");
  add_model_flags(consum);

  CLI::App* conj = app.add_subcommand("conjecture", "spectral invariant sweep over eps");
  conj->add_option("first", spec1, "first complex file or model spec")->required();
  conj->add_option("second", spec2, "second complex file or model spec")->required();
  conj->add_option("--kmax", kmax, "largest k in the sweep")->required();
  conj->add_option("--eps-list", eps_csv, "comma-separated handle actions")->required();
  conj->add_option("-o,--out", out, "write the sweep here instead of stdout");
  add_model_flags(conj);

  CLI::App* spectral = app.add_subcommand("spectral", "spectral invariant table c_k");
  spectral->add_option("model", spec1, "complex file or model spec")->required();
  spectral->add_option("--kmax", kmax, "largest k in the table");
  spectral->add_option("-o,--out", out, "write the table here instead of stdout");
  add_model_flags(spectral);

  CLI::App* index = app.add_subcommand("index", "index identities for the handle presets");
  index->add_option("--preset", preset, "PS, PN, cylinder, or h")
      ->required()
      ->check(CLI::IsMember({"PS", "PN", "cylinder", "h"}));

  CLI::App* flow = app.add_subcommand("flow", "linearized flow diagnostics");
  CLI::Option* t_opt = flow->add_option("--t", t_flag, "also print the flow sample at time t");

  CLI::App* spectrum = app.add_subcommand("spectrum", "asymptotic operator eigenvalues");
  spectrum->add_option("--S", s_csv, "symmetric matrix a,b,c,d")->required();
  spectrum->add_option("--modes", modes, "number of Fourier modes");
  spectrum->add_option("--mesh", mesh, "winding mesh (0 picks a safe default)");
  spectrum->add_option("-o,--out", out, "write the spectrum here instead of stdout");

  CLI::App* model = app.add_subcommand("model", "build a model and export its artifacts");
  model->add_option("spec", spec1, "complex file or model spec")->required();
  model->add_option("-o,--out", out, "write the complex here instead of stdout");
  model->add_option("--lattice", lattice_path, "write the ellipsoid lattice csv");
  model->add_option("--catalog", catalog_path, "write the orbit catalog");
  model->add_option("--tower", tower_prefix, "export the auto-threshold tower under this prefix");
  add_model_flags(model);

  add_format(hom, fmt_hom);
  add_format(consum, fmt_consum);
  add_format(conj, fmt_conj);
  add_format(spectral, fmt_spectral);
  add_format(index, fmt_index);
  add_format(flow, fmt_flow);
  add_format(spectrum, fmt_spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Rational l = Rational::parse(l_str);
    if (*hom) return run_homology(spec1, seed, l, u_ranks, fmt_hom);
    if (*consum) return run_consum(spec1, spec2, seed, l, eps_str, k_file, out, fmt_consum);
    if (*conj) return run_conjecture(spec1, spec2, seed, l, kmax, eps_csv, fmt_conj, out);
    if (*spectral) return run_spectral(spec1, seed, l, kmax, fmt_spectral, out);
    if (*index) return run_index(preset, fmt_index);
    if (*flow)
      return run_flow(t_opt->count() ? std::optional<double>(t_flag) : std::nullopt, fmt_flow);
    if (*spectrum) return run_spectrum(s_csv, modes, mesh, fmt_spectrum, out);
    if (*model)
      return run_model(spec1, seed, l, out, lattice_path, catalog_path, tower_prefix);
  } catch (const ech::ValidationError& e) {
    note(e.report.summary(64));
    return 2;
  } catch (const ech::ParseError& e) {
    note(std::string("error: ") + e.what());
    return 1;
  } catch (const ech::Error& e) {
    note(std::string("error: ") + e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    note(std::string("error: ") + e.what());
    return 2;
  }
  return 0;
}
