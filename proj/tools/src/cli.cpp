#include "lh3cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

namespace lh3::cli {

namespace {

// ---------------------------------------------------------------------------
// Small helpers

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + text + "' in " + what);
  }
}

json cjson(cd z) { return json::array({z.real(), z.imag()}); }

// Runs fn over every item on all hardware threads; results keep item order.
template <class T, class Fn>
std::vector<T> parallel_map(const std::vector<cd>& items, Fn fn) {
  std::vector<T> out(items.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, items.size()));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&](std::size_t w) {
    for (std::size_t k = w; k < items.size(); k += workers) {
      try {
        out[k] = fn(items[k]);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<cd> active_nodes(const Grid& g) {
  std::vector<cd> nodes;
  for (int j = 0; j < g.size(); ++j)
    for (int i = 0; i < g.size(); ++i)
      if (g.active(i, j)) nodes.push_back(g.node(i, j));
  return nodes;
}

cd domain_center(const Domain& d) {
  return d.clip_to_disk ? d.disk_center : 0.5 * (d.lower + d.upper);
}

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct Stats {
  double max = 0.0;
  double sum = 0.0;
  std::size_t count = 0;

  void add(double x) {
    if (std::isnan(x)) return;
    max = std::max(max, x);
    sum += x;
    ++count;
  }
  double mean() const { return count ? sum / double(count) : 0.0; }
};

json summary(const Stats& s, bool pass) {
  return {{"max_residual", s.max},
          {"mean_residual", s.mean()},
          {"samples", s.count},
          {"verdict", pass ? "pass" : "fail"}};
}

json header(const std::string& command, const RunConfig& cfg) {
  return {{"schema", kSchemaVersion}, {"command", command}, {"config", cfg.to_json()}};
}

bool is_alpha_family(const std::string& name) {
  return name == "sphere" || name == "horosphere" || name == "totally-geodesic" ||
         name == "alpha";
}

double reference_or(const CatalogChart& cc, const RunConfig& cfg, cd nu) {
  if (cfg.r) return *cfg.r;
  if (cc.reference_r) return cc.reference_r(nu);
  return 0.0;
}

// ---------------------------------------------------------------------------
// verify suites

Report verify_sachs(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const double tol = cfg.tol.value_or(1e-6);
  std::vector<double> rs;
  if (cfg.r)
    rs = {*cfg.r};
  else
    for (int k = -3; k <= 3; ++k) rs.push_back(k);
  struct Row {
    bool ok = false;
    double residual = 0.0;
    int focal_skipped = 0;
    std::string error;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      const Jet2 jet = cc.chart->jet2(nu);
      const std::vector<double> focal = focal_parameters(jet);
      for (double r : rs) {
        const bool near_focal = std::any_of(focal.begin(), focal.end(), [&](double rf) {
          return std::abs(r - rf) < kFocalMargin;
        });
        if (near_focal) {
          ++row.focal_skipped;
          continue;
        }
        row.residual = std::max(row.residual, sachs_residual(jet, r).max());
        row.ok = true;
      }
      row.ok = row.ok && std::isfinite(row.residual);
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  });
  Report rep;
  rep.body = header("verify sachs", cfg);
  Stats st;
  std::size_t skipped = 0, focal = 0;
  json samples = json::array();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    json s = {{"nu", cjson(nodes[k])}};
    focal += rows[k].focal_skipped;
    if (rows[k].focal_skipped) s["focal_r_skipped"] = rows[k].focal_skipped;
    if (rows[k].ok) {
      s["residual"] = rows[k].residual;
      st.add(rows[k].residual);
    } else {
      s["skipped"] = rows[k].error.empty() ? "non-finite" : rows[k].error;
      ++skipped;
    }
    samples.push_back(s);
  }
  const bool pass = st.count > 0 && st.max <= tol;
  rep.body["per_sample"] = samples;
  rep.body["summary"] = summary(st, pass);
  rep.body["summary"]["skipped"] = skipped;
  rep.body["summary"]["focal_r_skipped"] = focal;
  rep.body["summary"]["r_values"] = rs;
  rep.verdict = std::string("sachs: max residual ") + format_double(st.max) +
                (pass ? " (pass)" : " (fail)");
  rep.exit_code = pass ? kExitOk : kExitAssertion;
  return rep;
}

Report verify_det(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const double tol = cfg.tol.value_or(1e-8);
  struct Row {
    bool ok = false;
    DetIdentity d;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      row.d = det_identity(cc.chart->jet2(nu), reference_or(cc, cfg, nu));
      row.ok = std::isfinite(row.d.residual_corrected);
    } catch (const Error&) {
    }
    return row;
  });
  Report rep;
  rep.body = header("verify det-identity", cfg);
  Stats st, printed;
  json samples = json::array();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    json s = {{"nu", cjson(nodes[k])}};
    if (rows[k].ok) {
      const DetIdentity& d = rows[k].d;
      s["det"] = d.det;
      s["residual"] = d.residual_corrected;
      s["residual_printed_constant"] = d.residual_printed;
      s["ratio_to_printed"] = d.ratio;
      st.add(d.residual_corrected);
      printed.add(d.residual_printed);
    } else {
      s["skipped"] = "degenerate frame";
    }
    samples.push_back(s);
  }
  const bool pass = st.count > 0 && st.max <= tol;
  rep.body["per_sample"] = samples;
  rep.body["summary"] = summary(st, pass);
  rep.body["summary"]["max_residual_printed_constant"] = printed.max;
  rep.verdict = "det-identity: max relative residual " + format_double(st.max) +
                (pass ? " (pass)" : " (fail)");
  rep.exit_code = pass ? kExitOk : kExitAssertion;
  return rep;
}

Report verify_codazzi(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const double tol = cfg.tol.value_or(1e-8);
  struct Row {
    bool ok = false;
    double residual = 0.0;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      if (!classify_point(cc.chart->jet2(nu)).lagrangian)
        throw Error(ErrorKind::NotLagrangian, "identity needs a Lagrangian chart");
      row.residual = codazzi_residual(graph_data(*cc.chart, nu, 3));
      row.ok = std::isfinite(row.residual);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotLagrangian) throw;
    }
    return row;
  });
  Report rep;
  rep.body = header("verify codazzi", cfg);
  Stats st;
  json samples = json::array();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    json s = {{"nu", cjson(nodes[k])}};
    if (rows[k].ok) {
      s["residual"] = rows[k].residual;
      st.add(rows[k].residual);
    } else {
      s["skipped"] = "not a rank-2 graph here";
    }
    samples.push_back(s);
  }
  const bool pass = st.count > 0 && st.max <= tol;
  rep.body["per_sample"] = samples;
  rep.body["summary"] = summary(st, pass);
  rep.verdict = "codazzi: max residual " + format_double(st.max) + (pass ? " (pass)" : " (fail)");
  rep.exit_code = pass ? kExitOk : kExitAssertion;
  return rep;
}

Report verify_main_theorem(const RunConfig& cfg, const CatalogChart& cc,
                           const Grid& grid) {
  const double tol_K = cfg.tol.value_or(1e-5);
  const double tol_defect = 1e-4;
  const cd nu0 = [&] {
    const auto [i, j] = grid.nearest_active(domain_center(grid.domain()));
    if (i < 0) throw ConfigError("grid has no active nodes");
    return grid.node(i, j);
  }();
  const double r0 = reference_or(cc, cfg, nu0);
  const TheoremReport t = main_theorem_check(*cc.chart, grid, nu0, r0, tol_K, tol_defect);

  Report rep;
  rep.body = header("verify main-theorem", cfg);
  Stats wedge;
  json samples = json::array();
  for (const TheoremSample& s : t.samples) {
    json j = {{"nu", cjson(s.nu)}, {"rank", s.rank}};
    j["K"] = s.has_K ? json(s.K) : json(nullptr);
    j["defect"] = s.has_defect ? json(s.defect) : json(nullptr);
    j["wedge_residual"] = s.has_wedge ? json(s.wedge_residual) : json(nullptr);
    j["lambda"] = json::array({s.lambda1, s.lambda2});
    j["kappa"] = s.kappa;
    if (s.rank == 1) j["rank1_product"] = s.rank1_product;
    if (s.has_wedge) wedge.add(s.wedge_residual);
    samples.push_back(j);
  }
  const bool wedge_ok = wedge.max <= 1e-5;
  const bool pass = t.consistent && wedge_ok;
  rep.body["per_sample"] = samples;
  rep.body["summary"] = summary(wedge, pass);
  json& sm = rep.body["summary"];
  sm["max_K"] = t.max_K;
  sm["max_defect"] = t.max_defect;
  sm["max_rank1_product"] = t.max_rank1_product;
  sm["tol_K"] = tol_K;
  sm["tol_defect"] = tol_defect;
  sm["scalar_flat"] = t.scalar_flat;
  sm["weingarten"] = t.weingarten;
  sm["consistent"] = t.consistent;
  sm["flat_points"] = t.flat_points;
  sm["degenerate_points"] = t.degenerate_points;
  sm["focal_points"] = t.focal_points;
  sm["r0"] = r0;
  rep.verdict = std::string("main-theorem: ") +
                (t.weingarten ? "weingarten" : "not weingarten") + ", " +
                (t.scalar_flat ? "scalar flat" : "not scalar flat") +
                " (max |K| " + format_double(t.max_K) + ", max defect " +
                format_double(t.max_defect) + ")" + (pass ? " (pass)" : " (fail)");
  rep.exit_code = pass ? kExitOk : kExitAssertion;
  return rep;
}

Report verify_cmc1(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const double tol = cfg.tol.value_or(1e-7);
  const Cmc1Report c = cmc1_test(*cc.chart, grid);
  Report rep;
  rep.body = header("verify cmc1", cfg);
  // The condition holds exactly when sigma0 is holomorphic.
  const bool condition_holds = c.max_condition_residual <= tol;
  const bool pass = c.degenerate ||
                    (c.cmc1 ? condition_holds && c.max_rho_residual <= tol
                            : !condition_holds);
  Stats st;
  st.add(c.max_condition_residual);
  rep.body["per_sample"] = json::array();
  rep.body["summary"] = summary(st, pass);
  json& sm = rep.body["summary"];
  sm["cmc1"] = c.cmc1;
  sm["degenerate"] = c.degenerate;
  sm["max_dbar_sigma0"] = c.max_dbar_sigma0;
  sm["max_rho_residual"] = c.max_rho_residual;
  sm["max_condition_residual"] = c.max_condition_residual;
  rep.verdict = std::string("cmc1: ") + (c.cmc1 ? "orthogonal CMC-1 surfaces" : "no CMC-1 surface") +
                (c.degenerate ? " (sigma0 = 0)" : "") + (pass ? " (pass)" : " (fail)");
  rep.exit_code = pass ? kExitOk : kExitAssertion;
  return rep;
}

Report verify_sphere(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  if (!cfg.center) throw ConfigError("sphere-equation needs --center");
  const UpperHalfPoint center = *cfg.center;
  const double tol = cfg.tol.value_or(1e-10);
  struct Row {
    bool ok = false;
    double residual = 0.0;
    double distance = 0.0;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      const auto [m1, m2] = cc.chart->eval(nu);
      row.residual = sphere_equation_residual(center, m1, m2);
      row.distance = closest_approach(cc.chart->geodesic(nu), center).distance;
      row.ok = true;
    } catch (const Error&) {
    }
    return row;
  });
  Report rep;
  rep.body = header("verify sphere-equation", cfg);
  Stats st, dist;
  json samples = json::array();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    json s = {{"nu", cjson(nodes[k])}};
    if (rows[k].ok) {
      s["residual"] = rows[k].residual;
      s["distance_to_center"] = rows[k].distance;
      st.add(rows[k].residual);
      dist.add(rows[k].distance);
    } else {
      s["skipped"] = "chart singular";
    }
    samples.push_back(s);
  }
  const bool pass = st.count > 0 && st.max <= tol && dist.max <= 1e-9;
  rep.body["per_sample"] = samples;
  rep.body["summary"] = summary(st, pass);
  rep.body["summary"]["max_distance_to_center"] = dist.max;
  rep.verdict = "sphere-equation: max residual " + format_double(st.max) +
                ", max distance " + format_double(dist.max) + (pass ? " (pass)" : " (fail)");
  rep.exit_code = pass ? kExitOk : kExitAssertion;
  return rep;
}

// ---------------------------------------------------------------------------
// exports

std::string csv_row(const std::vector<double>& v) {
  std::string line;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) line += ',';
    line += format_double(v[k]);
  }
  return line + '\n';
}

std::string export_scalars(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  struct Row {
    bool ok = false;
    cd mu1, mu2;
    OpticalScalars s;
    double r = 0.0;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      const Jet2 jet = cc.chart->jet2(nu);
      row.mu1 = jet.mu1.f;
      row.mu2 = jet.mu2.f;
      row.r = reference_or(cc, cfg, nu);
      row.s = optical_scalars(jet, row.r);
      row.ok = true;
    } catch (const Error&) {
    }
    return row;
  });
  std::string out = "# lh3 scalars v1\n";
  out += "nu_re,nu_im,r,mu1_re,mu1_im,mu2_re,mu2_im,rho_re,rho_im,sigma_re,sigma_im,delta,kappa\n";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!rows[k].ok) continue;
    const Row& w = rows[k];
    out += csv_row({nodes[k].real(), nodes[k].imag(), w.r, w.mu1.real(), w.mu1.imag(),
                    w.mu2.real(), w.mu2.imag(), w.s.rho.real(), w.s.rho.imag(),
                    w.s.sigma.real(), w.s.sigma.imag(), w.s.delta, w.s.kappa});
  }
  return out;
}

std::string export_metric(const CatalogChart& cc, const Grid& grid) {
  struct Row {
    bool ok = false;
    MetricSample m;
    double K = NAN;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      row.m = pullback_metric(*cc.chart, nu);
      row.ok = true;
      const int rank = classify_point(cc.chart->jet2(nu)).rank;
      row.K = gauss_K(*cc.chart, nu, rank == 2 ? KMethod::ClosedForm : KMethod::Rank1Chain);
    } catch (const Error&) {
    }
    return row;
  });
  std::string out = "# lh3 induced-metric v1; signature: -1 lorentz, 0 degenerate, 1 riemannian\n";
  out += "nu_re,nu_im,g_uu,g_uv,g_vv,det,signature,K\n";
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!rows[k].ok) continue;
    const MetricSample& m = rows[k].m;
    const double sig = m.signature == Signature::Lorentz ? -1.0
                       : m.signature == Signature::Degenerate ? 0.0
                                                              : 1.0;
    out += csv_row({nodes[k].real(), nodes[k].imag(), m.g_uu, m.g_uv, m.g_vv, m.det, sig,
                    rows[k].K});
  }
  return out;
}

RField integrate_for_export(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const auto [i, j] = grid.nearest_active(domain_center(grid.domain()));
  if (i < 0) throw ConfigError("grid has no active nodes");
  const cd nu0 = grid.node(i, j);
  return integrate_r(*cc.chart, grid, nu0, reference_or(cc, cfg, nu0));
}

std::string export_r_field(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const RField rf = integrate_for_export(cfg, cc, grid);
  const bool ref = cc.reference_r && !cfg.r;
  std::string out = "# lh3 r-field v1\n";
  out += ref ? "nu_re,nu_im,r,r_reference\n" : "nu_re,nu_im,r\n";
  for (int j = 0; j < grid.size(); ++j)
    for (int i = 0; i < grid.size(); ++i) {
      if (!grid.active(i, j)) continue;
      const cd nu = grid.node(i, j);
      std::vector<double> row{nu.real(), nu.imag(), rf.at(i, j)};
      if (ref) row.push_back(cc.reference_r(nu));
      out += csv_row(row);
    }
  return out;
}

std::string export_mesh(const RunConfig& cfg, const CatalogChart& cc, const Grid& grid) {
  const RField rf = integrate_for_export(cfg, cc, grid);
  const SurfaceSamples surf = reconstruct_surface(*cc.chart, rf);
  std::string out = "# lh3 surface-mesh v1\n";
  out += "# vertices in upper half-space coordinates, order x1 x2 x0 (x0 = height t)\n";
  std::vector<long> index(surf.samples.size(), 0);
  long next = 1;
  for (std::size_t k = 0; k < surf.samples.size(); ++k) {
    const SurfaceSample& s = surf.samples[k];
    if (!s.valid) continue;
    index[k] = next++;
    out += "v " + format_double(s.point.z.real()) + ' ' + format_double(s.point.z.imag()) +
           ' ' + format_double(s.point.t) + '\n';
  }
  for (int j = 0; j + 1 < grid.size(); ++j)
    for (int i = 0; i + 1 < grid.size(); ++i) {
      const long a = index[grid.index(i, j)], b = index[grid.index(i + 1, j)];
      const long c = index[grid.index(i + 1, j + 1)], d = index[grid.index(i, j + 1)];
      if (a && b && c && d)
        out += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' + std::to_string(c) +
               ' ' + std::to_string(d) + '\n';
    }
  return out;
}

// Wraps a CSV export as a JSON document when format json is requested.
std::string csv_to_json(const std::string& command, const RunConfig& cfg,
                        const std::string& csv) {
  json doc = header(command, cfg);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> columns;
  json rows = json::array();
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (columns.empty()) {
      columns = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    json row = json::object();
    for (std::size_t k = 0; k < cells.size() && k < columns.size(); ++k) {
      const double v = std::strtod(cells[k].c_str(), nullptr);
      row[columns[k]] = std::isfinite(v) ? json(v) : json(nullptr);
    }
    rows.push_back(row);
  }
  doc["per_sample"] = rows;
  doc["summary"] = {{"samples", rows.size()}};
  return doc.dump(2) + '\n';
}

}  // namespace

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  if (grid < 5) throw ConfigError("grid resolution must be at least 5");
  if (tol && !(*tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (catalog.empty() && expr.empty())
    throw ConfigError("choose a chart with --catalog or --expr");
  if (!format.empty() && format != "csv" && format != "json" && format != "obj")
    throw ConfigError("unknown format '" + format + "'");
  if (domain) {
    const Domain& d = *domain;
    if (!(d.upper.real() > d.lower.real()) || !(d.upper.imag() > d.lower.imag()))
      throw ConfigError("domain rectangle is empty");
  }
}

json RunConfig::to_json() const {
  json j = {{"catalog", catalog.empty() ? "custom-expression" : catalog}, {"grid", grid}};
  if (center) j["center"] = {center->t, center->z.real(), center->z.imag()};
  if (!params.empty()) j["params"] = params;
  if (!expr.empty()) j["expr"] = expr;
  if (!mu1_expr.empty()) j["mu1"] = mu1_expr;
  if (!profile.empty()) j["profile"] = profile;
  if (domain)
    j["domain"] = {domain->lower.real(), domain->lower.imag(), domain->upper.real(),
                   domain->upper.imag()};
  if (r) j["r"] = *r;
  if (tol) j["tol"] = *tol;
  return j;
}

UpperHalfPoint parse_center(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2 && parts.size() != 3)
    throw ConfigError("--center expects t,x or t,x,y");
  UpperHalfPoint p;
  p.t = to_number(parts[0], "--center");
  p.z = cd(to_number(parts[1], "--center"),
           parts.size() == 3 ? to_number(parts[2], "--center") : 0.0);
  if (!(p.t > 0.0)) throw ConfigError("--center needs t > 0");
  return p;
}

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  if (trim(text).empty()) return out;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("--params expects key=value pairs");
    const std::string key = trim(item.substr(0, eq));
    if (key.empty()) throw ConfigError("--params has an empty key");
    out[key] = to_number(item.substr(eq + 1), "--params");
  }
  return out;
}

Domain parse_domain(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ConfigError("--domain expects x0,y0,x1,y1");
  const cd lo(to_number(parts[0], "--domain"), to_number(parts[1], "--domain"));
  const cd hi(to_number(parts[2], "--domain"), to_number(parts[3], "--domain"));
  if (!(hi.real() > lo.real()) || !(hi.imag() > lo.imag()))
    throw ConfigError("--domain rectangle is empty");
  return Domain::rectangle(lo, hi);
}

CatalogChart resolve_chart(const RunConfig& cfg) {
  CatalogRequest req;
  req.name = cfg.catalog.empty() ? "custom-expression" : cfg.catalog;
  req.center = cfg.center;
  req.params = cfg.params;
  req.profile = cfg.profile;
  req.expr = cfg.expr;
  req.mu1_expr = cfg.mu1_expr;
  req.domain = cfg.domain;
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), req.name) == names.end())
    throw ConfigError("unknown catalog entry '" + req.name + "'");
  return make_catalog_chart(req);
}

std::vector<std::string> verify_suites() {
  return {"sachs", "det-identity", "codazzi", "main-theorem", "cmc1", "sphere-equation"};
}

std::vector<std::string> export_kinds() {
  return {"scalars", "induced-metric", "surface-mesh", "r-field"};
}

Report cmd_classify(const RunConfig& cfg) {
  cfg.validate();
  const CatalogChart cc = resolve_chart(cfg);
  const Grid grid(cc.chart->domain(), cfg.grid);
  const double tol = cfg.tol.value_or(1e-8);

  struct Row {
    bool ok = false;
    std::string error;
    PointClass pc;
    Signature sig = Signature::Degenerate;
    double kappa = NAN;
  };
  const std::vector<cd> nodes = active_nodes(grid);
  const auto rows = parallel_map<Row>(nodes, [&](cd nu) {
    Row row;
    try {
      const Jet2 jet = cc.chart->jet2(nu);
      if (!finite(jet.mu1.f) || !finite(jet.mu2.f) || std::abs(jet.mu2.f) <= 1e-12)
        throw Error(ErrorKind::ChartSingular, "vertical normal geodesic");
      row.pc = classify_point(jet);
      row.sig = signature_classify(jet);
      if (row.pc.lagrangian) {
        const OpticalScalars s = optical_scalars(jet, reference_or(cc, cfg, nu));
        row.kappa = s.kappa;
      }
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  });

  std::size_t used = 0, lagrangian = 0, complex_points = 0, rank1 = 0;
  std::size_t sig_count[3] = {0, 0, 0};
  double max_kappa = 0.0, max_twist = 0.0;
  json samples = json::array();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Row& w = rows[k];
    json s = {{"nu", cjson(nodes[k])}};
    if (!w.ok) {
      s["skipped"] = w.error;
      samples.push_back(s);
      continue;
    }
    ++used;
    lagrangian += w.pc.lagrangian;
    complex_points += w.pc.complex_point;
    rank1 += w.pc.rank == 1;
    ++sig_count[int(w.sig)];
    max_twist = std::max(max_twist, std::abs(w.pc.twist));
    if (!std::isnan(w.kappa)) max_kappa = std::max(max_kappa, std::abs(w.kappa));
    s["lagrangian"] = w.pc.lagrangian;
    s["complex"] = w.pc.complex_point;
    s["rank"] = w.pc.rank;
    s["signature"] = to_string(w.sig);
    s["twist"] = w.pc.twist;
    s["kappa"] = std::isnan(w.kappa) ? json(nullptr) : json(w.kappa);
    samples.push_back(s);
  }
  if (used == 0) throw Error(ErrorKind::ChartSingular, "no regular samples on the grid");

  const bool all_lagrangian = lagrangian == used;
  const bool all_complex = complex_points == used;
  const bool flat = all_lagrangian && max_kappa <= tol;
  std::string signature = "mixed signature";
  if (sig_count[int(Signature::Lorentz)] == used) signature = "lorentz";
  if (sig_count[int(Signature::Degenerate)] == used) signature = "degenerate metric";
  if (sig_count[int(Signature::Riemannian)] == used) signature = "riemannian";

  std::string verdict = is_alpha_family(cc.chart->name() == "alpha" ? "alpha" : cfg.catalog)
                            ? "alpha-surface: "
                            : "";
  if (!all_lagrangian) {
    verdict += "not lagrangian";
  } else {
    verdict += "lagrangian";
    if (all_complex) verdict += ", complex";
    verdict += ", " + signature;
    if (rank1 == used) verdict += ", rank 1";
    if (flat) verdict += ", flat (kappa=0)";
  }

  Report rep;
  rep.body = header("classify", cfg);
  rep.body["per_sample"] = samples;
  rep.body["summary"] = {{"samples", used},
                         {"skipped", nodes.size() - used},
                         {"lagrangian", all_lagrangian},
                         {"complex", all_complex},
                         {"signature", signature},
                         {"rank1_samples", rank1},
                         {"flat", flat},
                         {"max_abs_kappa", max_kappa},
                         {"max_residual", max_twist},
                         {"mean_residual", nullptr},
                         {"verdict", verdict}};
  rep.verdict = verdict;

  if (!cfg.expect.empty()) {
    bool ok = false;
    if (cfg.expect == "lagrangian") ok = all_lagrangian;
    else if (cfg.expect == "not-lagrangian") ok = !all_lagrangian;
    else if (cfg.expect == "flat") ok = flat;
    else if (cfg.expect == "lorentz") ok = all_lagrangian && signature == "lorentz";
    else if (cfg.expect == "complex") ok = all_complex;
    else if (cfg.expect == "degenerate") ok = signature == "degenerate metric";
    else throw ConfigError("unknown --expect value '" + cfg.expect + "'");
    rep.body["summary"]["expect"] = cfg.expect;
    rep.body["summary"]["expect_met"] = ok;
    if (!ok) rep.exit_code = kExitAssertion;
  }
  return rep;
}

Report cmd_verify(const RunConfig& cfg_in, const std::string& which) {
  RunConfig cfg = cfg_in;
  cfg.validate();
  if (which == "sphere-equation" && !cfg.center && cfg.catalog == "sphere")
    cfg.center = UpperHalfPoint{1.0, 0.0};
  const CatalogChart cc = resolve_chart(cfg);
  const Grid grid(cc.chart->domain(), cfg.grid);
  if (which == "sachs") return verify_sachs(cfg, cc, grid);
  if (which == "det-identity") return verify_det(cfg, cc, grid);
  if (which == "codazzi") return verify_codazzi(cfg, cc, grid);
  if (which == "main-theorem") return verify_main_theorem(cfg, cc, grid);
  if (which == "cmc1") return verify_cmc1(cfg, cc, grid);
  if (which == "sphere-equation") return verify_sphere(cfg, cc, grid);
  throw ConfigError("unknown verify suite '" + which + "'");
}

std::string cmd_export(const RunConfig& cfg, const std::string& what) {
  cfg.validate();
  const CatalogChart cc = resolve_chart(cfg);
  const Grid grid(cc.chart->domain(), cfg.grid);
  if (what == "surface-mesh") {
    if (!cfg.format.empty() && cfg.format != "obj")
      throw ConfigError("surface-mesh is written as obj");
    return export_mesh(cfg, cc, grid);
  }
  std::string csv;
  if (what == "scalars") csv = export_scalars(cfg, cc, grid);
  else if (what == "induced-metric") csv = export_metric(cc, grid);
  else if (what == "r-field") csv = export_r_field(cfg, cc, grid);
  else throw ConfigError("unknown export '" + what + "'");
  if (cfg.format == "obj") throw ConfigError(what + " cannot be written as obj");
  if (cfg.format == "json") return csv_to_json("export " + what, cfg, csv);
  return csv;
}

// ---------------------------------------------------------------------------

namespace {

void add_chart_options(CLI::App* app, RunConfig& cfg, std::string& center,
                       std::string& params, std::string& domain) {
  app->add_option("--catalog", cfg.catalog, "Catalog chart name");
  app->add_option("--center", center, "Sphere center t,x[,y]");
  app->add_option("--params", params, "Chart parameters key=value,...");
  app->add_option("--expr", cfg.expr, "mu2 expression in m1, c1 (or u, v)");
  app->add_option("--mu1", cfg.mu1_expr, "mu1 expression for a general chart");
  app->add_option("--profile", cfg.profile, "Profile of a surface of revolution");
  app->add_option("--domain", domain, "Rectangle x0,y0,x1,y1");
  app->add_option("--grid", cfg.grid, "Grid resolution per side");
  app->add_option("--r", cfg.r, "Parameter r along the geodesics");
  app->add_option("--tol", cfg.tol, "Tolerance");
  app->add_option("--out", cfg.out, "Output path (default: standard output)");
  app->add_option("--format", cfg.format, "csv | json | obj");
}

void write_output(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << content;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw IoError("cannot open '" + cfg.out + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + cfg.out + "'");
}

int emit_report(const RunConfig& cfg, const Report& rep, std::ostream& out) {
  if (cfg.format == "json") {
    write_output(cfg, rep.body.dump(2) + '\n', out);
  } else {
    if (!cfg.out.empty()) write_output(cfg, rep.body.dump(2) + '\n', out);
    out << rep.verdict << '\n';
  }
  return rep.exit_code;
}

bool is_config_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::PoleInDomain:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oriented geodesic congruences of hyperbolic 3-space"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string center, params, domain, which, what;

  CLI::App* classify = app.add_subcommand("classify", "Classify the chart samples");
  add_chart_options(classify, cfg, center, params, domain);
  classify->add_option("--expect", cfg.expect,
                       "Assert lagrangian | not-lagrangian | flat | lorentz | complex | degenerate");

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", which, "sachs | det-identity | codazzi | main-theorem | cmc1 | sphere-equation")
      ->required();
  add_chart_options(verify, cfg, center, params, domain);

  CLI::App* exp = app.add_subcommand("export", "Export sample grids and meshes");
  exp->add_option("kind", what, "scalars | induced-metric | surface-mesh | r-field")->required();
  add_chart_options(exp, cfg, center, params, domain);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (!center.empty()) cfg.center = parse_center(center);
    if (!params.empty()) cfg.params = parse_params(params);
    if (!domain.empty()) cfg.domain = parse_domain(domain);

    if (classify->parsed()) return emit_report(cfg, cmd_classify(cfg), out);
    if (verify->parsed()) return emit_report(cfg, cmd_verify(cfg, which), out);
    write_output(cfg, cmd_export(cfg, what), out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << (is_config_kind(e.kind()) ? "config error: " : "numeric error: ") << e.what()
        << '\n';
    return is_config_kind(e.kind()) ? kExitConfig : kExitNumeric;
  }
}

}  // namespace lh3::cli
