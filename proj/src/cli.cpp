#include "derivreg/cli.hpp"

#include "derivreg/core.hpp"
#include "derivreg/estimators.hpp"
#include "derivreg/functionals.hpp"
#include "derivreg/kernels.hpp"
#include "derivreg/simulation.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace derivreg::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string
output_path(const std::string& dir, const std::string& name)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create output directory '" + dir + "'");
  }
  return (fs::path(dir) / name).string();
}

void
write_text(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::ios_base::failure("cannot write '" + path + "'");
  }
  f << text;
  if (!f) {
    throw std::ios_base::failure("write to '" + path + "' failed");
  }
}

void
write_json(const std::string& path, const ordered_json& j)
{
  write_text(path, j.dump(2) + "\n");
}

std::string
csv_text(const CsvTable& t)
{
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

ordered_json
base_metadata(const std::string& command)
{
  ordered_json j;
  j["software"] = "derivreg";
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

// ---------------------------------------------------------------------------
// verify

struct KernelCheck
{
  std::string name;
  double moment_error = 0.0;
  double endpoint_value = 0.0;
};

std::vector<KernelCheck>
kernel_checks(const std::vector<int>& interior, const std::vector<int>& edge)
{
  std::vector<KernelCheck> out;
  auto check = [&](const KernelSpec& s, const std::string& name) {
    KernelCheck c{ name, 0.0, 0.0 };
    for (int j = 0; j < s.order(); ++j) {
      c.moment_error =
        std::max(c.moment_error, std::abs(kernel_moment(s, j) - (j == 0 ? 1.0 : 0.0)));
    }
    c.endpoint_value = std::max(std::abs(s(s.lower())), std::abs(s(s.upper())));
    out.push_back(c);
  };
  for (int d : interior) {
    check(make_interior_kernel(d), "interior_" + std::to_string(d));
  }
  for (int d : edge) {
    check(make_edge_kernel(d, EdgeSide::left), "left_edge_" + std::to_string(d));
    check(make_edge_kernel(d, EdgeSide::right), "right_edge_" + std::to_string(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// estimate config

struct DatasetEntry
{
  std::string name;
  DerivIndex deriv;
  std::string path;
};

struct EstimateConfig
{
  int k = 0;
  DerivIndex coords;
  int ell = 0;
  EstimatorOptions est;
  bool rescale = false;
  std::size_t grid = 11;
  std::vector<DatasetEntry> datasets;
};

template<class T>
T
ini_get(const boost::property_tree::ptree& section, const std::string& key, T fallback)
{
  const auto v = section.get_optional<std::string>(key);
  if (!v) {
    return fallback;
  }
  std::istringstream is(*v);
  T out{};
  if constexpr (std::is_same_v<T, bool>) {
    std::string s = *v;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    if (s == "true" || s == "1" || s == "yes") {
      return true;
    }
    if (s == "false" || s == "0" || s == "no") {
      return false;
    }
    throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" +
                                *v + "'");
  } else {
    is >> out;
    if (!is || !(is >> std::ws).eof()) {
      throw std::invalid_argument("config key '" + key + "': cannot parse '" + *v + "'");
    }
  }
  return out;
}

EstimateConfig
read_estimate_config(const std::string& path)
{
  std::ifstream f(path);
  if (!f) {
    throw std::ios_base::failure("cannot open config '" + path + "'");
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(f, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError("config: " + e.message(), e.line());
  }
  const auto plan = tree.get_child_optional("plan");
  if (!plan) {
    throw std::invalid_argument("config needs a [plan] section");
  }
  EstimateConfig cfg;
  cfg.k = ini_get<int>(*plan, "k", 0);
  if (cfg.k < 1 || cfg.k > DerivIndex::kMaxDim) {
    throw std::invalid_argument("config: plan.k must be a positive dimension");
  }
  if (const auto c = plan->get_optional<std::string>("coords")) {
    cfg.coords = DerivIndex::parse(*c);
    if (cfg.coords.dim() != cfg.k) {
      throw std::invalid_argument("config: plan.coords has the wrong length");
    }
  } else {
    const int p = ini_get<int>(*plan, "p", cfg.k);
    if (p < 1 || p > cfg.k) {
      throw std::invalid_argument("config: plan.p must satisfy 1 <= p <= k");
    }
    cfg.coords = DerivIndex(cfg.k, (1u << p) - 1u);
  }
  cfg.ell = ini_get<int>(*plan, "ell", 0);
  cfg.est.d = ini_get<int>(*plan, "d", 0);
  cfg.est.d1 = ini_get<int>(*plan, "d1", 0);
  cfg.est.h_constant = ini_get<double>(*plan, "h_constant", 1.0);
  cfg.est.H_constant = ini_get<double>(*plan, "H_constant", 1.0);
  cfg.est.density_floor = ini_get<double>(*plan, "density_floor", 0.05);
  cfg.est.estimate_density = ini_get<bool>(*plan, "estimate_density", true);
  cfg.est.edge_correction = ini_get<bool>(*plan, "edge_correction", true);
  cfg.rescale = ini_get<bool>(*plan, "rescale", false);
  cfg.grid = ini_get<std::size_t>(*plan, "grid", 11);

  const fs::path base = fs::path(path).parent_path();
  for (const auto& [name, section] : tree) {
    if (name.rfind("dataset", 0) != 0) {
      continue;
    }
    DatasetEntry e;
    e.name = name;
    const auto d = section.get_optional<std::string>("deriv");
    const auto p = section.get_optional<std::string>("path");
    if (!d || !p) {
      throw std::invalid_argument("config section [" + name +
                                  "] needs 'deriv' and 'path'");
    }
    e.deriv = DerivIndex::parse(*d);
    if (e.deriv.dim() != cfg.k) {
      throw std::invalid_argument("config section [" + name + "]: deriv " +
                                  e.deriv.str() + " does not have k=" +
                                  std::to_string(cfg.k) + " entries");
    }
    e.path = fs::path(*p).is_absolute() ? *p : (base / *p).string();
    cfg.datasets.push_back(e);
  }
  if (cfg.datasets.empty()) {
    throw std::invalid_argument("config declares no [dataset.*] sections");
  }
  return cfg;
}

//! Loads every dataset; with rescaling, all datasets share one affine map per
//! coordinate and derivative responses pick up Π scale_i.
std::vector<DataSet>
load_datasets(const EstimateConfig& cfg, std::vector<AffineMap>& maps)
{
  const int k = cfg.k;
  maps.assign(k, AffineMap{});
  if (!cfg.rescale) {
    std::vector<DataSet> out;
    for (const auto& e : cfg.datasets) {
      out.push_back(load_csv(e.path, k, e.deriv));
    }
    return out;
  }
  std::vector<CsvTable> tables;
  std::vector<double> all;
  for (const auto& e : cfg.datasets) {
    tables.push_back(read_csv_file(e.path, static_cast<std::size_t>(k) + 1));
    if (tables.back().rows.empty()) {
      throw std::invalid_argument("dataset '" + e.path + "': n >= 1 required");
    }
    for (const auto& row : tables.back().rows) {
      all.insert(all.end(), row.begin(), row.begin() + k);
    }
  }
  const RescaleResult rs = rescale_to_unit(all, k);
  maps = rs.maps;
  std::vector<DataSet> out;
  std::size_t offset = 0;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const std::size_t n = tables[t].rows.size();
    std::vector<double> pts(rs.scaled.begin() + offset * k,
                            rs.scaled.begin() + (offset + n) * k);
    offset += n;
    double factor = 1.0;
    for (int i : cfg.datasets[t].deriv.coords()) {
      factor *= maps[i].scale;
    }
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) {
      y[r] = tables[t].rows[r][k] * factor;
    }
    out.emplace_back(cfg.datasets[t].deriv, std::move(pts), std::move(y));
  }
  return out;
}

std::vector<std::size_t>
default_ns(const std::string& experiment)
{
  if (experiment == "rates") {
    return { 250, 500, 1000, 2000, 4000, 8000 };
  }
  return { 100, 200, 500, 1000 };
}

} // namespace

// ---------------------------------------------------------------------------

int
run_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err)
{
  if (opts.quad_nodes < 1 || opts.max_dim < 1 || opts.max_dim > 3) {
    throw std::invalid_argument("verify needs --quad-nodes >= 1 and 1 <= --max-dim <= 3");
  }
  IdentitySuiteOptions io;
  io.quad_nodes = opts.quad_nodes;
  io.max_dim = opts.max_dim;
  io.inject_sign_fault = opts.inject_sign_fault;
  const auto checks = run_identity_suite(io);
  const auto kchecks = kernel_checks({ 2, 4, 6 }, { 1, 2, 3, 4, 5 });

  bool ok = true;
  std::vector<std::string> failed;
  for (const auto& c : checks) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << " max_residual=" << c.max_residual
        << " tolerance=" << c.tolerance << " evaluations=" << c.evaluations << '\n';
    if (!c.passed()) {
      ok = false;
      failed.push_back(c.name);
    }
  }
  for (const auto& c : kchecks) {
    const bool pass = c.moment_error <= 1e-10 && c.endpoint_value <= 1e-12;
    out << (pass ? "PASS " : "FAIL ") << "kernel/" << c.name
        << " moment_error=" << c.moment_error << " endpoint=" << c.endpoint_value << '\n';
    if (!pass) {
      ok = false;
      failed.push_back("kernel/" + c.name);
    }
  }
  if (!opts.out_dir.empty()) {
    std::string body = "check,max_residual,tolerance,evaluations,passed\n";
    for (const auto& c : checks) {
      body += c.name + "," + format_double(c.max_residual) + "," +
              format_double(c.tolerance) + "," + std::to_string(c.evaluations) + "," +
              (c.passed() ? "1" : "0") + "\n";
    }
    for (const auto& c : kchecks) {
      const bool pass = c.moment_error <= 1e-10 && c.endpoint_value <= 1e-12;
      body += "kernel/" + c.name + "," +
              format_double(std::max(c.moment_error, c.endpoint_value)) + ",1e-10,0," +
              (pass ? "1" : "0") + "\n";
    }
    write_text(output_path(opts.out_dir, "verify.csv"), body);
  }
  if (!ok) {
    err << "verify: failing identities:";
    for (const auto& f : failed) {
      err << ' ' << f;
    }
    err << '\n';
    return exit_numerical;
  }
  out << "verify: all checks passed\n";
  return exit_ok;
}

int
run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err)
{
  const std::vector<std::size_t> ns = opts.ns.empty() ? default_ns(opts.experiment) : opts.ns;
  if (opts.workers < 1) {
    throw std::invalid_argument("--workers must be >= 1");
  }
  CobbDouglasConfig model;
  model.c = opts.c;
  model.sigma = opts.sigma;
  model.random_r = !opts.unit_r;
  model.seed = opts.seed;

  if (opts.experiment == "table1") {
    Table1Config cfg;
    cfg.model = model;
    cfg.ns = ns;
    cfg.rhos = opts.rhos;
    cfg.reps = opts.reps;
    cfg.seed = opts.seed;
    cfg.workers = opts.workers;
    cfg.h_constant = opts.h_constant;
    cfg.h_denominator = opts.h_denominator;
    cfg.baseline_constant = opts.baseline_constant;
    cfg.baseline_denominator = opts.baseline_denominator;
    cfg.trim_low = opts.trim_low;
    cfg.trim_high = opts.trim_high;
    cfg.keep_replications = opts.dump_replications;
    cfg.validate();
    const std::string csv_path = output_path(opts.out_dir, "table1.csv");
    if (cfg.reps < 30) {
      err << "warning: " << cfg.reps
          << " replications; the ratio standard errors are unreliable\n";
    }
    const McResult res = run_table1(cfg);
    CsvTable t;
    t.header = { "n", "rho", "mse_deriv", "mse_baseline", "ratio", "ratio_se", "reps" };
    for (const auto& c : res.cells) {
      t.rows.push_back({ static_cast<double>(c.n), c.rho, c.mse_deriv, c.mse_baseline,
                         c.ratio, c.ratio_se, static_cast<double>(c.reps) });
      out << "n=" << c.n << " rho=" << c.rho << " ratio=" << c.ratio << " (se "
          << c.ratio_se << ")\n";
    }
    write_text(csv_path, csv_text(t));
    if (opts.dump_replications) {
      CsvTable d;
      d.header = { "n", "rho", "replication", "mse_deriv", "mse_baseline" };
      for (const auto& r : res.replications) {
        d.rows.push_back({ static_cast<double>(r.n), r.rho,
                           static_cast<double>(r.replication), r.mse_deriv,
                           r.mse_baseline });
      }
      write_text(output_path(opts.out_dir, "table1_replications.csv"), csv_text(d));
    }
    ordered_json j = base_metadata("simulate table1");
    j["seed"] = opts.seed;
    j["stream_layout"] = "replication stream id = (n_index << 32 | rep); "
                         "[id,0] design Q,w/r,r; [id,1] z1; [id,2] z2";
    j["model"] = { { "c1", model.c1 },       { "c2", model.c2 },
                   { "c", model.c },         { "c_tilde", model.c_tilde() },
                   { "sigma", model.sigma }, { "r", model.random_r ? "U[0.5,1.5]" : "1" } };
    j["reps"] = cfg.reps;
    j["ns"] = cfg.ns;
    j["rhos"] = cfg.rhos;
    j["deriv_bandwidth"] = "h = " + format_double(cfg.h_constant) + " * n^(-1/" +
                           std::to_string(cfg.h_denominator) + ") on raw Q";
    j["baseline"] = "bivariate boxcar r/(n h^2) sum y/r, h = " +
                    format_double(cfg.baseline_constant) + " * n^(-1/" +
                    std::to_string(cfg.baseline_denominator) + ")";
    j["mse_points"] = "in-sample, Q and w/r trimmed to [" + format_double(cfg.trim_low) +
                      ", " + format_double(cfg.trim_high) + "]";
    write_json(output_path(opts.out_dir, "table1.json"), j);
    return exit_ok;
  }

  if (opts.experiment == "rates") {
    std::vector<RateConfig> cfgs;
    for (int p : opts.ps) {
      RateConfig rc;
      rc.k = opts.k;
      rc.p = p;
      rc.d = opts.d;
      rc.ns = ns;
      rc.reps = opts.reps;
      rc.seed = opts.seed;
      rc.sigma = opts.rate_sigma;
      rc.workers = opts.workers;
      rc.validate();
      cfgs.push_back(rc);
    }
    const std::string csv_path = output_path(opts.out_dir, "rates.csv");
    CsvTable t;
    t.header = { "k", "p", "d", "n", "mse", "mse_se", "bandwidth" };
    CsvTable s;
    s.header = { "k", "p", "d", "slope", "slope_se", "expected_slope", "grid_offset" };
    for (const auto& rc : cfgs) {
      const RateResult r = rate_experiment(rc);
      for (const auto& pt : r.points) {
        t.rows.push_back({ double(rc.k), double(rc.p), double(rc.d), double(pt.n), pt.mse,
                           pt.mse_se, pt.bandwidth });
      }
      s.rows.push_back({ double(rc.k), double(rc.p), double(rc.d), r.slope, r.slope_se,
                         r.expected_slope, r.grid_offset });
      out << "k=" << rc.k << " p=" << rc.p << " slope=" << r.slope << " (se " << r.slope_se
          << ", expected " << r.expected_slope << ")\n";
    }
    write_text(csv_path, csv_text(t));
    write_text(output_path(opts.out_dir, "rates_summary.csv"), csv_text(s));
    ordered_json j = base_metadata("simulate rates");
    j["seed"] = opts.seed;
    j["stream_layout"] = "[n_index, rep, derivative bits] per dataset";
    j["test_function"] = "sin(1 + sum_i (0.9 - 0.2 i) x_i)";
    j["sigma"] = opts.rate_sigma;
    j["reps"] = opts.reps;
    j["ns"] = ns;
    j["design"] = "uniform on [0,1]^k, density known";
    write_json(output_path(opts.out_dir, "rates.json"), j);
    return exit_ok;
  }

  if (opts.experiment == "r2") {
    model.validate();
    const std::string csv_path = output_path(opts.out_dir, "r2.csv");
    const R2Result r = r2_check(model, opts.r2_n);
    CsvTable t;
    t.header = { "n", "r2_ac", "r2_al" };
    t.rows.push_back({ double(opts.r2_n), r.ac, r.al });
    write_text(csv_path, csv_text(t));
    ordered_json j = base_metadata("simulate r2");
    j["seed"] = opts.seed;
    j["stream_layout"] = "replication 0: [0,0] design, [0,1] z1, [0,2] z2";
    j["c"] = model.c;
    j["sigma"] = model.sigma;
    write_json(output_path(opts.out_dir, "r2.json"), j);
    out << "R2 AC=" << r.ac << " AL=" << r.al << '\n';
    return exit_ok;
  }
  throw std::invalid_argument("unknown experiment '" + opts.experiment +
                              "' (expected table1, rates or r2)");
}

int
run_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream&)
{
  if (opts.workers < 1) {
    throw std::invalid_argument("--workers must be >= 1");
  }
  const EstimateConfig cfg = read_estimate_config(opts.config);
  const TermExpr expr = build_representation_plan(cfg.k, cfg.coords, cfg.ell);

  if (opts.plan_report) {
    std::vector<DerivIndex> observed;
    for (const auto& e : cfg.datasets) {
      observed.push_back(e.deriv);
    }
    if (std::find(observed.begin(), observed.end(), DerivIndex::zeros(cfg.k)) ==
        observed.end()) {
      observed.push_back(DerivIndex::zeros(cfg.k));
      out << "note: function data not declared; the bound assumes it is observed\n";
    }
    out << "nonparametric dimension upper bound: "
        << nonparametric_dimension(cfg.k, observed) << '\n';
    out << expr.str();
    for (const auto& d : expr.required_derivatives()) {
      if (std::find(observed.begin(), observed.end(), d) == observed.end()) {
        out << "missing dataset for derivative index " << d.str() << '\n';
      }
    }
    return exit_ok;
  }

  for (const auto& d : expr.required_derivatives()) {
    const bool have = std::any_of(cfg.datasets.begin(), cfg.datasets.end(),
                                  [&](const DatasetEntry& e) { return e.deriv == d; });
    if (!have) {
      throw std::invalid_argument("plan needs data for derivative index " + d.str() +
                                  " but the config names no dataset for it");
    }
  }
  std::vector<AffineMap> maps;
  std::vector<DataSet> data = load_datasets(cfg, maps);
  const EstimationPlan plan(cfg.k, cfg.coords, cfg.ell, std::move(data), cfg.est);

  const std::size_t per_axis = opts.grid ? opts.grid : cfg.grid;
  const double offset = opts.full_cube ? 0.0 : plan.max_bandwidth();
  if (offset >= 0.5) {
    throw std::invalid_argument("smoothing bandwidth " + format_double(offset) +
                                " leaves no interior grid; use --full-cube or a "
                                "smaller h_constant");
  }
  const auto grid = make_grid(cfg.k, per_axis, offset);
  const std::string csv_path = output_path(opts.out_dir, "fit.csv");
  const FitResult res = fit(plan, grid, opts.workers);

  CsvTable t;
  for (int i = 0; i < cfg.k; ++i) {
    t.header.push_back("x" + std::to_string(i + 1));
  }
  t.header.push_back("ghat");
  for (const auto& l : res.term_labels) {
    t.header.push_back(l);
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> row;
    for (int i = 0; i < cfg.k; ++i) {
      row.push_back(maps[i].from_unit(grid[g][i]));
    }
    row.push_back(res.values[g]);
    row.insert(row.end(), res.contributions[g].begin(), res.contributions[g].end());
    t.rows.push_back(std::move(row));
  }
  write_text(csv_path, csv_text(t));

  ordered_json j = base_metadata("estimate");
  j["config"] = fs::path(opts.config).filename().string();
  j["k"] = cfg.k;
  j["coords"] = cfg.coords.str();
  j["ell"] = cfg.ell;
  j["d"] = plan.options().d;
  j["d1"] = plan.options().d1;
  j["h_constant"] = plan.options().h_constant;
  j["H_constant"] = plan.options().H_constant;
  j["density_floor"] = plan.options().density_floor;
  j["estimate_density"] = plan.options().estimate_density;
  j["grid"] = opts.full_cube ? "full cube" : "interior, offset " + format_double(offset);
  j["nonparametric_dimension_bound"] = [&] {
    std::vector<DerivIndex> observed;
    for (const auto& e : cfg.datasets) {
      observed.push_back(e.deriv);
    }
    if (std::find(observed.begin(), observed.end(), DerivIndex::zeros(cfg.k)) ==
        observed.end()) {
      observed.push_back(DerivIndex::zeros(cfg.k));
    }
    return nonparametric_dimension(cfg.k, observed);
  }();
  ordered_json terms = ordered_json::array();
  for (const auto& pt : plan.terms()) {
    terms.push_back({ { "label", pt.label },
                      { "term", pt.term.str() },
                      { "n", pt.n },
                      { "bandwidth", pt.bandwidth },
                      { "density_bandwidth", plan.density_bandwidth_for(pt.term.deriv) } });
  }
  j["terms"] = terms;
  ordered_json jm = ordered_json::array();
  for (const auto& m : maps) {
    jm.push_back({ { "offset", m.offset }, { "scale", m.scale } });
  }
  j["coordinate_maps"] = jm;
  write_json(output_path(opts.out_dir, "fit.json"), j);
  out << "fit: " << grid.size() << " points, " << plan.terms().size() << " terms -> "
      << csv_path << '\n';
  return exit_ok;
}

int
run_kernels(const KernelsOptions& opts, std::ostream& out, std::ostream&)
{
  if (opts.samples < 2) {
    throw std::invalid_argument("--samples must be >= 2");
  }
  std::vector<std::pair<std::string, KernelSpec>> specs;
  for (int d : opts.interior_orders) {
    if (d < 2) {
      throw std::invalid_argument("interior kernel orders must be >= 2");
    }
    specs.emplace_back("interior", make_interior_kernel(d));
  }
  for (int d : opts.edge_orders) {
    if (d < 1) {
      throw std::invalid_argument("edge kernel orders must be >= 1");
    }
    specs.emplace_back("left_edge", make_edge_kernel(d, EdgeSide::left));
    specs.emplace_back("right_edge", make_edge_kernel(d, EdgeSide::right));
  }
  std::string samples = "kind,order,t,value\n";
  std::string moments = "kind,order,j,moment,target,abs_error\n";
  for (const auto& [kind, s] : specs) {
    for (std::size_t i = 0; i < opts.samples; ++i) {
      const double t =
        s.lower() + (s.upper() - s.lower()) * static_cast<double>(i) /
                      static_cast<double>(opts.samples - 1);
      samples += kind + "," + std::to_string(s.order()) + "," + format_double(t) + "," +
                 format_double(s(t)) + "\n";
    }
    for (int j = 0; j <= s.order(); ++j) {
      const double m = kernel_moment(s, j);
      const bool constrained = j < s.order();
      const double target = j == 0 ? 1.0 : 0.0;
      moments += kind + "," + std::to_string(s.order()) + "," + std::to_string(j) + "," +
                 format_double(m) + "," + (constrained ? format_double(target) : "") +
                 "," + (constrained ? format_double(std::abs(m - target)) : "") + "\n";
    }
  }
  write_text(output_path(opts.out_dir, "kernels.csv"), samples);
  write_text(output_path(opts.out_dir, "kernel_moments.csv"), moments);
  out << "kernels: " << specs.size() << " specs written to " << opts.out_dir << '\n';
  return exit_ok;
}

// ---------------------------------------------------------------------------

int
main(int argc, char** argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Derivative-augmented nonparametric regression" };
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the identity suite and kernel checks");
  verify->add_option("--quad-nodes", vo.quad_nodes, "Gauss-Legendre nodes per panel");
  verify->add_option("--max-dim", vo.max_dim, "Largest dimension checked (1-3)");
  verify->add_flag("--inject-sign-fault", vo.inject_sign_fault,
                   "Negate one term of every representation plan (mutation test)");
  verify->add_option("--out-dir", vo.out_dir, "Write verify.csv here");

  SimulateOptions so;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
  simulate->add_option("--experiment", so.experiment, "table1 | rates | r2")
    ->check(CLI::IsMember({ "table1", "rates", "r2" }));
  simulate->add_option("--ns", so.ns, "Sample sizes")->delimiter(',');
  simulate->add_option("--rhos", so.rhos, "Error correlations")->delimiter(',');
  simulate->add_option("--reps", so.reps, "Replications per cell");
  simulate->add_option("--seed", so.seed, "Root seed");
  simulate->add_option("--workers", so.workers, "Worker threads (output is unaffected)");
  simulate->add_option("--h-constant", so.h_constant, "Boxcar bandwidth constant");
  simulate->add_option("--h-denominator", so.h_denominator, "Boxcar rate n^(-1/D)");
  simulate->add_option("--baseline-constant", so.baseline_constant,
                       "Reference bandwidth constant");
  simulate->add_option("--baseline-denominator", so.baseline_denominator,
                       "Reference rate n^(-1/D)");
  simulate->add_option("--trim-low", so.trim_low, "Lower MSE trim bound on Q and w/r");
  simulate->add_option("--trim-high", so.trim_high, "Upper MSE trim bound on Q and w/r");
  simulate->add_option("--c", so.c, "Productivity constant");
  simulate->add_option("--sigma", so.sigma, "Error standard deviation");
  simulate->add_flag("--unit-r", so.unit_r, "Fix r = 1 instead of U[0.5,1.5]");
  simulate->add_flag("--dump-replications", so.dump_replications,
                     "Write per-replication MSEs");
  simulate->add_option("--k", so.k, "Rates: dimension");
  simulate->add_option("--ps", so.ps, "Rates: values of p")->delimiter(',');
  simulate->add_option("--d", so.d, "Rates: smoothing kernel order");
  simulate->add_option("--rate-sigma", so.rate_sigma, "Rates: noise level");
  simulate->add_option("--r2-n", so.r2_n, "R2: sample size");
  simulate->add_option("--out-dir", so.out_dir, "Output directory");

  EstimateOptions eo;
  auto* estimate = app.add_subcommand("estimate", "Fit a plan to CSV datasets");
  estimate->add_option("config", eo.config, "INI config with [plan] and [dataset.*]")
    ->required();
  estimate->add_option("--out-dir", eo.out_dir, "Output directory");
  estimate->add_option("--workers", eo.workers, "Worker threads (output is unaffected)");
  estimate->add_option("--grid", eo.grid, "Grid points per axis");
  estimate->add_flag("--plan-report", eo.plan_report,
                     "Print the plan and dimension bound without fitting");
  estimate->add_flag("--full-cube", eo.full_cube, "Evaluate on [0,1]^k, not the interior");

  KernelsOptions ko;
  auto* kernels = app.add_subcommand("kernels", "Tabulate kernels and their moments");
  kernels->add_option("--interior", ko.interior_orders, "Interior orders")->delimiter(',');
  kernels->add_option("--edge", ko.edge_orders, "Edge orders")->delimiter(',');
  kernels->add_option("--samples", ko.samples, "Samples per kernel");
  kernels->add_option("--out-dir", ko.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_validation;
  }

  try {
    if (*verify) {
      return run_verify(vo, out, err);
    }
    if (*simulate) {
      return run_simulate(so, out, err);
    }
    if (*estimate) {
      return run_estimate(eo, out, err);
    }
    return run_kernels(ko, out, err);
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
    return exit_io;
  } catch (const ParseError& e) {
    err << "parse error (line " << e.line() << "): " << e.what() << '\n';
    return exit_validation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  }
}

} // namespace derivreg::cli
