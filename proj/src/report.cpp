#include "fracbs/report.hpp"

#include "fracbs/error.hpp"
#include "fracbs/sphere_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

namespace fracbs {

using nlohmann::json;

namespace {

using Errors = std::vector<std::string>;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

/// JSON has no NaN or infinity; those travel as strings.
json encode(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  return v;
}

bool decode(const json& j, double& out) {
  if (j.is_number()) {
    out = j.get<double>();
    return true;
  }
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan")
      out = std::numeric_limits<double>::quiet_NaN();
    else if (s == "inf")
      out = std::numeric_limits<double>::infinity();
    else if (s == "-inf")
      out = -std::numeric_limits<double>::infinity();
    else
      return false;
    return true;
  }
  return false;
}

void read(const json& j, const std::string& field, double& out, Errors& err) {
  if (!decode(j, out))
    err.push_back(field + ": expected a number");
}

void read(const json& j, const std::string& field, int& out, Errors& err) {
  if (!j.is_number_integer())
    err.push_back(field + ": expected an integer");
  else
    out = j.get<int>();
}

void read(const json& j, const std::string& field, std::uint64_t& out, Errors& err) {
  if (!j.is_number_unsigned())
    err.push_back(field + ": expected a non-negative integer");
  else
    out = j.get<std::uint64_t>();
}

void read(const json& j, const std::string& field, std::string& out, Errors& err) {
  if (!j.is_string())
    err.push_back(field + ": expected a string");
  else
    out = j.get<std::string>();
}

void read(const json& j, const std::string& field, std::vector<double>& out, Errors& err) {
  if (!j.is_array()) {
    err.push_back(field + ": expected an array of numbers");
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    double v = 0;
    if (!j[i].is_number())
      err.push_back(field + "[" + std::to_string(i) + "]: expected a number");
    else
      v = j[i].get<double>();
    out.push_back(v);
  }
}

/// Visits the keys of an object, flagging unknown ones.
class ObjectReader {
public:
  ObjectReader(const json& j, std::string prefix, Errors& err)
      : j_(j), prefix_(std::move(prefix)), err_(err) {
    if (!j_.is_object())
      err_.push_back((prefix_.empty() ? std::string("config") : prefix_) +
                     ": expected an object");
  }

  template <class T>
  ObjectReader& field(const std::string& key, T& out) {
    known_.insert(key);
    if (j_.is_object() && j_.contains(key))
      read(j_.at(key), join(prefix_, key), out, err_);
    return *this;
  }

  template <class F>
  ObjectReader& object(const std::string& key, F&& f) {
    known_.insert(key);
    if (j_.is_object() && j_.contains(key))
      f(j_.at(key), join(prefix_, key));
    return *this;
  }

  void finish() {
    if (!j_.is_object())
      return;
    for (const auto& item : j_.items())
      if (!known_.count(item.key()))
        err_.push_back(join(prefix_, item.key()) + ": unknown field");
  }

private:
  const json& j_;
  std::string prefix_;
  Errors& err_;
  std::set<std::string> known_;
};

void throw_if(const Errors& err) {
  if (err.empty())
    return;
  std::string msg = "invalid config:";
  for (const auto& e : err)
    msg += "\n  " + e;
  throw ConfigError(msg);
}

bool needs_disc(const std::string& e) {
  return e == "solve-ball" || e == "k-sweep" || e == "trace-check" || e == "gmp-check";
}

bool uses_ks(const std::string& e) {
  return e == "solve-ball" || e == "k-sweep" || e == "trace-check";
}

} // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"kernels",   "eigen-sweep", "profile",
                                                 "solve-ball", "k-sweep",    "trace-check",
                                                 "gmp-check"};
  return names;
}

void validate(const ExperimentConfig& c) {
  Errors err;
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
    std::string list;
    for (const auto& n : names)
      list += (list.empty() ? "" : ", ") + n;
    err.push_back("experiment: unknown experiment '" + c.experiment + "' (expected one of " +
                  list + ")");
  }
  if (c.n != 2 && c.n != 3)
    err.push_back("n: must be 2 or 3");
  if (!(c.s > 0.0 && c.s < 1.0))
    err.push_back("s: must lie in (0, 1)");
  if (c.grid.per_hemisphere < LatGrid::min_per_hemisphere)
    err.push_back("grid.per_hemisphere: must be at least " +
                  std::to_string(LatGrid::min_per_hemisphere));
  if (!(c.grid.grading >= 1.0))
    err.push_back("grid.grading: must be at least 1");
  if (c.random_starts < 0)
    err.push_back("random_starts: must be non-negative");
  if (c.output_dir.empty())
    err.push_back("output_dir: must not be empty");
  throw_if(err);

  const FracParams params = c.params();
  const CriticalExponents ce = critical_exponents(params);
  const std::string& e = c.experiment;

  if (e == "eigen-sweep" && c.grid.beta_points < 2)
    err.push_back("grid.beta_points: eigen-sweep needs at least 2 points");

  if (e == "profile") {
    const double p3 = ce.p3 ? *ce.p3 : std::numeric_limits<double>::infinity();
    if (!(c.p > ce.p1 && c.p < p3))
      err.push_back("p: profile needs p in (p1, p3) = (" + std::to_string(ce.p1) + ", " +
                    std::to_string(p3) + ")");
  }

  if (needs_disc(e)) {
    if (c.n != 2)
      err.push_back("n: " + e + " runs on the disc, n must be 2");
    if (!(c.s > 0.5))
      err.push_back("s: " + e + " needs s in (1/2, 1)");
    const auto& m = c.mesh;
    if (!(m.rho_min > 0.0 && m.rho_min < m.rho_mid && m.rho_mid < m.rho_max))
      err.push_back("mesh: need 0 < rho_min < rho_mid < rho_max");
    if (!(m.ratio_z > 0.0 && m.ratio_z < 1.0))
      err.push_back("mesh.ratio_z: must lie in (0, 1)");
    if (!(m.ratio_far > 0.0 && m.ratio_far < 1.0))
      err.push_back("mesh.ratio_far: must lie in (0, 1)");
    if (!(m.ratio_theta > 0.0 && m.ratio_theta < 1.0))
      err.push_back("mesh.ratio_theta: must lie in (0, 1)");
    if (!(m.theta_min > 0.0 && m.theta_min <= m.max_theta))
      err.push_back("mesh: need 0 < theta_min <= max_theta");
    if (!(m.max_theta > 0.0 && m.max_theta < M_PI / 2))
      err.push_back("mesh.max_theta: must lie in (0, pi/2)");
  }

  if (uses_ks(e) || e == "gmp-check") {
    if (e == "gmp-check" ? !(c.p > 0.0) : !(c.p > 0.0 && c.p < ce.p2))
      err.push_back(e == "gmp-check" ? "p: must be positive"
                                     : "p: " + e + " needs p in (0, p2) = (0, " +
                                           std::to_string(ce.p2) + ")");
  }

  if (uses_ks(e)) {
    if (c.ks.empty())
      err.push_back("ks: must not be empty");
    for (std::size_t i = 0; i < c.ks.size(); ++i) {
      if (!(c.ks[i] >= 0.0 && std::isfinite(c.ks[i])))
        err.push_back("ks[" + std::to_string(i) + "]: must be finite and non-negative");
      else if (i > 0 && !(c.ks[i] > c.ks[i - 1]))
        err.push_back("ks[" + std::to_string(i) + "]: must be strictly increasing");
    }
    if (e == "k-sweep" && c.ks.size() == 1)
      err.push_back("ks: k-sweep needs at least 2 values");
    if (e == "trace-check" && !c.ks.empty() && !(c.ks.back() > 0.0))
      err.push_back("ks: trace-check needs a positive k");
  }

  if (e == "gmp-check" && c.decades < 4)
    err.push_back("decades: must be at least 4");
  throw_if(err);
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  Errors err;
  ObjectReader r(j, "", err);
  r.field("experiment", c.experiment)
      .field("n", c.n)
      .field("s", c.s)
      .field("p", c.p)
      .field("ks", c.ks)
      .field("decades", c.decades)
      .field("random_starts", c.random_starts)
      .field("output_dir", c.output_dir)
      .field("seed", c.seed)
      .object("grid",
              [&](const json& g, const std::string& prefix) {
                ObjectReader gr(g, prefix, err);
                gr.field("per_hemisphere", c.grid.per_hemisphere)
                    .field("grading", c.grid.grading)
                    .field("beta_points", c.grid.beta_points)
                    .finish();
              })
      .object("mesh", [&](const json& m, const std::string& prefix) {
        ObjectReader mr(m, prefix, err);
        mr.field("rho_min", c.mesh.rho_min)
            .field("rho_mid", c.mesh.rho_mid)
            .field("rho_max", c.mesh.rho_max)
            .field("ratio_z", c.mesh.ratio_z)
            .field("ratio_far", c.mesh.ratio_far)
            .field("theta_min", c.mesh.theta_min)
            .field("ratio_theta", c.mesh.ratio_theta)
            .field("max_theta", c.mesh.max_theta)
            .finish();
      });
  r.finish();
  throw_if(err);
  return c;
}

json to_json(const ExperimentConfig& c) {
  json ks = json::array();
  for (double k : c.ks)
    ks.push_back(encode(k));
  return {{"experiment", c.experiment},
          {"n", c.n},
          {"s", encode(c.s)},
          {"p", encode(c.p)},
          {"ks", ks},
          {"decades", c.decades},
          {"random_starts", c.random_starts},
          {"output_dir", c.output_dir},
          {"seed", c.seed},
          {"grid",
           {{"per_hemisphere", c.grid.per_hemisphere},
            {"grading", encode(c.grid.grading)},
            {"beta_points", c.grid.beta_points}}},
          {"mesh",
           {{"rho_min", encode(c.mesh.rho_min)},
            {"rho_mid", encode(c.mesh.rho_mid)},
            {"rho_max", encode(c.mesh.rho_max)},
            {"ratio_z", encode(c.mesh.ratio_z)},
            {"ratio_far", encode(c.mesh.ratio_far)},
            {"theta_min", encode(c.mesh.theta_min)},
            {"ratio_theta", encode(c.mesh.ratio_theta)},
            {"max_theta", encode(c.mesh.max_theta)}}}};
}

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size())
    throw DomainError("table " + name + ": row has " + std::to_string(row.size()) +
                      " entries, header has " + std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out += (c ? "," : "") + t.columns[c];
  out += "\n";
  char buf[32];
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      if (c)
        out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

bool ExperimentReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Table& ExperimentReport::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name)
      return t;
  throw DomainError("report has no table '" + name + "'");
}

json to_json(const ExperimentReport& r) {
  json scalars = json::object();
  for (const auto& [k, v] : r.scalars)
    scalars[k] = encode(v);
  json tables = json::array();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      json jr = json::array();
      for (double v : row)
        jr.push_back(encode(v));
      rows.push_back(jr);
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"config", to_json(r.config)}, {"scalars", scalars},       {"tables", tables},
          {"checks", checks},            {"files", r.files},         {"all_pass", r.all_pass()},
          {"wall_seconds", encode(r.wall_seconds)}};
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  try {
    r.config = config_from_json(j.at("config"));
    for (const auto& [k, v] : j.at("scalars").items()) {
      double x = 0;
      if (!decode(v, x))
        throw ConfigError("scalars." + k + ": expected a number");
      r.scalars[k] = x;
    }
    for (const auto& jt : j.at("tables")) {
      Table t;
      t.name = jt.at("name").get<std::string>();
      t.columns = jt.at("columns").get<std::vector<std::string>>();
      for (const auto& jr : jt.at("rows")) {
        std::vector<double> row;
        for (const auto& v : jr) {
          double x = 0;
          if (!decode(v, x))
            throw ConfigError("tables." + t.name + ": expected a number");
          row.push_back(x);
        }
        t.add(std::move(row));
      }
      r.tables.push_back(std::move(t));
    }
    for (const auto& jc : j.at("checks"))
      r.checks.push_back({jc.at("name").get<std::string>(), jc.at("pass").get<bool>(),
                          jc.at("detail").get<std::string>()});
    r.files = j.at("files").get<std::vector<std::string>>();
    if (!decode(j.at("wall_seconds"), r.wall_seconds))
      throw ConfigError("wall_seconds: expected a number");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return r;
}

} // namespace fracbs
