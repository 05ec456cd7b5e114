#include "centrex/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "centrex/errors.hpp"

namespace centrex {
namespace {

using nlohmann::json;

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json mat_json(const Mat3& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < 3; ++i) rows.push_back(vec_json(m.row(i)));
  return rows;
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: " + key + ": " + e.what());
  }
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = get_as<T>(j, key);
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: " + where + " must be an object");
  }
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw std::invalid_argument("config: unknown key " + where + item.key());
    }
  }
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quote");
  cells.push_back(cell);
  return cells;
}

// Splits on newlines outside quotes.
std::vector<std::string> records(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : text) {
    if (c == '"') quoted = !quoted;
    if (c == '\n' && !quoted) {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("csv: not an integer: '" + s + "'");
  }
  return v;
}

double numeric_field(const SweepRow& r, const std::string& name) {
  if (name == "k") return r.k;
  if (name == "lambda_s") return r.lambda_s;
  if (name == "lambda_c") return r.lambda_c;
  if (name == "lambda_u") return r.lambda_u;
  if (name == "theta") return r.theta;
  if (name == "beta") return r.beta;
  if (name == "gamma") return r.gamma;
  if (name == "epsilon") return r.epsilon;
  if (name == "c1_distance") return r.c1_distance;
  if (name == "I_h") return r.I_h;
  if (name == "n_r") return r.n_r;
  if (name == "C") return r.C;
  if (name == "lower_bound") return r.lower_bound;
  if (name == "sigma_c") return r.sigma_c;
  if (name == "sigma_c_ci_lo") return r.sigma_c_ci_lo;
  if (name == "sigma_c_ci_hi") return r.sigma_c_ci_hi;
  if (name == "sigma_u") return r.sigma_u;
  throw std::invalid_argument("unknown numeric column: " + name);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.close();
  if (!out) throw IoError(path, "write failed");
}

json estimate_json(const RadiusEstimate& e) {
  return {{"radius", e.radius},       {"sigma_c", number(e.sigma_c)},
          {"std_error", number(e.std_error)}, {"ci_lo", number(e.ci_lo)},
          {"ci_hi", number(e.ci_hi)}, {"n_seeds", e.n_seeds}};
}

json exponents_json(const Exponents& e) {
  return json::array({number(e[0]), number(e[1]), number(e[2])});
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  return {
      {"k_min", c.k_min},
      {"k_max", c.k_max},
      {"k_step", c.k_step},
      {"amplitude", c.amplitude},
      {"margin", c.margin},
      {"center", vec_json(c.center)},
      {"radius", c.radius},
      {"n_seeds", c.n_seeds},
      {"iters", c.iters},
      {"warmup", c.warmup},
      {"master_seed", c.master_seed},
      {"quadrature_grid", c.quadrature_grid},
      {"cone_points", c.cone_points},
      {"cone_directions", c.cone_directions},
      {"c1_samples", c.c1_samples},
      {"c_points", c.c_points},
      {"pullback_depth", c.pullback_depth},
      {"return_n_max", c.return_n_max},
      {"return_samples", c.return_samples},
      {"search",
       {{"ks", c.search.ks},
        {"amplitudes", c.search.amplitudes},
        {"radii", c.search.radii}}},
      {"r0",
       {{"ci_floor", c.r0.ci_floor},
        {"max_bisections", c.r0.max_bisections},
        {"max_refinements", c.r0.max_refinements},
        {"monotonicity_diagnostic", c.r0.monotonicity_diagnostic}}},
      {"threads", c.threads},
      {"out_dir", c.out_dir},
      {"stem", c.stem},
  };
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"k_min", "k_max", "k_step", "amplitude", "margin", "center",
                  "radius", "n_seeds", "iters", "warmup", "master_seed",
                  "quadrature_grid", "cone_points", "cone_directions",
                  "c1_samples", "c_points", "pullback_depth", "return_n_max",
                  "return_samples", "search", "r0", "threads", "out_dir",
                  "stem"},
                 "");
  ExperimentConfig c;
  read_if(j, "k_min", c.k_min);
  read_if(j, "k_max", c.k_max);
  read_if(j, "k_step", c.k_step);
  read_if(j, "amplitude", c.amplitude);
  read_if(j, "margin", c.margin);
  if (j.contains("center")) {
    const auto v = get_as<std::vector<double>>(j, "center");
    if (v.size() != 3) {
      throw std::invalid_argument("config: center needs three numbers");
    }
    c.center = {v[0], v[1], v[2]};
  }
  read_if(j, "radius", c.radius);
  read_if(j, "n_seeds", c.n_seeds);
  read_if(j, "iters", c.iters);
  read_if(j, "warmup", c.warmup);
  read_if(j, "master_seed", c.master_seed);
  read_if(j, "quadrature_grid", c.quadrature_grid);
  read_if(j, "cone_points", c.cone_points);
  read_if(j, "cone_directions", c.cone_directions);
  read_if(j, "c1_samples", c.c1_samples);
  read_if(j, "c_points", c.c_points);
  read_if(j, "pullback_depth", c.pullback_depth);
  read_if(j, "return_n_max", c.return_n_max);
  read_if(j, "return_samples", c.return_samples);
  if (j.contains("search")) {
    const json& s = j.at("search");
    reject_unknown(s, {"ks", "amplitudes", "radii"}, "search.");
    read_if(s, "ks", c.search.ks);
    read_if(s, "amplitudes", c.search.amplitudes);
    read_if(s, "radii", c.search.radii);
  }
  if (j.contains("r0")) {
    const json& r = j.at("r0");
    reject_unknown(r,
                   {"ci_floor", "max_bisections", "max_refinements",
                    "monotonicity_diagnostic"},
                   "r0.");
    read_if(r, "ci_floor", c.r0.ci_floor);
    read_if(r, "max_bisections", c.r0.max_bisections);
    read_if(r, "max_refinements", c.r0.max_refinements);
    read_if(r, "monotonicity_diagnostic", c.r0.monotonicity_diagnostic);
  }
  read_if(j, "threads", c.threads);
  read_if(j, "out_dir", c.out_dir);
  read_if(j, "stem", c.stem);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  write_file(path, to_json(config).dump(2) + "\n");
}

const std::array<const char*, 19>& sweep_columns() {
  static const std::array<const char*, 19> cols{
      "k",           "lambda_s",    "lambda_c",      "lambda_u",
      "theta",       "beta",        "gamma",         "epsilon",
      "c1_distance", "I_h",         "n_r",           "C",
      "lower_bound", "sigma_c",     "sigma_c_ci_lo", "sigma_c_ci_hi",
      "sigma_u",     "verdict",     "status"};
  return cols;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

void write_csv(const SweepTable& table, std::ostream& os) {
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << '\n';
  for (const SweepRow& r : table) {
    os << r.k;
    for (double x : {r.lambda_s, r.lambda_c, r.lambda_u, r.theta, r.beta,
                     r.gamma, r.epsilon, r.c1_distance, r.I_h}) {
      os << ',' << format_double(x);
    }
    os << ',' << r.n_r;
    for (double x : {r.C, r.lower_bound, r.sigma_c, r.sigma_c_ci_lo,
                     r.sigma_c_ci_hi, r.sigma_u}) {
      os << ',' << format_double(x);
    }
    os << ',' << quote(r.verdict) << ',' << quote(r.status) << '\n';
  }
}

std::string to_csv(const SweepTable& table) {
  std::ostringstream os;
  write_csv(table, os);
  return os.str();
}

SweepTable parse_csv(const std::string& text) {
  const auto lines = records(text);
  if (lines.empty()) throw std::invalid_argument("csv: missing header");
  const auto header = split_record(lines[0]);
  const auto& cols = sweep_columns();
  if (header.size() != cols.size() ||
      !std::equal(header.begin(), header.end(), cols.begin())) {
    throw std::invalid_argument("csv: unexpected header");
  }
  SweepTable table;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto c = split_record(lines[n]);
    if (c.size() != cols.size()) {
      throw std::invalid_argument("csv: row " + std::to_string(n) +
                                  " has the wrong number of cells");
    }
    SweepRow r;
    r.k = parse_int(c[0]);
    r.lambda_s = parse_double(c[1]);
    r.lambda_c = parse_double(c[2]);
    r.lambda_u = parse_double(c[3]);
    r.theta = parse_double(c[4]);
    r.beta = parse_double(c[5]);
    r.gamma = parse_double(c[6]);
    r.epsilon = parse_double(c[7]);
    r.c1_distance = parse_double(c[8]);
    r.I_h = parse_double(c[9]);
    r.n_r = parse_int(c[10]);
    r.C = parse_double(c[11]);
    r.lower_bound = parse_double(c[12]);
    r.sigma_c = parse_double(c[13]);
    r.sigma_c_ci_lo = parse_double(c[14]);
    r.sigma_c_ci_hi = parse_double(c[15]);
    r.sigma_u = parse_double(c[16]);
    r.verdict = c[17];
    r.status = c[18];
    table.push_back(std::move(r));
  }
  return table;
}

json to_json(const SweepRow& r) {
  return {{"k", r.k},
          {"lambda_s", number(r.lambda_s)},
          {"lambda_c", number(r.lambda_c)},
          {"lambda_u", number(r.lambda_u)},
          {"theta", number(r.theta)},
          {"beta", number(r.beta)},
          {"gamma", number(r.gamma)},
          {"epsilon", number(r.epsilon)},
          {"c1_distance", number(r.c1_distance)},
          {"I_h", number(r.I_h)},
          {"n_r", r.n_r},
          {"C", number(r.C)},
          {"lower_bound", number(r.lower_bound)},
          {"sigma_c", number(r.sigma_c)},
          {"sigma_c_ci_lo", number(r.sigma_c_ci_lo)},
          {"sigma_c_ci_hi", number(r.sigma_c_ci_hi)},
          {"sigma_u", number(r.sigma_u)},
          {"verdict", r.verdict},
          {"status", r.status}};
}

json sweep_json(const SweepTable& table) {
  json rows = json::array();
  for (const SweepRow& r : table) rows.push_back(to_json(r));
  return {{"schema_version", kSchemaVersion},
          {"columns", sweep_columns()},
          {"rows", rows}};
}

std::string plot_series(const SweepTable& table, const std::string& x,
                        const std::string& y) {
  SweepRow probe;
  numeric_field(probe, x);
  numeric_field(probe, y);
  std::string out = "# " + x + " " + y + "\n";
  for (const SweepRow& r : table) {
    const double a = numeric_field(r, x);
    const double b = numeric_field(r, y);
    if (std::isfinite(a) && std::isfinite(b)) {
      out += format_double(a) + " " + format_double(b) + "\n";
    }
  }
  return out;
}

std::vector<std::string> emit(
    const SweepTable& table, Format format, const std::string& out_dir,
    const std::string& stem,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, ec.message());
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;
  switch (format) {
    case Format::csv: {
      const std::string path = (dir / (stem + ".csv")).string();
      write_file(path, to_csv(table));
      written.push_back(path);
      break;
    }
    case Format::json: {
      const std::string path = (dir / (stem + ".json")).string();
      write_file(path, sweep_json(table).dump(2) + "\n");
      written.push_back(path);
      break;
    }
    case Format::dat:
      for (const auto& [x, y] : pairs) {
        const std::string path =
            (dir / (stem + "_" + x + "_" + y + ".dat")).string();
        write_file(path, plot_series(table, x, y));
        written.push_back(path);
      }
      break;
  }
  return written;
}

json to_json(const SpectralData& s) {
  return {{"k", s.k},
          {"lambda_s", s.lambda_s},
          {"lambda_c", s.lambda_c},
          {"lambda_u", s.lambda_u},
          {"e_s", vec_json(s.e_s)},
          {"e_c", vec_json(s.e_c)},
          {"e_u", vec_json(s.e_u)},
          {"P", mat_json(s.P)},
          {"theta", s.theta}};
}

json to_json(const ConeConstants& c) {
  return {{"theta", number(c.theta)},     {"beta", number(c.beta)},
          {"mu1", number(c.mu1)},         {"lambda2", number(c.lambda2)},
          {"mu2", number(c.mu2)},         {"lambda3", number(c.lambda3)},
          {"gamma", number(c.gamma)},     {"epsilon", number(c.epsilon)},
          {"lambda1", number(c.lambda1)}, {"mu3", number(c.mu3)}};
}

json to_json(const ConeCertificate& cert) {
  json margins = json::object();
  const auto values = cert.margins.as_array();
  for (std::size_t i = 0; i < ConeMargins::count; ++i) {
    margins[ConeMargins::names()[i]] = number(values[i]);
  }
  return {{"verdict", cert.pass ? "pass" : "fail"},
          {"margins", margins},
          {"chain_margin", number(cert.chain_margin)},
          {"grid",
           {{"points", cert.grid.points},
            {"directions", cert.grid.directions}}},
          {"constants", to_json(cert.constants)},
          {"c1_distance", cert.c1_distance},
          {"precondition_met", cert.precondition_met},
          {"worst_margin", cert.worst_margin},
          {"worst_point", vec_json(cert.worst_point)},
          {"worst_direction", vec_json(cert.worst_direction)}};
}

json to_json(const LyapunovEstimate& est) {
  return {{"exponents", exponents_json(est.exponents)},
          {"std_error", exponents_json(est.std_error)},
          {"ci_lo", exponents_json(est.ci_lo)},
          {"ci_hi", exponents_json(est.ci_hi)},
          {"n_seeds", est.n_seeds},
          {"n_iters", est.n_iters},
          {"warmup", est.warmup},
          {"master_seed", est.master_seed}};
}

json to_json(const SigmaEstimate& est) {
  auto method = [](const MethodEstimate& m) {
    return json{{"method", m.method},       {"value", number(m.value)},
                {"std_error", number(m.std_error)}, {"ci_lo", number(m.ci_lo)},
                {"ci_hi", number(m.ci_hi)}, {"samples", m.samples}};
  };
  return {{"bundle", est.bundle == Bundle::c ? "c" : "u"},
          {"primary", method(est.primary)},
          {"cross_check", method(est.cross_check)},
          {"disagreement", est.disagreement}};
}

json to_json(const IntegralEstimate& est) {
  return {{"value", est.value},
          {"standard_error", est.standard_error},
          {"integral", est.integral},
          {"points", est.points},
          {"min_h_u", est.min_h_u}};
}

json to_json(const PositiveWitness& w) {
  json trace = json::array();
  for (const SearchStep& s : w.trace) {
    trace.push_back({{"k", s.k},
                     {"amplitude", s.amplitude},
                     {"radius", s.radius},
                     {"sigma_c", number(s.sigma_c)},
                     {"ci_lo", number(s.ci_lo)},
                     {"ci_hi", number(s.ci_hi)},
                     {"note", s.note}});
  }
  return {{"k", w.k},
          {"amplitude", w.amplitude},
          {"radius", w.radius},
          {"log_lambda_c", w.log_lambda_c},
          {"lyapunov", to_json(w.lyapunov)},
          {"certificate", to_json(w.certificate)},
          {"trace", trace}};
}

json to_json(const R0Result& r) {
  json trace = json::array();
  for (const auto& e : r.trace) trace.push_back(estimate_json(e));
  json diag = json::array();
  for (const auto& e : r.diagnostic) diag.push_back(estimate_json(e));
  return {{"r0", r.r0},
          {"at_r0", estimate_json(r.at_r0)},
          {"bracket_lower", estimate_json(r.lower)},
          {"bracket_upper", estimate_json(r.upper)},
          {"converged", r.converged},
          {"bisections", r.bisections},
          {"trace", trace},
          {"diagnostic", diag},
          {"monotone_within_noise", r.monotone_within_noise}};
}

}  // namespace centrex
