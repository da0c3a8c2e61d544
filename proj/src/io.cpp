#include "gencert/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "gencert/error.hpp"

namespace gencert::io {
namespace {

using nlohmann::ordered_json;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads one line, dropping a trailing CR. Returns false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

double parse_number(const std::string& s, std::size_t lineno) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::parse, "not a number: '" + s + "'", lineno);
  return v;
}

std::uint64_t parse_index(const std::string& s, std::size_t lineno) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::parse, "not a non-negative integer: '" + s + "'", lineno);
  return v;
}

void expect_header(std::istream& in, const std::string& header, std::size_t& lineno) {
  std::string line;
  if (!next_line(in, line, lineno)) throw Error(ErrorKind::parse, "missing header '" + header + "'", 1);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != header)
    throw Error(ErrorKind::parse, "header must be '" + header + "', got '" + line + "'", lineno);
}

// Calls row(fields, lineno) for each non-blank data line with exactly `width` fields.
template <class Row>
void for_each_row(std::istream& in, std::size_t width, std::size_t& lineno, Row&& row) {
  std::string line;
  std::unordered_set<std::string> seen;
  while (next_line(in, line, lineno)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != width)
      throw Error(ErrorKind::parse,
                  "expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()), lineno);
    if (f[0].empty()) throw Error(ErrorKind::parse, "empty id", lineno);
    if (!seen.insert(f[0]).second) throw Error(ErrorKind::parse, "duplicate id '" + f[0] + "'", lineno);
    row(f, lineno);
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return in;
}

ordered_json to_json(const std::vector<std::uint32_t>& v) {
  ordered_json a = ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

template <class T>
T get_or(const ordered_json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? fallback : it->get<T>();
}

}  // namespace

std::string read_text(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

SampleTable parse_losses(std::istream& in) {
  std::size_t lineno = 0;
  expect_header(in, "id,loss", lineno);
  SampleTable t;
  for_each_row(in, 2, lineno, [&](const std::vector<std::string>& f, std::size_t l) {
    t.ids.push_back(f[0]);
    t.losses.push_back(parse_number(f[1], l));
  });
  return t;
}

FeatureTable parse_features(std::istream& in) {
  std::size_t lineno = 0;
  std::string header;
  if (!next_line(in, header, lineno)) throw Error(ErrorKind::parse, "missing header 'id,f1,...,fd'", 1);
  if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
  const auto cols = split(header);
  if (cols.size() < 2 || cols[0] != "id")
    throw Error(ErrorKind::parse, "header must be 'id,f1,...,fd'", lineno);
  for (std::size_t j = 1; j < cols.size(); ++j)
    if (cols[j] != "f" + std::to_string(j))
      throw Error(ErrorKind::parse, "feature column " + std::to_string(j) + " must be named f" + std::to_string(j),
                  lineno);
  FeatureTable t;
  t.dim = cols.size() - 1;
  for_each_row(in, cols.size(), lineno, [&](const std::vector<std::string>& f, std::size_t l) {
    t.ids.push_back(f[0]);
    for (std::size_t j = 1; j < f.size(); ++j) {
      const double v = parse_number(f[j], l);
      if (!std::isfinite(v)) throw Error(ErrorKind::parse, "non-finite feature", l);
      t.values.push_back(v);
    }
  });
  return t;
}

Assignment parse_assignments(std::istream& in) {
  std::size_t lineno = 0;
  expect_header(in, "id,cell", lineno);
  Assignment a;
  for_each_row(in, 2, lineno, [&](const std::vector<std::string>& f, std::size_t l) {
    const std::uint64_t c = parse_index(f[1], l);
    if (c > 0xffffffffULL) throw Error(ErrorKind::parse, "cell index too large", l);
    a.ids.push_back(f[0]);
    a.cells.push_back(static_cast<std::uint32_t>(c));
  });
  return a;
}

std::vector<double> parse_masses(std::istream& in, std::size_t K) {
  std::size_t lineno = 0;
  expect_header(in, "cell,p", lineno);
  std::vector<double> p(K, 0.0);
  for_each_row(in, 2, lineno, [&](const std::vector<std::string>& f, std::size_t l) {
    const std::uint64_t c = parse_index(f[0], l);
    if (c >= K) throw Error(ErrorKind::parse, "cell index " + f[0] + " >= K", l);
    p[c] = parse_number(f[1], l);
  });
  return p;
}

SampleTable read_losses(const std::string& path) {
  auto in = open_in(path);
  return parse_losses(in);
}
FeatureTable read_features(const std::string& path) {
  auto in = open_in(path);
  return parse_features(in);
}
Assignment read_assignments(const std::string& path) {
  auto in = open_in(path);
  return parse_assignments(in);
}
std::vector<double> read_masses(const std::string& path, std::size_t K) {
  auto in = open_in(path);
  return parse_masses(in, K);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string losses_csv(const SampleTable& t) {
  std::string s = "id,loss\n";
  for (std::size_t i = 0; i < t.size(); ++i) s += t.ids[i] + "," + format_double(t.losses[i]) + "\n";
  return s;
}

std::string features_csv(const FeatureTable& t) {
  std::string s = "id";
  for (std::size_t j = 1; j <= t.dim; ++j) s += ",f" + std::to_string(j);
  s += "\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    s += t.ids[i];
    for (double v : t.row(i)) s += "," + format_double(v);
    s += "\n";
  }
  return s;
}

std::string assignments_csv(const Assignment& a) {
  std::string s = "id,cell\n";
  for (std::size_t i = 0; i < a.size(); ++i) s += a.ids[i] + "," + std::to_string(a.cells[i]) + "\n";
  return s;
}

std::string report_json(const BoundReport& r, const ReportContext& ctx) {
  ordered_json j;
  if (!ctx.command.empty()) j["command"] = ctx.command;
  j["n"] = r.params.n;
  j["K"] = r.params.K;
  j["T_size"] = r.t_size;
  j["sum_sq"] = r.terms.sum_sq;
  j["u_hat"] = r.terms.u_hat;
  j["g"] = r.terms.g_val;
  j["unc"] = r.terms.unc;
  j["alpha"] = r.params.alpha;
  j["alpha_max"] = r.terms.alpha_max;
  j["gamma"] = r.params.gamma;
  j["gamma_source"] = r.params.gamma_from_eps ? "eps_gamma" : "raw";
  j["delta"] = r.params.delta;
  j["eps_gamma"] = r.params.eps_gamma;
  j["c_sup"] = r.params.c_sup;
  j["train_loss"] = r.train_loss;
  j["bound"] = r.bound;
  j["confidence"] = r.confidence;
  j["vacuous"] = r.vacuous;
  j["corrected"] = r.corrected;
  if (r.main_part) j["main_part"] = *r.main_part;
  if (r.augment) {
    const AugmentTerms& a = *r.augment;
    ordered_json aj;
    aj["eps_bar"] = a.eps_bar;
    aj["aug_loss"] = a.aug_loss;
    aj["correction"] = a.correction;
    aj["m"] = a.m;
    aj["missing_aug_cells"] = to_json(a.missing_aug_cells);
    aj["approximate"] = a.approximate;
    if (a.sigma) aj["sigma"] = *a.sigma;
    j["augment"] = aj;
  }
  if (r.general) {
    ordered_json gj;
    gj["delta1"] = r.general->delta1;
    gj["delta2"] = r.general->delta2;
    gj["u"] = r.general->u;
    gj["p"] = r.general->p;
    j["known_mass"] = gj;
  }
  j["seeds"] = ordered_json::object();
  for (const auto& [k, v] : ctx.seeds) j["seeds"][k] = v;
  if (!ctx.inputs.empty()) {
    j["inputs"] = ordered_json::object();
    for (const auto& [k, v] : ctx.inputs) j["inputs"][k] = v;
  }
  return j.dump(2) + "\n";
}

BoundReport parse_report(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    BoundReport r;
    r.params.n = j.at("n").get<std::uint64_t>();
    r.params.K = j.at("K").get<std::size_t>();
    r.t_size = j.at("T_size").get<std::size_t>();
    r.terms.sum_sq = j.at("sum_sq").get<double>();
    r.terms.u_hat = j.at("u_hat").get<double>();
    r.terms.g_val = j.at("g").get<double>();
    r.terms.unc = j.at("unc").get<double>();
    r.terms.alpha_max = get_or(j, "alpha_max", 0.0);
    r.params.alpha = j.at("alpha").get<double>();
    r.params.gamma = j.at("gamma").get<double>();
    r.params.gamma_from_eps = get_or<std::string>(j, "gamma_source", "eps_gamma") == "eps_gamma";
    r.params.delta = j.at("delta").get<double>();
    r.params.eps_gamma = j.at("eps_gamma").get<double>();
    r.params.c_sup = j.at("c_sup").get<double>();
    r.train_loss = j.at("train_loss").get<double>();
    r.bound = j.at("bound").get<double>();
    r.confidence = j.at("confidence").get<double>();
    r.vacuous = j.at("vacuous").get<bool>();
    r.corrected = j.at("corrected").get<bool>();
    if (j.contains("main_part")) r.main_part = j["main_part"].get<double>();
    if (j.contains("augment")) {
      const auto& aj = j["augment"];
      AugmentTerms a;
      a.eps_bar = aj.at("eps_bar").get<double>();
      a.aug_loss = aj.at("aug_loss").get<double>();
      a.correction = aj.at("correction").get<double>();
      a.m = aj.at("m").get<std::uint64_t>();
      a.missing_aug_cells = aj.at("missing_aug_cells").get<std::vector<std::uint32_t>>();
      a.approximate = aj.at("approximate").get<bool>();
      if (aj.contains("sigma")) a.sigma = aj["sigma"].get<double>();
      r.augment = a;
    }
    if (j.contains("known_mass")) {
      const auto& gj = j["known_mass"];
      GeneralParams gp;
      gp.delta1 = gj.at("delta1").get<double>();
      gp.delta2 = gj.at("delta2").get<double>();
      gp.u = gj.at("u").get<double>();
      gp.p = gj.at("p").get<std::vector<double>>();
      r.general = gp;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("report field missing or mistyped: ") + e.what());
  }
}

double reassemble_bound(const BoundReport& r) {
  return (r.main_part ? *r.main_part : r.train_loss) + r.terms.unc;
}

std::string centroids_json(const Centroids& c) {
  ordered_json j;
  j["K"] = c.K();
  j["dim"] = c.dim;
  j["seed"] = c.seed;
  j["iters_run"] = c.iters_run;
  j["objective_trace"] = c.objective_trace;
  j["centroids"] = ordered_json::array();
  for (std::size_t k = 0; k < c.K(); ++k) {
    const auto row = c.row(k);
    j["centroids"].push_back(std::vector<double>(row.begin(), row.end()));
  }
  return j.dump(2) + "\n";
}

Centroids parse_centroids(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    Centroids c;
    c.dim = j.at("dim").get<std::size_t>();
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    for (const auto& row : j.at("centroids")) {
      const auto v = row.get<std::vector<double>>();
      if (v.size() != c.dim) throw Error(ErrorKind::dimension, "centroid row has the wrong dimension");
      c.values.insert(c.values.end(), v.begin(), v.end());
    }
    if (c.dim == 0 || c.values.empty()) throw Error(ErrorKind::invalid_input, "no centroids");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed centroids file: ") + e.what());
  }
}

std::string grid_csv(const GridResult& g) {
  std::string s = "K,alpha,gamma,u_hat,g,unc,bound,valid\n";
  for (const GridRow& r : g.table)
    s += std::to_string(r.K) + "," + format_double(r.alpha) + "," + format_double(r.gamma) + "," +
         format_double(r.u_hat) + "," + format_double(r.g) + "," + format_double(r.unc) + "," +
         format_double(r.bound) + "," + (r.valid ? "true" : "false") + "\n";
  return s;
}

std::string checks_csv(const std::vector<conclab::CheckResult>& rows) {
  std::string s = "check,params,estimate,bound,margin,pass\n";
  for (const auto& r : rows)
    s += r.check + "," + r.params + "," + format_double(r.estimate) + "," + format_double(r.bound) + "," +
         format_double(r.margin) + "," + (r.pass ? "true" : "false") + "\n";
  return s;
}

std::string coverage_csv(const synth::CoverageResult& r) {
  std::string s = "trial,train_loss,sum_sq,truth,bound,covered,bound_known_mass,covered_known_mass\n";
  for (std::size_t t = 0; t < r.trials.size(); ++t) {
    const auto& x = r.trials[t];
    s += std::to_string(t) + "," + format_double(x.train_loss) + "," + format_double(x.sum_sq) + "," +
         format_double(x.truth) + "," + format_double(x.bound) + "," + (x.covered ? "true" : "false") + "," +
         (x.bound_general ? format_double(*x.bound_general) : "") + "," +
         (x.covered_general ? (*x.covered_general ? "true" : "false") : "") + "\n";
  }
  return s;
}

}  // namespace gencert::io
