#include "gencert/bound_core.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "gencert/error.hpp"

namespace gencert {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_delta(double delta, const char* name) {
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(ErrorKind::parameter, std::string(name) + " must lie in (0, 1), got " + fmt(delta));
}

}  // namespace

CellCounts CellCounts::from_counts(std::vector<std::uint64_t> counts) {
  CellCounts out;
  out.counts = std::move(counts);
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    out.n += out.counts[i];
    if (out.counts[i] > 0) out.occupied.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

CellCounts CellCounts::from_cells(std::span<const std::uint32_t> cells, std::size_t K) {
  std::vector<std::uint64_t> counts(K, 0);
  for (std::uint32_t c : cells) {
    if (c >= K)
      throw Error(ErrorKind::invalid_input,
                  "cell index " + std::to_string(c) + " out of range for K=" + std::to_string(K));
    ++counts[c];
  }
  return from_counts(std::move(counts));
}

BoundParams BoundParams::from_eps_gamma(std::uint64_t n, std::size_t K, double delta, double alpha,
                                        double eps_gamma, double c_sup) {
  if (!(alpha > 0.0))
    throw Error(ErrorKind::parameter, "alpha must be > 0 to derive gamma from eps_gamma");
  if (!(eps_gamma > 0.0 && eps_gamma < 1.0))
    throw Error(ErrorKind::parameter, "eps_gamma must lie in (0, 1), got " + fmt(eps_gamma));
  BoundParams p;
  p.n = n;
  p.K = K;
  p.delta = delta;
  p.alpha = alpha;
  p.eps_gamma = eps_gamma;
  p.gamma = std::pow(eps_gamma, -1.0 / alpha);
  p.c_sup = c_sup;
  p.gamma_from_eps = true;
  p.validate();
  return p;
}

BoundParams BoundParams::from_gamma(std::uint64_t n, std::size_t K, double delta, double alpha,
                                    double gamma, double c_sup) {
  BoundParams p;
  p.n = n;
  p.K = K;
  p.delta = delta;
  p.alpha = alpha;
  p.gamma = gamma;
  p.eps_gamma = std::pow(gamma, -alpha);
  p.c_sup = c_sup;
  p.gamma_from_eps = false;
  p.validate();
  return p;
}

void BoundParams::validate() const {
  if (n == 0) throw Error(ErrorKind::invalid_input, "sample count n must be positive");
  if (K == 0) throw Error(ErrorKind::parameter, "partition size K must be positive");
  check_delta(delta, "delta");
  if (!(gamma >= 1.0) || !std::isfinite(gamma))
    throw Error(ErrorKind::parameter, "gamma must be finite and >= 1, got " + fmt(gamma));
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw Error(ErrorKind::parameter, "alpha must be finite and >= 0, got " + fmt(alpha));
  if (!(c_sup > 0.0) || !std::isfinite(c_sup))
    throw Error(ErrorKind::parameter, "C must be finite and > 0, got " + fmt(c_sup));
}

double compute_sum_sq(const CellCounts& counts) {
  if (counts.n == 0) throw Error(ErrorKind::invalid_input, "sum of squares needs n > 0");
  const double n = static_cast<double>(counts.n);
  double s = 0.0;
  for (std::uint64_t c : counts.counts) {
    const double f = static_cast<double>(c) / n;
    s += f * f;
  }
  return s;
}

double compute_uhat(const CellCounts& counts, const BoundParams& params) {
  if (counts.n == 0) throw Error(ErrorKind::invalid_input, "u_hat needs n > 0");
  check_delta(params.delta, "delta");
  if (!(params.gamma >= 1.0)) throw Error(ErrorKind::parameter, "gamma must be >= 1");
  const double n = static_cast<double>(counts.n);
  const double K = static_cast<double>(counts.K());
  const double g = params.gamma;
  return g / (2.0 * n) + g * g / 2.0 * compute_sum_sq(counts) +
         g * g * std::sqrt(2.0 / n * std::log(2.0 * K / params.delta));
}

double compute_g(std::size_t t_size, std::size_t K, std::uint64_t n, double delta, double c_sup) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "g needs n > 0");
  if (t_size > K || t_size > n)
    throw Error(ErrorKind::invalid_input, "|T|=" + std::to_string(t_size) +
                                              " exceeds min(K, n) = min(" + std::to_string(K) +
                                              ", " + std::to_string(n) + ")");
  check_delta(delta, "delta");
  if (!(c_sup >= 0.0)) throw Error(ErrorKind::parameter, "C must be >= 0");
  const double log_term = std::log(2.0 * static_cast<double>(K) / delta);
  const double ratio = static_cast<double>(t_size) * log_term / static_cast<double>(n);
  return c_sup * (std::sqrt(2.0) + 1.0) * std::sqrt(ratio) + 2.0 * c_sup * ratio;
}

double alpha_max(std::uint64_t n, std::size_t K, double gamma) {
  const double nd = static_cast<double>(n);
  const double Kd = static_cast<double>(K);
  return gamma * nd * (Kd + gamma * nd) / (Kd * (4.0 * nd - 3.0));
}

BoundTerms compute_terms(const CellCounts& counts, const BoundParams& params) {
  params.validate();
  if (counts.n != params.n || counts.K() != params.K)
    throw Error(ErrorKind::invalid_input,
                "cell counts (n=" + std::to_string(counts.n) + ", K=" + std::to_string(counts.K()) +
                    ") disagree with parameters (n=" + std::to_string(params.n) +
                    ", K=" + std::to_string(params.K) + ")");
  BoundTerms t;
  t.sum_sq = compute_sum_sq(counts);
  t.u_hat = compute_uhat(counts, params);
  t.g_val = compute_g(counts.t_size(), counts.K(), counts.n, params.delta / 2.0, params.c_sup);
  t.unc = params.c_sup * std::sqrt(t.u_hat * params.alpha * std::log(params.gamma)) + t.g_val;
  t.alpha_max = alpha_max(params.n, params.K, params.gamma);
  return t;
}

void check_alpha_admissible(const BoundParams& params) {
  const double ceiling = alpha_max(params.n, params.K, params.gamma);
  if (params.alpha > ceiling)
    throw Error(ErrorKind::validity, "alpha=" + fmt(params.alpha) + " exceeds its ceiling " +
                                         fmt(ceiling) + " for n=" + std::to_string(params.n) +
                                         ", K=" + std::to_string(params.K) +
                                         ", gamma=" + fmt(params.gamma));
}

double mean_loss(std::span<const double> losses) {
  if (losses.empty()) return 0.0;
  double s = 0.0;
  for (double l : losses) s += l;
  return s / static_cast<double>(losses.size());
}

void check_losses(std::span<const double> losses, double c_sup) {
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const double l = losses[i];
    if (!std::isfinite(l) || l < 0.0)
      throw Error(ErrorKind::invalid_input,
                  "loss #" + std::to_string(i) + " = " + fmt(l) + " is not a finite value >= 0");
    if (l > c_sup)
      throw Error(ErrorKind::c_violation,
                  "loss #" + std::to_string(i) + " = " + fmt(l) + " exceeds C = " + fmt(c_sup));
  }
}

BoundReport certify(std::span<const double> losses, const CellCounts& counts,
                    const BoundParams& params) {
  params.validate();
  if (losses.size() != counts.n)
    throw Error(ErrorKind::invalid_input, std::to_string(losses.size()) +
                                              " losses but cell counts total " +
                                              std::to_string(counts.n));
  check_losses(losses, params.c_sup);
  check_alpha_admissible(params);

  BoundReport r;
  r.params = params;
  r.terms = compute_terms(counts, params);
  r.t_size = counts.t_size();
  r.train_loss = mean_loss(losses);
  r.bound = r.train_loss + r.terms.unc;
  r.confidence = params.gamma_from_eps ? 1.0 - params.eps_gamma - params.delta
                                       : 1.0 - std::pow(params.gamma, -params.alpha) - params.delta;
  r.vacuous = r.bound > params.c_sup;
  return r;
}

BoundReport certify(const SampleTable& losses, const CellCounts& counts, const BoundParams& params) {
  validate(losses);
  return certify(std::span<const double>(losses.losses), counts, params);
}

double general_u(std::span<const double> p, std::uint64_t n, double gamma) {
  const double nd = static_cast<double>(n);
  double u = 0.0;
  for (double pi : p) {
    const double a = gamma * nd * pi;
    u += a * (1.0 + a);
  }
  return u;
}

double general_delta1_floor(double u, std::uint64_t n, double gamma) {
  return std::exp(-u * std::log(gamma) / (4.0 * static_cast<double>(n) - 3.0));
}

BoundReport certify_general(std::span<const double> losses, const CellCounts& counts,
                            GeneralParams gp, const BoundParams& params) {
  if (!(params.gamma >= 1.0) || !std::isfinite(params.gamma))
    throw Error(ErrorKind::parameter, "gamma must be finite and >= 1");
  if (!(params.c_sup > 0.0)) throw Error(ErrorKind::parameter, "C must be > 0");
  if (counts.n == 0) throw Error(ErrorKind::invalid_input, "general bound needs n > 0");
  if (losses.size() != counts.n)
    throw Error(ErrorKind::invalid_input, "losses and cell counts disagree on n");
  if (gp.p.size() != counts.K())
    throw Error(ErrorKind::invalid_input, "cell masses have " + std::to_string(gp.p.size()) +
                                              " entries but K=" + std::to_string(counts.K()));
  double total = 0.0;
  for (double pi : gp.p) {
    if (!(pi >= 0.0) || !std::isfinite(pi))
      throw Error(ErrorKind::invalid_input, "cell masses must be finite and >= 0");
    total += pi;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorKind::invalid_input, "cell masses sum to " + fmt(total) + ", not 1");
  if (!(gp.delta1 > 0.0 && gp.delta1 <= 1.0))
    throw Error(ErrorKind::parameter, "delta1 must lie in (0, 1]");
  check_delta(gp.delta2, "delta2");
  check_losses(losses, params.c_sup);

  gp.u = general_u(gp.p, counts.n, params.gamma);
  const double floor = general_delta1_floor(gp.u, counts.n, params.gamma);
  if (gp.delta1 < floor)
    throw Error(ErrorKind::precondition,
                "delta1=" + fmt(gp.delta1) + " is below its floor " + fmt(floor));

  const double n = static_cast<double>(counts.n);
  BoundReport r;
  r.params = params;
  r.params.n = counts.n;
  r.params.K = counts.K();
  r.terms.sum_sq = compute_sum_sq(counts);
  r.terms.u_hat = gp.u / (2.0 * n * n);
  r.terms.g_val = compute_g(counts.t_size(), counts.K(), counts.n, gp.delta2, params.c_sup);
  r.terms.unc = params.c_sup * std::sqrt(r.terms.u_hat * -std::log(gp.delta1)) + r.terms.g_val;
  r.terms.alpha_max = alpha_max(counts.n, counts.K(), params.gamma);
  r.t_size = counts.t_size();
  r.train_loss = mean_loss(losses);
  r.bound = r.train_loss + r.terms.unc;
  r.confidence = 1.0 - gp.delta1 - gp.delta2;
  r.vacuous = r.bound > params.c_sup;
  r.general = std::move(gp);
  return r;
}

}  // namespace gencert
