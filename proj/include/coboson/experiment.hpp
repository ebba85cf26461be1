#pragma once

// Run configuration, single runs, parameter sweeps, validation suites and
// CSV/JSON emission.

#include <algorithm>
#include <atomic>
#include <clocale>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "coboson/dynamics.hpp"
#include "coboson/scattering.hpp"

namespace coboson {

using ordered_json = nlohmann::ordered_json;

enum class Mode { analytic, effective, full, validate_effective, validate_pt2, bands };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::effective: return "effective";
    case Mode::full: return "full";
    case Mode::validate_effective: return "validate-effective";
    case Mode::validate_pt2: return "validate-pt2";
    case Mode::bands: return "bands";
  }
  return "unknown";
}

inline Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::analytic, Mode::effective, Mode::full, Mode::validate_effective, Mode::validate_pt2,
                 Mode::bands})
    if (s == to_string(m)) return m;
  throw InvalidParameter("unknown mode '" + s + "'");
}

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw InvalidParameter("unknown output format '" + s + "'");
}

/// k in {pi/6, pi/4, pi/3, 5pi/12, pi/2, 7pi/12, 2pi/3, 3pi/4, 5pi/6}
inline std::vector<double> default_k_grid() {
  std::vector<double> k;
  for (int twelfths : {2, 3, 4, 5, 6, 7, 8, 9, 10}) k.push_back(twelfths * pi / 12.0);
  return k;
}

struct RunConfig {
  Mode mode = Mode::effective;
  int L = 101;
  double J = 1.0;
  double U = 20.0;
  std::optional<double> mu;    ///< explicit barrier; otherwise derived from muU
  std::vector<double> muU{1.0, 2.0, 4.0};
  std::vector<int> eps{-1, 1};
  double sigma = 10.0;
  std::vector<double> k = default_k_grid();
  std::optional<int> c;        ///< nullopt = auto
  std::optional<double> t;     ///< nullopt = auto
  std::string output_path;     ///< empty = stdout
  Format format = Format::csv;
  Propagator propagator = Propagator::automatic;

  /// Per-mode defaults; the full-model validation works on a small lattice.
  static RunConfig defaults(Mode mode) {
    RunConfig cfg;
    cfg.mode = mode;
    if (mode == Mode::validate_effective || mode == Mode::full) {
      cfg.L = 11;
      cfg.sigma = 1.0;
      cfg.muU = {1.0};
      cfg.eps = {-1, 1};
      cfg.k = {pi / 2};
    }
    return cfg;
  }

  int centre() const { return c ? *c : auto_centre(L); }

  double beta_to_mu(double beta) const { return beta * J * J / U; }

  /// (beta, mu) points: either the muU list, or the single explicit mu.
  std::vector<std::pair<double, double>> barrier_points() const {
    std::vector<std::pair<double, double>> out;
    if (mu) {
      out.emplace_back(*mu * U / (J * J), *mu);
    } else {
      for (double b : muU) out.emplace_back(b, beta_to_mu(b));
    }
    return out;
  }

  void validate() const {
    ModelParams{L, J, 0.0, U}.validate();
    if (U == 0.0) throw InvalidParameter("U must be nonzero");
    for (int e : eps) require_sign(e);
    if (eps.empty()) throw InvalidParameter("eps list is empty");
    if (k.empty()) throw InvalidParameter("k grid is empty");
    for (double kv : k)
      if (!(kv > 0.0 && kv < pi)) throw InvalidParameter("k values must lie strictly inside (0, pi)");
    if (!mu && muU.empty()) throw InvalidParameter("muU list is empty");
    for (double b : muU)
      if (!std::isfinite(b)) throw InvalidParameter("muU must be finite");
    if (mu && !std::isfinite(*mu)) throw InvalidParameter("mu must be finite");
    if (!(sigma > 0.0)) throw InvalidParameter("sigma must be positive");
    if (t && !(*t > 0.0 && std::isfinite(*t))) throw InvalidParameter("t must be positive and finite");
    if (c && (*c <= 0 || *c > (L - 1) / 2)) throw InvalidParameter("packet centre must lie in 1..(L-1)/2");
  }
};

namespace detail {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{"mode", "L", "J", "U", "mu", "muU", "eps",
                                             "packet", "t", "output", "propagator"};
  return keys;
}

inline void reject_unknown(const ordered_json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidParameter("unknown key '" + key + "' in " + where);
}

template <typename T>
std::vector<T> scalar_or_list(const ordered_json& j, const std::string& name) {
  if (j.is_array()) return j.get<std::vector<T>>();
  if (j.is_number()) return {j.get<T>()};
  throw InvalidParameter("'" + name + "' must be a number or a list of numbers");
}

inline Propagator parse_propagator(const std::string& s) {
  for (Propagator p : {Propagator::automatic, Propagator::eigen, Propagator::chebyshev, Propagator::krylov})
    if (s == to_string(p)) return p;
  throw InvalidParameter("unknown propagator '" + s + "'");
}

}  // namespace detail

/// Parses a JSON config document; unknown keys are rejected. `fallback`
/// supplies the mode when the document has none.
inline RunConfig parse_config(const std::string& text, Mode fallback) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("config must be a JSON object");
  detail::reject_unknown(j, detail::known_keys(), "config");

  try {
    const Mode mode = j.contains("mode") ? parse_mode(j["mode"].get<std::string>()) : fallback;
    RunConfig cfg = RunConfig::defaults(mode);
    if (j.contains("L")) cfg.L = j["L"].get<int>();
    if (j.contains("J")) cfg.J = j["J"].get<double>();
    if (j.contains("U")) cfg.U = j["U"].get<double>();
    if (j.contains("mu") && j.contains("muU")) throw InvalidParameter("give either 'mu' or 'muU', not both");
    if (j.contains("mu")) cfg.mu = j["mu"].get<double>();
    if (j.contains("muU")) cfg.muU = detail::scalar_or_list<double>(j["muU"], "muU");
    if (j.contains("eps")) cfg.eps = detail::scalar_or_list<int>(j["eps"], "eps");
    if (j.contains("packet")) {
      const auto& p = j["packet"];
      if (!p.is_object()) throw InvalidParameter("'packet' must be an object");
      detail::reject_unknown(p, {"sigma", "k", "k_grid", "c"}, "packet");
      if (p.contains("k") && p.contains("k_grid")) throw InvalidParameter("give either packet.k or packet.k_grid");
      if (p.contains("sigma")) cfg.sigma = p["sigma"].get<double>();
      if (p.contains("k")) cfg.k = {p["k"].get<double>()};
      if (p.contains("k_grid")) cfg.k = p["k_grid"].get<std::vector<double>>();
      if (p.contains("c")) {
        if (p["c"].is_string()) {
          if (p["c"].get<std::string>() != "auto") throw InvalidParameter("packet.c must be an integer or \"auto\"");
          cfg.c.reset();
        } else {
          cfg.c = p["c"].get<int>();
        }
      }
    }
    if (j.contains("t")) {
      if (j["t"].is_string()) {
        if (j["t"].get<std::string>() != "auto") throw InvalidParameter("t must be a number or \"auto\"");
        cfg.t.reset();
      } else {
        cfg.t = j["t"].get<double>();
      }
    }
    if (j.contains("output")) {
      const auto& o = j["output"];
      if (!o.is_object()) throw InvalidParameter("'output' must be an object");
      detail::reject_unknown(o, {"path", "format"}, "output");
      if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
      if (o.contains("format")) cfg.format = parse_format(o["format"].get<std::string>());
    }
    if (j.contains("propagator")) cfg.propagator = detail::parse_propagator(j["propagator"].get<std::string>());
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("config field has the wrong type: ") + e.what());
  }
}

/// Resolved configuration echo embedded in every output file.
inline ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["mode"] = to_string(cfg.mode);
  j["L"] = cfg.L;
  j["J"] = cfg.J;
  j["U"] = cfg.U;
  if (cfg.mu) j["mu"] = *cfg.mu;
  else j["muU"] = cfg.muU;
  j["eps"] = cfg.eps;
  ordered_json packet;
  packet["sigma"] = cfg.sigma;
  packet["k_grid"] = cfg.k;
  packet["c"] = cfg.centre();
  j["packet"] = packet;
  if (cfg.t) {
    j["t"] = *cfg.t;
  } else {
    j["t"] = "auto";
    std::vector<double> t_end;
    for (double k : cfg.k) {
      try {
        t_end.push_back(auto_time(ModelParams{cfg.L, cfg.J, 0.0, cfg.U}, k,
                                  effective_params(ModelParams{cfg.L, cfg.J, 0.0, cfg.U}, 1)));
      } catch (const Error&) {
        t_end.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    j["t_end"] = t_end;
  }
  j["propagator"] = to_string(cfg.propagator);
  return j;
}

struct ResultRow {
  double k = 0.0;
  double muU_over_J2 = 0.0;
  int eps = 1;
  int L = 0;
  double sigma = 0.0;
  double U_over_J = 0.0;
  double t_evolve = 0.0;
  double Pb_sim = std::numeric_limits<double>::quiet_NaN();
  double Pb_analytic = 0.0;
  double Pb_elem = 0.0;
  double s_k = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double norm_err = std::numeric_limits<double>::quiet_NaN();
  std::string error;  ///< non-empty when the simulation failed
  ErrorKind error_kind = ErrorKind::numerical_failure;

  bool ok() const { return error.empty(); }
};

/// One simulation point of a configuration.
struct RunPoint {
  double k;
  double beta;
  double mu;
  int eps;
};

inline ResultRow analytic_row(const RunConfig& cfg, const RunPoint& p) {
  ResultRow row;
  row.k = p.k;
  row.muU_over_J2 = p.beta;
  row.eps = p.eps;
  row.L = cfg.L;
  row.sigma = cfg.sigma;
  row.U_over_J = cfg.U / cfg.J;
  row.s_k = suppression(p.k, p.eps);
  row.Pb_elem = p_b_elem(p.k, p.beta);
  row.Pb_analytic = p_b_comp(p.k, p.beta, p.eps);
  const ModelParams params{cfg.L, cfg.J, p.mu, cfg.U};
  row.t_evolve = cfg.t ? *cfg.t : auto_time(params, p.k, effective_params(params, p.eps));
  return row;
}

struct SimulationOutcome {
  Bunching bunching;
  double t = 0.0;
  double norm_err = 0.0;
  double energy_err = 0.0;
};

/// Effective-model wave-packet run, propagated in the even parity block.
inline SimulationOutcome simulate_effective(const ModelParams& params, int eps, const WavePacketSpec& packet,
                                            std::optional<double> t_end, Propagator method = Propagator::automatic,
                                            const PacketPolicy& policy = {}) {
  const auto eff = effective_params(params, eps);
  const CompositeBasisTwo basis(params.L, eps);
  const auto h = build_heff_two(params, eps);
  const ParityBlock block(h, basis, 1);
  const auto psi0 = initial_state_effective(params, eps, packet, policy);
  const auto reduced = block.restrict(psi0);
  if (std::abs(reduced.norm() - 1.0) > 1e-10) throw NumericalFailure("initial state is not parity-even");
  SimulationOutcome out;
  out.t = t_end ? *t_end : auto_time(params, packet.k, eff);
  PropagationOptions opts;
  opts.method = method;
  const auto evolved = evolve(block.op(), reduced, out.t, opts);
  out.norm_err = evolved.norm_drift;
  out.energy_err = evolved.energy_drift;
  out.bunching = bunching(basis, block.expand(evolved.state, basis.name()));
  return out;
}

/// Full four-particle run on a small lattice.
inline SimulationOutcome simulate_full(const ModelParams& params, int eps, const WavePacketSpec& packet,
                                       std::optional<double> t_end, Propagator method = Propagator::automatic,
                                       const PacketPolicy& policy = {}) {
  const auto eff = effective_params(params, eps);
  const auto psi0 = initial_state_full(params, eps, packet, policy);
  const auto h = build_h4(params);
  SimulationOutcome out;
  out.t = t_end ? *t_end : auto_time(params, packet.k, eff);
  PropagationOptions opts;
  opts.method = method == Propagator::automatic ? Propagator::chebyshev : method;
  const auto evolved = evolve(h, psi0, out.t, opts);
  out.norm_err = evolved.norm_drift;
  out.energy_err = evolved.energy_drift;
  out.bunching = bunching_full(FourParticleBasis(params.L), evolved.state);
  return out;
}

/// Analytic columns are always filled; simulation failures are recorded in
/// the row instead of thrown.
inline ResultRow run_point(const RunConfig& cfg, const RunPoint& p) {
  ResultRow row = analytic_row(cfg, p);
  if (cfg.mode == Mode::analytic) return row;
  try {
    const ModelParams params{cfg.L, cfg.J, p.mu, cfg.U};
    const WavePacketSpec packet{cfg.centre(), p.k, cfg.sigma};
    const auto out = cfg.mode == Mode::full ? simulate_full(params, p.eps, packet, cfg.t, cfg.propagator)
                                            : simulate_effective(params, p.eps, packet, cfg.t, cfg.propagator);
    row.t_evolve = out.t;
    row.Pb_sim = out.bunching.same;
    row.residual = out.bunching.residual;
    row.norm_err = out.norm_err;
  } catch (const Error& e) {
    row.error = e.what();
    row.error_kind = e.kind();
  }
  return row;
}

inline std::vector<RunPoint> sweep_points(const RunConfig& cfg) {
  std::vector<RunPoint> points;
  std::vector<int> eps = cfg.eps;
  std::sort(eps.begin(), eps.end());
  auto barriers = cfg.barrier_points();
  std::sort(barriers.begin(), barriers.end());
  std::vector<double> ks = cfg.k;
  std::sort(ks.begin(), ks.end());
  for (int e : eps)
    for (const auto& [beta, mu] : barriers)
      for (double k : ks) points.push_back({k, beta, mu, e});
  return points;
}

/// Single simulation; the config must describe exactly one point.
inline ResultRow run_single(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.mode != Mode::effective && cfg.mode != Mode::full)
    throw InvalidParameter("run_single needs mode effective or full");
  const auto points = sweep_points(cfg);
  if (points.size() != 1)
    throw InvalidParameter("a single run needs exactly one (k, muU, eps) point, got " + std::to_string(points.size()));
  return run_point(cfg, points.front());
}

/// Cartesian product eps x muU x k, ordered by (eps, muU, k). Points run
/// concurrently; the result order does not depend on scheduling.
inline std::vector<ResultRow> run_sweep(const RunConfig& cfg, unsigned workers = 0) {
  cfg.validate();
  const auto points = sweep_points(cfg);
  std::vector<ResultRow> rows(points.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = run_point(cfg, points[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Validation suites

struct ValidationCase {
  std::string name;
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::string mode;
  std::vector<ValidationCase> cases;

  bool passed() const {
    return std::all_of(cases.begin(), cases.end(), [](const ValidationCase& c) { return c.pass; });
  }
};

inline std::string fmt_g(double x, int digits = 12) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(digits) << x;
  return os.str();
}

/// compare_heff over L in {7, 9, 11}, U/J in {+-10, +-20, +-50}, mu/J in
/// {0, 0.5, 1}, eps in {+-1}.
inline ValidationReport validate_pt2(double J = 1.0) {
  ValidationReport report{"validate-pt2", {}};
  const double tol = 1e-12 * J;
  for (int L : {7, 9, 11})
    for (double u : {-50.0, -20.0, -10.0, 10.0, 20.0, 50.0})
      for (double m : {0.0, 0.5, 1.0})
        for (int eps : {-1, 1}) {
          const ModelParams params{L, J, m * J, u * J};
          const double dev = compare_heff(params, eps);
          report.cases.push_back({"L=" + std::to_string(L) + " U=" + fmt_g(u) + " mu=" + fmt_g(m) +
                                      " eps=" + std::to_string(eps),
                                  "max |H_pt2 - H_eff|", dev, tol, dev <= tol});
        }
  return report;
}

struct BandComparison {
  BoundBand band;
  std::vector<double> effective;  ///< eigenvalues of build_heff_single, ascending
  double max_level_deviation = std::numeric_limits<double>::infinity();
};

inline BandComparison compare_bands(const ModelParams& params) {
  BandComparison out;
  out.band = bound_band(params);
  const auto h = build_heff_single(params);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense().real(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("effective single-composite diagonalization failed");
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) out.effective.push_back(solver.eigenvalues()[i]);
  if (out.band.energies.size() == out.effective.size()) {
    out.max_level_deviation = 0.0;
    for (std::size_t i = 0; i < out.effective.size(); ++i)
      out.max_level_deviation = std::max(out.max_level_deviation, std::abs(out.band.energies[i] - out.effective[i]));
  }
  return out;
}

inline ValidationReport validate_bands(const RunConfig& cfg) {
  ValidationReport report{"bands", {}};
  for (const auto& [beta, mu] : cfg.barrier_points()) {
    (void)beta;
    const ModelParams params{cfg.L, cfg.J, mu, cfg.U};
    const auto cmp = compare_bands(params);
    const std::string name = "L=" + std::to_string(cfg.L) + " U=" + fmt_g(cfg.U) + " mu=" + fmt_g(mu);
    report.cases.push_back({name, "separated levels", static_cast<double>(cmp.band.energies.size()),
                            static_cast<double>(cfg.L), cmp.band.complete &&
                                                            static_cast<int>(cmp.band.energies.size()) == cfg.L});
    const double lo = *std::min_element(cmp.effective.begin(), cmp.effective.end()) - 0.05 * cfg.J;
    const double hi = *std::max_element(cmp.effective.begin(), cmp.effective.end()) + 0.05 * cfg.J;
    double outside = 0.0;
    for (double e : cmp.band.energies) outside = std::max({outside, lo - e, e - hi});
    report.cases.push_back({name, "distance outside effective band +-0.05J", outside, 0.0, outside <= 0.0});
    const double tol = 5.0 * std::pow(cfg.J, 4) / std::pow(std::abs(cfg.U), 3);
    report.cases.push_back({name, "max level deviation", cmp.max_level_deviation, tol, cmp.max_level_deviation <= tol});
  }
  return report;
}

struct EffectiveVsFull {
  SimulationOutcome effective;
  SimulationOutcome full;
  double elementary = 0.0;  ///< p_b_elem for the same (k, beta)
};

inline EffectiveVsFull compare_effective_full(const ModelParams& params, int eps, const WavePacketSpec& packet,
                                              std::optional<double> t_end) {
  EffectiveVsFull out;
  const auto eff = effective_params(params, eps);
  const double t = t_end ? *t_end : auto_time(params, packet.k, eff);
  out.effective = simulate_effective(params, eps, packet, t);
  out.full = simulate_full(params, eps, packet, t);
  out.elementary = p_b_elem(std::abs(packet.k), params.mu * params.U / (params.J * params.J));
  return out;
}

/// Full H_4 against the effective model. |U| >= 20J or |U| < 5J: |dPb| <=
/// 0.05. 5J <= |U| < 20J: sign of Pb - Pb_elem must agree.
inline ValidationReport validate_effective(const RunConfig& cfg) {
  ValidationReport report{"validate-effective", {}};
  for (const auto& p : sweep_points(cfg)) {
    const ModelParams params{cfg.L, cfg.J, p.mu, cfg.U};
    const WavePacketSpec packet{cfg.centre(), p.k, cfg.sigma};
    const auto cmp = compare_effective_full(params, p.eps, packet, cfg.t);
    const std::string name = "L=" + std::to_string(cfg.L) + " U=" + fmt_g(cfg.U) + " muU=" + fmt_g(p.beta) +
                             " eps=" + std::to_string(p.eps) + " k=" + fmt_g(p.k);
    const double diff = std::abs(cmp.full.bunching.same - cmp.effective.bunching.same);
    const double u = std::abs(cfg.U / cfg.J);
    if (u >= 5.0 && u < 20.0) {
      const double a = cmp.full.bunching.same - cmp.elementary;
      const double b = cmp.effective.bunching.same - cmp.elementary;
      report.cases.push_back({name, "sign agreement of Pb - Pb_elem (product)", a * b, 0.0, a * b > 0.0});
      report.cases.push_back({name, "|Pb_full - Pb_eff| (info)", diff, 0.05, true});
    } else {
      report.cases.push_back({name, "|Pb_full - Pb_eff|", diff, 0.05, diff <= 0.05});
    }
  }
  return report;
}

inline ValidationReport run_validation(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.mode) {
    case Mode::validate_pt2: return validate_pt2(cfg.J);
    case Mode::validate_effective: return validate_effective(cfg);
    case Mode::bands: return validate_bands(cfg);
    default: throw InvalidParameter("run_validation needs mode validate-effective, validate-pt2 or bands");
  }
}

// ---------------------------------------------------------------------------
// Output

inline const char* csv_header() {
  return "k,muU_over_J2,eps,L,sigma,U_over_J,t_evolve,Pb_sim,Pb_analytic,Pb_elem,s_k,residual,norm_err";
}

inline std::string format_csv(const RunConfig& cfg, const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# config: " << config_echo(cfg).dump() << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].ok()) os << "# failed row " << i << ": " << rows[i].error << '\n';
  os << csv_header() << '\n';
  for (const auto& r : rows) {
    os << fmt_g(r.k) << ',' << fmt_g(r.muU_over_J2) << ',' << r.eps << ',' << r.L << ',' << fmt_g(r.sigma) << ','
       << fmt_g(r.U_over_J) << ',' << fmt_g(r.t_evolve) << ',' << fmt_g(r.Pb_sim) << ',' << fmt_g(r.Pb_analytic)
       << ',' << fmt_g(r.Pb_elem) << ',' << fmt_g(r.s_k) << ',' << fmt_g(r.residual) << ',' << fmt_g(r.norm_err)
       << '\n';
  }
  return os.str();
}

namespace detail {

inline ordered_json rounded(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt_g(x));
}

}  // namespace detail

inline std::string format_json(const RunConfig& cfg, const std::vector<ResultRow>& rows) {
  ordered_json doc;
  doc["config"] = config_echo(cfg);
  ordered_json arr = ordered_json::array();
  ordered_json failures = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    ordered_json o;
    o["k"] = detail::rounded(r.k);
    o["muU_over_J2"] = detail::rounded(r.muU_over_J2);
    o["eps"] = r.eps;
    o["L"] = r.L;
    o["sigma"] = detail::rounded(r.sigma);
    o["U_over_J"] = detail::rounded(r.U_over_J);
    o["t_evolve"] = detail::rounded(r.t_evolve);
    o["Pb_sim"] = detail::rounded(r.Pb_sim);
    o["Pb_analytic"] = detail::rounded(r.Pb_analytic);
    o["Pb_elem"] = detail::rounded(r.Pb_elem);
    o["s_k"] = detail::rounded(r.s_k);
    o["residual"] = detail::rounded(r.residual);
    o["norm_err"] = detail::rounded(r.norm_err);
    arr.push_back(o);
    if (!r.ok()) failures.push_back({{"row", i}, {"error", r.error}});
  }
  doc["rows"] = arr;
  if (!failures.empty()) doc["failures"] = failures;
  return doc.dump(2) + "\n";
}

inline std::string format_report(const ValidationReport& report, Format format) {
  if (format == Format::json) {
    ordered_json doc;
    doc["mode"] = report.mode;
    ordered_json arr = ordered_json::array();
    for (const auto& c : report.cases)
      arr.push_back({{"case", c.name}, {"quantity", c.quantity}, {"value", detail::rounded(c.value)},
                     {"tolerance", detail::rounded(c.tolerance)}, {"pass", c.pass}});
    doc["cases"] = arr;
    doc["passed"] = report.passed();
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# mode: " << report.mode << '\n' << "case,quantity,value,tolerance,pass\n";
  for (const auto& c : report.cases)
    os << c.name << ',' << c.quantity << ',' << fmt_g(c.value) << ',' << fmt_g(c.tolerance) << ','
       << (c.pass ? "pass" : "FAIL") << '\n';
  return os.str();
}

/// Writes text to path, or returns it unchanged when path is empty.
inline void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoFailure("write to '" + path + "' failed");
}

inline void emit(const RunConfig& cfg, const std::vector<ResultRow>& rows, Format format, const std::string& path) {
  write_text(format == Format::csv ? format_csv(cfg, rows) : format_json(cfg, rows), path);
}

}  // namespace coboson
