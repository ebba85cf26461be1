// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance                      exit 0 iff every criterion passes
//   acceptance --expect-fail 5,6    exit 0 iff exactly the listed criteria fail

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "coboson/coboson.hpp"

using namespace coboson;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  void add(const std::string& what, double value, double tol, bool ok) {
    pass_ = pass_ && ok;
    if (!os_.str().empty()) os_ << "; ";
    os_ << what << " = " << fmt_g(value, 4) << (ok ? " <= " : " > ") << fmt_g(tol, 3);
  }
  void check(const std::string& what, bool ok) {
    pass_ = pass_ && ok;
    if (!os_.str().empty()) os_ << "; ";
    os_ << what << (ok ? " ok" : " violated");
  }
  Outcome outcome() const { return {pass_, os_.str()}; }

 private:
  bool pass_ = true;
  std::ostringstream os_;
};

Outcome closed_forms() {
  Detail d;
  double dev = 0.0;
  for (int e : {-1, 1}) dev = std::max(dev, std::abs(suppression(pi, e) - 1.0));
  dev = std::max(dev, std::abs(suppression(pi / 2, 1) - 1.0));
  d.add("max |s - 1| at k = pi (both eps), pi/2 (eps = +1)", dev, 1e-12, dev <= 1e-12);
  double small = 0.0;
  for (int e : {-1, 1}) small = std::max(small, suppression(1e-6, e));
  d.add("s(1e-6)", small, 1e-9, small <= 1e-9);
  double excess = 0.0;
  double phase_dev = 0.0;
  for (int e : {-1, 1})
    for (int i = 0; i < 1000; ++i) {
      const double k = pi * i / 999.0;
      excess = std::max(excess, suppression(k, e) - 1.0);
      phase_dev = std::max(phase_dev, std::abs(suppression_from_phase(phase_composite(k, e)) - suppression(k, e)));
    }
  d.add("max(s - 1) on 1000-point grid", std::max(excess, 0.0), 0.0, excess <= 0.0);
  d.add("max ||1 + e^{i phi}|^2/4 - s|", phase_dev, 1e-12, phase_dev <= 1e-12);
  double flux = 0.0;
  for (int i = 1; i < 1000; ++i)
    for (double mu_b : {0.05, 0.2, 1.0, -0.4}) {
      const auto a = barrier_amplitudes(pi * i / 1000.0, -0.1, mu_b);
      flux = std::max(flux, std::abs(std::norm(a.t) + std::norm(a.r) - 1.0));
    }
  d.add("max ||t|^2 + |r|^2 - 1|", flux, 1e-12, flux <= 1e-12);
  return d.outcome();
}

Outcome elementary_consistency() {
  Detail d;
  double dev = 0.0;
  for (double U : {-20.0, -10.0, 10.0, 20.0})
    for (double mu : {0.1, 0.5, 1.0})
      for (int i = 1; i <= 50; ++i) {
        const double k = pi * i / 51.0;
        const ModelParams params{101, 1.0, mu, U};
        const auto eff = effective_params(params, 1);
        const auto a = barrier_amplitudes(k, eff.J_eff, eff.barrier_eff);
        dev = std::max(dev, std::abs(4.0 * std::norm(a.t * a.r) - p_b_elem(k, mu * U)));
      }
  d.add("max |4|tr|^2 - P_b^elem|", dev, 1e-12, dev <= 1e-12);
  return d.outcome();
}

Outcome phase_oracle() {
  Detail d;
  double dev = 0.0;
  for (int eps : {-1, 1}) {
    const auto eff = effective_params({101, 1.0, 0.0, 20.0}, eps);
    for (int twelfths = 2; twelfths <= 10; ++twelfths) {
      const double k = twelfths * pi / 12.0;
      const cplx numeric = phase_numeric(k, eps, eff).phase_factor;
      const cplx exact = phase_composite(k, eps).phase_factor;
      const double direct = std::abs(std::arg(numeric / exact));
      const double conjugate = std::abs(std::arg(numeric / std::conj(exact)));
      dev = std::max(dev, std::min(direct, conjugate));
    }
  }
  d.add("max |phi_numeric - phi_closed| (rad)", dev, 1e-10, dev <= 1e-10);
  return d.outcome();
}

Outcome pt2_oracle() {
  Detail d;
  const auto report = validate_pt2(1.0);
  double dev = 0.0;
  for (const auto& c : report.cases) dev = std::max(dev, c.value);
  d.add("max compare_heff over " + std::to_string(report.cases.size()) + " cases", dev, 1e-12, report.passed());
  return d.outcome();
}

Outcome bound_band_check() {
  Detail d;
  const ModelParams params{21, 1.0, 0.0, 20.0};
  const auto cmp = compare_bands(params);
  d.check("exactly 21 separated levels (found " + std::to_string(cmp.band.energies.size()) + ")",
          cmp.band.energies.size() == 21);
  double outside = 0.0;
  for (double e : cmp.band.energies) outside = std::max({outside, (20.0 - 0.05) - e, e - (20.0 + 0.45)});
  d.add("distance outside [U - 0.05J, U + 0.45J]", outside, 0.0, outside <= 0.0);
  const double tol = 5.0 / (20.0 * 20.0 * 20.0);
  d.add("max level deviation from effective spectrum", cmp.max_level_deviation, tol, cmp.max_level_deviation <= tol);
  return d.outcome();
}

Outcome sweep_reproduction() {
  Detail d;
  const auto cfg = RunConfig::defaults(Mode::effective);
  const auto rows = run_sweep(cfg);
  d.check("54 rows without failures", rows.size() == 54 && std::all_of(rows.begin(), rows.end(),
                                                                        [](const ResultRow& r) { return r.ok(); }));
  double dev = 0.0, residual = 0.0, drift = 0.0;
  std::string worst;
  for (const auto& r : rows) {
    const double x = std::abs(r.Pb_sim - r.Pb_analytic);
    if (x > dev) {
      dev = x;
      worst = "eps=" + std::to_string(r.eps) + " beta=" + fmt_g(r.muU_over_J2) + " k=" + fmt_g(r.k / pi, 4) + "pi";
    }
    residual = std::max(residual, r.residual);
    drift = std::max(drift, r.norm_err);
  }
  d.add("max |Pb_sim - s P_b^elem| (at " + worst + ")", dev, 0.05, dev <= 0.05);
  d.add("max residual", residual, 5e-3, residual <= 5e-3);
  d.add("max norm drift", drift, 1e-10, drift <= 1e-10);
  return d.outcome();
}

Outcome ninety_two_percent() {
  Detail d;
  auto cfg = RunConfig::defaults(Mode::effective);
  cfg.k = {5 * pi / 6};
  cfg.muU = {1.0};
  cfg.eps = {-1};
  const auto row = run_single(cfg);
  d.check("simulation succeeded", row.ok());
  const bool in = row.Pb_sim >= 0.88 && row.Pb_sim <= 0.96;
  d.check("Pb_sim = " + fmt_g(row.Pb_sim, 4) + " in [0.88, 0.96]", in);
  return d.outcome();
}

Outcome full_model() {
  Detail d;
  auto cfg = RunConfig::defaults(Mode::validate_effective);
  cfg.k = {pi / 3, pi / 2, 2 * pi / 3};
  cfg.muU = {1.0};
  cfg.c = 3;
  cfg.sigma = 1.0;
  cfg.U = 20.0;
  const auto strong = validate_effective(cfg);
  double dev = 0.0;
  for (const auto& c : strong.cases) dev = std::max(dev, c.value);
  d.add("U = 20J: max |Pb_full - Pb_eff|", dev, 0.05, strong.passed());
  cfg.U = 5.0;
  const auto moderate = validate_effective(cfg);
  int agree = 0, total = 0;
  for (const auto& c : moderate.cases) {
    if (c.quantity.rfind("sign", 0) != 0) continue;
    ++total;
    agree += c.pass;
  }
  d.check("U = 5J: sign of Pb - Pb_elem agrees in " + std::to_string(agree) + "/" + std::to_string(total) + " cases",
          total > 0 && agree == total);
  return d.outcome();
}

Outcome conservation() {
  Detail d;
  {
    const ModelParams params{7, 1.0, 0.3, 20.0};
    const auto h = build_h4(params);
    const auto ops = build_symmetry_ops(7);
    d.check("[H4, E_A] = [H4, E_B] = [H4, P] = 0",
            ops.exchange_a.commutes_with(h) && ops.exchange_b.commutes_with(h) && ops.parity.commutes_with(h));
  }
  double parity_dev = 0.0, total_dev = 0.0, repr_dev = 0.0;
  for (int eps : {-1, 1}) {
    const ModelParams params{101, 1.0, 0.05, 20.0};
    const CompositeBasisTwo basis(101, eps);
    const auto h = build_heff_two(params, eps);
    const WavePacketSpec packet{26, pi / 2, 10.0};
    auto psi = initial_state_effective(params, eps, packet);
    parity_dev = std::max(parity_dev, std::abs(parity_expectation(basis, psi) - 1.0));
    PropagationOptions opts;
    opts.method = Propagator::chebyshev;
    for (int step = 0; step < 4; ++step) {
      psi = propagate(h, psi, 95.0, opts);
      parity_dev = std::max(parity_dev, std::abs(parity_expectation(basis, psi) - 1.0));
    }
    const auto full = bunching(basis, psi);
    total_dev = std::max(total_dev, std::abs(full.total() - 1.0));
    const auto block = simulate_effective(params, eps, packet, 380.0, Propagator::chebyshev);
    total_dev = std::max(total_dev, std::abs(block.bunching.total() - 1.0));
    repr_dev = std::max({repr_dev, std::abs(block.bunching.same - full.same),
                         std::abs(block.bunching.opposite - full.opposite)});
  }
  d.add("max |<P>(t) - 1|", parity_dev, 1e-9, parity_dev <= 1e-9);
  d.add("max |P_same + P_opposite + residual - 1|", total_dev, 1e-10, total_dev <= 1e-10);
  d.add("full basis vs parity block", repr_dev, 1e-9, repr_dev <= 1e-9);
  return d.outcome();
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expected_failures = parse_list(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--expect-fail N,M,...]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed-form identities", closed_forms},
      {"elementary bunching consistency", elementary_consistency},
      {"phase-shift oracle", phase_oracle},
      {"effective Hamiltonian oracle", pt2_oracle},
      {"bound band", bound_band_check},
      {"default sweep against analytics", sweep_reproduction},
      {"92% bunching point", ninety_two_percent},
      {"full model against effective model", full_model},
      {"conservation and symmetry", conservation},
  };

  std::set<int> failures;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) failures.insert(n);
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", n, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }

  std::printf("%zu/%zu criteria pass\n", criteria.size() - failures.size(), criteria.size());
  if (expected_failures.empty()) return failures.empty() ? 0 : 1;
  if (failures != expected_failures) {
    std::printf("failing set differs from the expected failures\n");
    return 1;
  }
  std::printf("failing criteria match the documented expected failures\n");
  return 0;
}
