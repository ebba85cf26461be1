// coboson: command-line front end for analytics, wave-packet runs, sweeps and
// validation suites.
//
// Exit codes: 0 success, 1 validation failure, 2 invalid config,
// 3 numerical failure, 4 I/O failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coboson/coboson.hpp"

namespace {

using namespace coboson;

enum Exit : int { ok = 0, validation_failed = 1, invalid_config = 2, numerical = 3, io = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter:
    case ErrorKind::capacity_exceeded: return invalid_config;
    case ErrorKind::degenerate_input:
    case ErrorKind::numerical_failure: return numerical;
    case ErrorKind::io_failure: return io;
  }
  return numerical;
}

struct Options {
  std::string command;
  std::string config_path;
  std::string out;
  std::string format;
  std::optional<double> k;
  std::optional<double> muU;
  std::optional<int> eps;
  std::optional<int> L;
  std::string export_matrix;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read config '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Mode command_mode(const std::string& command) {
  if (command == "analytics") return Mode::analytic;
  if (command == "validate-effective") return Mode::validate_effective;
  if (command == "validate-pt2") return Mode::validate_pt2;
  if (command == "bands") return Mode::bands;
  return Mode::effective;
}

RunConfig load_config(const Options& opt) {
  const Mode fallback = command_mode(opt.command);
  RunConfig cfg = opt.config_path.empty() ? RunConfig::defaults(fallback)
                                          : parse_config(read_file(opt.config_path), fallback);
  // Subcommands other than hom and sweep pin the mode.
  if (opt.command != "hom" && opt.command != "sweep") {
    cfg.mode = fallback;
  } else if (cfg.mode != Mode::effective && cfg.mode != Mode::full && cfg.mode != Mode::analytic) {
    throw InvalidParameter(std::string("mode '") + to_string(cfg.mode) + "' cannot be used with '" + opt.command + "'");
  }
  if (opt.k) cfg.k = {*opt.k};
  if (opt.muU) {
    cfg.mu.reset();
    cfg.muU = {*opt.muU};
  }
  if (opt.eps) cfg.eps = {*opt.eps};
  if (opt.L) cfg.L = *opt.L;
  if (!opt.out.empty()) cfg.output_path = opt.out;
  if (!opt.format.empty()) cfg.format = parse_format(opt.format);
  cfg.validate();
  return cfg;
}

void export_matrix(const RunConfig& cfg, const std::string& path) {
  const auto points = sweep_points(cfg);
  const auto& p = points.front();
  const ModelParams params{cfg.L, cfg.J, p.mu, cfg.U};
  const auto h = cfg.mode == Mode::full ? build_h4(params) : build_heff_two(params, p.eps);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  for (const auto& t : h.entries()) {
    os << t.row << ' ' << t.col << ' ' << fmt_g(t.value.real()) << ' ' << fmt_g(t.value.imag()) << '\n';
    if (t.row != t.col)
      os << t.col << ' ' << t.row << ' ' << fmt_g(t.value.real()) << ' ' << fmt_g(0.0 - t.value.imag()) << '\n';
  }
  write_text(os.str(), path);
}

void output(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    write_text(text, path);
}

int run(const Options& opt) {
  const RunConfig cfg = load_config(opt);
  if (cfg.mode == Mode::effective || cfg.mode == Mode::full)
    for (double k : cfg.k)
      for (const auto& w : WavePacketSpec{cfg.centre(), k, cfg.sigma}.warnings(cfg.L))
        std::cerr << "warning: " << w << " (k = " << fmt_g(k) << ")\n";
  if (!opt.export_matrix.empty()) export_matrix(cfg, opt.export_matrix);

  if (opt.command == "validate-effective" || opt.command == "validate-pt2" || opt.command == "bands") {
    const auto report = run_validation(cfg);
    output(format_report(report, cfg.format), cfg.output_path);
    return report.passed() ? ok : validation_failed;
  }

  std::vector<ResultRow> rows;
  if (opt.command == "hom" && cfg.mode != Mode::analytic)
    rows.push_back(run_single(cfg));
  else
    rows = run_sweep(cfg);
  const std::string text = cfg.format == Format::csv ? format_csv(cfg, rows) : format_json(cfg, rows);
  output(text, cfg.output_path);

  int code = ok;
  for (const auto& r : rows) {
    if (r.ok()) continue;
    std::cerr << "error: " << r.error << '\n';
    code = std::max(code, exit_code(r.error_kind));
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bunching of two composite particles at a lattice barrier"};
  app.require_subcommand(1, 1);
  Options opt;
  for (const char* name : {"analytics", "hom", "sweep", "validate-effective", "validate-pt2", "bands"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "JSON run configuration");
    sub->add_option("--out", opt.out, "output file (default stdout)");
    sub->add_option("--format", opt.format, "csv or json");
    sub->add_option("--k", opt.k, "single quasimomentum");
    sub->add_option("--muU", opt.muU, "single barrier strength mu U / J^2");
    sub->add_option("--eps", opt.eps, "constituent statistics, +1 or -1");
    sub->add_option("--L", opt.L, "lattice size");
    sub->add_option("--export-matrix", opt.export_matrix, "write the Hamiltonian as 'row col re im' triplets");
    sub->callback([&opt, sub] { opt.command = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid_config;
  }

  try {
    return run(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical;
  }
}
