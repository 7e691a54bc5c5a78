// circcs: command-line front end for compressed-domain processing on
// circulant measurements. Every subcommand reads and writes JSON documents
// (see include/circcs/io/document.hpp).
//
// Exit codes: 0 success, 1 usage error, 2 dimension/validation error,
// 3 oracle-check failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "circcs/circcs.hpp"
#include "circcs/diagnostics/scenarios.hpp"
#include "circcs/io/document.hpp"

namespace {

using circcs::io::json;
namespace io = circcs::io;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitOracle = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

circcs::Convention parse_convention(const std::string& s) {
  if (s == "first-row") return circcs::Convention::FirstRow;
  if (s == "first-col") return circcs::Convention::FirstColumn;
  throw UsageError("--convention must be first-row or first-col");
}

std::string convention_name(circcs::Convention c) {
  return c == circcs::Convention::FirstRow ? "first-row" : "first-col";
}

std::vector<double> parse_taps(const std::string& text) {
  std::vector<double> taps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      taps.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--taps: cannot parse '" + item + "'");
    }
  }
  if (taps.empty()) throw UsageError("--taps: empty list");
  return taps;
}

// Measurement meta is carried forward through every operation, with the
// operation appended to meta.history.
json derived_meta(const io::Document& in, const std::string& op) {
  json meta = in.meta;
  meta.erase("corruption");
  meta.erase("warning");
  meta["history"].push_back(op);
  return meta;
}

std::string stem_with(const std::string& path, const std::string& tag) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + tag;
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

json seed_meta(const io::Document& seed_doc) {
  json s = seed_doc.meta;
  s["data"] = seed_doc.payload.at("data");
  return s;
}

std::optional<circcs::Seed> seed_in_meta(const json& meta) {
  if (!meta.contains("seed") || !meta.at("seed").contains("data")) return std::nullopt;
  const auto& s = meta.at("seed");
  return circcs::Seed(s.at("data").get<std::vector<double>>(), s.value("label", ""));
}

std::size_t trials_for(const circcs::diagnostics::ScenarioInfo& info, std::optional<std::size_t> cli) {
  if (cli) return *cli;
  if (const char* env = std::getenv("CIRCCS_TRIALS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError("CIRCCS_TRIALS must be a positive integer");
  }
  return info.default_trials;
}

json node_entry(const circcs::MaskedMeasurements& y) {
  return {{"data", y.values()}, {"valid", y.mask().values()}, {"corruption", y.mask().invalid_indices()}};
}

int run_simulation(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw circcs::ValidationError("cannot open '" + config_path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw circcs::ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  const std::size_t n = cfg.at("n").get<std::size_t>();
  const std::size_t m = cfg.at("m").get<std::size_t>();
  const std::size_t nodes = cfg.at("nodes").get<std::size_t>();
  const std::uint64_t prng_seed = cfg.value("prng_seed", std::uint64_t{0});
  const std::size_t step = cfg.value("shift_step", std::size_t{1});
  const std::string operation = cfg.value("operation", "filter");

  std::optional<circcs::Signal> x;
  if (cfg.contains("signal_file")) {
    x = io::signal_from(io::read_file(cfg.at("signal_file").get<std::string>()));
  } else {
    const std::uint64_t sp = cfg.contains("signal") ? cfg.at("signal").value("prng_seed", std::uint64_t{1})
                                                    : std::uint64_t{1};
    x = circcs::Signal(circcs::gaussian_samples(n, sp));
  }

  const auto ens = circcs::build_ensemble({n, m, prng_seed}, nodes, step);
  const auto ys = circcs::acquire_all(ens, *x);
  circcs::ExchangeLog log;
  circcs::SimulationOptions opt;
  opt.parallel = cfg.value("parallel", false);
  if (cfg.contains("order")) opt.order = cfg.at("order").get<std::vector<std::size_t>>();

  std::vector<circcs::NodeMeasurements> result;
  json op_meta = {{"name", operation}};
  if (operation == "filter") {
    const auto& f = cfg.at("filter");
    const circcs::FilterSpec h(f.at("taps").get<std::vector<double>>(),
                               parse_convention(f.value("convention", "first-col")));
    result = circcs::distributed_filter(ys, h, log, opt);
    op_meta["taps"] = f.at("taps");
    op_meta["convention"] = convention_name(h.convention());
  } else if (operation == "diff2") {
    result = circcs::distributed_second_difference(ys, log, opt);
  } else {
    throw circcs::ValidationError("config: operation must be 'filter' or 'diff2'");
  }

  io::Document doc{io::DocKind::Ensemble};
  json node_list = json::array();
  std::vector<std::size_t> valid_nodes;
  for (std::size_t j = 0; j < nodes; ++j) {
    node_list.push_back({{"node", j + 1}, {"measurements", node_entry(ys[j].y)},
                         {"result", node_entry(result[j].y)}});
    if (result[j].y.mask().all_valid()) valid_nodes.push_back(j + 1);
  }
  json exchanges = json::array();
  for (const auto& r : log.records()) {
    exchanges.push_back({{"round", r.round}, {"from", r.from_node}, {"to", r.to_node}, {"length", r.vector_length}});
  }
  doc.payload["nodes"] = node_list;
  doc.payload["exchanges"] = exchanges;
  doc.meta = {{"n", n}, {"m", m}, {"nodes", nodes}, {"prng_seed", prng_seed}, {"shift_step", step},
              {"operation", op_meta}, {"valid_nodes", valid_nodes}, {"exchange_volume", log.volume()}};
  if (result.front().y.warning()) doc.meta["warning"] = *result.front().y.warning();
  io::write_file(out_path, doc);
  return 0;
}

int run_oracle_check(const std::string& scenario, std::optional<std::size_t> trials, std::uint64_t prng_seed) {
  namespace diag = circcs::diagnostics;
  std::vector<const diag::ScenarioInfo*> selected;
  if (scenario == "all") {
    for (const auto& s : diag::scenarios()) selected.push_back(&s);
  } else if (const auto* s = diag::find_scenario(scenario)) {
    selected.push_back(s);
  } else {
    std::string names;
    for (const auto& s : diag::scenarios()) names += " " + std::string(s.name);
    throw UsageError("unknown scenario '" + scenario + "'; known: all" + names);
  }

  bool ok = true;
  std::cout << std::left << std::setw(12) << "scenario" << std::right << std::setw(8) << "trials"
            << std::setw(14) << "max_err" << std::setw(14) << "min_dev" << std::setw(10) << "seconds"
            << "  status\n";
  for (const auto* info : selected) {
    const auto rep = diag::run_scenario(*info, trials_for(*info, trials), prng_seed);
    std::cout << std::left << std::setw(12) << rep.name << std::right << std::setw(8) << rep.trials
              << std::setw(14) << std::scientific << std::setprecision(3) << rep.max_valid_error
              << std::setw(14) << rep.min_invalid_deviation << std::setw(10) << std::fixed
              << std::setprecision(3) << rep.seconds << "  " << (rep.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& n : rep.notes) std::cout << "    note: " << n << "\n";
    for (const auto& f : rep.failures) std::cout << "    fail: " << f << "\n";
    ok = ok && rep.passed;
  }
  return ok ? 0 : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signal processing directly on circulant compressive measurements"};
  app.require_subcommand(1);

  // gen-seed
  auto* gen_seed = app.add_subcommand("gen-seed", "Draw a Gaussian seed");
  std::size_t gs_n = 0;
  std::uint64_t gs_prng = 0;
  std::string gs_out;
  std::string gs_label;
  gen_seed->add_option("--n", gs_n, "Seed length")->required();
  gen_seed->add_option("--prng-seed", gs_prng, "Generator seed")->required();
  gen_seed->add_option("--out", gs_out, "Output file")->required();
  gen_seed->add_option("--label", gs_label, "Seed label (default derived from n and prng seed)");

  // gen-signal
  auto* gen_signal = app.add_subcommand("gen-signal", "Draw a Gaussian (or constant) test signal");
  std::size_t sg_n = 0;
  std::uint64_t sg_prng = 0;
  std::string sg_out;
  std::optional<double> sg_constant;
  gen_signal->add_option("--n", sg_n, "Signal length")->required();
  gen_signal->add_option("--prng-seed", sg_prng, "Generator seed");
  gen_signal->add_option("--constant", sg_constant, "Constant value instead of Gaussian samples");
  gen_signal->add_option("--out", sg_out, "Output file")->required();

  // acquire
  auto* acquire = app.add_subcommand("acquire", "Measure a signal with a partial circulant");
  std::string aq_seed, aq_signal, aq_out;
  std::size_t aq_m = 0;
  bool aq_decimated = false;
  bool aq_even_odd = false;
  acquire->add_option("--seed-file", aq_seed, "Seed document")->required();
  acquire->add_option("--m", aq_m, "Number of measurements")->required();
  acquire->add_option("--signal", aq_signal, "Signal document")->required();
  acquire->add_option("--out", aq_out, "Output file (--even-odd writes <out>.even / <out>.odd)")->required();
  auto* dec_flag = acquire->add_flag("--decimated", aq_decimated, "Column-decimated acquisition (x2 interpolation)");
  auto* eo_flag = acquire->add_flag("--even-odd", aq_even_odd, "Even/odd split acquisition (lifting)");
  dec_flag->excludes(eo_flag);

  // filter
  auto* filter = app.add_subcommand("filter", "Filter measurements in the compressed domain");
  std::string f_in, f_out, f_taps, f_conv = "first-row";
  filter->add_option("--in", f_in, "Measurements document")->required();
  filter->add_option("--taps", f_taps, "Comma-separated taps h1,h2,...")->required();
  filter->add_option("--convention", f_conv, "first-row or first-col");
  filter->add_option("--out", f_out, "Output file")->required();

  // diff2
  auto* diff2 = app.add_subcommand("diff2", "Second difference in the compressed domain");
  std::string d_in, d_out;
  diff2->add_option("--in", d_in, "Measurements document")->required();
  diff2->add_option("--out", d_out, "Output file")->required();

  // interp2
  auto* interp2 = app.add_subcommand("interp2", "x2 linear interpolation of decimated measurements");
  std::string i_in, i_out;
  interp2->add_option("--in", i_in, "Measurements from acquire --decimated")->required();
  interp2->add_option("--out", i_out, "Output file")->required();

  // shift-find
  auto* shift_find = app.add_subcommand("shift-find", "Integer shift between two acquisitions");
  std::string sf_z, sf_v, sf_out;
  std::ptrdiff_t sf_smax = 0;
  bool sf_normalized = false;
  shift_find->add_option("--z", sf_z, "Measurements of x")->required();
  shift_find->add_option("--v", sf_v, "Measurements of the shifted x")->required();
  shift_find->add_option("--s-max", sf_smax, "Largest |shift| tested")->required();
  shift_find->add_flag("--normalized", sf_normalized, "Divide residuals by sqrt(overlap length)");
  shift_find->add_option("--out", sf_out, "Output file")->required();

  // register
  auto* reg = app.add_subcommand("register", "Compensate a known shift");
  std::string r_in, r_out, r_mode = "same", r_seed;
  std::ptrdiff_t r_s = 0;
  reg->add_option("--in", r_in, "Measurements of the shifted signal")->required();
  reg->add_option("--s", r_s, "Known shift")->required();
  reg->add_option("--mode", r_mode, "same or reseed");
  reg->add_option("--seed-file", r_seed, "Seed document (reseed mode; defaults to the seed in meta)");
  reg->add_option("--out", r_out, "Output file")->required();

  // wavelet53
  auto* wav = app.add_subcommand("wavelet53", "Measurements of 5/3 wavelet coefficients");
  std::string w_even, w_odd, w_out;
  wav->add_option("--even", w_even, "Even-stream measurements")->required();
  wav->add_option("--odd", w_odd, "Odd-stream measurements")->required();
  wav->add_option("--out", w_out, "Output file")->required();

  // simulate-nodes
  auto* sim = app.add_subcommand("simulate-nodes", "Run the multi-node simulator");
  std::string sim_cfg, sim_out;
  sim->add_option("--config", sim_cfg, "Scenario configuration (JSON)")->required();
  sim->add_option("--out", sim_out, "Output file")->required();

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Certify operations against the dense oracle");
  std::string oc_scenario;
  std::optional<std::size_t> oc_trials;
  std::uint64_t oc_prng = 20240917;
  oracle->add_option("--scenario", oc_scenario, "Scenario name or 'all'")->required();
  oracle->add_option("--trials", oc_trials, "Trial count (default per scenario, or CIRCCS_TRIALS)");
  oracle->add_option("--prng-seed", oc_prng, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_seed) {
      circcs::SensingConfig cfg{gs_n, gs_n, gs_prng};
      auto seed = circcs::generate_seed(cfg);
      if (!gs_label.empty()) seed = circcs::Seed(seed.values(), gs_label);
      auto doc = io::to_document(seed);
      doc.meta["prng_seed"] = gs_prng;
      doc.meta["distribution"] = "gaussian";
      io::write_file(gs_out, doc);
    } else if (*gen_signal) {
      if (sg_n == 0) throw circcs::DimensionError("--n must be positive");
      const circcs::Signal x(sg_constant ? std::vector<double>(sg_n, *sg_constant)
                                         : circcs::gaussian_samples(sg_n, sg_prng));
      auto doc = io::to_document(x);
      if (!sg_constant) doc.meta["prng_seed"] = sg_prng;
      io::write_file(sg_out, doc);
    } else if (*acquire) {
      const auto seed_doc = io::expect(io::read_file(aq_seed), io::DocKind::Seed);
      const auto seed = io::seed_from(seed_doc);
      const auto x = io::signal_from(io::read_file(aq_signal));
      json meta = {{"n", seed.size()}, {"seed", seed_meta(seed_doc)}};
      if (aq_even_odd) {
        const auto split = circcs::acquire_even_odd(seed, aq_m, x);
        meta["acquisition"] = "even";
        io::write_file(stem_with(aq_out, "even"), io::to_document(split.even, meta));
        meta["acquisition"] = "odd";
        io::write_file(stem_with(aq_out, "odd"), io::to_document(split.odd, meta));
      } else if (aq_decimated) {
        meta["acquisition"] = "decimated";
        meta["signal_n"] = x.size();
        io::write_file(aq_out, io::to_document(circcs::acquire_decimated(seed, aq_m, x), meta));
      } else {
        meta["acquisition"] = "plain";
        io::write_file(aq_out, io::to_document(circcs::acquire(seed, aq_m, x), meta));
      }
    } else if (*filter) {
      const auto in = io::read_file(f_in);
      const circcs::FilterSpec h(parse_taps(f_taps), parse_convention(f_conv));
      const auto y = circcs::filter_measurements(io::measurements_from(in), h);
      auto meta = derived_meta(in, "filter");
      meta["filter"] = {{"taps", std::vector<double>(h.taps().begin(), h.taps().end())},
                        {"convention", convention_name(h.convention())}};
      io::write_file(f_out, io::to_document(y, meta));
    } else if (*diff2) {
      const auto in = io::read_file(d_in);
      io::write_file(d_out, io::to_document(circcs::second_difference(io::measurements_from(in)),
                                            derived_meta(in, "diff2")));
    } else if (*interp2) {
      const auto in = io::read_file(i_in);
      if (in.meta.contains("acquisition") && in.meta.at("acquisition") != "decimated") {
        throw circcs::ValidationError("interp2: input was not produced by acquire --decimated");
      }
      io::write_file(i_out, io::to_document(circcs::interpolate2(io::measurements_from(in)),
                                            derived_meta(in, "interp2")));
    } else if (*shift_find) {
      const auto zd = io::read_file(sf_z);
      const auto vd = io::read_file(sf_v);
      if (zd.meta.contains("seed_label") && vd.meta.contains("seed_label") &&
          zd.meta.at("seed_label") != vd.meta.at("seed_label")) {
        throw circcs::ValidationError("shift-find: z and v were acquired with different seeds");
      }
      const auto est = circcs::shift_retrieve(
          io::measurements_from(zd), io::measurements_from(vd), sf_smax,
          sf_normalized ? circcs::ResidualNorm::OverlapNormalized : circcs::ResidualNorm::Raw);
      io::Document doc{io::DocKind::Estimate};
      doc.payload["s_hat"] = est.s_hat;
      doc.payload["residual"] = est.residual;
      json by_s = json::array();
      for (const auto& [s, r] : est.residuals_by_s) by_s.push_back({{"s", s}, {"residual", r}});
      doc.payload["residuals_by_s"] = by_s;
      doc.meta = {{"s_max", sf_smax}, {"norm", sf_normalized ? "overlap-normalized" : "raw"}};
      if (zd.meta.contains("seed_label")) doc.meta["seed_label"] = zd.meta.at("seed_label");
      io::write_file(sf_out, doc);
    } else if (*reg) {
      const auto in = io::read_file(r_in);
      const auto v = io::measurements_from(in);
      auto meta = derived_meta(in, "register");
      meta["register"] = {{"s", r_s}, {"mode", r_mode}};
      if (r_mode == "same") {
        const auto out = circcs::register_shift(v, r_s, circcs::RegistrationMode::SameMatrix);
        io::write_file(r_out, io::to_document(out.measurements, meta));
      } else if (r_mode == "reseed") {
        std::optional<circcs::Seed> seed;
        if (!r_seed.empty()) {
          seed = io::seed_from(io::read_file(r_seed));
        } else {
          seed = seed_in_meta(in.meta);
        }
        if (!seed) throw circcs::ValidationError("register: reseed mode needs --seed-file or a seed in meta");
        const auto out = circcs::register_shift(v, r_s, circcs::RegistrationMode::ReseededMatrix, seed);
        json new_seed = io::to_document(*out.reseeded).meta;
        new_seed["data"] = out.reseeded->values();
        meta["seed"] = new_seed;
        meta["register"]["seed_row"] = out.calibration->verified_row();
        meta["register"]["calibration"] = {
            {"derived_row", out.calibration->derived_row}, {"derived_ok", out.calibration->derived_ok},
            {"alternate_row", out.calibration->alternate_row}, {"alternate_ok", out.calibration->alternate_ok}};
        io::write_file(r_out, io::to_document(out.measurements, meta));
      } else {
        throw UsageError("--mode must be same or reseed");
      }
    } else if (*wav) {
      const auto ed = io::read_file(w_even);
      const auto od = io::read_file(w_odd);
      if ((ed.meta.contains("acquisition") && ed.meta.at("acquisition") != "even") ||
          (od.meta.contains("acquisition") && od.meta.at("acquisition") != "odd")) {
        throw circcs::ValidationError("wavelet53: inputs must come from acquire --even-odd");
      }
      const auto y = circcs::compressive_wavelet_53(io::measurements_from(ed), io::measurements_from(od));
      auto meta = derived_meta(ed, "wavelet53");
      meta["acquisition"] = "plain";
      meta["interleave"] = "low at odd 1-based positions, high at even";
      io::write_file(w_out, io::to_document(y, meta));
    } else if (*sim) {
      return run_simulation(sim_cfg, sim_out);
    } else if (*oracle) {
      return run_oracle_check(oc_scenario, oc_trials, oc_prng);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
