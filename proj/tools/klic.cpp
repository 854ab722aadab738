// klic: rates, power allocations, DoF sweeps and desk-scale simulation for
// symmetric K-user Gaussian interference channels under nested-lattice
// coding.
//
// Exit codes: 0 success, 2 usage/parameter error, 3 I/O error,
// 4 regime gap (no scheme covers the requested gain), 5 enumeration cap.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "klic/klic.hpp"

namespace {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

uint64_t enum_cap_from_env() {
  if (const char* txt = std::getenv("KLIC_ENUM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(txt, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw std::invalid_argument("KLIC_ENUM_CAP must be a positive integer");
  }
  return klic::kDefaultEnumCap;
}

void cmd_rates(int k, double b2, double power, bool as_json) {
  if (!(b2 > 0.0)) throw std::domain_error("rates: --b2 must be positive");
  const klic::ChannelConfig cfg{k, std::sqrt(b2), power};
  const klic::RateReport rep = klic::evaluate(cfg);
  if (as_json) {
    klic::json j;
    j["config"] = {{"k", cfg.k}, {"b2", cfg.b2()}, {"power", cfg.p}};
    j["report"] = rep;
    std::cout << j.dump(2) << '\n';
  } else {
    klic::print_rate_report(std::cout, cfg, rep);
  }
}

void cmd_dof(const std::string& sweep_text, int k, const std::string& format,
             const std::string& out_path, int workers) {
  const klic::SweepSpec spec = klic::parse_sweep(sweep_text);
  if (spec.variable != klic::SweepVariable::B2)
    throw std::invalid_argument("dof: sweep variable must be b2");
  const std::vector<double> grid = spec.grid();

  // Rows are computed concurrently but land in grid order.
  std::vector<klic::Fig2Row> rows(grid.size());
  klic::parallel_chunks(long(grid.size()), workers, [&](int, long lo, long hi) {
    for (long i = lo; i < hi; ++i)
      rows[i] = klic::fig2_dataset(std::span(&grid[i], 1), k).front();
  });

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw io_error("dof: cannot open '" + out_path + "' for writing");
    os = &file;
  }
  if (format == "csv") {
    klic::write_fig2_csv(*os, rows);
  } else if (format == "json") {
    klic::json j;
    j["metadata"] = {{"x_axis", "b2"},
                     {"qbit_log_base", "b = sqrt(b2)"},
                     {"regime_gap", "6-4*sqrt(2) <= b2 <= 3/2"}};
    j["rows"] = rows;
    *os << j.dump(2) << '\n';
  } else {
    throw std::invalid_argument("dof: format must be csv or json");
  }
  os->flush();
  if (os->fail()) throw io_error("dof: write failed");
}

void cmd_alloc(double b2, int layers, double power, bool as_json) {
  if (!(b2 > 0.0)) throw std::domain_error("alloc: --b2 must be positive");
  const double b = std::sqrt(b2);
  const klic::LayerPlan plan =
      layers > 0 ? klic::build_plan(b, layers) : klic::build_plan_for_power(b, power);
  if (as_json) {
    klic::json j = plan;
    std::cout << j.dump(2) << '\n';
  } else {
    klic::print_plan(std::cout, plan);
  }
}

void cmd_simulate(double b2, double power, int q, long trials, uint64_t seed, int layers,
                  const std::string& order, bool noiseless, int k, int workers) {
  if (!(b2 > 0.0)) throw std::domain_error("simulate: --b2 must be positive");
  const double b = std::sqrt(b2);
  klic::SimConfig sim;
  sim.cfg = {k, b, power};
  sim.trials = trials;
  sim.seed = seed;
  sim.noise_std = noiseless ? 0.0 : 1.0;

  klic::json j;
  klic::SimOutcome outcome;
  if (layers <= 1) {
    sim.lattice = {std::sqrt(12.0 * power), q};
    sim.decode_order = klic::DecodeOrder::InterferenceFirst;
    if (order == "own-first")
      throw std::domain_error("simulate: the single-layer chain decodes interference first");
    outcome = klic::run_single_layer(sim, workers);
  } else {
    const klic::LayerPlan plan = klic::build_plan(b, layers);
    sim.lattice = {1.0, q};  // per-layer gammas come from the plan
    const bool strong = plan.regime == klic::Regime::Strong;
    if (order.empty()) {
      sim.decode_order =
          strong ? klic::DecodeOrder::InterferenceFirst : klic::DecodeOrder::OwnFirst;
    } else if (order == "interference-first") {
      sim.decode_order = klic::DecodeOrder::InterferenceFirst;
    } else if (order == "own-first") {
      sim.decode_order = klic::DecodeOrder::OwnFirst;
    } else {
      throw std::invalid_argument("simulate: order must be own-first or interference-first");
    }
    outcome = klic::run_layered(sim, plan, workers);
    j["plan"] = plan;
  }
  j["config"] = {{"k", sim.cfg.k},
                 {"b2", sim.cfg.b2()},
                 {"power", sim.cfg.p},
                 {"gamma", sim.lattice.gamma},
                 {"q", sim.lattice.q},
                 {"trials", sim.trials},
                 {"seed", sim.seed},
                 {"layers", layers <= 1 ? 1 : layers},
                 {"decode_order", std::string(klic::decode_order_name(sim.decode_order))},
                 {"noise_std", sim.noise_std}};
  j["outcome"] = outcome;
  std::cout << j.dump(2) << '\n';
}

void cmd_leakage(int q, int k) {
  const uint64_t cap = enum_cap_from_env();
  const klic::LeakageReport rep = klic::exhaustive_leakage(q, k, cap);
  const bool sound = klic::representation_soundness(q, k, cap);
  klic::json j = rep;
  j["representation_sound"] = sound;
  j["pass"] = rep.within_bound && sound;
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested-lattice rate and degrees-of-freedom toolkit for "
               "symmetric K-user Gaussian interference channels"};
  app.require_subcommand(1);

  int rates_k = 3;
  double rates_b2 = 0.0, rates_power = 0.0;
  bool rates_json = false;
  auto* rates = app.add_subcommand("rates", "single-layer conditions, secrecy rate, leakage bound");
  rates->add_option("--k", rates_k, "number of users (>= 3)");
  rates->add_option("--b2", rates_b2, "squared direct-link gain")->required();
  rates->add_option("--power", rates_power, "per-user power")->required();
  rates->add_flag("--json", rates_json, "emit JSON");
  rates->callback([&] { cmd_rates(rates_k, rates_b2, rates_power, rates_json); });

  std::string dof_sweep, dof_format = "csv", dof_out;
  int dof_k = 3, dof_workers = 4;
  auto* dofc = app.add_subcommand("dof", "DoF/secure-DoF dataset over a b2 grid");
  dofc->add_option("--sweep", dof_sweep, "grid, e.g. b2:0.01:100:60:log")->required();
  dofc->add_option("--k", dof_k, "number of users (benchmark column)");
  dofc->add_option("--format", dof_format, "csv or json");
  dofc->add_option("--out", dof_out, "output path (stdout when omitted)");
  dofc->add_option("--workers", dof_workers, "sweep worker threads");
  dofc->callback([&] { cmd_dof(dof_sweep, dof_k, dof_format, dof_out, dof_workers); });

  double alloc_b2 = 0.0, alloc_power = 0.0;
  int alloc_layers = 0;
  bool alloc_json = false;
  auto* alloc = app.add_subcommand("alloc", "layered power allocation table");
  alloc->add_option("--b2", alloc_b2, "squared direct-link gain")->required();
  auto* opt_layers = alloc->add_option("--layers", alloc_layers, "layer count M");
  auto* opt_power = alloc->add_option("--power", alloc_power, "per-user power budget");
  opt_layers->excludes(opt_power);
  alloc->add_flag("--json", alloc_json, "emit JSON");
  alloc->callback([&] {
    if (alloc_layers <= 0 && !(alloc_power > 0.0))
      throw CLI::ValidationError("alloc", "provide --layers or --power");
    cmd_alloc(alloc_b2, alloc_layers, alloc_power, alloc_json);
  });

  double sim_b2 = 0.0, sim_power = 100.0;
  int sim_q = 4, sim_layers = 1, sim_k = 3, sim_workers = 1;
  long sim_trials = 10000;
  uint64_t sim_seed = 1;
  std::string sim_order;
  bool sim_noiseless = false;
  auto* simc = app.add_subcommand("simulate", "Monte Carlo decoding of the coding chains");
  simc->add_option("--b2", sim_b2, "squared direct-link gain")->required();
  simc->add_option("--power", sim_power, "per-user power (single-layer lattice scale)");
  simc->add_option("--q", sim_q, "nesting ratio (codebook size per layer)");
  simc->add_option("--trials", sim_trials, "number of trials");
  simc->add_option("--seed", sim_seed, "RNG seed");
  simc->add_option("--layers", sim_layers, "layer count (1 = single-layer chain)");
  simc->add_option("--order", sim_order, "own-first or interference-first");
  simc->add_flag("--noiseless", sim_noiseless, "disable channel noise (exact decoding path)");
  simc->add_option("--k", sim_k, "number of users (single-layer chain only)");
  simc->add_option("--workers", sim_workers, "worker threads");
  simc->callback([&] {
    cmd_simulate(sim_b2, sim_power, sim_q, sim_trials, sim_seed, sim_layers, sim_order,
                 sim_noiseless, sim_k, sim_workers);
  });

  int leak_q = 0, leak_k = 3;
  auto* leak = app.add_subcommand("leakage", "exhaustive equivocation oracle");
  leak->add_option("--q", leak_q, "nesting ratio (2..64)")->required();
  leak->add_option("--k", leak_k, "number of users (2..5)");
  leak->callback([&] { cmd_leakage(leak_q, leak_k); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const klic::regime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const klic::resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
