#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "truncq/core_model.hpp"
#include "truncq/cost_model.hpp"
#include "truncq/noise_model.hpp"
#include "truncq/run_stats.hpp"
#include "truncq/sequence_model.hpp"
#include "truncq/shor_model.hpp"
#include "truncq/simulator.hpp"

namespace {

constexpr const char* kVersion = "truncq 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSimCap = 4;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Row {
  std::vector<std::pair<std::string, std::string>> cells;
  void add(const std::string& key, const std::string& v) { cells.emplace_back(key, v); }
  void add(const std::string& key, double v) { cells.emplace_back(key, format_double(v)); }
  void add(const std::string& key, long long v) { cells.emplace_back(key, std::to_string(v)); }
};

struct Output {
  std::vector<Row> rows;
  bool json = false;
  std::string out_path;

  std::string render() const {
    std::ostringstream os;
    if (json) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (const auto& [k, v] : r.cells) obj[k] = v;
        arr.push_back(obj);
      }
      os << arr.dump(2) << "\n";
    } else {
      if (!rows.empty()) {
        for (std::size_t i = 0; i < rows[0].cells.size(); ++i) {
          os << rows[0].cells[i].first << (i + 1 < rows[0].cells.size() ? "," : "\n");
        }
        for (const auto& r : rows) {
          for (std::size_t i = 0; i < r.cells.size(); ++i) {
            os << r.cells[i].second << (i + 1 < r.cells.size() ? "," : "\n");
          }
        }
      }
    }
    return os.str();
  }
};

std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

void emit(const Output& out, const std::string& command_line, const nlohmann::json& params,
          std::optional<std::uint64_t> seed) {
  nlohmann::json manifest{{"command", command_line},
                          {"parameters", params},
                          {"version", kVersion},
                          {"timestamp", iso_timestamp()}};
  if (seed) {
    manifest["seed"] = *seed;
  } else {
    manifest["seed"] = nullptr;
  }
  const std::string text = out.render();
  if (out.out_path.empty()) {
    std::cout << text;
    std::cerr << manifest.dump() << "\n";
  } else {
    std::ofstream f(out.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write output file '" + out.out_path + "'");
    f << text;
    std::ofstream mf(out.out_path + ".manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
  }
}

// One swept axis: values for L, N, n, ell; at most one may hold several values.
struct Axes {
  std::vector<int> L{};
  std::vector<int> N{};
  std::vector<int> n{};
  std::vector<int> ell{};
  std::string sweep;  // "axis:start:stop:step"

  void apply_sweep() {
    if (sweep.empty()) return;
    std::vector<std::string> parts;
    std::stringstream ss(sweep);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw CLI::ValidationError("--sweep", "expected axis:start:stop:step");
    const int start = std::stoi(parts[1]);
    const int stop = std::stoi(parts[2]);
    const int step = std::stoi(parts[3]);
    if (step <= 0 || stop < start) throw CLI::ValidationError("--sweep", "bad range");
    std::vector<int> vals;
    for (int v = start; v <= stop; v += step) vals.push_back(v);
    if (parts[0] == "L") L = vals;
    else if (parts[0] == "N") N = vals;
    else if (parts[0] == "n") n = vals;
    else if (parts[0] == "ell") ell = vals;
    else throw CLI::ValidationError("--sweep", "axis must be one of L,N,n,ell");
  }

  void check_single_axis() const {
    int multi = 0;
    for (const auto* v : {&L, &N, &n, &ell}) {
      if (v->size() > 1) ++multi;
    }
    if (multi > 1) throw CLI::ValidationError("sweep", "only one axis may take several values");
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    auto one = [](const std::vector<int>& v, int fallback) {
      return v.empty() ? std::vector<int>{fallback} : v;
    };
    for (int l : one(L, 0))
      for (int nn : one(N, 1))
        for (int k : one(n, 0))
          for (int e : one(ell, 0)) fn(l, nn, k, e);
  }
};

nlohmann::json axes_params(const Axes& a) {
  nlohmann::json j;
  j["L"] = a.L;
  j["N"] = a.N;
  j["n"] = a.n;
  j["ell"] = a.ell;
  return j;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fourier arithmetic fidelity models, oracle simulator and cost estimates"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Output output;
  app.add_flag("--json", output.json, "emit JSON instead of CSV");
  app.add_option("--out", output.out_path, "write output to file (plus sibling manifest)");

  // ---- predict ----
  auto* predict = app.add_subcommand("predict", "closed-form fidelity predictions");
  predict->require_subcommand(1);
  Axes paxes;
  bool asymptotic = false, numeric = false, shor_compose = false;
  int pwindow = 8;
  for (auto* sub : {predict->add_subcommand("adder", "single truncated adder average"),
                    predict->add_subcommand("addsub", "add/subtract pair average"),
                    predict->add_subcommand("sequence", "n add/subtract pairs"),
                    predict->add_subcommand("corrected", "corrected adder sequences"),
                    predict->add_subcommand("modadder", "single modular adder"),
                    predict->add_subcommand("shor", "full Shor circuit")}) {
    sub->add_option("--L", paxes.L, "register length(s)");
    sub->add_option("--N", paxes.N, "truncation level(s)");
    sub->add_option("--n", paxes.n, "add/subtract pair count(s)");
    sub->add_option("--ell", paxes.ell, "correction depth(s)");
    sub->add_option("--sweep", paxes.sweep, "axis:start:stop:step");
    sub->add_flag("--asymptotic", asymptotic, "use the asymptotic closed form");
    sub->add_flag("--numeric", numeric, "use the PMF-integrated form");
    sub->add_flag("--shor", shor_compose, "compose with the Shor CNOT model");
    sub->add_option("--window", pwindow, "effective-sum window (default 8)");
  }

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "dense statevector oracle runs");
  simulate->require_subcommand(1);
  int sL = 4, sN = 2, sell = 0, sn = 1, sequential = 0;
  double sigma = 0.0;
  std::uint64_t trials = 1, seed = 0;
  std::int64_t sim_x = -1, sim_a = -1;
  bool subtract_flag = false;
  for (auto* sub : {simulate->add_subcommand("adder", "one truncated adder"),
                    simulate->add_subcommand("modadder", "modular adder (optionally sequential)"),
                    simulate->add_subcommand("sequence", "n add/subtract pairs")}) {
    sub->add_option("--L", sL, "register length")->required();
    sub->add_option("--N", sN, "truncation level")->required();
    sub->add_option("--ell", sell, "correction depth");
    sub->add_option("--n", sn, "add/subtract pair count");
    sub->add_option("--sigma", sigma, "Gaussian rotation-error sigma (radians)");
    sub->add_option("--trials", trials, "trials / samples");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--x", sim_x, "initial register value");
    sub->add_option("--a", sim_a, "addend value");
    sub->add_option("--sequential", sequential, "sequential modular adder count");
    sub->add_flag("--subtract", subtract_flag, "subtract instead of add");
  }

  // ---- montecarlo ----
  auto* mc = app.add_subcommand("montecarlo", "large-L instance-fidelity averages");
  Axes maxes;
  std::uint64_t mc_samples = 100000, mc_seed = 0;
  std::string estimator = "auto";
  mc->add_option("--L", maxes.L, "register length(s)")->required();
  mc->add_option("--N", maxes.N, "truncation level(s)")->required();
  mc->add_option("--n", maxes.n, "add/subtract pair count(s)");
  mc->add_option("--ell", maxes.ell, "correction depth(s)");
  mc->add_option("--sweep", maxes.sweep, "axis:start:stop:step");
  mc->add_option("--samples", mc_samples, "sample count");
  mc->add_option("--seed", mc_seed, "RNG seed");
  mc->add_option("--estimator", estimator, "adder|sequence|corrected|auto");

  // ---- cost ----
  auto* cost = app.add_subcommand("cost", "fault-tolerant resource estimates (JSON)");
  int cL = 2048, cN = 7, cell = 0;
  double eta = 0.0;
  std::string table_path, regime = "adder";
  cost->add_option("--L", cL, "register length")->required();
  cost->add_option("--N", cN, "truncation level");
  cost->add_option("--ell", cell, "correction depth");
  cost->add_option("--eta", eta, "target logical error rate (default per regime)");
  cost->add_option("--table", table_path, "cost table JSON path")->required();
  cost->add_option("--regime", regime, "adder|adder-full|shor-full|shor-trunc");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const std::string command_line = join_args(argc, argv);

  try {
    if (predict->parsed()) {
      paxes.apply_sweep();
      paxes.check_single_axis();
      const std::string which = predict->get_subcommands().front()->get_name();
      paxes.for_each([&](int L, int N, int n, int ell) {
        truncq::TruncationConfig cfg{L, N, ell};
        Row row;
        row.add("subcommand", which);
        row.add("L", static_cast<long long>(L));
        row.add("N", static_cast<long long>(N));
        if (which == "adder") {
          row.add("mode", asymptotic ? "asymptotic" : "exact");
          row.add("fidelity", asymptotic ? truncq::adder_fidelity_asymptotic(cfg)
                                         : truncq::adder_fidelity_avg(cfg));
        } else if (which == "addsub") {
          row.add("mode", asymptotic ? "asymptotic" : "exact");
          row.add("fidelity", asymptotic ? truncq::addsub_fidelity_asymptotic(cfg)
                                         : truncq::addsub_fidelity_avg(cfg));
        } else if (which == "sequence") {
          truncq::SequenceModelParams p{n, L, N, 0, pwindow};
          row.add("n", static_cast<long long>(n));
          row.add("mode", numeric ? "numeric" : "closed");
          row.add("fidelity", numeric ? truncq::sequence_fidelity_numeric(p)
                                      : truncq::sequence_fidelity_closed(p));
        } else if (which == "corrected") {
          row.add("ell", static_cast<long long>(ell));
          if (shor_compose) {
            row.add("target", "shor");
            row.add("fidelity", truncq::corrected_shor_success(L, N, ell));
          } else {
            truncq::SequenceModelParams p{n, L, N, ell, pwindow};
            row.add("n", static_cast<long long>(n));
            row.add("target", "sequence");
            row.add("fidelity", truncq::corrected_fidelity(p));
          }
        } else if (which == "modadder") {
          row.add("fidelity", truncq::modular_adder_fidelity(L, N));
        } else {
          row.add("fidelity", truncq::shor_fidelity(L, N));
        }
        output.rows.push_back(row);
      });
      emit(output, command_line, axes_params(paxes), std::nullopt);
      return kExitOk;
    }

    if (simulate->parsed()) {
      const std::string which = simulate->get_subcommands().front()->get_name();
      truncq::TruncationConfig cfg{sL, sN, sell};
      truncq::MonteCarloPlan plan{trials, seed, 0};
      Row row;
      row.add("subcommand", which);
      row.add("L", static_cast<long long>(sL));
      row.add("N", static_cast<long long>(sN));
      row.add("ell", static_cast<long long>(sell));
      if (which == "adder") {
        if (sim_x >= 0 && sim_a >= 0 && sigma == 0.0) {
          const truncq::BitString x(sL, static_cast<std::uint64_t>(sim_x));
          const truncq::BitString a(sL, static_cast<std::uint64_t>(sim_a));
          row.add("x", static_cast<long long>(sim_x));
          row.add("a", static_cast<long long>(sim_a));
          row.add("probability", truncq::simulate_adder_instance(x, a, cfg, subtract_flag));
        } else if (sim_x >= 0 && sim_a >= 0) {
          const truncq::BitString a(sL, static_cast<std::uint64_t>(sim_a));
          const truncq::Circuit circ = truncq::build_truncated_adder(a, cfg, subtract_flag);
          const truncq::BitString x(sL, static_cast<std::uint64_t>(sim_x));
          const truncq::BitString y =
              subtract_flag ? truncq::sub_mod(x, a) : truncq::add_mod(x, a);
          const auto res = truncq::run_noisy(circ, x.value(), y.value(), {sigma}, plan);
          row.add("x", static_cast<long long>(sim_x));
          row.add("a", static_cast<long long>(sim_a));
          row.add("sigma", sigma);
          row.add("trials", static_cast<long long>(trials));
          row.add("seed", static_cast<long long>(seed));
          row.add("mean", res.mean);
          row.add("std_error", res.std_error);
        } else {
          throw CLI::ValidationError("simulate adder", "--x and --a are required");
        }
      } else if (which == "modadder") {
        const auto res = sequential > 0
                             ? truncq::simulate_sequential_modular_adders(cfg, sequential, plan)
                             : truncq::simulate_modular_adder_average(cfg, plan);
        if (sequential > 0) row.add("sequential", static_cast<long long>(sequential));
        row.add("trials", static_cast<long long>(trials));
        row.add("seed", static_cast<long long>(seed));
        row.add("mean", res.mean);
        row.add("std_error", res.std_error);
      } else {
        const auto res = truncq::simulate_sequence_average(cfg, sn, plan, {sigma});
        row.add("n", static_cast<long long>(sn));
        row.add("sigma", sigma);
        row.add("trials", static_cast<long long>(trials));
        row.add("seed", static_cast<long long>(seed));
        row.add("mean", res.mean);
        row.add("std_error", res.std_error);
      }
      output.rows.push_back(row);
      nlohmann::json params{{"L", sL}, {"N", sN},       {"ell", sell},
                            {"n", sn}, {"sigma", sigma}, {"trials", trials}};
      emit(output, command_line, params, seed);
      return kExitOk;
    }

    if (mc->parsed()) {
      maxes.apply_sweep();
      maxes.check_single_axis();
      maxes.for_each([&](int L, int N, int n, int ell) {
        truncq::TruncationConfig cfg{L, N, ell};
        truncq::MonteCarloPlan plan{mc_samples, mc_seed, 0};
        std::string est = estimator;
        if (est == "auto") est = (ell > 0) ? "corrected" : (n > 0 ? "sequence" : "adder");
        truncq::MeanWithError res;
        if (est == "adder") {
          res = truncq::mc_adder_average(cfg, plan);
        } else if (est == "sequence") {
          res = truncq::mc_sequence_average(cfg, n, plan);
        } else if (est == "corrected") {
          res = truncq::mc_corrected_average(cfg, n, plan);
        } else {
          throw CLI::ValidationError("--estimator", "unknown estimator '" + est + "'");
        }
        Row row;
        row.add("L", static_cast<long long>(L));
        row.add("N", static_cast<long long>(N));
        row.add("n", static_cast<long long>(n));
        row.add("ell", static_cast<long long>(ell));
        row.add("estimator", est);
        row.add("samples", static_cast<long long>(mc_samples));
        row.add("seed", static_cast<long long>(mc_seed));
        row.add("mean", res.mean);
        row.add("std_error", res.std_error);
        output.rows.push_back(row);
      });
      nlohmann::json params = axes_params(maxes);
      params["samples"] = mc_samples;
      params["estimator"] = estimator;
      emit(output, command_line, params, mc_seed);
      return kExitOk;
    }

    if (cost->parsed()) {
      const truncq::CostTable table = truncq::CostTable::from_json_file(table_path);
      truncq::CostReport report;
      double used_eta = eta;
      if (regime == "adder") {
        if (used_eta == 0.0) used_eta = 1e-5;
        report = truncq::truncated_adder_cost(cL, cN, used_eta, table);
      } else if (regime == "adder-full") {
        if (used_eta == 0.0) used_eta = 1e-7;
        report = truncq::draper_adder_cost(cL, used_eta, table);
      } else if (regime == "shor-full") {
        if (used_eta == 0.0) used_eta = 1e-14;
        report = truncq::shor_cost_full(cL, used_eta, table);
      } else if (regime == "shor-trunc") {
        if (used_eta == 0.0) used_eta = 1e-12;
        report = truncq::shor_cost_truncated(cL, cN, cell, used_eta, table);
      } else {
        throw CLI::ValidationError("--regime", "unknown regime '" + regime + "'");
      }
      nlohmann::json j{{"regime", regime},
                       {"L", cL},
                       {"eta", used_eta},
                       {"logical_qubits", report.logical_qubits},
                       {"distilled_states", report.distilled_states},
                       {"raw_states", report.raw_states}};
      if (regime == "adder" || regime == "shor-trunc") j["N"] = cN;
      if (regime == "shor-trunc") j["ell"] = cell;
      if (report.success_probability) j["success_probability"] = *report.success_probability;
      Row row;
      row.add("report", j.dump());
      Output json_out;
      json_out.out_path = output.out_path;
      if (json_out.out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        nlohmann::json manifest{{"command", command_line},
                                {"parameters", {{"table", table_path}, {"regime", regime}}},
                                {"seed", nullptr},
                                {"version", kVersion},
                                {"timestamp", iso_timestamp()}};
        std::cerr << manifest.dump() << "\n";
      } else {
        std::ofstream f(json_out.out_path, std::ios::binary);
        f << j.dump(2) << "\n";
        nlohmann::json manifest{{"command", command_line},
                                {"parameters", {{"table", table_path}, {"regime", regime}}},
                                {"seed", nullptr},
                                {"version", kVersion},
                                {"timestamp", iso_timestamp()}};
        std::ofstream mf(json_out.out_path + ".manifest.json", std::ios::binary);
        mf << manifest.dump(2) << "\n";
      }
      return kExitOk;
    }
  } catch (const truncq::SimulatorCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimCap;
  } catch (const truncq::CostTableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
