#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qbat/verify.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int workers = 0;
  std::string dump_operator_path;
};

void write_output(const qbat::ResultTable& table, const CliOptions& opt) {
  std::string text = opt.format == "json" ? table.to_json() : table.to_csv();
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out_path);
  if (!f) throw qbat::ResourceError("cannot open output file: " + opt.out_path);
  f << text;
}

// --dump-operator: serialize the charger Hamiltonian of the configured model.
void dump_operator(const qbat::ExperimentConfig& cfg, const std::string& path) {
  if (cfg.n_list.empty())
    throw qbat::ValidationError("--dump-operator needs n_sites in the config");
  qbat::ModelSpec spec;
  spec.n_sites = cfg.n_list.front();
  if (cfg.battery_k)
    spec.battery = qbat::RegularBattery{*cfg.battery_k};
  else
    spec.battery = qbat::LocalBattery{cfg.axis.value_or(qbat::Axis::Z)};
  if (!cfg.alpha_list.empty())
    spec.charger =
        qbat::CollectiveCharger{cfg.alpha_list.front(), cfg.charger_normalized};
  else if (!cfg.k_list.empty())
    spec.charger = qbat::RegularCharger{cfg.k_list.front()};
  spec.t_grid = cfg.t_grid;
  spec.validate();
  std::ofstream f(path);
  if (!f) throw qbat::ResourceError("cannot open dump file: " + path);
  f << spec.charger_hamiltonian().dump();
}

int dispatch(qbat::ExperimentKind kind, const qbat::ExperimentConfig& cfg,
             const CliOptions& opt) {
  qbat::ExperimentConfig run = cfg;
  run.experiment = kind;
  if (opt.workers > 0) run.workers = opt.workers;
  qbat::ResultTable table;
  switch (kind) {
    case qbat::ExperimentKind::WorkSweep:
      table = qbat::run_work_sweep(run);
      break;
    case qbat::ExperimentKind::KSweep:
      table = qbat::run_k_sweep(run);
      break;
    case qbat::ExperimentKind::AvgPower:
      table = qbat::run_avg_power(run);
      break;
    case qbat::ExperimentKind::Fraction:
      table = qbat::run_fraction(run);
      break;
    case qbat::ExperimentKind::CollectiveScaling:
      table = qbat::run_collective_scaling(run);
      break;
    case qbat::ExperimentKind::Verify:
      table = qbat::run_verify(run);
      break;
  }
  write_output(table, opt);
  if (kind == qbat::ExperimentKind::Verify && !qbat::verify_passed(table)) {
    std::cerr << "verification failed\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabilizer quantum battery simulator"};
  app.require_subcommand(1);

  CliOptions opt;
  std::map<std::string, qbat::ExperimentKind> kinds = {
      {"work-sweep", qbat::ExperimentKind::WorkSweep},
      {"k-sweep", qbat::ExperimentKind::KSweep},
      {"avg-power", qbat::ExperimentKind::AvgPower},
      {"fraction", qbat::ExperimentKind::Fraction},
      {"collective", qbat::ExperimentKind::CollectiveScaling},
      {"verify", qbat::ExperimentKind::Verify},
  };
  std::vector<std::pair<CLI::App*, qbat::ExperimentKind>> subs;
  for (const auto& [name, kind] : kinds) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "key = value config file")
        ->required();
    sub->add_option("--out", opt.out_path, "output path (default: stdout)");
    sub->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", opt.workers, "worker thread count");
    sub->add_option("--dump-operator", opt.dump_operator_path,
                    "write the charger Hamiltonian as text and exit");
    subs.emplace_back(sub, kind);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    qbat::ExperimentConfig cfg = qbat::parse_config_file(opt.config_path);
    for (const auto& [sub, kind] : subs)
      if (sub->parsed()) {
        if (!opt.dump_operator_path.empty()) {
          dump_operator(cfg, opt.dump_operator_path);
          return 0;
        }
        return dispatch(kind, cfg, opt);
      }
    return 1;
  } catch (const qbat::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const qbat::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const qbat::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
