#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qbat/closed_form.hpp"
#include "qbat/metrics.hpp"
#include "qbat/model.hpp"

namespace qbat {

// --- result tables -------------------------------------------------------------

using Cell = std::variant<std::int64_t, double, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw ValidationError("ResultTable: column count mismatch");
    rows.push_back(std::move(row));
  }

  static std::string cell_str(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) {
      std::ostringstream out;
      out.imbue(std::locale::classic());
      out << std::setprecision(12) << *d;
      return out.str();
    }
    return std::get<std::string>(c);
  }

  std::string to_csv() const {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    for (const auto& [k, v] : metadata) out << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    auto quoted = [](std::string s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    };
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        out << quoted(cell_str(row[i])) << (i + 1 < row.size() ? "," : "\n");
    return out.str();
  }

  std::string to_json() const {
    nlohmann::json j;
    for (const auto& [k, v] : metadata) j["metadata"][k] = v;
    j["columns"] = columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json r = nlohmann::json::array();
      for (const auto& c : row) {
        if (const auto* i = std::get_if<std::int64_t>(&c)) r.push_back(*i);
        else if (const auto* d = std::get_if<double>(&c)) r.push_back(*d);
        else r.push_back(std::get<std::string>(c));
      }
      j["rows"].push_back(std::move(r));
    }
    return j.dump(2);
  }
};

// --- experiment configuration -----------------------------------------------------

enum class ExperimentKind {
  WorkSweep,
  KSweep,
  AvgPower,
  Fraction,
  CollectiveScaling,
  Verify
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::WorkSweep;
  std::vector<int> n_list;
  std::vector<int> k_list;
  std::vector<double> alpha_list;
  std::optional<Axis> axis;
  std::optional<int> battery_k;
  bool charger_normalized = true;
  TGrid t_grid{0.0, std::numbers::pi, 101};
  int m_min = 1, m_max = -1;  // -1: up to N
  double period = std::numbers::pi;
  int grid_points = 10001;
  int fraction_grid = 129;
  std::uint64_t seed = 1;
  int workers = 0;  // 0: hardware concurrency
  int n_cap = 10;   // size cap for verify checks
  std::vector<std::string> checks;  // verify subset; empty = all
  bool inject_fault = false;        // negative-control mode for verify
  std::string output_path;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  for (const auto& tok : split_list(s)) out.push_back(parse(tok));
  return out;
}

inline int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw ValidationError("bad integer: " + s);
  return v;
}

inline double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw ValidationError("bad number: " + s);
  return v;
}

inline bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("bad boolean: " + s);
}

inline ExperimentKind experiment_from_string(const std::string& s) {
  if (s == "work_sweep") return ExperimentKind::WorkSweep;
  if (s == "k_sweep") return ExperimentKind::KSweep;
  if (s == "avg_power") return ExperimentKind::AvgPower;
  if (s == "fraction") return ExperimentKind::Fraction;
  if (s == "collective_scaling") return ExperimentKind::CollectiveScaling;
  if (s == "verify") return ExperimentKind::Verify;
  throw ValidationError("unknown experiment: " + s);
}

}  // namespace detail

// Key-value config: one "key = value" per line, '#' comments, lists
// comma-separated. Unknown keys are reported with their line number.
inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ValidationError("config line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    std::string key, value;
    if (eq != std::string::npos) {
      key = line.substr(0, eq);
      value = line.substr(eq + 1);
    } else {
      key = line;
    }
    auto strip = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    };
    strip(key);
    strip(value);
    if (key.empty()) continue;
    if (eq == std::string::npos) fail("expected 'key = value'");
    try {
      if (key == "experiment")
        cfg.experiment = detail::experiment_from_string(value);
      else if (key == "n_sites" || key == "n_list")
        cfg.n_list = detail::parse_list<int>(value, detail::to_int);
      else if (key == "charger_k" || key == "k_list")
        cfg.k_list = detail::parse_list<int>(value, detail::to_int);
      else if (key == "charger_alpha" || key == "alpha_list")
        cfg.alpha_list = detail::parse_list<double>(value, detail::to_double);
      else if (key == "battery_axis")
        cfg.axis = axis_from_string(value);
      else if (key == "battery_k")
        cfg.battery_k = detail::to_int(value);
      else if (key == "charger_normalized")
        cfg.charger_normalized = detail::to_bool(value);
      else if (key == "t_min")
        cfg.t_grid.t_min = detail::to_double(value);
      else if (key == "t_max")
        cfg.t_grid.t_max = detail::to_double(value);
      else if (key == "t_points")
        cfg.t_grid.n_points = detail::to_int(value);
      else if (key == "m_min")
        cfg.m_min = detail::to_int(value);
      else if (key == "m_max")
        cfg.m_max = detail::to_int(value);
      else if (key == "period")
        cfg.period = detail::to_double(value);
      else if (key == "grid_points")
        cfg.grid_points = detail::to_int(value);
      else if (key == "fraction_grid")
        cfg.fraction_grid = detail::to_int(value);
      else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
      else if (key == "workers")
        cfg.workers = detail::to_int(value);
      else if (key == "n_cap")
        cfg.n_cap = detail::to_int(value);
      else if (key == "checks")
        cfg.checks = detail::split_list(value);
      else if (key == "inject_fault")
        cfg.inject_fault = detail::to_bool(value);
      else if (key == "output_path")
        cfg.output_path = value;
      else
        fail("unknown key '" + key + "'");
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      fail(std::string("bad value for '") + key + "': " + e.what());
    }
  }
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

// --- parallel fan-out ------------------------------------------------------------

namespace detail {

// Index-addressed parallel map; assembly is deterministic because every
// worker writes only its own slots.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  int w = workers > 0 ? workers : static_cast<int>(hw ? hw : 1);
  w = std::min<std::size_t>(w, count ? count : 1);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int k = 0; k < w; ++k)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline void stamp_metadata(ResultTable& table, const std::string& experiment,
                           const ExperimentConfig& cfg, double wall_seconds) {
  table.metadata.emplace_back("experiment", experiment);
  table.metadata.emplace_back("seed", std::to_string(cfg.seed));
  std::ostringstream wt;
  wt << std::setprecision(3) << wall_seconds;
  table.metadata.emplace_back("wall_time_s", wt.str());
  table.metadata.emplace_back("engine", "qbat-1.0");
}

inline Cell num(double v) { return Cell{v}; }
inline Cell num(int v) { return Cell{static_cast<std::int64_t>(v)}; }

}  // namespace detail

// --- runners ---------------------------------------------------------------------

// Stored-work curves over the t grid for every (N, K) pair, with the
// closed-form reference wherever it applies (K = K_max is anomalous for
// X and Y batteries and left blank).
inline ResultTable run_work_sweep(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty() || cfg.k_list.empty() || !cfg.axis)
    throw ValidationError("work_sweep needs n_list, k_list, battery_axis");
  auto t0 = std::chrono::steady_clock::now();
  Axis axis = *cfg.axis;
  ResultTable table;
  table.columns = {"N", "K", "axis", "t", "W", "W_per_site", "closed_form",
                   "abs_err"};
  struct CellJob {
    int n, k;
  };
  std::vector<CellJob> jobs;
  for (int n : cfg.n_list)
    for (int k : cfg.k_list) jobs.push_back({n, k});
  std::vector<TimeSeries> series(jobs.size());
  detail::parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    ModelSpec spec{jobs[i].n, LocalBattery{axis}, RegularCharger{jobs[i].k},
                   cfg.t_grid};
    series[i] = work_series(spec);
  });
  std::string axis_str(1, axis_letter(axis));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [n, k] = jobs[i];
    bool formula = k >= 2 && (axis == Axis::Z || k < k_max(n));
    for (std::size_t j = 0; j < series[i].size(); ++j) {
      double t = series[i].ts[j], w = series[i].values[j];
      std::vector<Cell> row{detail::num(n),     detail::num(k), axis_str,
                            detail::num(t),     detail::num(w),
                            detail::num(w / n), std::string(),  std::string()};
      if (formula) {
        double cf = closed_form_work(axis, n, k, t);
        row[6] = cf;
        row[7] = std::abs(w - cf);
      }
      table.add_row(std::move(row));
    }
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::stamp_metadata(table, "work_sweep", cfg, wall);
  return table;
}

// Average stored work per site against K (simulated vs Gamma closed form).
inline ResultTable run_k_sweep(const ExperimentConfig& cfg) {
  if (cfg.n_list.size() != 1 || cfg.k_list.empty() || !cfg.axis)
    throw ValidationError("k_sweep needs n_sites (single), k_list, battery_axis");
  auto t0 = std::chrono::steady_clock::now();
  Axis axis = *cfg.axis;
  int n = cfg.n_list.front();
  ResultTable table;
  table.columns = {"axis", "N", "K", "W_bar", "closed_form", "abs_err"};
  std::vector<double> sim(cfg.k_list.size());
  detail::parallel_for(cfg.k_list.size(), cfg.workers, [&](std::size_t i) {
    int k = cfg.k_list[i];
    double period = closed_form_period(axis);
    TGrid grid{0, period, 401};
    ModelSpec spec{n, LocalBattery{axis}, RegularCharger{k}, grid};
    sim[i] = average_work(work_series(spec), period, n);
  });
  std::string axis_str(1, axis_letter(axis));
  for (std::size_t i = 0; i < cfg.k_list.size(); ++i) {
    int k = cfg.k_list[i];
    bool formula = axis == Axis::Z || k < k_max(n);
    std::vector<Cell> row{axis_str,           detail::num(n), detail::num(k),
                          detail::num(sim[i]), std::string(), std::string()};
    if (formula) {
      double cf = closed_form_average_work(axis, k);
      row[4] = cf;
      row[5] = std::abs(sim[i] - cf);
    }
    table.add_row(std::move(row));
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::stamp_metadata(table, "k_sweep", cfg, wall);
  return table;
}

// Maximum average power. Sweeping N (simulation) appends an N-scaling fit
// row; sweeping K (closed-form path, free of the dense-size cap) appends a
// sqrt(K)-law fit row.
inline ResultTable run_avg_power(const ExperimentConfig& cfg) {
  if (!cfg.axis || (cfg.n_list.empty() && cfg.k_list.empty()))
    throw ValidationError("avg_power needs battery_axis and n_list or k_list");
  auto t0 = std::chrono::steady_clock::now();
  Axis axis = *cfg.axis;
  std::string axis_str(1, axis_letter(axis));
  ResultTable table;
  table.columns = {"row_kind", "axis",   "N",    "K",
                   "P_bar",    "t_star", "beta", "residual"};
  const bool sweep_n = cfg.n_list.size() > 1;
  if (sweep_n) {
    int k = cfg.k_list.size() == 1 ? cfg.k_list.front() : 2;
    std::vector<PowerResult> pr(cfg.n_list.size());
    detail::parallel_for(cfg.n_list.size(), cfg.workers, [&](std::size_t i) {
      ModelSpec spec{cfg.n_list[i], LocalBattery{axis}, RegularCharger{k},
                     cfg.t_grid};
      WorkFunction w(spec);
      pr[i] = max_average_power(w, cfg.period, cfg.grid_points);
    });
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      table.add_row({std::string("value"), axis_str, detail::num(cfg.n_list[i]),
                     detail::num(k), detail::num(pr[i].power),
                     detail::num(pr[i].t_star), std::string(), std::string()});
      xs.push_back(cfg.n_list[i]);
      ys.push_back(pr[i].power);
    }
    FitResult fit = scaling_exponent(xs, ys);
    table.add_row({std::string("fit_N"), axis_str, std::string(),
                   detail::num(k), std::string(), std::string(),
                   detail::num(fit.beta), detail::num(fit.residual)});
  } else {
    // K sweep through the closed-form work law; N only sets the per-site scale.
    int n = cfg.n_list.empty() ? 1 : cfg.n_list.front();
    std::vector<PowerResult> pr(cfg.k_list.size());
    detail::parallel_for(cfg.k_list.size(), cfg.workers, [&](std::size_t i) {
      int k = cfg.k_list[i];
      int n_formula = k + 3;  // odd, so K < K_max always
      auto w = [&, k, n_formula](double t) {
        return closed_form_work(axis, n_formula, k, t) * n / n_formula;
      };
      pr[i] = max_average_power(w, cfg.period, cfg.grid_points);
    });
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < cfg.k_list.size(); ++i) {
      table.add_row({std::string("value"), axis_str, detail::num(n),
                     detail::num(cfg.k_list[i]), detail::num(pr[i].power),
                     detail::num(pr[i].t_star), std::string(), std::string()});
      xs.push_back(cfg.k_list[i]);
      ys.push_back(pr[i].power);
    }
    if (xs.size() >= 3 && axis != Axis::Z) {
      FitResult fit = scaling_exponent(xs, ys);
      table.add_row({std::string("fit_K"), axis_str, detail::num(n),
                     std::string(), std::string(), std::string(),
                     detail::num(fit.beta), detail::num(fit.residual)});
    }
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::stamp_metadata(table, "avg_power", cfg, wall);
  return table;
}

// Fraction of extractable energy for block sizes m (T = pi).
inline ResultTable run_fraction(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty() || cfg.k_list.size() != 1 || !cfg.axis)
    throw ValidationError("fraction needs n_list, charger_k, battery_axis");
  auto t0 = std::chrono::steady_clock::now();
  Axis axis = *cfg.axis;
  int k = cfg.k_list.front();
  ResultTable table;
  table.columns = {"axis", "N", "K", "m", "m_over_N", "R_bar"};
  struct Job {
    int n, m;
  };
  std::vector<Job> jobs;
  for (int n : cfg.n_list) {
    int hi = cfg.m_max > 0 ? std::min(cfg.m_max, n) : n;
    for (int m = std::max(1, cfg.m_min); m <= hi; ++m) jobs.push_back({n, m});
  }
  std::vector<std::optional<double>> r(jobs.size());
  detail::parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    r[i] = fraction_extractable(jobs[i].n, k, axis, jobs[i].m, cfg.period,
                                cfg.fraction_grid);
  });
  std::string axis_str(1, axis_letter(axis));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto [n, m] = jobs[i];
    std::vector<Cell> row{axis_str,       detail::num(n),
                          detail::num(k), detail::num(m),
                          detail::num(static_cast<double>(m) / n),
                          std::string("undefined")};
    if (r[i]) row[5] = *r[i];
    table.add_row(std::move(row));
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::stamp_metadata(table, "fraction", cfg, wall);
  return table;
}

// Average power of the collective charger against N, one power-law fit
// per fall rate alpha (dense spectral path).
inline ResultTable run_collective_scaling(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty() || cfg.alpha_list.empty() || !cfg.axis)
    throw ValidationError(
        "collective_scaling needs n_list, alpha_list, battery_axis");
  for (int n : cfg.n_list)
    if (n > kDenseSiteCap)
      throw ResourceError("collective_scaling: N exceeds the dense cap");
  auto t0 = std::chrono::steady_clock::now();
  Axis axis = *cfg.axis;
  ResultTable table;
  table.columns = {"row_kind", "alpha", "N", "P_bar", "t_star", "beta",
                   "residual"};
  struct Job {
    double alpha;
    int n;
  };
  std::vector<Job> jobs;
  for (double a : cfg.alpha_list)
    for (int n : cfg.n_list) jobs.push_back({a, n});
  std::vector<PowerResult> pr(jobs.size());
  detail::parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    ModelSpec spec{jobs[i].n, LocalBattery{axis},
                   CollectiveCharger{jobs[i].alpha, cfg.charger_normalized},
                   cfg.t_grid};
    WorkFunction w(spec);
    pr[i] = max_average_power(w, cfg.period,
                              std::min(cfg.grid_points, 801));
  });
  std::size_t idx = 0;
  for (double a : cfg.alpha_list) {
    std::vector<double> xs, ys;
    for (int n : cfg.n_list) {
      table.add_row({std::string("value"), detail::num(a), detail::num(n),
                     detail::num(pr[idx].power), detail::num(pr[idx].t_star),
                     std::string(), std::string()});
      xs.push_back(n);
      ys.push_back(pr[idx].power);
      ++idx;
    }
    if (xs.size() >= 3) {
      FitResult fit = scaling_exponent(xs, ys);
      table.add_row({std::string("fit"), detail::num(a), std::string(),
                     std::string(), std::string(), detail::num(fit.beta),
                     detail::num(fit.residual)});
    }
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail::stamp_metadata(table, "collective_scaling", cfg, wall);
  return table;
}

}  // namespace qbat
