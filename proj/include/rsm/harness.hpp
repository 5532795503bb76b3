#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rsm/io.hpp"
#include "rsm/kmeans.hpp"
#include "rsm/oracle.hpp"
#include "rsm/robust_instance.hpp"
#include "rsm/solvers.hpp"

namespace rsm {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-algorithm option bundle shared by the experiment drivers.
struct SolverKnobs {
  MMinOptions mmin;
  EaOptions ea;
  CROptions cr;
};

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"mmin-aa", "ea-aa", "mmin", "ea", "cr"};
  return names;
}

inline SolveReport run_algorithm(const std::string& name, const RobustInstance& inst,
                                 const SolverKnobs& knobs = {}) {
  if (name == "mmin-aa") {
    AAOptions opts;
    opts.inner = AAOptions::Inner::MMinSingle;
    opts.mmin = knobs.mmin;
    return solve_aa(inst, opts);
  }
  if (name == "ea-aa") {
    AAOptions opts;
    opts.inner = AAOptions::Inner::EaSingle;
    opts.provider = knobs.ea.provider;
    return solve_aa(inst, opts);
  }
  if (name == "mmin") return mmin(inst, knobs.mmin);
  if (name == "ea") return ea(inst, knobs.ea);
  if (name == "cr") return cr(inst, knobs.cr);
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

namespace detail {

/// Bounded worker pool over [0, count); each index is owned end-to-end by
/// one worker and results land in index order, so output is deterministic.
inline void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace detail

/// Synthetic study configuration; defaults mirror the paper-scale setup
/// (n = 50 with a cardinality bound of 10, or a 7x7 matching, weights
/// uniform in [0,1], random clusterings, 20 seeds).
struct SyntheticConfig {
  int n = 50;
  int l = 10;
  int clusters = 5;
  double exponent = 0.5;
  std::string constraint = "cardinality";  // "cardinality" | "matching"
  int k = 10;                              // cardinality lower bound
  int matching_side = 7;                   // matching ground set is side^2
  std::vector<std::uint64_t> seeds = {1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                      11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::vector<std::string> algorithms = {"mmin-aa", "ea-aa", "mmin", "ea", "cr"};
  bool with_oracle = false;
  /// Wall-clock column is opt-in: it is the one non-deterministic output.
  bool timings = false;
  int workers = 1;
  EnumerationBudget oracle_budget;
  SolverKnobs knobs;

  void validate() const {
    if (n <= 0 || l < 1 || clusters < 1) throw std::invalid_argument("synthetic: bad n/l/clusters");
    if (!(exponent > 0.0 && exponent <= 1.0))
      throw std::invalid_argument("synthetic: exponent must lie in (0,1]");
    if (constraint != "cardinality" && constraint != "matching")
      throw std::invalid_argument("synthetic: constraint must be 'cardinality' or 'matching'");
    if (constraint == "cardinality" && (k < 1 || k > n))
      throw std::invalid_argument("synthetic: need 1 <= k <= n");
    if (constraint == "matching" && matching_side < 1)
      throw std::invalid_argument("synthetic: matching side must be positive");
    if (seeds.empty() || algorithms.empty())
      throw std::invalid_argument("synthetic: seeds and algorithms must be nonempty");
    for (const std::string& a : algorithms)
      if (std::find(known_algorithms().begin(), known_algorithms().end(), a) ==
          known_algorithms().end())
        throw std::invalid_argument("synthetic: unknown algorithm '" + a + "'");
  }
};

inline Constraint make_synthetic_constraint(const SyntheticConfig& cfg) {
  if (cfg.constraint == "matching")
    return Constraint::perfect_bipartite_matching(Graph::complete_bipartite(cfg.matching_side));
  return Constraint::cardinality_at_least(cfg.n, cfg.k);
}

/// One seed's instance: w ~ U[0,1]^n plus l independent uniform clusterings,
/// each inducing a sqrt-over-modular cooperative objective.
inline RobustInstance build_synthetic_instance(const SyntheticConfig& cfg, std::uint64_t seed) {
  Constraint c = make_synthetic_constraint(cfg);
  const int n = c.ground_size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(n);
  for (double& v : w) v = unit(rng);
  std::uniform_int_distribution<int> pick(0, cfg.clusters - 1);
  std::vector<SetFunctionPtr> fs;
  for (int i = 0; i < cfg.l; ++i) {
    std::vector<ElementSet> clusters(cfg.clusters, ElementSet(n));
    for (int j = 0; j < n; ++j) clusters[pick(rng)].set(j);
    fs.push_back(std::make_shared<ConcaveOverModular>(std::move(clusters), w, cfg.exponent));
  }
  return RobustInstance(RobustObjective(std::move(fs)), c);
}

/// CSV schema (documented in the README):
///   seed,algorithm,value,iterations,feasible,set_size,oracle_value,ratio[,runtime_ms]
/// followed by one `mean,...` and one `winrate,...` row per algorithm.
inline std::string run_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();

  struct Cell {
    SolveReport report;
    double runtime_ms = 0.0;
  };
  struct SeedRow {
    double oracle_value = -1.0;
    bool has_oracle = false;
    std::vector<Cell> cells;
  };

  const int count = static_cast<int>(cfg.seeds.size());
  std::vector<SeedRow> rows(count);

  detail::parallel_for(count, cfg.workers, [&](int idx) {
    RobustInstance inst = build_synthetic_instance(cfg, cfg.seeds[idx]);
    SeedRow& row = rows[idx];
    if (cfg.with_oracle) {
      try {
        auto [oset, ovalue] = brute_force_min(inst, cfg.oracle_budget);
        row.oracle_value = ovalue;
        row.has_oracle = true;
      } catch (const BudgetExceeded&) {
        row.has_oracle = false;
      }
    }
    for (const std::string& name : cfg.algorithms) {
      Cell cell;
      auto start = std::chrono::steady_clock::now();
      try {
        cell.report = run_algorithm(name, inst, cfg.knobs);
      } catch (const std::invalid_argument&) {
        throw;
      } catch (const std::exception& e) {
        throw SolverError("seed " + std::to_string(cfg.seeds[idx]) + ", " + name + ": " +
                          e.what());
      }
      cell.runtime_ms = detail::elapsed_ms(start);
      if (!inst.constraint.is_feasible(cell.report.set))
        throw SolverError("seed " + std::to_string(cfg.seeds[idx]) + ", " + name +
                          ": infeasible result");
      row.cells.push_back(std::move(cell));
    }
  });

  std::ostringstream csv;
  csv << "seed,algorithm,value,iterations,feasible,set_size,oracle_value,ratio";
  if (cfg.timings) csv << ",runtime_ms";
  csv << '\n';

  for (int idx = 0; idx < count; ++idx) {
    const SeedRow& row = rows[idx];
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
      const Cell& cell = row.cells[a];
      csv << cfg.seeds[idx] << ',' << cfg.algorithms[a] << ',' << format_double(cell.report.value)
          << ',' << cell.report.iterations << ",1," << cell.report.set.count() << ',';
      if (row.has_oracle) {
        csv << format_double(row.oracle_value) << ','
            << format_double(row.oracle_value > 0.0 ? cell.report.value / row.oracle_value : 1.0);
      } else {
        csv << ',';
      }
      if (cfg.timings) csv << ',' << format_double(cell.runtime_ms);
      csv << '\n';
    }
  }

  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    double mean = 0.0;
    for (const SeedRow& row : rows) mean += row.cells[a].report.value;
    mean /= count;
    csv << "mean," << cfg.algorithms[a] << ',' << format_double(mean) << ",,,,,";
    if (cfg.timings) csv << ',';
    csv << '\n';
  }
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    int wins = 0;
    for (const SeedRow& row : rows) {
      double best = row.cells[0].report.value;
      for (const Cell& cell : row.cells) best = std::min(best, cell.report.value);
      if (row.cells[a].report.value <= best + 1e-12) ++wins;
    }
    csv << "winrate," << cfg.algorithms[a] << ','
        << format_double(static_cast<double>(wins) / count) << ",,,,,";
    if (cfg.timings) csv << ',';
    csv << '\n';
  }
  return csv.str();
}

/// 2-D keypoints of one frame.
struct KeypointSet {
  std::vector<Point2> points;
  std::string frame_id;
};

inline KeypointSet ingest_keypoints(const std::string& path) {
  KeypointSet out;
  out.points = read_file(path, [](std::istream& in) { return read_keypoints(in); });
  out.frame_id = path;
  for (const Point2& p : out.points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::runtime_error("ingest_keypoints: non-finite coordinate in " + path);
  return out;
}

struct MatchExperimentConfig {
  int l = 10;               // clusterings
  int clusters = 4;         // k-means k over the union keypoints
  int points = 7;           // synthetic keypoints per frame
  std::vector<double> noise_levels = {0.0, 0.02, 0.05, 0.1, 0.2};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string cost = "euclidean";  // or "squared"
  std::uint64_t kmeans_seed_base = 1000;
  std::string solver = "mmin";     // method backing the cooperative models
  bool timings = false;
  int workers = 1;
  SolverKnobs knobs;
  /// Optional real frame pairs; when set, the synthetic sweep is skipped and
  /// ground truth is the file line order.
  std::vector<std::pair<std::string, std::string>> frame_files;

  void validate() const {
    if (l < 1 || clusters < 1) throw std::invalid_argument("matching: bad l/clusters");
    if (frame_files.empty()) {
      if (points < 1) throw std::invalid_argument("matching: points must be positive");
      if (clusters > 2 * points)
        throw std::invalid_argument("matching: clusters exceed union keypoints");
      if (noise_levels.empty() || seeds.empty())
        throw std::invalid_argument("matching: noise levels and seeds must be nonempty");
    }
    if (cost != "euclidean" && cost != "squared")
      throw std::invalid_argument("matching: cost must be 'euclidean' or 'squared'");
    if (std::find(known_algorithms().begin(), known_algorithms().end(), solver) ==
        known_algorithms().end())
      throw std::invalid_argument("matching: unknown solver '" + solver + "'");
  }
};

/// Robust cooperative matching instance: ground set = complete bipartite
/// edges, edge weight = feature cost between its endpoints, and one
/// sqrt-over-modular objective per clustering of the union keypoints (edges
/// grouped by their endpoints' cluster pair).
inline RobustInstance build_cooperative_objectives(const KeypointSet& a, const KeypointSet& b,
                                                   const MatchExperimentConfig& cfg) {
  if (a.points.size() != b.points.size())
    throw std::invalid_argument("build_cooperative_objectives: frames differ in size");
  const int m = static_cast<int>(a.points.size());
  Constraint c = Constraint::perfect_bipartite_matching(Graph::complete_bipartite(m));

  std::vector<double> w(m * m);
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v) {
      double d2 = squared_distance(a.points[u], b.points[v]);
      w[u * m + v] = cfg.cost == "squared" ? d2 : std::sqrt(d2);
    }

  std::vector<Point2> all_points = a.points;
  all_points.insert(all_points.end(), b.points.begin(), b.points.end());

  std::vector<SetFunctionPtr> fs;
  for (int i = 0; i < cfg.l; ++i) {
    std::vector<int> labels = kmeans(all_points, cfg.clusters, cfg.kmeans_seed_base + i);
    std::vector<ElementSet> groups(cfg.clusters * cfg.clusters, ElementSet(m * m));
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v)
        groups[labels[u] * cfg.clusters + labels[m + v]].set(u * m + v);
    fs.push_back(std::make_shared<ConcaveOverModular>(std::move(groups), w, 0.5));
  }
  return RobustInstance(RobustObjective(std::move(fs)), std::move(c));
}

/// CSV schema (documented in the README):
///   pair,seed,noise,method,objective,robust_value,accuracy[,runtime_ms]
/// then one `agg,...` row per (noise, method) with mean objective/accuracy.
inline std::string run_matching_experiment(const MatchExperimentConfig& cfg) {
  cfg.validate();

  struct Task {
    std::string pair_id;
    std::uint64_t seed = 0;
    double noise = 0.0;
    KeypointSet a, b;
  };
  std::vector<Task> tasks;

  if (!cfg.frame_files.empty()) {
    int id = 0;
    for (const auto& [fa, fb] : cfg.frame_files) {
      Task t;
      t.pair_id = "pair" + std::to_string(id++);
      t.a = ingest_keypoints(fa);
      t.b = ingest_keypoints(fb);
      tasks.push_back(std::move(t));
    }
  } else {
    int id = 0;
    for (std::uint64_t seed : cfg.seeds) {
      for (double noise : cfg.noise_levels) {
        Task t;
        t.pair_id = "pair" + std::to_string(id++);
        t.seed = seed;
        t.noise = noise;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int p = 0; p < cfg.points; ++p) t.a.points.push_back({unit(rng), unit(rng)});
        t.b.points = t.a.points;
        if (noise > 0.0) {
          std::normal_distribution<double> jitter(0.0, noise);
          for (Point2& p : t.b.points) {
            p.x += jitter(rng);
            p.y += jitter(rng);
          }
        }
        tasks.push_back(std::move(t));
      }
    }
  }

  struct Row {
    std::string method;
    double objective = 0.0;
    double robust_value = 0.0;
    double accuracy = 0.0;
    double runtime_ms = 0.0;
  };
  std::vector<std::vector<Row>> results(tasks.size());

  detail::parallel_for(static_cast<int>(tasks.size()), cfg.workers, [&](int idx) {
    const Task& task = tasks[idx];
    const int m = static_cast<int>(task.a.points.size());
    RobustInstance robust_inst = build_cooperative_objectives(task.a, task.b, cfg);
    const Constraint& c = robust_inst.constraint;

    MatchExperimentConfig single_cfg = cfg;
    single_cfg.l = 1;
    RobustInstance single_inst = build_cooperative_objectives(task.a, task.b, single_cfg);

    std::vector<double> w(m * m);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) {
        double d2 = squared_distance(task.a.points[u], task.b.points[v]);
        w[u * m + v] = cfg.cost == "squared" ? d2 : std::sqrt(d2);
      }

    auto accuracy_of = [&](const ElementSet& match) {
      int correct = 0;
      for (auto e = match.find_first(); e != ElementSet::npos; e = match.find_next(e)) {
        int u = static_cast<int>(e) / m, v = static_cast<int>(e) % m;
        if (u == v) ++correct;
      }
      return static_cast<double>(correct) / m;
    };

    auto push = [&](const std::string& method, const ElementSet& set, double objective,
                    double runtime) {
      if (!c.is_feasible(set)) throw SolverError(task.pair_id + ", " + method + ": infeasible");
      Row row;
      row.method = method;
      row.objective = objective;
      row.robust_value = robust_inst.objective.eval(set);
      row.accuracy = accuracy_of(set);
      row.runtime_ms = runtime;
      results[idx].push_back(std::move(row));
    };

    try {
      auto start = std::chrono::steady_clock::now();
      ElementSet mod = c.linear_minimize(w);
      double mod_cost = 0.0;
      for (auto e = mod.find_first(); e != ElementSet::npos; e = mod.find_next(e))
        mod_cost += w[e];
      push("modular", mod, mod_cost, detail::elapsed_ms(start));

      start = std::chrono::steady_clock::now();
      SolveReport single = run_algorithm(cfg.solver, single_inst, cfg.knobs);
      push("single", single.set, single.value, detail::elapsed_ms(start));

      start = std::chrono::steady_clock::now();
      SolveReport rob = run_algorithm(cfg.solver, robust_inst, cfg.knobs);
      push("robust", rob.set, rob.value, detail::elapsed_ms(start));
    } catch (const SolverError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError(task.pair_id + ": " + e.what());
    }
  });

  std::ostringstream csv;
  csv << "pair,seed,noise,method,objective,robust_value,accuracy";
  if (cfg.timings) csv << ",runtime_ms";
  csv << '\n';
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (const Row& row : results[i]) {
      csv << tasks[i].pair_id << ',' << tasks[i].seed << ',' << format_double(tasks[i].noise)
          << ',' << row.method << ',' << format_double(row.objective) << ','
          << format_double(row.robust_value) << ',' << format_double(row.accuracy);
      if (cfg.timings) csv << ',' << format_double(row.runtime_ms);
      csv << '\n';
    }
  }

  // aggregate by noise level (the synthetic stand-in for frame separation)
  std::vector<double> noises;
  for (const Task& t : tasks)
    if (std::find(noises.begin(), noises.end(), t.noise) == noises.end())
      noises.push_back(t.noise);
  for (double noise : noises) {
    for (const std::string& method : {std::string("modular"), std::string("single"),
                                      std::string("robust")}) {
      double acc = 0.0, obj = 0.0;
      int cnt = 0;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].noise != noise) continue;
        for (const Row& row : results[i]) {
          if (row.method != method) continue;
          acc += row.accuracy;
          obj += row.objective;
          ++cnt;
        }
      }
      if (cnt == 0) continue;
      csv << "agg,," << format_double(noise) << ',' << method << ',' << format_double(obj / cnt)
          << ",," << format_double(acc / cnt);
      if (cfg.timings) csv << ',';
      csv << '\n';
    }
  }
  return csv.str();
}

}  // namespace rsm
