// flowlab: generate, run, verify and benchmark flow-time scheduling
// algorithms on exact rational instances.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowlab/adversaries.hpp"
#include "flowlab/algorithms.hpp"
#include "flowlab/baselines.hpp"
#include "flowlab/harness.hpp"
#include "flowlab/io.hpp"

namespace fl = flowlab;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw CLI::ValidationError("--n", "empty list");
  return out;
}

fl::PolicyFactory policy_factory(const std::string& alg) {
  if (alg == "greedy")
    return [](int, int) { return std::make_unique<fl::GreedyPolicy>(); };
  if (alg == "kill-restart")
    return [](int n, int m) { return std::make_unique<fl::KillRestartPolicy>(n, m); };
  if (alg == "det-np")
    return [](int n, int m) { return std::make_unique<fl::DetNpPolicy>(n, m); };
  if (alg == "kill-restart-unknown-n")
    return [](int, int m) { return std::make_unique<fl::UnknownNPolicy>(m); };
  throw CLI::ValidationError("--alg", "no duel policy named " + alg);
}

int cmd_gen(const std::string& family, int n, int m, uint64_t seed,
            const std::string& out) {
  fl::GeneratedFamily fam;
  if (family == "single-rand-lb") {
    fam = fl::gen_single_rand_lb(n, seed);
  } else if (family == "multi-lb") {
    fam = fl::gen_multi_lb(n, m, seed);
  } else if (family == "multi-restart-lb") {
    fam = fl::gen_multi_restart_lb(n, m, seed);
  } else if (family == "random") {
    fl::Instance inst = fl::make_family_instance("random", n, m, seed);
    fl::write_instance(out + ".instance.json", inst);
    std::cout << "wrote " << out << ".instance.json (" << inst.n()
              << " jobs, no witness)\n";
    return 0;
  } else {
    throw CLI::ValidationError("--family", "unknown family " + family);
  }
  fl::write_instance(out + ".instance.json", fam.instance);
  fl::write_schedule(out + ".witness.jsonl", fam.witness);
  std::cout << "wrote " << out << ".instance.json (" << fam.instance.n()
            << " jobs) and " << out << ".witness.jsonl (flow "
            << fam.witness_flow.decimal(20) << ")\n";
  return 0;
}

int cmd_run(const std::string& alg, const std::string& instance_path,
            uint64_t seed, const std::string& out, bool exact) {
  fl::Instance inst = fl::read_instance(instance_path);
  fl::Schedule sched = fl::run_algorithm(alg, inst, seed);
  fl::ValidationReport vr = fl::validate_schedule(inst, sched);
  if (!vr.ok) {
    std::cerr << "schedule failed validation:\n" << vr.summary();
    return 1;
  }
  if (!out.empty()) fl::write_schedule(out, sched);
  fl::TimeQ flow = fl::total_flow(inst, sched).total;
  std::cout << "flow " << (exact ? flow.str() : flow.decimal(20)) << "\n";
  return 0;
}

int cmd_verify(const std::string& instance_path, const std::string& schedule_path) {
  fl::Instance inst = fl::read_instance(instance_path);
  fl::Schedule sched = fl::read_schedule(schedule_path);
  fl::ValidationReport vr = fl::validate_schedule(inst, sched);
  std::cout << vr.summary() << "\n";
  return vr.ok ? 0 : 1;
}

int cmd_bench(const std::string& alg, const std::string& family,
              const std::string& ns, int m, int reps, uint64_t seed,
              const std::string& csv, bool exact) {
  auto rows = fl::run_bench(alg, family, parse_int_list(ns), m, reps, seed);
  std::string text = fl::bench_csv(rows, exact);
  if (csv.empty()) {
    std::cout << text;
  } else {
    fl::write_file(csv, text);
    std::cout << "wrote " << rows.size() << " rows to " << csv << "\n";
  }
  return 0;
}

int cmd_duel(const std::string& adversary, const std::string& alg, int n,
             int m, int trials, uint64_t seed, const std::string& out,
             bool exact) {
  auto fmt = [&](const fl::TimeQ& q) { return exact ? q.str() : q.decimal(20); };
  if (adversary == "unknown-n") {
    auto runner = [&](const fl::Instance& inst, uint64_t s) {
      return fl::run_algorithm(alg, inst, s);
    };
    fl::UnknownNDuelResult r = fl::duel_unknown_n(runner, n, trials, m, seed);
    std::cout << "classification: type " << (r.type_a ? "A" : "B");
    if (r.type_a) std::cout << " (interval [" << r.t << "," << r.t + 1 << "))";
    std::cout << " after " << r.trials << " probe runs\n";
    std::cout << "confidence: empirical frequency threshold 1/(2*" << n
              << ") over " << trials << " trials\n";
    if (!out.empty()) {
      fl::write_instance(out + ".instance.json", r.family.instance);
      fl::write_schedule(out + ".witness.jsonl", r.family.witness);
    }
    std::cout << "witness flow " << fmt(r.family.witness_flow) << "\n";
    return 0;
  }

  fl::DuelResult r;
  if (adversary == "restart-lb") {
    r = fl::duel_restart_lb(policy_factory(alg), n);
  } else if (adversary == "nm2") {
    r = fl::duel_nm2(policy_factory(alg), n, m);
  } else {
    throw CLI::ValidationError("--adversary", "unknown adversary " + adversary);
  }
  if (!out.empty()) {
    fl::write_instance(out + ".instance.json", r.instance);
    fl::write_schedule(out + ".schedule.jsonl", r.schedule);
    fl::write_schedule(out + ".witness.jsonl", r.witness);
    fl::write_file(out + ".transcript.jsonl", fl::transcript_to_jsonl(r.transcript));
  }
  if (!r.protocol_complete) {
    std::cerr << "duel incomplete: the algorithm idled past the horizon\n";
    return 1;
  }
  std::cout << "algorithm flow " << fmt(r.alg_flow) << "\n"
            << "witness flow   " << fmt(r.witness_flow) << "\n"
            << "ratio          " << fmt(r.alg_flow / r.witness_flow) << "\n";
  return 0;
}

int cmd_fit(const std::string& csv_path, const std::string& xcol,
            const std::string& ycol) {
  std::string text = fl::read_file(csv_path);
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw std::runtime_error("empty csv");
  std::vector<std::string> cols;
  {
    std::stringstream hs(line);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  int xi = -1, yi = -1;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == xcol) xi = static_cast<int>(i);
    if (cols[i] == ycol) yi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0)
    throw std::runtime_error("columns not found: " + xcol + ", " + ycol);
  std::vector<std::pair<double, double>> points;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    points.push_back({std::stod(fields.at(xi)), std::stod(fields.at(yi))});
  }
  fl::FitResult f = fl::fit_scaling(points);
  std::cout << "slope " << f.slope << "\nintercept " << f.intercept
            << "\nr2 " << f.r2 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flow-time scheduling laboratory"};
  app.require_subcommand(1);

  std::string family = "random", alg = "greedy", instance_path, schedule_path;
  std::string out, csv_path, ns = "10", xcol = "n", ycol = "ratio";
  std::string adversary = "restart-lb";
  int n = 10, m = 1, reps = 1, trials = 1;
  uint64_t seed = 0;
  bool exact = false;

  auto* gen = app.add_subcommand("gen", "generate an instance (and witness)");
  gen->add_option("--family", family)->required();
  gen->add_option("--n", n)->required();
  gen->add_option("--m", m);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out)->required();

  auto* run = app.add_subcommand("run", "run an algorithm on an instance");
  run->add_option("--alg", alg)->required();
  run->add_option("--instance", instance_path)->required();
  run->add_option("--seed", seed);
  run->add_option("--out", out);
  run->add_flag("--exact", exact);

  auto* verify = app.add_subcommand("verify", "validate a schedule");
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--schedule", schedule_path)->required();

  auto* bench = app.add_subcommand("bench", "sweep and emit CSV");
  bench->add_option("--alg", alg)->required();
  bench->add_option("--family", family)->required();
  bench->add_option("--n", ns)->required();
  bench->add_option("--m", m);
  bench->add_option("--reps", reps);
  bench->add_option("--seed", seed);
  bench->add_option("--csv", csv_path);
  bench->add_flag("--exact", exact);

  auto* duel = app.add_subcommand("duel", "adaptive adversary vs a policy");
  duel->add_option("--adversary", adversary)->required();
  duel->add_option("--alg", alg)->required();
  duel->add_option("--n", n)->required();
  duel->add_option("--m", m);
  duel->add_option("--trials", trials);
  duel->add_option("--seed", seed);
  duel->add_option("--out", out);
  duel->add_flag("--exact", exact);

  auto* fit = app.add_subcommand("fit", "log-log least squares on a CSV");
  fit->add_option("--csv", csv_path)->required();
  fit->add_option("--x", xcol);
  fit->add_option("--y", ycol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(family, n, m, seed, out);
    if (run->parsed()) return cmd_run(alg, instance_path, seed, out, exact);
    if (verify->parsed()) return cmd_verify(instance_path, schedule_path);
    if (bench->parsed())
      return cmd_bench(alg, family, ns, m, reps, seed, csv_path, exact);
    if (duel->parsed())
      return cmd_duel(adversary, alg, n, m, trials, seed, out, exact);
    if (fit->parsed()) return cmd_fit(csv_path, xcol, ycol);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
