#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "basex/chain.hpp"
#include "basex/diagnostics.hpp"
#include "basex/distribution.hpp"
#include "basex/errors.hpp"
#include "basex/init.hpp"
#include "basex/io.hpp"

namespace {

using namespace basex;

struct ModelOptions {
  std::string kind;  // kdpp | table | spanning-tree
  std::string ensemble_path;
  std::string table_path;
  std::string graph_path;
  std::size_t k = 0;
  bool k_set = false;
};

struct LoadedModel {
  std::shared_ptr<const HomogeneousDistribution> dist;
  const KDPP* kdpp = nullptr;
  const ExplicitTable* table = nullptr;
  const SpanningTreeDistribution* tree = nullptr;
};

void add_model_flags(CLI::App* cmd, ModelOptions& opt) {
  cmd->add_option("--model", opt.kind, "Model kind: kdpp, table, spanning-tree")
      ->required()
      ->check(CLI::IsMember({"kdpp", "table", "spanning-tree"}));
  cmd->add_option("--ensemble", opt.ensemble_path, "Ensemble CSV (kdpp)");
  cmd->add_option("--table", opt.table_path, "Table CSV (table)");
  cmd->add_option("--graph", opt.graph_path, "Graph CSV (spanning-tree)");
  cmd->add_option("--k", opt.k, "Degree k (required for kdpp)")
      ->each([&opt](const std::string&) { opt.k_set = true; });
}

LoadedModel load_model(const ModelOptions& opt) {
  LoadedModel model;
  if (opt.kind == "kdpp") {
    if (opt.ensemble_path.empty()) throw InputError("kdpp model requires --ensemble");
    if (!opt.k_set) throw InputError("kdpp model requires --k");
    auto d = std::make_shared<KDPP>(io::parse_ensemble_csv(opt.ensemble_path), opt.k);
    model.kdpp = d.get();
    model.dist = std::move(d);
  } else if (opt.kind == "table") {
    if (opt.table_path.empty()) throw InputError("table model requires --table");
    auto d = std::make_shared<ExplicitTable>(io::parse_table_csv(opt.table_path));
    model.table = d.get();
    model.dist = std::move(d);
  } else {
    if (opt.graph_path.empty()) {
      throw InputError("spanning-tree model requires --graph");
    }
    auto d = std::make_shared<SpanningTreeDistribution>(
        io::parse_graph_csv(opt.graph_path));
    model.tree = d.get();
    model.dist = std::move(d);
  }
  return model;
}

Subset parse_start(const std::string& text) {
  std::vector<int> idx;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) idx.push_back(std::stoi(item));
  return Subset(std::move(idx));
}

// Normalized-mass lower bound for the initializer's state when the support
// is too large to enumerate.
double init_mass_lower_bound(const LoadedModel& model) {
  const auto& d = *model.dist;
  const double n = static_cast<double>(d.ground_size());
  const double k = static_cast<double>(d.degree());
  const double log_binom =
      std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  if (model.kdpp != nullptr) {
    // greedy start: mu(S0) >= 1/(k! C(n,k))
    return std::exp(-std::lgamma(k + 1) - log_binom);
  }
  if (model.table != nullptr) {
    // argmax entry: mu(S0) >= 1/#entries
    return 1.0 / static_cast<double>(model.table->entries().size());
  }
  // max-weight tree: mu(S0) >= 1/#trees >= 1/C(n,k)
  return std::exp(-log_binom);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot open output file " + path);
  return file;
}

std::string subset_json(const Subset& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

int cmd_sample(const ModelOptions& opt, double epsilon, long num_samples,
               std::uint64_t seed, std::optional<long> steps_override,
               const std::string& start_text, unsigned threads,
               const std::string& output_path, std::uint64_t cap) {
  const LoadedModel model = load_model(opt);
  const auto& d = *model.dist;

  Subset s0;
  if (!start_text.empty()) {
    s0 = parse_start(start_text);
  } else {
    s0 = initialize(d).s0;
  }

  MixingBudget budget;
  if (steps_override) {
    budget.tau = *steps_override;
    budget.epsilon = epsilon;
    ChainRun probe(d, s0, seed);  // validates the start state
  } else {
    std::optional<double> lb;
    if (binomial_capped(d.ground_size(), d.degree(), cap) > cap &&
        start_text.empty()) {
      lb = init_mass_lower_bound(model);
    }
    budget = mixing_budget(d, s0, epsilon, lb, cap);
  }

  std::cerr << "start=" << s0.to_string() << " tau=" << budget.tau
            << " c_mu=" << io::format_double(budget.c_mu)
            << (budget.c_mu_exact ? " (exact)" : " (1/(2kn) bound)")
            << " mu_start=" << io::format_double(budget.mu_start_normalized)
            << " epsilon=" << io::format_double(budget.epsilon) << "\n";

  std::vector<std::string> records(static_cast<std::size_t>(num_samples));
  const long steps = budget.tau;
  auto worker = [&](long begin, long end) {
    for (long c = begin; c < end; ++c) {
      ChainRun run(d, s0, seed, static_cast<std::uint64_t>(c));
      run.run(steps);
      std::string rec = "{\"subset\":" + subset_json(run.current()) +
                        ",\"steps\":" + std::to_string(run.step_count()) +
                        ",\"accepts\":" + std::to_string(run.accept_count()) + "}\n";
      records[static_cast<std::size_t>(c)] = std::move(rec);
    }
  };

  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || num_samples < 2) {
    worker(0, num_samples);
  } else {
    const unsigned t = std::min<unsigned>(threads, static_cast<unsigned>(num_samples));
    std::vector<std::thread> pool;
    const long chunk = (num_samples + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
      const long begin = w * chunk;
      const long end = std::min<long>(begin + chunk, num_samples);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::ofstream file;
  std::ostream& out = open_output(output_path, file);
  for (const auto& rec : records) out << rec;
  out.flush();
  return 0;
}

int cmd_diagnose(const ModelOptions& opt, double epsilon,
                 const std::string& start_text, const std::string& output_path,
                 std::uint64_t cap) {
  const LoadedModel model = load_model(opt);
  const auto& d = *model.dist;
  const Subset s0 = start_text.empty() ? initialize(d).s0 : parse_start(start_text);
  const auto report = diagnostics::build_report(d, s0, epsilon, cap);

  std::ofstream file;
  std::ostream& out = open_output(output_path, file);
  out << diagnostics::to_json(report) << "\n";
  out.flush();

  if (!report.all_checks_pass()) {
    std::cerr << "diagnostics check failed:"
              << (report.exchange_ok ? "" : " exchange-property")
              << (report.negative_correlation_ok ? "" : " negative-correlation")
              << (report.lambda >= report.c_mu - 1e-9 ? "" : " lambda>=c_mu")
              << (report.tv_at_tau <= report.epsilon ? "" : " tv-at-tau") << "\n";
    return 1;
  }
  return 0;
}

int cmd_init(const ModelOptions& opt, const std::string& output_path) {
  const LoadedModel model = load_model(opt);
  const InitReport report = initialize(*model.dist);
  std::ofstream file;
  std::ostream& out = open_output(output_path, file);
  out << "{\"subset\":" << subset_json(report.s0)
      << ",\"logmass\":" << io::format_double(report.log_mass) << ",\"method\":\""
      << to_string(report.method) << "\"}\n";
  out.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Base-exchange Metropolis sampler for k-DPPs and other "
               "homogeneous strongly Rayleigh distributions"};
  app.require_subcommand(1);

  ModelOptions model_opt;
  double epsilon = 0.01;
  long num_samples = 1;
  std::uint64_t seed = 0;
  long steps = -1;
  std::string start_text;
  unsigned threads = 0;
  std::string output_path;
  std::uint64_t cap = kDefaultEnumerationCap;

  auto* sample_cmd = app.add_subcommand("sample", "Draw approximate samples");
  add_model_flags(sample_cmd, model_opt);
  sample_cmd->add_option("--epsilon", epsilon, "TV target in (0,1)");
  sample_cmd->add_option("--num-samples", num_samples, "Independent chains to run")
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "RNG seed");
  sample_cmd->add_option("--steps", steps, "Explicit step count override");
  sample_cmd->add_option("--start", start_text, "Start subset, comma-separated");
  sample_cmd->add_option("--threads", threads, "Worker threads (0 = auto)");
  sample_cmd->add_option("--output", output_path, "Output JSONL path (default stdout)");
  sample_cmd->add_option("--cap", cap, "Enumeration cap on C(n,k)");

  auto* diagnose_cmd = app.add_subcommand("diagnose", "Exact diagnostics report");
  add_model_flags(diagnose_cmd, model_opt);
  diagnose_cmd->add_option("--epsilon", epsilon, "TV target in (0,1)");
  diagnose_cmd->add_option("--start", start_text, "Start subset, comma-separated");
  diagnose_cmd->add_option("--output", output_path, "Output JSON path");
  diagnose_cmd->add_option("--cap", cap, "Enumeration cap on C(n,k)");

  auto* init_cmd = app.add_subcommand("init", "Start-state selection report");
  add_model_flags(init_cmd, model_opt);
  init_cmd->add_option("--output", output_path, "Output JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample_cmd->parsed()) {
      std::optional<long> steps_override;
      if (steps >= 0) steps_override = steps;
      return cmd_sample(model_opt, epsilon, num_samples, seed, steps_override,
                        start_text, threads, output_path, cap);
    }
    if (diagnose_cmd->parsed()) {
      return cmd_diagnose(model_opt, epsilon, start_text, output_path, cap);
    }
    return cmd_init(model_opt, output_path);
  } catch (const basex::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const basex::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 4;
  } catch (const basex::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const basex::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const basex::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 5;
  }
}
