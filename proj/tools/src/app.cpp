#include "app.hpp"

#include <cstdlib>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"
#include "shgcn/error.hpp"
#include "shgcn/version.hpp"

namespace shgcn::cli {
namespace {

constexpr const char* kOutDirEnv = "SHGCN_OUT_DIR";

void add_graph_options(CLI::App& cmd, ExperimentConfig& cfg) {
  cmd.add_option("--synthetic", cfg.synthetic,
                 "Generated graph: tree:<branching>,<depth> | cycle:<n> | path:<n> | erdos:<n>,<p>,<seed> | "
                 "collection:<count>,<seed> (gr only)");
  cmd.add_option("--edges", cfg.edges, "Edge list file (two 0-based ids per line)");
}

void add_experiment_options(CLI::App& cmd, ExperimentConfig& cfg, bool bench) {
  add_graph_options(cmd, cfg);
  cmd.add_option("--features", cfg.features, "Node feature CSV (row i = node i)");
  cmd.add_option("--labels", cfg.labels, "Node label CSV (one integer per line)");
  cmd.add_option("--synthetic-features", cfg.synthetic_features, "Features for generated graphs: diffusion | identity")
      ->capture_default_str();
  cmd.add_option("--feature-dim", cfg.feature_dim, "Dimension of diffusion features")->capture_default_str();
  cmd.add_option("--feature-noise", cfg.feature_noise, "Per-edge drift of diffusion features")->capture_default_str();
  cmd.add_option("--dataset-seed", cfg.dataset_seed, "Seed for generated features")->capture_default_str();
  cmd.add_option("--task", cfg.task, "lp | nc | gr")->capture_default_str();
  if (bench) {
    cmd.add_option("--models", cfg.models, "Models to compare; the first is the subject")->delimiter(',')->required();
    cmd.add_option("--runs", cfg.runs, "Repetitions per model")->capture_default_str();
  } else {
    cmd.add_option("--model", cfg.model, "shgcn | hgcn-agg0 | gcn")->capture_default_str();
    cmd.add_option("--threads", cfg.threads, "Seeds trained in parallel")->capture_default_str();
    cmd.add_option("--patience", cfg.patience, "Early-stopping patience (epochs)")->capture_default_str();
  }
  cmd.add_option("--layers", cfg.layers, "Number of layers")->capture_default_str();
  cmd.add_option("--dim", cfg.dim, "Hidden and embedding dimension")->capture_default_str();
  cmd.add_option("--activation", cfg.activation, "Hidden activation: relu | identity")->capture_default_str();
  cmd.add_option("--curvature", cfg.curvature, "Initial curvature of every hyperbolic layer")->capture_default_str();
  cmd.add_flag("--fixed-curvature", cfg.fixed_curvature, "Do not train the curvature");
  cmd.add_option("--dropout", cfg.dropout, "Weight dropout probability")->capture_default_str();
  cmd.add_option("--lr", cfg.lr, "Adam learning rate")->capture_default_str();
  cmd.add_option("--weight-decay", cfg.weight_decay, "L2 weight decay")->capture_default_str();
  cmd.add_option("--epochs", cfg.epochs, "Maximum training epochs")->capture_default_str();
  cmd.add_option("--seeds", cfg.seeds, "Comma-separated seeds")->delimiter(',');
  cmd.add_option("--ratios", cfg.ratios, "Split ratios train,val,test")->delimiter(',')->expected(3);
  cmd.add_option("--fd-r", cfg.fd_r, "Fermi-Dirac radius r")->capture_default_str();
  cmd.add_option("--fd-t", cfg.fd_t, "Fermi-Dirac temperature t")->capture_default_str();
  cmd.add_option("--precision", cfg.precision, "half | single | double")->capture_default_str();
}

// Inserts the entries of a --config file right after the subcommand name so
// that explicit flags, which come later, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    std::string path;
    if (a == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      out.push_back(a);
      continue;
    }
    if (!injected.empty()) throw UsageError("--config may be given once");
    injected = config_file_args(path);
  }
  if (injected.empty() || out.empty()) return out;
  out.insert(out.begin() + 1, injected.begin(), injected.end());
  return out;
}

}  // namespace

int run_app(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simplified hyperbolic graph convolutional networks: training, benchmarks and stability analysis",
               "shgcn"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ExperimentConfig run_cfg;
  ExperimentConfig bench_cfg;
  bench_cfg.epochs = 50;
  ExperimentConfig hyp_cfg;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Train one model per seed and report test metrics");
  add_experiment_options(*run, run_cfg, false);
  auto* bench = app.add_subcommand("bench", "Compare per-epoch training time across models");
  add_experiment_options(*bench, bench_cfg, true);
  auto* stab = app.add_subcommand("stability", "Exp/log collapse thresholds per floating-point precision");
  auto* hyp = app.add_subcommand("hyperbolicity", "Exact Gromov delta of a graph");
  add_graph_options(*hyp, hyp_cfg);
  hyp->add_option("--max-nodes", hyp_cfg.max_nodes, "Refuse graphs larger than this")->capture_default_str();
  hyp->add_option("--threads", hyp_cfg.threads, "Worker threads")->capture_default_str();
  for (auto* cmd : {run, bench, stab, hyp}) {
    cmd->add_option("--out", out_dir, std::string("Output directory (default $") + kOutDirEnv + ")");
    cmd->add_option("--config", "key=value file whose entries act as flags; explicit flags win");
  }
  // --seeds is a list, so TakeLast would keep only its last element.
  for (auto* cmd : {run, bench}) cmd->get_option("--seeds")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  for (auto* cmd : {run, bench}) cmd->get_option("--ratios")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  bench->get_option("--models")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  if (out_dir.empty()) {
    if (const char* env = std::getenv(kOutDirEnv)) out_dir = env;
  }
  run_cfg.out = bench_cfg.out = out_dir;

  try {
    CommandOutput output;
    if (run->parsed()) {
      run_cfg.validate(false);
      output = cmd_run(run_cfg);
    } else if (bench->parsed()) {
      bench_cfg.validate(true);
      output = cmd_bench(bench_cfg);
    } else if (stab->parsed()) {
      output = cmd_stability();
    } else {
      if (hyp_cfg.synthetic.empty() == hyp_cfg.edges.empty()) {
        throw UsageError("give exactly one graph source: --synthetic or --edges");
      }
      output = cmd_hyperbolicity(hyp_cfg);
    }
    out << output.text;
    if (stab->parsed()) out << "\n" << output.csv;
    if (!out_dir.empty()) write_outputs(out_dir, output);
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace shgcn::cli
