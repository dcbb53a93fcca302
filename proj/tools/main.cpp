// tenmet — supervised tensor subspace learning from the command line.
//
// Subcommands: train, transform, predict, eval, xval, gabor, synth.
// Machine-readable results (key=value, CSV) go to standard output; human
// progress and diagnostics go to standard error. Exit codes: 0 success,
// 2 usage/validation error, 1 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include "tenmet/classifier.hpp"
#include "tenmet/dataset.hpp"
#include "tenmet/errors.hpp"
#include "tenmet/gabor.hpp"
#include "tenmet/solver.hpp"
#include "tenmet/trainer.hpp"

namespace {

using tenmet::Index;

// Shortest round-trip decimal form, deterministic across runs.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<Index>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

struct Options {
  std::string data, out, model, train_path;
  int k1 = 3, k2 = 10;
  double lambda = 0.1;
  int k = 1;
  int folds = 5;
  std::uint64_t seed = 42;
  double mu_bar = 0.0;  // 0 = automatic
  double mu_decay = 0.25;
  int tmax = 200;
  double rel_tol = 1e-5;
  double tau = 0.0;  // 0 = automatic
  int outer_max = 20;
  double outer_tol = 1e-4;
  int scales = 4, orients = 7, ksize = 11;
  int classes = 3, per_class = 10;
  std::vector<Index> dims, subdims;
  double noise = 0.05;
};

tenmet::SolverConfig solver_config(const Options& o) {
  tenmet::SolverConfig cfg;
  cfg.mu_bar = o.mu_bar;
  cfg.mu_decay = o.mu_decay;
  cfg.t_max = o.tmax;
  cfg.rel_tol = o.rel_tol;
  cfg.tau = o.tau;
  return cfg;
}

// The learned stack when a model file is given, identity otherwise (data is
// then taken to be already embedded).
tenmet::ProjectionStack stack_or_identity(const Options& o,
                                          const tenmet::LabeledDataset& train) {
  if (o.model.empty()) return tenmet::ProjectionStack::identity(train.dims());
  return tenmet::load_model(o.model).stack;
}

int cmd_train(const Options& o) {
  const tenmet::LabeledDataset ds = tenmet::load_dataset(o.data);
  const auto result = tenmet::fit(ds, o.k1, o.k2, o.lambda, solver_config(o),
                                  o.outer_max, o.outer_tol, o.seed);

  nlohmann::json meta;
  meta["format"] = "tenmet-model/1";
  meta["k1"] = o.k1;
  meta["k2"] = o.k2;
  meta["lambda"] = o.lambda;
  meta["mu_bar"] = o.mu_bar;
  meta["mu_decay"] = o.mu_decay;
  meta["t_max"] = o.tmax;
  meta["rel_tol"] = o.rel_tol;
  meta["tau"] = o.tau;
  meta["outer_max"] = o.outer_max;
  meta["outer_tol"] = o.outer_tol;
  meta["seed"] = o.seed;
  meta["outer_iterations"] = result.report.outer_iterations;
  meta["ranks"] = result.report.final_ranks;
  meta["objective_history"] = result.report.objective_history;
  tenmet::save_model(result.stack, meta.dump(), o.out);

  const auto& hist = result.report.objective_history;
  std::cout << "seed=" << o.seed << "\n"
            << "lambda=" << num(o.lambda) << "\n"
            << "k1=" << o.k1 << "\n"
            << "k2=" << o.k2 << "\n"
            << "outer_iterations=" << result.report.outer_iterations << "\n"
            << "mode_solves=" << hist.size() << "\n"
            << "objective_initial=" << num(hist.front()) << "\n"
            << "objective_final=" << num(hist.back()) << "\n"
            << "ranks=" << join(result.report.final_ranks) << "\n"
            << "model=" << o.out << "\n";
  std::cerr << "trained on " << ds.size() << " samples in "
            << num(result.report.wall_time) << " s; ranks "
            << join(result.report.final_ranks) << "\n";
  return 0;
}

int cmd_transform(const Options& o) {
  const tenmet::LabeledDataset ds = tenmet::load_dataset(o.data);
  const auto model = tenmet::load_model(o.model);
  const tenmet::LabeledDataset embedded = tenmet::transform(model.stack, ds);
  tenmet::save_dataset(embedded, o.out);
  std::cout << "samples=" << embedded.size() << "\n"
            << "dims=" << join(embedded.dims()) << "\n"
            << "out=" << o.out << "\n";
  return 0;
}

int cmd_predict(const Options& o) {
  const tenmet::LabeledDataset train = tenmet::load_dataset(o.train_path);
  const tenmet::LabeledDataset test = tenmet::load_dataset(o.data);
  const tenmet::ProjectionStack stack = stack_or_identity(o, train);
  const tenmet::KnnModel knn = tenmet::make_knn(tenmet::transform(stack, train), o.k);
  const tenmet::LabeledDataset embedded = tenmet::transform(stack, test);

  std::cout << "index,label\n";
  for (Index i = 0; i < embedded.size(); ++i)
    std::cout << i << ","
              << tenmet::predict(knn, embedded.tensors[static_cast<std::size_t>(i)])
              << "\n";
  return 0;
}

int cmd_eval(const Options& o) {
  const tenmet::LabeledDataset train = tenmet::load_dataset(o.train_path);
  const tenmet::LabeledDataset test = tenmet::load_dataset(o.data);
  const tenmet::ProjectionStack stack = stack_or_identity(o, train);
  const double accuracy = tenmet::evaluate(stack, train, test, o.k);
  std::cout << "accuracy=" << num(accuracy) << "\n";
  return 0;
}

int cmd_xval(const Options& o) {
  const tenmet::LabeledDataset ds = tenmet::load_dataset(o.data);
  const tenmet::FoldPlan plan = tenmet::make_folds(ds, o.folds, o.seed);

  std::vector<double> accuracies;
  for (int fold = 0; fold < o.folds; ++fold) {
    const auto [train, test] = tenmet::split_by_fold(ds, plan, fold);
    const auto result = tenmet::fit(train, o.k1, o.k2, o.lambda, solver_config(o),
                                    o.outer_max, o.outer_tol, o.seed);
    const double acc = tenmet::evaluate(result.stack, train, test, o.k);
    accuracies.push_back(acc);
    std::cout << "fold=" << fold << " accuracy=" << num(acc)
              << " ranks=" << join(result.report.final_ranks) << "\n";
    std::cerr << "fold " << fold << ": accuracy " << num(acc) << "\n";
  }

  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  double var = 0.0;
  for (double a : accuracies) var += (a - mean) * (a - mean);
  var /= static_cast<double>(accuracies.size());

  std::cout << "seed=" << o.seed << "\n"
            << "folds=" << o.folds << "\n"
            << "mean_accuracy=" << num(mean) << "\n"
            << "std_accuracy=" << num(std::sqrt(var)) << "\n";
  return 0;
}

int cmd_gabor(const Options& o) {
  const tenmet::LabeledDataset ds = tenmet::load_dataset(o.data);
  tenmet::GaborBank bank;
  bank.scale_count = o.scales;
  bank.orientation_count = o.orients;
  bank.kernel_size = o.ksize;

  tenmet::LabeledDataset lifted;
  lifted.labels = ds.labels;
  lifted.class_count = ds.class_count;
  lifted.tensors.reserve(ds.tensors.size());
  for (const auto& sample : ds.tensors)
    lifted.tensors.push_back(tenmet::gabor_lift(sample, bank));
  tenmet::save_dataset(lifted, o.out);

  std::cout << "samples=" << lifted.size() << "\n"
            << "dims=" << join(lifted.dims()) << "\n"
            << "out=" << o.out << "\n";
  return 0;
}

int cmd_synth(const Options& o) {
  if (o.subdims.size() != o.dims.size()) {
    std::cerr << "error: --subdims must list one value per --dims entry\n";
    return 2;
  }
  for (std::size_t i = 0; i < o.dims.size(); ++i)
    if (o.subdims[i] < 1 || o.subdims[i] > o.dims[i]) {
      std::cerr << "error: --subdims entries must lie in [1, dims]\n";
      return 2;
    }

  const tenmet::LabeledDataset ds = tenmet::synth_clusters(
      o.classes, o.per_class, o.dims, o.subdims, o.noise, o.seed);
  tenmet::save_dataset(ds, o.out);

  std::cout << "seed=" << o.seed << "\n"
            << "classes=" << o.classes << "\n"
            << "per_class=" << o.per_class << "\n"
            << "dims=" << join(o.dims) << "\n"
            << "subdims=" << join(o.subdims) << "\n"
            << "noise=" << num(o.noise) << "\n"
            << "samples=" << ds.size() << "\n"
            << "out=" << o.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supervised low-rank tensor subspace learning"};
  app.require_subcommand(1);
  Options o;

  const auto unit_interval = CLI::Validator(
      [](std::string& s) -> std::string {
        const double v = std::stod(s);
        return (v > 0.0 && v < 1.0) ? "" : "value must lie strictly in (0, 1)";
      },
      "FLOAT in (0,1)");
  const auto odd_int = CLI::Validator(
      [](std::string& s) -> std::string {
        return (std::stoll(s) % 2 != 0) ? "" : "value must be odd";
      },
      "ODD INT");

  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mu-bar", o.mu_bar, "final shrink weight (0 = automatic)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--mu-decay", o.mu_decay, "continuation decay factor")
        ->check(unit_interval);
    cmd->add_option("--tmax", o.tmax, "inner iterations per continuation stage")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rel-tol", o.rel_tol, "inner relative-change stop")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", o.tau, "fixed gradient step (0 = automatic)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--outer-max", o.outer_max, "max alternating sweeps")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--outer-tol", o.outer_tol, "sweep-level relative stop")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_fit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--k1", o.k1, "within-class neighbors")->check(CLI::PositiveNumber);
    cmd->add_option("--k2", o.k2, "between-class neighbors")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", o.lambda, "pull-term weight")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "random seed (reproducibility)");
    add_solver_flags(cmd);
  };

  CLI::App* train = app.add_subcommand("train", "learn projections from a dataset");
  train->add_option("--data", o.data, "training dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  train->add_option("--out", o.out, "output model path (LMM1)")->required();
  add_fit_flags(train);

  CLI::App* transform = app.add_subcommand("transform", "project a dataset into the learned subspace");
  transform->add_option("--model", o.model, "model file (LMM1)")
      ->required()->check(CLI::ExistingFile);
  transform->add_option("--data", o.data, "input dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  transform->add_option("--out", o.out, "output dataset path")->required();

  CLI::App* predict = app.add_subcommand("predict", "label samples by nearest neighbors");
  predict->add_option("--model", o.model, "model file (omit if data is already embedded)")
      ->check(CLI::ExistingFile);
  predict->add_option("--train", o.train_path, "training dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  predict->add_option("--data", o.data, "query dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  predict->add_option("--k", o.k, "neighbor count")->check(CLI::PositiveNumber);

  CLI::App* eval = app.add_subcommand("eval", "score k-NN accuracy on a labeled test set");
  eval->add_option("--model", o.model, "model file (omit if data is already embedded)")
      ->check(CLI::ExistingFile);
  eval->add_option("--train", o.train_path, "training dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--data", o.data, "test dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--k", o.k, "neighbor count")->check(CLI::PositiveNumber);

  CLI::App* xval = app.add_subcommand("xval", "stratified k-fold cross-validation");
  xval->add_option("--data", o.data, "dataset (TDS1)")
      ->required()->check(CLI::ExistingFile);
  xval->add_option("--folds", o.folds, "fold count")->check(CLI::Range(2, 1000000));
  xval->add_option("--k", o.k, "neighbor count")->check(CLI::PositiveNumber);
  add_fit_flags(xval);

  CLI::App* gabor = app.add_subcommand("gabor", "lift 2D images to filter-response tensors");
  gabor->add_option("--data", o.data, "input dataset of 2D tensors")
      ->required()->check(CLI::ExistingFile);
  gabor->add_option("--out", o.out, "output dataset path")->required();
  gabor->add_option("--scales", o.scales, "scale count")->check(CLI::PositiveNumber);
  gabor->add_option("--orients", o.orients, "orientation count")->check(CLI::PositiveNumber);
  gabor->add_option("--ksize", o.ksize, "kernel size (odd)")
      ->check(CLI::PositiveNumber)->check(odd_int);

  CLI::App* synth = app.add_subcommand("synth", "generate clustered low-rank data");
  synth->add_option("--classes", o.classes, "class count")->check(CLI::PositiveNumber);
  synth->add_option("--per-class", o.per_class, "samples per class")
      ->check(CLI::PositiveNumber);
  synth->add_option("--dims", o.dims, "ambient shape, comma separated")
      ->required()->delimiter(',')->check(CLI::PositiveNumber);
  synth->add_option("--subdims", o.subdims, "latent subspace shape")
      ->required()->delimiter(',')->check(CLI::PositiveNumber);
  synth->add_option("--noise", o.noise, "noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", o.seed, "random seed");
  synth->add_option("--out", o.out, "output dataset path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(o);
    if (transform->parsed()) return cmd_transform(o);
    if (predict->parsed()) return cmd_predict(o);
    if (eval->parsed()) return cmd_eval(o);
    if (xval->parsed()) return cmd_xval(o);
    if (gabor->parsed()) return cmd_gabor(o);
    if (synth->parsed()) return cmd_synth(o);
  } catch (const tenmet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
