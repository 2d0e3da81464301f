#include "eagle/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "eagle/datagen.hpp"

namespace eagle::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::array<double, 3> kSplitRatios{0.8, 0.1, 0.1};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json shape(const Matrix& m) { return json::array({m.rows(), m.cols()}); }

template <class T>
T get_as(const json& v, const char* key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config: bad value for '") + key + "'");
  }
}

void apply_k(TrainConfig& cfg, const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() != "inf") throw InputError("config: k must be a positive integer or \"inf\"");
    cfg.exact_propagation = true;
    return;
  }
  cfg.k = get_as<Index>(v, "k");
}

Index parse_k(const std::string& s, TrainConfig& cfg) {
  if (s == "inf") {
    cfg.exact_propagation = true;
    return cfg.k;
  }
  std::size_t used = 0;
  long long k = 0;
  try {
    k = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError("k must be a positive integer or inf, got '" + s + "'");
  cfg.exact_propagation = false;
  cfg.k = k;
  return k;
}

double parse_real(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError(what + " must be a number, got '" + s + "'");
  return v;
}

void apply_method(TrainConfig& cfg, const std::string& method) {
  if (method == "ffp") {
    cfg.mode = Mode::Ffp;
  } else if (method == "fc") {
    cfg.mode = Mode::Fc;
  } else if (method.rfind("dvffp", 0) == 0) {
    cfg.mode = Mode::DvFfp;
    if (method.size() > 5) {
      if (method[5] != '-') throw InputError("unknown method '" + method + "'");
      cfg.combinator = parse_combinator(method.substr(6));
    }
  } else {
    throw InputError("unknown method '" + method + "'");
  }
}

DataSplit split_for(const Eabg& g, const TrainConfig& cfg) { return make_split(g, kSplitRatios, cfg.seed); }

const std::vector<Index>& partition_rows(const DataSplit& s, const std::string& subset) {
  if (subset == "train") return s.train_idx;
  if (subset == "val") return s.val_idx;
  if (subset == "test") return s.test_idx;
  throw InputError("subset must be train, val or test, got '" + subset + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw InputError("write to " + path.string() + " failed");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

TrainConfig config_from_json(const json& j, TrainConfig cfg) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    const char* k = key.c_str();
    if (key == "alpha") cfg.alpha = get_as<double>(v, k);
    else if (key == "beta") cfg.beta = get_as<double>(v, k);
    else if (key == "gamma") cfg.gamma = get_as<double>(v, k);
    else if (key == "k") apply_k(cfg, v);
    else if (key == "hidden") cfg.hidden = get_as<Index>(v, k);
    else if (key == "dropout") cfg.dropout = get_as<double>(v, k);
    else if (key == "learning_rate") cfg.learning_rate = get_as<double>(v, k);
    else if (key == "max_epochs") cfg.max_epochs = get_as<Index>(v, k);
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, k);
    else if (key == "combinator") cfg.combinator = parse_combinator(get_as<std::string>(v, k));
    else if (key == "mode") cfg.mode = parse_mode(get_as<std::string>(v, k));
    else if (key == "exact_propagation") cfg.exact_propagation = get_as<bool>(v, k);
    else if (key == "oversample") cfg.oversample = get_as<Index>(v, k);
    else if (key == "power_iters") cfg.power_iters = get_as<Index>(v, k);
    else if (key == "schema_version") continue;
    else throw InputError("config: unknown key '" + key + "'");
  }
  return cfg;
}

json config_to_json(const TrainConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"gamma", cfg.gamma},
          {"k", cfg.k},
          {"exact_propagation", cfg.exact_propagation},
          {"hidden", cfg.hidden},
          {"dropout", cfg.dropout},
          {"learning_rate", cfg.learning_rate},
          {"max_epochs", cfg.max_epochs},
          {"seed", cfg.seed},
          {"combinator", to_string(cfg.combinator)},
          {"mode", to_string(cfg.mode)},
          {"oversample", cfg.oversample},
          {"power_iters", cfg.power_iters}};
}

TrainConfig load_config(const std::optional<fs::path>& path) {
  if (!path) return {};
  return config_from_json(read_json(*path));
}

json report_to_json(const SpectralReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"sigma2", number(r.sigma2)},
          {"sigma2_sq", number(r.sigma2_sq)},
          {"inv_gap", number(r.inv_gap)},
          {"mix_lower_bound", number(r.mix_lower_bound)},
          {"sigma_k", number(r.sigma_k)},
          {"theorem1_bound", number(r.theorem1_bound)},
          {"k", r.k},
          {"alpha", r.alpha},
          {"beta", r.beta},
          {"num_edges", r.num_edges},
          {"duplicate_pairs", r.duplicate_pairs},
          {"svd_converged", r.svd_converged}};
}

json metrics_to_json(const MetricReport& r, const std::vector<std::string>& class_names) {
  json per = json::array();
  for (Index c = 0; c < r.per_class_ap.size(); ++c) {
    const std::string name = c < static_cast<Index>(class_names.size()) ? class_names[c] : std::to_string(c);
    per.push_back({{"class", name}, {"ap", number(r.per_class_ap[c])}, {"auc", number(r.per_class_auc[c])}});
  }
  return {{"schema_version", kSchemaVersion},
          {"ap", number(r.ap)},
          {"auc", number(r.auc)},
          {"per_class", per},
          {"skipped_classes", r.skipped_classes}};
}

Dataset cmd_ingest(const fs::path& edges, const fs::path& attrs, const std::optional<fs::path>& labels,
                   const fs::path& out) {
  Dataset ds = io::ingest(edges, attrs, labels);
  io::write_bundle(out, ds);
  return ds;
}

Matrix cmd_embed(const Dataset& ds, const TrainConfig& cfg, const fs::path& out) {
  const Eabg& g = ds.graph;
  SvdCache cache(g);
  const PropagationPlan plan = make_plan(cache, cfg);
  Matrix z;
  switch (cfg.mode) {
    case Mode::Ffp: z = plan.main->apply(g.attrs); break;
    case Mode::DvFfp:
      z = combine(cfg.gamma * plan.u_view->apply(g.attrs), (1.0 - cfg.gamma) * plan.v_view->apply(g.attrs),
                  cfg.combinator);
      break;
    case Mode::Fc: z = g.attrs; break;
  }
  io::write_matrix(out, z);
  return z;
}

json cmd_train(const Dataset& ds, const TrainConfig& cfg, const fs::path& ckpt_dir) {
  const Eabg& g = ds.graph;
  if (!g.labels) throw InputError("train: bundle has no labels");
  const DataSplit split = split_for(g, cfg);
  SvdCache cache(g);
  LabelAccess access(*g.labels, split);
  const TrainResult res = train(g, split, cfg, &cache, &access);

  // Test labels are read only here, after model selection.
  const PropagationPlan plan = make_plan(cache, cfg);
  const Matrix probs = predict_all(plan, res.params, g.attrs);
  const MetricReport test = evaluate(probs, access.labels(Partition::Test), access.rows(Partition::Test));
  const MetricReport val = evaluate(probs, access.labels(Partition::Val), access.rows(Partition::Val));

  fs::create_directories(ckpt_dir);
  io::write_matrix(ckpt_dir / "theta.bin", res.params.theta);
  io::write_matrix(ckpt_dir / "omega.bin", res.params.omega);
  json shapes = {{"theta", shape(res.params.theta)}, {"omega", shape(res.params.omega)}};
  if (res.params.theta_v.size() > 0) {
    io::write_matrix(ckpt_dir / "theta_v.bin", res.params.theta_v);
    shapes["theta_v"] = shape(res.params.theta_v);
  }
  json history = json::array();
  for (const auto& h : res.history)
    history.push_back({{"epoch", h.epoch}, {"train_loss", number(h.train_loss)}, {"val_ap", number(h.val_ap)},
                       {"val_auc", number(h.val_auc)}});
  json metrics = {{"schema_version", kSchemaVersion},
                  {"best_epoch", res.best_epoch},
                  {"val", metrics_to_json(val, ds.class_names)},
                  {"test", metrics_to_json(test, ds.class_names)}};
  const json manifest = {{"schema_version", kSchemaVersion},
                         {"config", config_to_json(cfg)},
                         {"split", {{"ratios", kSplitRatios}, {"seed", cfg.seed}}},
                         {"num_edges", g.num_edges()},
                         {"dim", g.dim()},
                         {"num_classes", g.num_classes()},
                         {"shapes", shapes},
                         {"best_epoch", res.best_epoch},
                         {"best_val_auc", number(res.best_val_auc)},
                         {"history", history},
                         {"metrics", metrics}};
  write_text(ckpt_dir / "manifest.json", manifest.dump(2) + "\n");
  return metrics;
}

json cmd_eval(const Dataset& ds, const fs::path& ckpt_dir, const std::string& subset) {
  const Eabg& g = ds.graph;
  if (!g.labels) throw InputError("eval: bundle has no labels");
  const json manifest = read_json(ckpt_dir / "manifest.json");
  if (!manifest.contains("config")) throw InputError("eval: manifest has no config");
  const TrainConfig cfg = config_from_json(manifest["config"]);
  if (manifest.value("num_edges", Index{-1}) != g.num_edges() || manifest.value("dim", Index{-1}) != g.dim() ||
      manifest.value("num_classes", Index{-1}) != g.num_classes())
    throw DimensionError("eval: checkpoint was trained on a graph of a different shape");

  SvdCache cache(g);
  const PropagationPlan plan = make_plan(cache, cfg);
  ModelParams params;
  params.theta = io::read_matrix(ckpt_dir / "theta.bin");
  params.omega = io::read_matrix(ckpt_dir / "omega.bin");
  if (cfg.mode == Mode::DvFfp) params.theta_v = io::read_matrix(ckpt_dir / "theta_v.bin");
  const Index width = plan.output_width(params.theta.cols());
  require_dims(params.theta.rows() == g.dim() && params.omega.rows() == width && params.omega.cols() == g.num_classes() &&
                   (cfg.mode != Mode::DvFfp || (params.theta_v.rows() == g.dim() &&
                                                params.theta_v.cols() == params.theta.cols())),
               "eval: checkpoint weight shapes do not match the config and graph");

  const DataSplit split = split_for(g, cfg);
  const MetricReport r = evaluate(predict_all(plan, params, g.attrs), *g.labels, partition_rows(split, subset));
  json out = metrics_to_json(r, ds.class_names);
  out["subset"] = subset;
  return out;
}

json cmd_diagnose(const Dataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  const Index k = std::min<Index>(cfg.k, ds.graph.num_edges());
  return report_to_json(spectral_report(ds.graph, cfg.alpha, cfg.beta, k, cfg.svd_options()));
}

SweepSpec sweep_from_json(const json& j) {
  if (!j.is_object()) throw InputError("sweep spec must be a JSON object");
  SweepSpec s;
  try {
    if (j.contains("param")) s.param = j["param"].get<std::string>();
    if (j.contains("values"))
      for (const auto& v : j["values"]) s.values.push_back(v.is_string() ? v.get<std::string>() : fmt(v.get<double>()));
    if (j.contains("methods")) s.methods = j["methods"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InputError(std::string("sweep spec: ") + e.what());
  }
  return s;
}

std::string cmd_sweep(const Dataset& ds, const TrainConfig& base, const SweepSpec& spec) {
  const Eabg& g = ds.graph;
  if (spec.param != "alpha" && spec.param != "beta" && spec.param != "gamma" && spec.param != "k")
    throw InputError("sweep: param must be alpha, beta, gamma or k, got '" + spec.param + "'");
  std::ostringstream csv;
  csv << kSweepHeader << "\n";
  if (spec.values.empty()) return csv.str();
  if (!g.labels) throw InputError("sweep: bundle has no labels");

  // Validate every point before spending time on training.
  std::vector<std::vector<TrainConfig>> points;
  for (const auto& method : spec.methods) {
    auto& row = points.emplace_back();
    for (const auto& value : spec.values) {
      TrainConfig cfg = base;
      apply_method(cfg, method);
      if (spec.param == "k") parse_k(value, cfg);
      else if (spec.param == "alpha") cfg.alpha = parse_real(value, "alpha");
      else if (spec.param == "beta") cfg.beta = parse_real(value, "beta");
      else cfg.gamma = parse_real(value, "gamma");
      cfg.validate();
      row.push_back(cfg);
    }
  }

  const DataSplit split = split_for(g, base);
  SvdCache cache(g);
  for (std::size_t m = 0; m < spec.methods.size(); ++m) {
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      const TrainConfig& cfg = points[m][i];
      LabelAccess access(*g.labels, split);
      const TrainResult res = train(g, split, cfg, &cache, &access);
      const PropagationPlan plan = make_plan(cache, cfg);
      const MetricReport r = evaluate(predict_all(plan, res.params, g.attrs), access.labels(Partition::Test),
                                      access.rows(Partition::Test));
      csv << spec.methods[m] << "," << spec.param << "," << spec.values[i] << "," << fmt(r.ap) << "," << fmt(r.auc)
          << "\n";
    }
  }
  return csv.str();
}

namespace {

struct ConfigFlags {
  std::optional<std::string> config;
  std::optional<double> alpha, beta, gamma, dropout, lr;
  std::optional<std::string> k, combinator, mode;
  std::optional<Index> hidden, epochs, oversample, power_iters;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--config", config, "JSON config file");
    app->add_option("--alpha", alpha, "Propagation decay");
    app->add_option("--beta", beta, "U-side weight of the combined view");
    app->add_option("--gamma", gamma, "U-view weight in dvffp");
    app->add_option("--k", k, "SVD rank, or inf for exact propagation");
    app->add_option("--hidden", hidden, "Hidden width");
    app->add_option("--dropout", dropout, "Dropout rate");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--combinator", combinator, "sum, max or concat");
    app->add_option("--mode", mode, "ffp, dvffp or fc");
    app->add_option("--oversample", oversample, "SVD oversampling");
    app->add_option("--power-iters", power_iters, "SVD power iterations");
  }

  TrainConfig resolve() const {
    TrainConfig cfg = config ? load_config(fs::path(*config)) : TrainConfig{};
    if (alpha) cfg.alpha = *alpha;
    if (beta) cfg.beta = *beta;
    if (gamma) cfg.gamma = *gamma;
    if (k) parse_k(*k, cfg);
    if (hidden) cfg.hidden = *hidden;
    if (dropout) cfg.dropout = *dropout;
    if (lr) cfg.learning_rate = *lr;
    if (epochs) cfg.max_epochs = *epochs;
    if (seed) cfg.seed = *seed;
    if (combinator) cfg.combinator = parse_combinator(*combinator);
    if (mode) cfg.mode = parse_mode(*mode);
    if (oversample) cfg.oversample = *oversample;
    if (power_iters) cfg.power_iters = *power_iters;
    cfg.validate();
    return cfg;
  }
};

void emit(const std::string& text, const std::optional<std::string>& out) {
  if (out) write_text(*out, text);
  else std::cout << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Edge representation learning on edge-attributed bipartite graphs"};
  app.require_subcommand(1);

  std::string edges, attrs, bundle, out_path, ckpt, subset = "test";
  std::optional<std::string> labels, out_opt, sweep_file, param, values, methods;
  ConfigFlags flags;
  SyntheticSpec synth;
  std::optional<Index> bfs_edges;

  auto* ingest = app.add_subcommand("ingest", "Validate edge/attribute/label files into a bundle");
  ingest->add_option("--edges", edges, "Edge TSV")->required();
  ingest->add_option("--attrs", attrs, "Attribute CSV or EABGZ1 file")->required();
  ingest->add_option("--labels", labels, "Label file, ';'-separated class names per line");
  ingest->add_option("--out", out_path, "Bundle path")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic labelled bundle");
  synth_cmd->add_option("--num-u", synth.num_u);
  synth_cmd->add_option("--num-v", synth.num_v);
  synth_cmd->add_option("--num-edges", synth.num_edges);
  synth_cmd->add_option("--dim", synth.dim);
  synth_cmd->add_option("--classes", synth.num_classes);
  synth_cmd->add_option("--signal", synth.structure_signal);
  synth_cmd->add_option("--noise", synth.noise);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--bfs-edges", bfs_edges, "Keep a BFS sample of this many edges");
  synth_cmd->add_option("--out", out_path, "Bundle path")->required();

  auto* embed = app.add_subcommand("embed", "Propagate raw attributes into edge embeddings");
  embed->add_option("--bundle", bundle)->required();
  embed->add_option("--out", out_path, "EABGZ1 output")->required();
  flags.add(embed);

  auto* train_cmd = app.add_subcommand("train", "Train and write a checkpoint directory");
  train_cmd->add_option("--bundle", bundle)->required();
  train_cmd->add_option("--checkpoint", ckpt, "Checkpoint directory")->required();
  train_cmd->add_option("--out", out_opt, "Metrics JSON path (default stdout)");
  flags.add(train_cmd);

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--bundle", bundle)->required();
  eval->add_option("--checkpoint", ckpt)->required();
  eval->add_option("--subset", subset, "train, val or test");
  eval->add_option("--out", out_opt);

  auto* diag = app.add_subcommand("diagnose", "Spectral report of the edge transition matrix");
  diag->add_option("--bundle", bundle)->required();
  diag->add_option("--out", out_opt);
  flags.add(diag);

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  sweep->add_option("--bundle", bundle)->required();
  sweep->add_option("--sweep", sweep_file, "JSON {param, values, methods}");
  sweep->add_option("--param", param, "alpha, beta, gamma or k");
  sweep->add_option("--values", values, "Comma-separated values");
  sweep->add_option("--methods", methods, "Comma-separated: ffp, fc, dvffp-sum, dvffp-max, dvffp-concat");
  sweep->add_option("--out", out_opt, "CSV path (default stdout)");
  flags.add(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ingest) {
      const Dataset ds = cmd_ingest(edges, attrs, labels ? std::optional<fs::path>(*labels) : std::nullopt, out_path);
      std::cout << json{{"schema_version", kSchemaVersion},
                        {"num_u", ds.graph.num_u},
                        {"num_v", ds.graph.num_v},
                        {"num_edges", ds.graph.num_edges()},
                        {"dim", ds.graph.dim()},
                        {"num_classes", ds.graph.num_classes()}}
                       .dump(2)
                << "\n";
    } else if (*synth_cmd) {
      Dataset ds;
      ds.graph = gen_synthetic(synth);
      if (bfs_edges) ds.graph = bfs_sample(ds.graph, std::nullopt, *bfs_edges, synth.seed).graph;
      for (Index i = 0; i < ds.graph.num_u; ++i) ds.u_names.push_back("u" + std::to_string(i));
      for (Index i = 0; i < ds.graph.num_v; ++i) ds.v_names.push_back("v" + std::to_string(i));
      for (Index c = 0; c < ds.graph.num_classes(); ++c) ds.class_names.push_back("c" + std::to_string(c));
      io::write_bundle(out_path, ds);
    } else if (*embed) {
      cmd_embed(io::read_bundle(bundle), flags.resolve(), out_path);
    } else if (*train_cmd) {
      emit(cmd_train(io::read_bundle(bundle), flags.resolve(), ckpt).dump(2) + "\n", out_opt);
    } else if (*eval) {
      emit(cmd_eval(io::read_bundle(bundle), ckpt, subset).dump(2) + "\n", out_opt);
    } else if (*diag) {
      emit(cmd_diagnose(io::read_bundle(bundle), flags.resolve()).dump(2) + "\n", out_opt);
    } else if (*sweep) {
      SweepSpec spec = sweep_file ? sweep_from_json(read_json(*sweep_file)) : SweepSpec{};
      if (param) spec.param = *param;
      if (values) spec.values = split_list(*values);
      if (methods) spec.methods = split_list(*methods);
      emit(cmd_sweep(io::read_bundle(bundle), flags.resolve(), spec), out_opt);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateGraphError& e) {
    std::cerr << "degenerate graph: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace eagle::cli
