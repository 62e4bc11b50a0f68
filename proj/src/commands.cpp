#include "citecast/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "citecast/baselines.hpp"
#include "citecast/elastic_net.hpp"
#include "citecast/errors.hpp"
#include "citecast/figures.hpp"
#include "citecast/format.hpp"
#include "citecast/kernels.hpp"
#include "citecast/model_io.hpp"
#include "citecast/synthetic.hpp"

namespace citecast {

namespace {

std::string in_out(const RunConfig& config, const std::string& name) {
  return (std::filesystem::path(config.out) / name).string();
}

void write_resolved_config(const RunConfig& config) {
  ensure_directory(config.out);
  auto path = in_out(config, "resolved_config.txt");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << config.to_text();
}

Date parse_config_date(const std::string& key, const std::string& value) {
  try {
    return parse_date(value);
  } catch (const std::exception&) {
    throw ArgumentError("invalid date '" + value + "' for " + key + ": expected YYYY-MM-DD");
  }
}

NcReading parse_reading(const std::string& value) {
  if (value == "cited-and-citing") return NcReading::kCitedAndCitingInWindow;
  if (value == "citing") return NcReading::kCitingInWindow;
  throw ArgumentError("invalid nc_reading '" + value + "': expected cited-and-citing or citing");
}

struct Prepared {
  Corpus corpus;
  std::vector<CohortEntry> cohort;
  Dataset dataset;
};

Prepared prepare(const RunConfig& config) {
  auto options = dataset_options(config);
  Prepared p;
  p.corpus = load_corpus(config);
  p.cohort = select_cohort(p.corpus, options.cohort);
  if (p.cohort.size() < 2) {
    throw ArgumentError("cohort has " + std::to_string(p.cohort.size()) + " authors; at least 2 are needed");
  }
  p.dataset = build_dataset(p.corpus, p.cohort, options);
  return p;
}

}  // namespace

CohortSpec cohort_spec(const RunConfig& config) {
  CohortSpec spec;
  spec.cutoff = parse_config_date("cutoff", config.cutoff);
  spec.window_start = parse_config_date("window_start", config.window_start);
  spec.window_end = parse_config_date("window_end", config.window_end);
  spec.min_papers = config.min_papers;
  spec.max_papers = config.max_papers;
  spec.max_authors_per_paper = config.max_authors_per_paper;
  spec.validate();
  return spec;
}

DatasetOptions dataset_options(const RunConfig& config) {
  DatasetOptions options;
  options.cohort = cohort_spec(config);
  options.task = parse_task(config.task);
  options.horizons = config.horizons;
  options.nc_reading = parse_reading(config.nc_reading);
  options.disabled_channels = config.disabled_channels;
  if (config.include_topic_vectors == "true") {
    options.include_topic_vectors = true;
  } else if (config.include_topic_vectors == "false") {
    options.include_topic_vectors = false;
  } else if (config.include_topic_vectors != "auto") {
    throw ArgumentError("invalid include_topic_vectors '" + config.include_topic_vectors + "': expected auto, true or false");
  }
  options.include_broadness = config.include_broadness;
  if (!config.broadness.empty()) options.broadness = load_broadness(config.broadness);
  return options;
}

CrossValidationConfig cross_validation_config(const RunConfig& config) {
  CrossValidationConfig cv;
  cv.rounds = config.rounds;
  if (config.train_count < 0) throw ArgumentError("train_count must be nonnegative");
  cv.train_count = static_cast<std::size_t>(config.train_count);
  cv.network.per_paper_units = config.per_paper_units;
  cv.network.hidden_units = config.hidden_units;
  cv.network.output_units = config.horizons;
  cv.training.epochs = config.epochs;
  cv.training.batch_size = config.batch_size;
  cv.training.learning_rate = config.learning_rate;
  cv.training.beta1 = config.beta1;
  cv.training.beta2 = config.beta2;
  cv.training.epsilon = config.epsilon;
  cv.predictors.clear();
  for (const auto& name : config.predictors) cv.predictors.push_back(parse_predictor(name));
  cv.elastic_net.alpha = config.enet_alpha;
  cv.elastic_net.cv_folds = config.enet_folds;
  cv.master_seed = config.seed;
  if (config.jobs < 1) throw ArgumentError("jobs must be >= 1");
  cv.validate();
  return cv;
}

Corpus load_corpus(const RunConfig& config) {
  for (const auto* path : {&config.papers, &config.citations, &config.jif}) {
    if (!std::filesystem::exists(*path)) throw IoError("missing corpus file '" + *path + "'");
  }
  if (!config.translation.empty() && !std::filesystem::exists(config.translation)) {
    throw IoError("missing translation table '" + config.translation + "'");
  }
  return load_corpus(config.papers, config.citations, config.jif, config.translation);
}

void cmd_synth(const RunConfig& config, std::ostream& out) {
  if (config.synth_authors < 1) throw ArgumentError("synth_authors must be >= 1");
  if (config.synth_papers < 0) throw ArgumentError("synth_papers must be >= 0");
  auto corpus = generate_synthetic_corpus(static_cast<std::size_t>(config.synth_authors),
                                          static_cast<std::size_t>(config.synth_papers), config.seed);
  write_resolved_config(config);
  write_papers(in_out(config, "papers.jsonl"), corpus.papers());
  write_citations(in_out(config, "citations.tsv"), corpus);
  write_jif_table(in_out(config, "jif.csv"), corpus.jif_table());
  out << "wrote " << corpus.paper_count() << " papers, " << corpus.citations().size() << " citations, "
      << corpus.author_count() << " authors to " << config.out << '\n';
}

void cmd_cohort(const RunConfig& config, std::ostream& out) {
  auto spec = cohort_spec(config);
  auto corpus = load_corpus(config);
  auto cohort = select_cohort(corpus, spec);
  write_resolved_config(config);
  auto path = in_out(config, "cohort.csv");
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw IoError("cannot write '" + path + "'");
  csv << "author_id,papers_at_cutoff,career_papers,first_paper_date,h0\n";
  for (const auto& e : cohort) {
    csv << e.author_id << ',' << e.papers.size() << ',' << e.career_papers.size() << ','
        << format_date(e.first_paper_date) << ',' << h_index_as_of(corpus, e.papers, spec.cutoff) << '\n';
  }
  const auto& d = corpus.diagnostics();
  out << "cohort: " << cohort.size() << " of " << corpus.author_count() << " authors\n";
  out << "dropped edges: " << d.dangling_edges << " dangling, " << d.self_citations << " self, " << d.duplicate_edges
      << " duplicate\n";
}

void cmd_train(const RunConfig& config, std::ostream& out) {
  auto cv = cross_validation_config(config);
  auto p = prepare(config);
  const auto& ds = p.dataset;

  std::vector<AuthorFeatures> raw;
  std::vector<TrainingExample> examples;
  for (const auto& a : ds.authors) raw.push_back(a.features);
  auto stats = fit_normalizer(raw, ds.manifest);
  for (const auto& a : ds.authors) examples.push_back({apply_normalizer(a.features, stats), encode_targets(a.target)});

  NetworkConfig net = cv.network;
  net.seed = config.seed;
  TrainingConfig training = cv.training;
  training.shuffle_seed = config.seed + 1;
  auto result = train(examples, net, training);

  write_resolved_config(config);
  ModelBundle model;
  model.task = ds.task;
  model.cutoff = ds.cutoff;
  model.horizons = ds.horizons;
  model.broadness_source = ds.broadness_source;
  model.network = net;
  model.features = ds.feature_config;
  model.manifest = ds.manifest;
  model.normalizer = stats;
  model.params = result.params;
  save_model(config.model_path(), model);

  auto log_path = in_out(config, "train_log.csv");
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw IoError("cannot write '" + log_path + "'");
  log << "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_trace.size(); ++e) log << e + 1 << ',' << format_number(result.loss_trace[e]) << '\n';
  write_channel_manifest(in_out(config, "channel_manifest.csv"), ds.manifest, ds.feature_config);
  for (const auto& name : stats.degenerate) out << "warning: channel '" << name << "' has zero variance; left unnormalized\n";
  out << "trained on " << ds.authors.size() << " authors, " << ds.manifest.size() << " channels, final loss "
      << format_number(result.loss_trace.back()) << "\nmodel: " << config.model_path() << '\n';
}

std::vector<double> cmd_predict(const RunConfig& config, std::ostream& out) {
  if (config.author.empty()) throw ArgumentError("predict needs an author (set author=<id>)");
  auto model = load_model(config.model_path());
  auto spec = cohort_spec(config);
  auto corpus = load_corpus(config);
  auto a = corpus.require_author(config.author);

  CohortEntry entry;
  entry.author = a;
  entry.author_id = corpus.author_id(a);
  for (auto p : corpus.author_papers(a)) {
    const auto& paper = corpus.paper(p);
    if (paper.author_names.size() > static_cast<std::size_t>(spec.max_authors_per_paper)) continue;
    entry.career_papers.push_back(p);
    if (paper.date <= model.cutoff) entry.papers.push_back(p);
  }
  if (entry.papers.empty()) throw ArgumentError("author '" + config.author + "' has no papers before the cutoff");
  entry.first_paper_date = corpus.paper(entry.career_papers.front()).date;

  auto context = FeatureContext::prepare(corpus, model.cutoff, spec.max_authors_per_paper);
  if (model.broadness_source == "sidecar") {
    if (config.broadness.empty()) throw ArgumentError("model was trained with a broadness file; set broadness=<path>");
    context.broadness = load_broadness(config.broadness);
  }
  auto features = build_features(corpus, entry, context, model.features);
  auto series = predict(model.params, features, model.normalizer);
  out << "horizon,prediction\n";
  for (std::size_t n = 0; n < series.size(); ++n) out << n + 1 << ',' << format_number(series[n]) << '\n';
  return series;
}

EvaluationReport cmd_evaluate(const RunConfig& config, std::ostream& out) {
  auto cv = cross_validation_config(config);
  auto p = prepare(config);
  auto report = run_cross_validation(p.dataset, cv);
  write_resolved_config(config);
  emit_figures(report, p.dataset, config.out);
  for (const auto& pr : report.predictors) {
    const auto& last = pr.r2_summary.back();
    out << predictor_name(pr.kind) << ": R^2(n=" << report.horizons << ") = " << format_number(last.mean) << " +- "
        << format_number(last.std) << ", r = " << format_number(pr.r_summary.mean) << " +- "
        << format_number(pr.r_summary.std) << '\n';
  }
  return report;
}

void cmd_ablate(const RunConfig& config, std::ostream& out) {
  auto cv = cross_validation_config(config);
  auto p = prepare(config);
  std::vector<std::string> removals = config.ablate;
  if (removals.empty()) {
    for (const auto& ch : p.dataset.manifest) {
      if (ch.group != "indicator" && std::find(removals.begin(), removals.end(), ch.group) == removals.end()) {
        removals.push_back(ch.group);
      }
    }
    if (broadness_enabled(p.dataset.feature_config)) removals.push_back("broadness");
  }
  for (const auto& name : removals) {
    std::string one[] = {name};
    (void)p.dataset.without(one);
  }
  std::vector<int> horizons;
  for (int h : {1, 5, 10}) {
    if (h <= p.dataset.horizons) horizons.push_back(h);
  }
  auto report = run_ablation(p.dataset, cv, removals, nullptr, horizons);
  write_resolved_config(config);
  emit_ablation_figures(report, config.out);
  for (const auto& e : report.entries) {
    out << e.removed << ':';
    for (std::size_t i = 0; i < e.horizons.size(); ++i) {
      out << " n=" << e.horizons[i] << ' ' << format_number(e.ratio_summary[i].mean) << " +- "
          << format_number(e.ratio_summary[i].std);
    }
    out << '\n';
  }
}

void cmd_epoch_study(const RunConfig& config, std::ostream& out) {
  auto cv = cross_validation_config(config);
  auto p = prepare(config);
  auto report = run_epoch_study(p.dataset, cv, config.epoch_checkpoints);
  write_resolved_config(config);
  emit_epoch_figures(report, config.out);
  for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
    const auto& last = report.averaged[c].back();
    out << report.checkpoints[c] << " epochs: R^2(n=" << report.averaged[c].size() << ") = "
        << format_number(last.mean) << " +- " << format_number(last.std) << '\n';
  }
}

void cmd_hirsch_grid(const RunConfig& config, std::ostream& out) {
  auto spec = cohort_spec(config);
  auto reading = parse_reading(config.nc_reading);
  auto corpus = load_corpus(config);
  auto cohort = select_cohort(corpus, spec);
  auto grid = hirsch_grid(corpus, cohort, config.t1_years, config.t2_years, reading);
  write_resolved_config(config);
  emit_hirsch_grid(grid, config.out);
  for (std::size_t a = 0; a < 5; ++a) {
    out << grid.names[a];
    for (std::size_t b = 0; b < 5; ++b) out << ' ' << format_number(grid.correlations(a, b));
    out << '\n';
  }
}

void cmd_baseline(const RunConfig& config, std::ostream& out) {
  auto cv = cross_validation_config(config);
  auto p = prepare(config);
  const auto& ds = p.dataset;
  std::vector<int> h0;
  std::vector<std::vector<double>> targets;
  Matrix x(ds.authors.size(), ds.authors.front().acuna.size());
  Matrix y(ds.authors.size(), static_cast<std::size_t>(ds.horizons));
  for (std::size_t i = 0; i < ds.authors.size(); ++i) {
    const auto& a = ds.authors[i];
    h0.push_back(a.h0);
    targets.push_back(a.target);
    std::copy(a.acuna.begin(), a.acuna.end(), x.row(i).begin());
    std::copy(a.target.begin(), a.target.end(), y.row(i).begin());
  }
  auto naive = fit_naive(h0, targets);
  ElasticNetOptions options = cv.elastic_net;
  options.fold_seed = config.seed;
  auto enet = fit_elastic_net(x, y, options);

  write_resolved_config(config);
  write_naive_table_csv(in_out(config, "naive_table.csv"), naive);
  auto path = in_out(config, "elastic_net.csv");
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw IoError("cannot write '" + path + "'");
  csv << "horizon,lambda,intercept";
  for (const auto& name : acuna_feature_names()) csv << ',' << name;
  csv << '\n';
  for (std::size_t h = 0; h < enet.horizons.size(); ++h) {
    const auto& fit = enet.horizons[h];
    csv << h + 1 << ',' << format_number(fit.lambda) << ',' << format_number(fit.intercept);
    for (double c : fit.coefficients) csv << ',' << format_number(c);
    csv << '\n';
  }
  out << "naive table: " << naive.table().size() << " h0 values; elastic net fitted on " << ds.authors.size()
      << " authors\n";
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const UnknownEntityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnknownEntity;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (...) {
    err << "internal error: unknown exception\n";
    return kExitInternal;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Citation impact forecasting", "citecast"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "key = value config file (default: $CITECAST_CONFIG)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--jobs", jobs, "worker threads (default 1)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("-D,--set", overrides, "override a config key: -D key=value");

  using Command = std::function<void(const RunConfig&)>;
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command run) {
    commands.emplace_back(app.add_subcommand(name, help), std::move(run));
    return commands.back().first;
  };
  add("synth", "write a synthetic corpus", [&](const RunConfig& c) { cmd_synth(c, out); });
  add("cohort", "select the cohort and list it", [&](const RunConfig& c) { cmd_cohort(c, out); });
  add("train", "train a network on the whole cohort", [&](const RunConfig& c) { cmd_train(c, out); });
  std::string author;
  add("predict", "forecast one author with a trained model", [&](const RunConfig& c) { cmd_predict(c, out); })
      ->add_option("--author", author, "author id, e.g. smith_j");
  add("evaluate", "Monte Carlo cross-validation of all predictors",
      [&](const RunConfig& c) { cmd_evaluate(c, out); });
  std::vector<std::string> channels;
  add("ablate", "retrain with inputs removed one at a time", [&](const RunConfig& c) { cmd_ablate(c, out); })
      ->add_option("--channels", channels, "channels or groups to remove")
      ->delimiter(',');
  add("epoch-study", "compare training lengths", [&](const RunConfig& c) { cmd_epoch_study(c, out); });
  add("hirsch-grid", "correlations between early and late indicators",
      [&](const RunConfig& c) { cmd_hirsch_grid(c, out); });
  add("baseline", "fit the naive and elastic-net baselines", [&](const RunConfig& c) { cmd_baseline(c, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    RunConfig config;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') config_path = env;
    }
    if (!config_path.empty()) config.apply_file(config_path);
    for (const auto& o : overrides) {
      auto [key, value] = split_assignment(o);
      config.set(key, value);
    }
    if (seed) config.seed = *seed;
    if (jobs) config.jobs = *jobs;
    if (out_dir) config.out = *out_dir;
    if (!author.empty()) config.author = author;
    if (!channels.empty()) config.ablate = channels;
    if (config.jobs < 1) throw ArgumentError("jobs must be >= 1");
    kernels::set_thread_count(config.jobs);
    for (const auto& [sub, run] : commands) {
      if (sub->parsed()) run(config);
    }
    return kExitOk;
  } catch (...) {
    return report_exception(err);
  }
}

}  // namespace citecast
