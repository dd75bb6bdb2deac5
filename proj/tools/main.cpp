// videostory: joint text-video embedding learning, ranking and evaluation.
//
// All randomness is seeded through --seed; re-running any subcommand with the
// same config produces byte-identical outputs.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "videostory/baselines.hpp"
#include "videostory/corpus.hpp"
#include "videostory/embedding.hpp"
#include "videostory/errors.hpp"
#include "videostory/eval.hpp"
#include "videostory/fusion.hpp"
#include "videostory/io.hpp"
#include "videostory/model_io.hpp"
#include "videostory/oracle.hpp"
#include "videostory/zeroshot.hpp"

namespace fs = std::filesystem;
using namespace videostory;

namespace {

struct FeatureArg {
  std::string name;
  fs::path path;
};

std::vector<FeatureArg> parse_feature_args(const std::vector<std::string>& raw) {
  std::vector<FeatureArg> out;
  for (const auto& spec : raw) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      out.push_back({fs::path(spec).stem().string(), spec});
    } else {
      out.push_back({spec.substr(0, eq), spec.substr(eq + 1)});
    }
  }
  return out;
}

std::vector<FeatureMatrix> load_feature_set(const std::vector<std::string>& raw) {
  std::vector<FeatureMatrix> out;
  for (const auto& arg : parse_feature_args(raw))
    out.push_back(load_features(arg.path, arg.name));
  return out;
}

Corpus load_corpus(const fs::path& vocab_path, const fs::path& terms_path,
                   const std::vector<std::string>& feature_args) {
  Corpus corpus;
  corpus.vocabulary = load_vocabulary(vocab_path);
  auto [tm, ids] = load_term_matrix(terms_path, corpus.vocabulary.size());
  corpus.term_matrix = std::move(tm);
  corpus.video_ids = std::move(ids);
  corpus.features = load_feature_set(feature_args);
  corpus.validate();
  return corpus;
}

// Features-only corpus (no captions): empty term columns, shared ordering.
Corpus feature_corpus(const TermVocabulary& vocab,
                      const std::vector<std::string>& feature_args) {
  Corpus corpus;
  corpus.vocabulary = vocab;
  corpus.features = load_feature_set(feature_args);
  if (corpus.features.empty())
    throw Error("EmptyCorpus", "at least one --feature is required");
  corpus.video_ids = corpus.features[0].video_ids;
  corpus.term_matrix.term_count = vocab.size();
  corpus.term_matrix.columns.assign(corpus.video_ids.size(), {});
  corpus.validate();
  return corpus;
}

struct HyperFlags {
  std::size_t k = 2048;
  double lambda_a = 1e-3, lambda_s = 1e-3, lambda_w = 1e-3;
  double eta = 0.01;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  std::string schedule = "constant";
  double decay = 0.0;

  Hyperparams to_hyperparams() const {
    Hyperparams hp;
    hp.k = k;
    hp.lambda_a = lambda_a;
    hp.lambda_s = lambda_s;
    hp.lambda_w = lambda_w;
    hp.eta = eta;
    hp.epochs = epochs;
    hp.seed = seed;
    if (schedule == "constant") {
      hp.schedule = StepSchedule::Constant;
    } else if (schedule == "inverse") {
      hp.schedule = StepSchedule::InverseDecay;
    } else {
      throw CLI::ValidationError("--schedule must be 'constant' or 'inverse'");
    }
    hp.decay_rate = decay;
    return hp;
  }
};

void add_hyper_flags(CLI::App* cmd, HyperFlags& hf) {
  cmd->add_option("--k", hf.k, "Embedding dimensionality");
  cmd->add_option("--lambda-a", hf.lambda_a, "Textual projection regularizer");
  cmd->add_option("--lambda-s", hf.lambda_s, "Embedding regularizer");
  cmd->add_option("--lambda-w", hf.lambda_w, "Feature projection regularizer");
  cmd->add_option("--eta", hf.eta, "SGD step size");
  cmd->add_option("--epochs", hf.epochs, "SGD epochs");
  cmd->add_option("--seed", hf.seed, "Random seed");
  cmd->add_option("--schedule", hf.schedule, "Step schedule: constant | inverse");
  cmd->add_option("--decay", hf.decay, "Inverse-decay rate");
}

void configure(CLI::App& cmd) {
  // Declared for --help only; the file is expanded into flags before parsing.
  static std::string sink;
  cmd.add_option("--config", sink,
                 "Config file with `key = value` lines; flags override");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Expands `--config FILE` into `--key value` pairs appended to the argument
// list. Keys whose flag is already present on the command line are skipped,
// so explicit flags override the config. Unknown keys surface as unknown
// flags (usage error).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  fs::path config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config_path.empty()) return args;

  std::set<std::string> explicit_flags;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) explicit_flags.insert(a.substr(0, a.find('=')));

  std::ifstream in(config_path);
  if (!in) throw Error("IoError", "cannot read config " + config_path.string());
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("ParseError", "config line is not `key = value`: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error("ParseError", "config line has an empty key: " + line);
    const std::string flag = "--" + key;
    if (explicit_flags.count(flag)) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VideoStory joint text-video embeddings"};
  app.require_subcommand(1);

  // ---- build-vocab ----
  auto* cmd_vocab = app.add_subcommand("build-vocab", "Build a term vocabulary");
  configure(*cmd_vocab);
  fs::path vocab_descriptions, vocab_out;
  std::uint32_t min_occurrences = 2;
  cmd_vocab->add_option("--descriptions", vocab_descriptions)->required();
  cmd_vocab->add_option("--min-occurrences", min_occurrences);
  cmd_vocab->add_option("--out", vocab_out)->required();

  // ---- encode ----
  auto* cmd_encode = app.add_subcommand("encode", "Encode binary term vectors");
  configure(*cmd_encode);
  fs::path enc_descriptions, enc_vocab, enc_out;
  cmd_encode->add_option("--descriptions", enc_descriptions)->required();
  cmd_encode->add_option("--vocab", enc_vocab)->required();
  cmd_encode->add_option("--out", enc_out)->required();

  // ---- split ----
  auto* cmd_split = app.add_subcommand("split", "Split a corpus for train/validation");
  configure(*cmd_split);
  fs::path split_vocab, split_terms, split_train_dir, split_val_dir;
  std::vector<std::string> split_features;
  double split_fraction = 0.75;
  std::uint64_t split_seed = 0;
  cmd_split->add_option("--vocab", split_vocab)->required();
  cmd_split->add_option("--term-matrix", split_terms)->required();
  cmd_split->add_option("--feature", split_features, "NAME=PATH, repeatable")->required();
  cmd_split->add_option("--fraction", split_fraction);
  cmd_split->add_option("--seed", split_seed);
  cmd_split->add_option("--out-train", split_train_dir)->required();
  cmd_split->add_option("--out-val", split_val_dir)->required();

  // ---- train ----
  auto* cmd_train = app.add_subcommand("train", "Train an embedding or baseline model");
  configure(*cmd_train);
  std::string train_variant = "vs";
  fs::path train_vocab, train_terms, train_event, train_out;
  std::vector<std::string> train_features;
  std::vector<double> train_gammas;
  HyperFlags train_hf;
  double train_alpha = 0.75, train_reg = 1.0;
  std::size_t train_m_sel = 0;
  cmd_train
      ->add_option("--variant", train_variant,
                   "vs | fused | zero | desc-embed | term-attr | term-attr-f")
      ->check(CLI::IsMember({"vs", "fused", "zero", "desc-embed", "term-attr",
                             "term-attr-f"}));
  cmd_train->add_option("--vocab", train_vocab)->required();
  cmd_train->add_option("--term-matrix", train_terms)->required();
  cmd_train->add_option("--feature", train_features, "NAME=PATH, repeatable")->required();
  cmd_train->add_option("--gamma", train_gammas, "Per-modality weight, repeatable");
  add_hyper_flags(cmd_train, train_hf);
  cmd_train->add_option("--event", train_event, "Event definition file (zero variant)");
  cmd_train->add_option("--alpha", train_alpha, "Importance weight for present terms");
  cmd_train->add_option("--reg", train_reg, "Ridge regularizer (term-attr variants)");
  cmd_train->add_option("--m-sel", train_m_sel, "Selected term count (term-attr variants)");
  cmd_train->add_option("--out", train_out)->required();

  // ---- embed ----
  auto* cmd_embed = app.add_subcommand("embed", "Extract embeddings for videos");
  configure(*cmd_embed);
  fs::path embed_model, embed_out;
  std::vector<std::string> embed_features;
  cmd_embed->add_option("--model", embed_model)->required();
  cmd_embed->add_option("--feature", embed_features)->required();
  cmd_embed->add_option("--out", embed_out)->required();

  // ---- predict-terms ----
  auto* cmd_predict = app.add_subcommand("predict-terms", "Predict top terms per video");
  configure(*cmd_predict);
  fs::path pred_model, pred_vocab, pred_out;
  std::vector<std::string> pred_features;
  std::size_t pred_top = 10;
  cmd_predict->add_option("--model", pred_model)->required();
  cmd_predict->add_option("--vocab", pred_vocab)->required();
  cmd_predict->add_option("--feature", pred_features)->required();
  cmd_predict->add_option("--top", pred_top);
  cmd_predict->add_option("--out", pred_out)->required();

  // ---- rank ----
  auto* cmd_rank = app.add_subcommand("rank", "Rank test videos for an event query");
  configure(*cmd_rank);
  fs::path rank_model, rank_vocab, rank_event, rank_out;
  std::vector<std::string> rank_features;
  int rank_threads = 1;
  cmd_rank->add_option("--model", rank_model)->required();
  cmd_rank->add_option("--vocab", rank_vocab)->required();
  cmd_rank->add_option("--event", rank_event)->required();
  cmd_rank->add_option("--feature", rank_features)->required();
  cmd_rank->add_option("--threads", rank_threads);
  cmd_rank->add_option("--out", rank_out)->required();

  // ---- eval ----
  auto* cmd_eval = app.add_subcommand(
      "eval", "Score rankings against labels, or run the few-example harness");
  configure(*cmd_eval);
  std::vector<fs::path> eval_rankings;
  fs::path eval_labels, eval_out;
  fs::path eval_vocab, eval_train_terms, eval_labels_train;
  std::vector<std::string> eval_train_features, eval_test_features;
  std::string eval_representation = "videostory", eval_strategy = "early";
  HyperFlags eval_hf;
  double eval_reg = 1.0, eval_rbf_gamma = 1.0;
  std::size_t eval_m_sel = 0;
  int eval_threads = 1;
  cmd_eval->add_option("--ranking", eval_rankings,
                       "Ranking file(s); event id is the file stem");
  cmd_eval->add_option("--labels", eval_labels)->required();
  cmd_eval->add_option("--vocab", eval_vocab);
  cmd_eval->add_option("--train-terms", eval_train_terms);
  cmd_eval->add_option("--train-feature", eval_train_features);
  cmd_eval->add_option("--test-feature", eval_test_features);
  cmd_eval->add_option("--labels-train", eval_labels_train);
  cmd_eval
      ->add_option("--representation", eval_representation,
                   "raw-features | videostory | term-attributes | description-embedding")
      ->check(CLI::IsMember({"raw-features", "videostory", "term-attributes",
                             "description-embedding"}));
  cmd_eval
      ->add_option("--strategy", eval_strategy,
                   "early | late | vs-early | vs-late | vs-joint")
      ->check(CLI::IsMember({"early", "late", "vs-early", "vs-late", "vs-joint"}));
  add_hyper_flags(cmd_eval, eval_hf);
  cmd_eval->add_option("--reg", eval_reg, "Classifier regularizer");
  cmd_eval->add_option("--rbf-gamma", eval_rbf_gamma, "RBF kernel gamma");
  cmd_eval->add_option("--m-sel", eval_m_sel);
  cmd_eval->add_option("--threads", eval_threads);
  cmd_eval->add_option("--out", eval_out)->required();

  // ---- synth ----
  auto* cmd_synth = app.add_subcommand("synth", "Generate a planted synthetic corpus");
  configure(*cmd_synth);
  oracle::SynthSpec spec;
  std::vector<std::size_t> synth_dims;
  fs::path synth_out_dir;
  cmd_synth->add_option("--videos", spec.n_videos);
  cmd_synth->add_option("--terms", spec.n_terms);
  cmd_synth->add_option("--dim", synth_dims, "Feature dimensionality, repeatable per modality");
  cmd_synth->add_option("--k-true", spec.k_true);
  cmd_synth->add_option("--noise", spec.noise_sigma);
  cmd_synth->add_option("--threshold", spec.term_threshold);
  cmd_synth->add_option("--events", spec.n_events);
  cmd_synth->add_option("--positives", spec.positives_per_event);
  cmd_synth->add_option("--seed", spec.seed);
  cmd_synth->add_option("--out-dir", synth_out_dir)->required();

  // ---- inspect ----
  auto* cmd_inspect = app.add_subcommand(
      "inspect", "Emit the term-correlation matrix A*A^T for the top frequent terms");
  configure(*cmd_inspect);
  fs::path inspect_model, inspect_vocab, inspect_out;
  std::size_t inspect_terms = 50;
  cmd_inspect->add_option("--model", inspect_model)->required();
  cmd_inspect->add_option("--vocab", inspect_vocab)->required();
  cmd_inspect->add_option("--terms", inspect_terms);
  cmd_inspect->add_option("--out", inspect_out)->required();

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // parse(vector) pops from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    // usage problems are exit 1; --help and --version exit 0
    return e.get_exit_code() == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_vocab->parsed()) {
      const auto descriptions = load_descriptions(vocab_descriptions);
      save_vocabulary(vocab_out, build_vocabulary(descriptions, min_occurrences));
    } else if (cmd_encode->parsed()) {
      const auto descriptions = load_descriptions(enc_descriptions);
      const auto vocab = load_vocabulary(enc_vocab);
      const auto tm = encode_term_matrix(descriptions, vocab);
      std::vector<std::string> ids;
      for (const auto& d : descriptions) ids.push_back(d.video_id);
      save_term_matrix(enc_out, tm, ids);
    } else if (cmd_split->parsed()) {
      const Corpus corpus = load_corpus(split_vocab, split_terms, split_features);
      const auto [train, val] = split_corpus(corpus, split_fraction, split_seed);
      for (const auto* part : {&train, &val}) {
        const fs::path dir = part == &train ? split_train_dir : split_val_dir;
        fs::create_directories(dir);
        save_term_matrix(dir / "terms.tsv", part->term_matrix, part->video_ids);
        for (const auto& fm : part->features)
          save_features(dir / ("features_" + fm.modality + ".vsf"), fm);
      }
    } else if (cmd_train->parsed()) {
      const Corpus corpus = load_corpus(train_vocab, train_terms, train_features);
      const Hyperparams hp = train_hf.to_hyperparams();
      if (train_variant == "term-attr" || train_variant == "term-attr-f") {
        const std::size_t m_sel = train_m_sel > 0 ? train_m_sel : hp.k;
        const TermAttributeModel model =
            train_variant == "term-attr-f"
                ? train_term_attributes_f(corpus, m_sel, train_reg)
                : train_term_attributes(corpus, m_sel, train_reg, hp.seed);
        save_term_attribute_model(train_out, model);
      } else if (train_variant == "zero") {
        if (train_event.empty())
          throw CLI::ValidationError("--event is required for --variant zero");
        const EventDefinition event = load_event(train_event);
        auto [model, importance] =
            train_zero(corpus, hp, event, train_gammas, train_alpha);
        save_model(train_out, model);
      } else if (train_variant == "fused") {
        save_model(train_out, sgd_train_fused(corpus, hp, train_gammas));
      } else if (train_variant == "desc-embed") {
        const Corpus merged = concat_modalities(corpus);
        EmbeddingModel model = train_description_embedding(merged, hp);
        model.vocab_fingerprint = vocabulary_fingerprint(corpus.vocabulary);
        save_model(train_out, to_multimodal(model, merged.features[0].modality));
      } else {  // vs
        const Corpus merged = concat_modalities(corpus);
        const EmbeddingModel model = sgd_train(merged, hp);
        save_model(train_out, to_multimodal(model, merged.features[0].modality));
      }
    } else if (cmd_embed->parsed()) {
      const MultimodalModel model = load_model(embed_model);
      const auto features = load_feature_set(embed_features);
      if (features.size() != model.modality_count())
        throw Error("ShapeMismatch", "feature count differs from model modalities");
      std::ofstream out(embed_out);
      if (!out) throw Error("IoError", "cannot open " + embed_out.string());
      const std::size_t n = features[0].video_count();
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Eigen::VectorXd> xs;
        for (const auto& fm : features)
          xs.push_back(fm.values.row(static_cast<Eigen::Index>(i)).transpose());
        const Eigen::VectorXd s = embed_fused(model, xs);
        out << features[0].video_ids[i];
        for (Eigen::Index c = 0; c < s.size(); ++c) out << '\t' << format_sig9(s(c));
        out << '\n';
      }
    } else if (cmd_predict->parsed()) {
      const MultimodalModel model = load_model(pred_model);
      const auto vocab = load_vocabulary(pred_vocab);
      const auto features = load_feature_set(pred_features);
      if (features.size() != model.modality_count())
        throw Error("ShapeMismatch", "feature count differs from model modalities");
      if (static_cast<std::size_t>(model.A.rows()) != vocab.size())
        throw Error("ShapeMismatch", "model vocabulary size differs from --vocab");
      std::ofstream out(pred_out);
      if (!out) throw Error("IoError", "cannot open " + pred_out.string());
      const std::size_t n = features[0].video_count();
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Eigen::VectorXd> xs;
        for (const auto& fm : features)
          xs.push_back(fm.values.row(static_cast<Eigen::Index>(i)).transpose());
        const Eigen::VectorXd scores =
            predict_terms(model.A, shared_embedding(model, xs));
        out << features[0].video_ids[i];
        for (std::uint32_t t : top_terms(scores, pred_top)) out << '\t' << vocab.terms[t];
        out << '\n';
      }
    } else if (cmd_rank->parsed()) {
      const MultimodalModel model = load_model(rank_model);
      const auto vocab = load_vocabulary(rank_vocab);
      const EventDefinition event = load_event(rank_event);
      const Corpus corpus = feature_corpus(vocab, rank_features);
      const EventQuery query = build_event_query(event, vocab);
      save_ranking(rank_out, cosine_rank(model, query, corpus, rank_threads));
    } else if (cmd_eval->parsed()) {
      const auto label_sets = load_labels(eval_labels);
      if (!eval_rankings.empty()) {
        // Mode A: score pre-computed rankings.
        std::vector<APResult> results;
        for (const auto& path : eval_rankings) {
          const Ranking ranking = load_ranking(path, path.stem().string());
          const LabeledSet* set = nullptr;
          for (const auto& s : label_sets)
            if (s.event_id == ranking.event_id) set = &s;
          if (!set)
            throw Error("IdMismatch", "no labels for event " + ranking.event_id);
          std::vector<std::string> ids;
          std::vector<int> labels;
          Eigen::VectorXd scores(static_cast<Eigen::Index>(ranking.entries.size()));
          std::map<std::string, int> by_id;
          for (std::size_t i = 0; i < set->video_ids.size(); ++i)
            by_id[set->video_ids[i]] = set->labels[i];
          for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            const auto& entry = ranking.entries[i];
            auto it = by_id.find(entry.video_id);
            if (it == by_id.end())
              throw Error("IdMismatch", "no label for video " + entry.video_id);
            ids.push_back(entry.video_id);
            labels.push_back(it->second);
            scores(static_cast<Eigen::Index>(i)) = entry.score;
          }
          results.push_back(average_precision(ids, scores, labels, ranking.event_id));
        }
        save_report(eval_out, results, mean_average_precision(results));
      } else {
        // Mode B: few-example harness.
        if (eval_vocab.empty() || eval_train_terms.empty() ||
            eval_train_features.empty() || eval_test_features.empty() ||
            eval_labels_train.empty())
          throw CLI::ValidationError(
              "harness mode needs --vocab, --train-terms, --train-feature, "
              "--test-feature and --labels-train");
        const Corpus corpus_train =
            load_corpus(eval_vocab, eval_train_terms, eval_train_features);
        const Corpus corpus_test =
            feature_corpus(corpus_train.vocabulary, eval_test_features);
        HarnessConfig config;
        config.hyperparams = eval_hf.to_hyperparams();
        config.classifier_reg = eval_reg;
        config.rbf_gamma = eval_rbf_gamma;
        config.m_sel = eval_m_sel;
        config.threads = eval_threads;
        const std::map<std::string, Representation> reps = {
            {"raw-features", Representation::RawFeatures},
            {"videostory", Representation::VideoStory},
            {"term-attributes", Representation::TermAttributes},
            {"description-embedding", Representation::DescriptionEmbedding}};
        const std::map<std::string, FusionStrategy> strategies = {
            {"early", FusionStrategy::Early},
            {"late", FusionStrategy::Late},
            {"vs-early", FusionStrategy::VsEarly},
            {"vs-late", FusionStrategy::VsLate},
            {"vs-joint", FusionStrategy::VsJoint}};
        config.representation = reps.at(eval_representation);
        config.strategy = strategies.at(eval_strategy);
        const auto train_sets = load_labels(eval_labels_train);
        const HarnessResult result = few_example_harness(
            corpus_train, corpus_test, train_sets, label_sets, config);
        save_report(eval_out, result.per_event, result.map);
      }
    } else if (cmd_synth->parsed()) {
      if (!synth_dims.empty()) spec.dims = synth_dims;
      const oracle::SynthResult result = oracle::synth_corpus(spec);
      fs::create_directories(synth_out_dir);
      save_vocabulary(synth_out_dir / "vocab.tsv", result.corpus.vocabulary);
      save_term_matrix(synth_out_dir / "terms.tsv", result.corpus.term_matrix,
                       result.corpus.video_ids);
      for (const auto& fm : result.corpus.features)
        save_features(synth_out_dir / ("features_" + fm.modality + ".vsf"), fm);
      fs::create_directories(synth_out_dir / "events");
      for (const auto& event : result.events)
        save_event(synth_out_dir / "events" / (event.event_id + ".event"), event);
      save_labels(synth_out_dir / "labels.tsv", result.labels);
      std::ofstream manifest(synth_out_dir / "manifest.txt");
      manifest << "videos = " << spec.n_videos << "\n"
               << "terms = " << spec.n_terms << "\n";
      manifest << "dims =";
      for (std::size_t d : spec.dims) manifest << ' ' << d;
      manifest << "\nk_true = " << spec.k_true << "\n"
               << "noise_sigma = " << format_sig9(spec.noise_sigma) << "\n"
               << "term_threshold = " << format_sig9(spec.term_threshold) << "\n"
               << "events = " << spec.n_events << "\n"
               << "positives_per_event = " << spec.positives_per_event << "\n"
               << "seed = " << spec.seed << "\n";
    } else if (cmd_inspect->parsed()) {
      const MultimodalModel model = load_model(inspect_model);
      const auto vocab = load_vocabulary(inspect_vocab);
      if (static_cast<std::size_t>(model.A.rows()) != vocab.size())
        throw Error("ShapeMismatch", "model vocabulary size differs from --vocab");
      const std::size_t n = std::min(inspect_terms, vocab.size());
      const Eigen::MatrixXd corr =
          model.A.topRows(static_cast<Eigen::Index>(n)) *
          model.A.topRows(static_cast<Eigen::Index>(n)).transpose();
      std::ofstream out(inspect_out);
      if (!out) throw Error("IoError", "cannot open " + inspect_out.string());
      out << "term";
      for (std::size_t c = 0; c < n; ++c) out << '\t' << vocab.terms[c];
      out << '\n';
      for (std::size_t r = 0; r < n; ++r) {
        out << vocab.terms[r];
        for (std::size_t c = 0; c < n; ++c)
          out << '\t'
              << format_sig9(corr(static_cast<Eigen::Index>(r),
                                  static_cast<Eigen::Index>(c)));
        out << '\n';
      }
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
