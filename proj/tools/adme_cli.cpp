// Command-line front end for the ADME semantic-labeling pipeline.
//
// Exit codes: 0 success, 2 usage/config, 3 input/parse, 4 runtime.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adme/annotator.hpp"
#include "adme/config.hpp"
#include "adme/corpus_io.hpp"
#include "adme/encoder.hpp"
#include "adme/encoder_train.hpp"
#include "adme/error.hpp"
#include "adme/eval.hpp"
#include "adme/introspect.hpp"
#include "adme/keyword_rules.hpp"
#include "adme/label_index.hpp"
#include "adme/spl.hpp"
#include "adme/synthetic.hpp"
#include "adme/text.hpp"
#include "adme/tfidf.hpp"
#include "adme/trainers.hpp"

namespace {

using namespace adme;
using nlohmann::json;

// Timestamps live in a sidecar so the primary outputs stay byte-identical
// across reruns with the same seed.
void write_sidecar_meta(const std::string& out_path, const std::string& command) {
    auto now = std::chrono::system_clock::now();
    json meta{
        {"command", command},
        {"written_unix_ms",
         std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count()},
    };
    std::ofstream file(out_path + ".meta.json", std::ios::binary);
    if (file) file << meta.dump(2) << '\n';
}

struct SegmentRecord {
    std::string set_id;
    std::string application_number;
    TagKind kind;
    std::string text;
};

std::string segments_path_for(const std::string& manifest_path) {
    return manifest_path + ".segments.jsonl";
}

void write_segments(const std::string& path, const std::vector<SegmentRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write segment store: " + path);
    for (const SegmentRecord& r : records) {
        out << json{{"set_id", r.set_id},
                    {"application_number", r.application_number},
                    {"kind", to_string(r.kind)},
                    {"text", r.text}}
                   .dump()
            << '\n';
    }
}

std::vector<SegmentRecord> read_segments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open segment store: " + path);
    std::vector<SegmentRecord> records;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        SegmentRecord r;
        r.set_id = record.value("set_id", "");
        r.application_number = record.value("application_number", "");
        std::string kind = record.value("kind", "paragraph");
        r.kind = kind == "title" ? TagKind::Title
                                 : (kind == "item" ? TagKind::Item : TagKind::Paragraph);
        r.text = record.value("text", "");
        if (r.text.empty())
            throw ValidationError(path + ":" + std::to_string(line_no) + ": empty segment text");
        records.push_back(std::move(r));
    }
    return records;
}

// --- ingest -----------------------------------------------------------------

struct IngestArgs {
    std::string input_dir;
    std::string endpoint;
    std::string index_path;
    std::string out;
};

int cmd_ingest(const IngestArgs& args, const AppConfig& config) {
    std::map<std::string, SplDocument> docs;
    std::vector<LabelIndexEntry> entries;

    if (!args.input_dir.empty()) {
        docs = load_spl_directory(args.input_dir);
        if (!args.index_path.empty()) {
            entries = fetch_label_index(args.index_path, config.fetch);
        } else {
            for (const auto& [set_id, doc] : docs)
                entries.push_back({set_id, doc.application_number, doc.version, ""});
        }
    } else {
        std::string index = args.index_path.empty() ? args.endpoint : args.index_path;
        entries = fetch_label_index(index, config.fetch);
        docs = fetch_documents(args.endpoint, entries, config.fetch);
    }

    std::vector<SplDocument> selected = select_labels(entries, docs);

    std::vector<ManifestRecord> manifest;
    std::vector<SegmentRecord> segments;
    for (const SplDocument& doc : selected) {
        std::vector<RawSegment> paragraphs = segment_paragraphs(extract_pk_section(doc));
        ManifestRecord record;
        record.set_id = doc.set_id;
        record.application_number = doc.application_number;
        record.version = doc.version;
        record.pk_paragraph_count = 0;
        for (const RawSegment& s : paragraphs) {
            if (s.kind != TagKind::Title) ++record.pk_paragraph_count;
            segments.push_back({doc.set_id, doc.application_number, s.kind, s.text});
        }
        manifest.push_back(std::move(record));
    }

    write_manifest(args.out, manifest);
    write_segments(segments_path_for(args.out), segments);
    write_sidecar_meta(args.out, "ingest");
    std::cout << "ingest: " << manifest.size() << " documents, " << segments.size()
              << " segments\n";
    return kExitOk;
}

// --- annotate ---------------------------------------------------------------

struct AnnotateArgs {
    std::string manifest;
    std::string segments;
    std::string out;
};

int cmd_annotate(const AnnotateArgs& args, const AppConfig& config) {
    std::vector<ManifestRecord> manifest = read_manifest(args.manifest);
    std::string segments_path =
        args.segments.empty() ? segments_path_for(args.manifest) : args.segments;
    std::vector<SegmentRecord> segments = read_segments(segments_path);

    std::vector<LabeledParagraph> corpus;
    for (const ManifestRecord& doc : manifest) {
        std::vector<RawSegment> doc_segments;
        for (const SegmentRecord& s : segments) {
            if (s.set_id == doc.set_id) doc_segments.push_back({s.kind, s.text});
        }
        auto labeled = annotate_document(doc_segments, config.annotator, doc.set_id,
                                         doc.application_number);
        corpus.insert(corpus.end(), labeled.begin(), labeled.end());
    }
    write_corpus_jsonl(args.out, corpus);
    write_sidecar_meta(args.out, "annotate");
    std::cout << "annotate: " << corpus.size() << " labeled paragraphs\n";
    return kExitOk;
}

// --- model construction ------------------------------------------------------

class OracleTagTrainer : public Trainer {
  public:
    std::unique_ptr<TextClassifier> fit(const std::vector<LabeledParagraph>&,
                                        const std::vector<LabeledParagraph>&,
                                        std::uint64_t) const override {
        class Oracle : public TextClassifier {
          public:
            Topic classify(const std::string& text) const override {
                for (Topic t : kAllTopics)
                    if (text.find(std::string("<") + to_string(t) + ">") != std::string::npos)
                        return t;
                return Topic::Other;
            }
        };
        return std::make_unique<Oracle>();
    }
    std::string name() const override { return "oracle"; }
};

std::unique_ptr<Trainer> make_trainer(const std::string& model, const AppConfig& config,
                                      const std::string& pretrained_path) {
    if (model == "rule") return std::make_unique<RuleTrainer>(config.rules);
    if (model == "logreg")
        return std::make_unique<TfidfLinearTrainer>(LinearKind::Logistic,
                                                    config.tfidf_max_features, config.logistic);
    if (model == "svm")
        return std::make_unique<TfidfLinearTrainer>(LinearKind::Svm, config.tfidf_max_features,
                                                    config.svm);
    if (model == "forest")
        return std::make_unique<TfidfForestTrainer>(config.tfidf_max_features, config.forest);
    if (model == "encoder") {
        auto trainer = std::make_unique<EncoderTrainer>(config.encoder, config.finetune,
                                                        config.init_scheme, config.vocab_target);
        if (!pretrained_path.empty()) trainer->set_pretrained(load_checkpoint(pretrained_path));
        return trainer;
    }
    if (model == "oracle") return std::make_unique<OracleTagTrainer>();  // test stub
    throw UsageError("unknown model '" + model +
                     "' (expected rule|logreg|svm|forest|encoder)");
}

// Stratified split by fold index: folds 0..2 train, 3 validation, 4 test.
void split_dataset(const std::vector<LabeledParagraph>& corpus, std::uint64_t seed,
                   std::vector<LabeledParagraph>& train, std::vector<LabeledParagraph>& val,
                   std::vector<LabeledParagraph>& test) {
    std::vector<Topic> labels;
    for (const auto& p : corpus) labels.push_back(p.topic);
    FoldPlan plan = stratified_kfold(labels, 5, seed);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (plan.assignments[i] <= 2)
            train.push_back(corpus[i]);
        else if (plan.assignments[i] == 3)
            val.push_back(corpus[i]);
        else
            test.push_back(corpus[i]);
    }
}

// --- train -------------------------------------------------------------------

struct TrainArgs {
    std::string model;
    std::string corpus;
    std::string out;
    std::string pretrained;
    std::string stage = "finetune";  // encoder only: pretrain|finetune
    bool grid = false;
};

int cmd_train(const TrainArgs& args, const AppConfig& config) {
    if (args.model != "rule" && args.model != "logreg" && args.model != "svm" &&
        args.model != "forest" && args.model != "encoder")
        throw UsageError("unknown model '" + args.model +
                         "' (expected rule|logreg|svm|forest|encoder)");
    if (args.model == "rule") {
        // Training is a no-op; the artifact is the keyword table.
        json table;
        for (int c = 0; c < 4; ++c)
            table[to_string(topic_at(c))] = config.rules.keywords[static_cast<std::size_t>(c)];
        std::ofstream out(args.out, std::ios::binary);
        if (!out) throw IoError("cannot write keyword table: " + args.out);
        out << json{{"format_version", 1}, {"kind", "rule"}, {"keywords", table}}.dump(2)
            << '\n';
        write_sidecar_meta(args.out, "train rule");
        std::cout << "train: wrote keyword table artifact\n";
        return kExitOk;
    }

    std::vector<LabeledParagraph> corpus = read_corpus_jsonl(args.corpus);
    if (corpus.empty()) throw ValidationError("training corpus is empty: " + args.corpus);

    if (args.model == "logreg" || args.model == "svm" || args.model == "forest") {
        std::vector<std::vector<std::string>> docs;
        std::vector<int> labels;
        for (const auto& p : corpus) {
            docs.push_back(tokenize_words(p.text));
            labels.push_back(topic_index(p.topic));
        }
        TfidfModel tfidf = fit_tfidf(docs, config.tfidf_max_features);
        Matrix features(static_cast<Eigen::Index>(corpus.size()),
                        static_cast<Eigen::Index>(tfidf.vocabulary.size()));
        for (std::size_t i = 0; i < docs.size(); ++i)
            features.row(static_cast<Eigen::Index>(i)) =
                tfidf_transform(tfidf, docs[i]).transpose();
        save_tfidf(tfidf, args.out + ".tfidf");
        if (args.model == "forest") {
            ForestHyper hyper = config.forest;
            hyper.seed = config.seed;
            save_forest(train_random_forest(features, labels, kNumTopics, hyper), args.out);
        } else {
            LinearHyper hyper = args.model == "logreg" ? config.logistic : config.svm;
            hyper.seed = config.seed;
            LinearModel model = args.model == "logreg"
                                    ? train_logistic(features, labels, kNumTopics, hyper)
                                    : train_linear_svm(features, labels, kNumTopics, hyper);
            save_linear(model, args.out);
        }
        write_sidecar_meta(args.out, "train " + args.model);
        std::cout << "train: wrote " << args.model << " artifact (features in " << args.out
                  << ".tfidf)\n";
        return kExitOk;
    }

    if (args.model != "encoder")
        throw UsageError("unknown model '" + args.model +
                         "' (expected rule|logreg|svm|forest|encoder)");

    if (args.stage == "pretrain") {
        std::vector<std::string> texts;
        for (const auto& p : corpus) texts.push_back(p.text);
        SubwordVocab vocab = train_subword_vocab(texts, config.vocab_target);
        EncoderConfig encoder_config = config.encoder;
        encoder_config.vocab_size = vocab.size();
        EncoderParams params = init_params(encoder_config, config.init_scheme, config.seed);
        PretrainConfig pretrain = config.pretrain;
        pretrain.seed = config.seed;
        pretrain.metrics_log = args.out + ".metrics.jsonl";
        PretrainResult result = pretrain_mlm(params, vocab, texts, pretrain);
        save_checkpoint({std::move(params), std::move(vocab), config.seed}, args.out);
        write_sidecar_meta(args.out, "train encoder pretrain");
        std::cout << "train: pretrained encoder, final MLM loss " << result.loss_history.back()
                  << "\n";
        return kExitOk;
    }
    if (args.stage != "finetune")
        throw UsageError("unknown stage '" + args.stage + "' (expected pretrain|finetune)");

    std::vector<LabeledParagraph> train, val, test;
    split_dataset(corpus, config.seed, train, val, test);

    EncoderParams params;
    SubwordVocab vocab;
    if (!args.pretrained.empty()) {
        Checkpoint checkpoint = load_checkpoint(args.pretrained);
        vocab = std::move(checkpoint.vocab);
        params =
            reinit_top_layers(checkpoint.params, 0, InitScheme::TruncatedNormal, config.seed);
    } else {
        std::vector<std::string> texts;
        for (const auto& p : train) texts.push_back(p.text);
        vocab = train_subword_vocab(texts, config.vocab_target);
        EncoderConfig encoder_config = config.encoder;
        encoder_config.vocab_size = vocab.size();
        params = init_params(encoder_config, config.init_scheme, config.seed);
    }

    FinetuneConfig finetune_config = config.finetune;
    finetune_config.seed = config.seed;
    finetune_config.metrics_log = args.out + ".metrics.jsonl";

    if (args.grid) {
        EncoderParams initial = params;
        auto evaluate = [&](int batch, double lr) {
            EncoderParams candidate = initial;
            FinetuneConfig cell = finetune_config;
            cell.batch_size = batch;
            cell.learning_rate = lr;
            cell.metrics_log.clear();
            FinetuneResult r = finetune(candidate, vocab, train, val, cell);
            return r.val_f1_history.empty()
                       ? 0.0
                       : *std::max_element(r.val_f1_history.begin(), r.val_f1_history.end());
        };
        GridResult grid = grid_search(kDefaultBatchGrid, kDefaultLrGrid, evaluate);
        json cells = json::array();
        for (const GridCell& cell : grid.cells)
            cells.push_back(json{{"batch_size", cell.batch_size},
                                 {"learning_rate", cell.learning_rate},
                                 {"val_f1", cell.score}});
        std::ofstream grid_out(args.out + ".grid.json", std::ios::binary);
        grid_out << json{{"cells", cells},
                         {"best_batch", grid.best_batch},
                         {"best_lr", grid.best_lr}}
                        .dump(2)
                 << '\n';
        finetune_config.batch_size = grid.best_batch;
        finetune_config.learning_rate = grid.best_lr;
    }

    finetune(params, vocab, train, val, finetune_config);
    save_checkpoint({std::move(params), std::move(vocab), config.seed}, args.out);
    write_sidecar_meta(args.out, "train encoder");
    std::cout << "train: wrote encoder checkpoint\n";
    return kExitOk;
}

// --- evaluate ------------------------------------------------------------------

struct EvaluateArgs {
    std::string model;
    std::string corpus;
    std::string unseen;
    std::string pretrained;
    std::string out;
};

int cmd_evaluate(const EvaluateArgs& args, const AppConfig& config) {
    std::unique_ptr<Trainer> trainer = make_trainer(args.model, config, args.pretrained);
    std::vector<LabeledParagraph> corpus = read_corpus_jsonl(args.corpus);
    std::vector<LabeledParagraph> unseen;
    if (!args.unseen.empty()) unseen = import_manual(args.unseen);

    std::vector<Topic> labels;
    for (const auto& p : corpus) labels.push_back(p.topic);
    FoldPlan plan = stratified_kfold(labels, config.eval_folds, config.seed);
    EvalReport report = run_cv(*trainer, corpus, plan, unseen);
    report.config_snapshot = config.snapshot();
    write_report(report, args.out);
    write_sidecar_meta(args.out, "evaluate " + args.model);
    std::cout << "evaluate: macro-F1 " << report.aggregate.mean.f1 << " (std "
              << report.aggregate.stddev.f1 << ")\n";
    return kExitOk;
}

// --- ablate -------------------------------------------------------------------

struct AblateArgs {
    std::string mode;  // freeze|reinit
    std::string top_n_list;
    std::string init_scheme = "truncated_normal";
    std::string corpus;
    std::string pretrained;
    std::string out;
};

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::string item;
    std::istringstream stream(csv);
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("invalid integer in list: '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

int cmd_ablate(const AblateArgs& args, const AppConfig& config) {
    if (args.mode != "freeze" && args.mode != "reinit")
        throw UsageError("unknown ablation mode '" + args.mode + "' (expected freeze|reinit)");
    Checkpoint checkpoint = load_checkpoint(args.pretrained);
    const int num_layers = checkpoint.params.config.num_layers;
    std::vector<int> top_ns = parse_int_list(args.top_n_list);
    for (int n : top_ns) {
        if (n < 0 || n > num_layers)
            throw UsageError("--top-n value " + std::to_string(n) + " exceeds the " +
                             std::to_string(num_layers) + "-layer stack");
    }
    auto scheme = init_scheme_from_string(args.init_scheme);
    if (!scheme) throw UsageError("unknown init scheme '" + args.init_scheme + "'");

    std::vector<LabeledParagraph> corpus = read_corpus_jsonl(args.corpus);
    std::vector<LabeledParagraph> train, val, test;
    split_dataset(corpus, config.seed, train, val, test);

    json rows = json::array();
    for (int n : top_ns) {
        EncoderParams params =
            reinit_top_layers(checkpoint.params, args.mode == "reinit" ? n : 0, *scheme,
                              derive_seed(config.seed, static_cast<std::uint64_t>(n)));
        FinetuneConfig finetune_config = config.finetune;
        finetune_config.seed =
            derive_seed(config.seed, 0xAB1A7EULL + static_cast<std::uint64_t>(n));
        if (args.mode == "freeze") finetune_config.freeze_top_n = n;
        finetune(params, checkpoint.vocab, train, val, finetune_config);

        std::vector<Topic> preds, golds;
        for (const auto& p : test) {
            preds.push_back(classify(params, checkpoint.vocab, p.text));
            golds.push_back(p.topic);
        }
        Metrics m = macro_metrics(preds, golds);
        rows.push_back(json{{"top_n", n},
                            {"mode", args.mode},
                            {"label", args.mode == "freeze" && n == 0 ? "head-only" : ""},
                            {"precision", m.precision},
                            {"recall", m.recall},
                            {"f1", m.f1}});
        std::cout << "ablate " << args.mode << " n=" << n << ": F1 " << m.f1 << "\n";
    }
    json table{{"format_version", 1},
               {"mode", args.mode},
               {"init_scheme", args.init_scheme},
               {"config", config.snapshot()},
               {"rows", rows}};
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw IoError("cannot write ablation table: " + args.out);
    out << table.dump(2) << '\n';
    write_sidecar_meta(args.out, "ablate " + args.mode);
    return kExitOk;
}

// --- attention-diff -----------------------------------------------------------

struct AttentionDiffArgs {
    std::string before;
    std::string after;
    std::string corpus;
    int samples = 1000;
    bool merged = false;
    std::string out;
};

int cmd_attention_diff(const AttentionDiffArgs& args, const AppConfig& config) {
    Checkpoint before = load_checkpoint(args.before);
    Checkpoint after = load_checkpoint(args.after);
    std::vector<LabeledParagraph> corpus = read_corpus_jsonl(args.corpus);

    // min(samples, available) per class, seeded.
    std::vector<std::string> texts;
    for (Topic topic : kAllTopics) {
        std::vector<const LabeledParagraph*> pool;
        for (const auto& p : corpus)
            if (p.topic == topic) pool.push_back(&p);
        SplitMix64 rng(
            derive_seed(config.seed, 0xA77ULL + static_cast<std::uint64_t>(topic_index(topic))));
        shuffle(pool, rng);
        std::size_t take = std::min(pool.size(), static_cast<std::size_t>(args.samples));
        for (std::size_t i = 0; i < take; ++i) texts.push_back(pool[i]->text);
    }
    if (texts.empty()) throw ValidationError("attention-diff: corpus has no usable paragraphs");

    DriftResult drift =
        attention_drift(before.params, after.params, after.vocab, texts, args.merged);
    AttentionRecord record = capture_attentions(after.params, after.vocab, texts.front());
    if (args.merged) record = merge_subword_attention(record);
    export_attention_view(record, drift, args.out);
    write_sidecar_meta(args.out, "attention-diff");
    std::cout << "attention-diff: " << texts.size() << " samples, largest change at layer "
              << drift.argmin_layer + 1 << " head " << drift.argmin_head + 1 << "\n";
    return kExitOk;
}

// --- learning-curve -----------------------------------------------------------

struct CurveArgs {
    std::string models;
    std::string sizes;
    std::string corpus;
    std::string pretrained;
    std::string out;
};

int cmd_learning_curve(const CurveArgs& args, const AppConfig& config) {
    std::vector<LabeledParagraph> corpus = read_corpus_jsonl(args.corpus);
    std::vector<std::unique_ptr<Trainer>> owners;
    std::vector<const Trainer*> trainers;
    std::string model;
    std::istringstream stream(args.models);
    while (std::getline(stream, model, ',')) {
        if (model.empty()) continue;
        owners.push_back(make_trainer(model, config, args.pretrained));
        trainers.push_back(owners.back().get());
    }
    if (trainers.empty()) throw UsageError("no models given");

    auto rows = learning_curve(trainers, corpus, parse_int_list(args.sizes),
                               config.holdout_per_class, config.seed);
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw IoError("cannot write curve table: " + args.out);
    out << "size\tmodel\tf1\n";
    out.precision(17);
    for (const CurveRow& row : rows)
        out << row.size << '\t' << row.model << '\t' << row.f1 << '\n';
    write_sidecar_meta(args.out, "learning-curve");
    std::cout << "learning-curve: " << rows.size() << " rows\n";
    return kExitOk;
}

// --- synth ---------------------------------------------------------------------

struct SynthArgs {
    std::string out;
    int per_class = 0;  // 0 = config default
};

int cmd_synth(const SynthArgs& args, const AppConfig& config) {
    SyntheticSpec spec = config.synth;
    if (args.per_class > 0) spec.per_class = args.per_class;
    auto corpus = generate_synthetic_corpus(spec);
    write_corpus_jsonl(args.out, corpus);
    write_sidecar_meta(args.out, "synth");
    std::cout << "synth: " << corpus.size() << " paragraphs\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ADME semantic labeling of drug-label pharmacokinetics paragraphs"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");
    std::optional<std::uint64_t> seed_override;
    app.add_option("--seed", seed_override, "override the config seed");

    IngestArgs ingest;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "fetch/parse/select SPL documents");
    ingest_cmd->add_option("--input", ingest.input_dir, "directory of SPL XML files");
    ingest_cmd->add_option("--endpoint", ingest.endpoint, "http index endpoint");
    ingest_cmd->add_option("--index", ingest.index_path, "explicit index file/URL");
    ingest_cmd->add_option("--out", ingest.out, "manifest output path")->required();

    AnnotateArgs annotate;
    CLI::App* annotate_cmd = app.add_subcommand("annotate", "regex-label PK paragraphs");
    annotate_cmd->add_option("--manifest", annotate.manifest, "ingest manifest")->required();
    annotate_cmd->add_option("--segments", annotate.segments,
                             "segment store (defaults next to manifest)");
    annotate_cmd->add_option("--out", annotate.out, "labeled corpus JSONL")->required();

    TrainArgs train;
    CLI::App* train_cmd = app.add_subcommand("train", "train a classifier");
    train_cmd->add_option("--model", train.model, "rule|logreg|svm|forest|encoder")->required();
    train_cmd->add_option("--corpus", train.corpus, "labeled corpus JSONL");
    train_cmd->add_option("--out", train.out, "artifact output path")->required();
    train_cmd->add_option("--pretrained", train.pretrained, "encoder checkpoint to start from");
    train_cmd->add_option("--stage", train.stage, "encoder stage: pretrain|finetune");
    train_cmd->add_flag("--grid", train.grid, "grid-search batch size and learning rate");

    EvaluateArgs evaluate;
    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "stratified 5-fold evaluation");
    evaluate_cmd->add_option("--model", evaluate.model, "rule|logreg|svm|forest|encoder")
        ->required();
    evaluate_cmd->add_option("--corpus", evaluate.corpus, "labeled corpus JSONL")->required();
    evaluate_cmd->add_option("--unseen", evaluate.unseen, "manually annotated unseen set");
    evaluate_cmd->add_option("--pretrained", evaluate.pretrained, "encoder checkpoint");
    evaluate_cmd->add_option("--out", evaluate.out, "report output path")->required();

    AblateArgs ablate;
    CLI::App* ablate_cmd = app.add_subcommand("ablate", "layer freezing / re-initialization");
    ablate_cmd->add_option("--mode", ablate.mode, "freeze|reinit")->required();
    ablate_cmd->add_option("--top-n", ablate.top_n_list, "comma list of N values")->required();
    ablate_cmd->add_option("--init", ablate.init_scheme, "truncated_normal|uniform");
    ablate_cmd->add_option("--corpus", ablate.corpus, "labeled corpus JSONL")->required();
    ablate_cmd->add_option("--pretrained", ablate.pretrained, "encoder checkpoint")->required();
    ablate_cmd->add_option("--out", ablate.out, "ablation table output")->required();

    AttentionDiffArgs attention;
    CLI::App* attention_cmd =
        app.add_subcommand("attention-diff", "pre/post fine-tuning attention drift");
    attention_cmd->add_option("--before", attention.before, "checkpoint before")->required();
    attention_cmd->add_option("--after", attention.after, "checkpoint after")->required();
    attention_cmd->add_option("--corpus", attention.corpus, "corpus to sample")->required();
    attention_cmd->add_option("--samples", attention.samples, "samples per class");
    attention_cmd->add_flag("--merged", attention.merged, "merge subword attention first");
    attention_cmd->add_option("--out", attention.out, "attention export path")->required();

    CurveArgs curve;
    CLI::App* curve_cmd = app.add_subcommand("learning-curve", "F1 vs training size");
    curve_cmd->add_option("--models", curve.models, "comma list of models")->required();
    curve_cmd->add_option("--sizes", curve.sizes, "comma list of per-class sizes")->required();
    curve_cmd->add_option("--corpus", curve.corpus, "labeled corpus JSONL")->required();
    curve_cmd->add_option("--pretrained", curve.pretrained, "encoder checkpoint");
    curve_cmd->add_option("--out", curve.out, "TSV output path")->required();

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate the synthetic benchmark corpus");
    synth_cmd->add_option("--out", synth.out, "corpus output path")->required();
    synth_cmd->add_option("--per-class", synth.per_class, "paragraphs per class");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        AppConfig config = AppConfig::load(config_path);
        if (seed_override) config.seed = *seed_override;

        if (ingest_cmd->parsed()) {
            if (ingest.input_dir.empty() && ingest.endpoint.empty())
                throw UsageError("ingest needs --input or --endpoint");
            return cmd_ingest(ingest, config);
        }
        if (annotate_cmd->parsed()) return cmd_annotate(annotate, config);
        if (train_cmd->parsed()) return cmd_train(train, config);
        if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate, config);
        if (ablate_cmd->parsed()) return cmd_ablate(ablate, config);
        if (attention_cmd->parsed()) return cmd_attention_diff(attention, config);
        if (curve_cmd->parsed()) return cmd_learning_curve(curve, config);
        if (synth_cmd->parsed()) return cmd_synth(synth, config);
        throw UsageError("no subcommand given");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
