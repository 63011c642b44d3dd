#include "adme/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "adme/error.hpp"
#include "adme/rng.hpp"

namespace adme {

using nlohmann::json;

FoldPlan stratified_kfold(const std::vector<Topic>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
    if (labels.empty()) throw TrainError("stratified_kfold: empty dataset");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(labels.size(), -1);

    for (Topic topic : kAllTopics) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == topic) indices.push_back(i);
        if (indices.empty()) continue;
        if (static_cast<int>(indices.size()) < k)
            throw TrainError(std::string("stratified_kfold: class ") + to_string(topic) +
                             " has " + std::to_string(indices.size()) + " examples, fewer than k=" +
                             std::to_string(k));
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(topic_index(topic))));
        shuffle(indices, rng);
        for (std::size_t j = 0; j < indices.size(); ++j)
            plan.assignments[indices[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
    return plan;
}

IntMatrix confusion_matrix(const std::vector<Topic>& predictions,
                           const std::vector<Topic>& golds) {
    if (predictions.size() != golds.size())
        throw DimensionError("confusion_matrix: length mismatch");
    IntMatrix m = IntMatrix::Zero(kNumTopics, kNumTopics);
    for (std::size_t i = 0; i < golds.size(); ++i)
        m(topic_index(golds[i]), topic_index(predictions[i])) += 1;
    return m;
}

Metrics macro_metrics(const std::vector<Topic>& predictions, const std::vector<Topic>& golds) {
    if (predictions.size() != golds.size())
        throw DimensionError("macro_metrics: length mismatch");
    if (golds.empty()) throw DimensionError("macro_metrics: empty input");

    IntMatrix m = confusion_matrix(predictions, golds);
    Metrics macro;
    int included = 0;
    for (int c = 0; c < kNumTopics; ++c) {
        long gold_count = m.row(c).sum();
        if (gold_count == 0) continue;  // absent from golds: excluded from the mean
        long tp = m(c, c);
        long pred_count = m.col(c).sum();
        double precision = pred_count > 0 ? static_cast<double>(tp) / static_cast<double>(pred_count) : 0.0;
        double recall = static_cast<double>(tp) / static_cast<double>(gold_count);
        double f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        macro.precision += precision;
        macro.recall += recall;
        macro.f1 += f1;
        ++included;
    }
    macro.precision /= included;
    macro.recall /= included;
    macro.f1 /= included;
    return macro;
}

MetricAggregate aggregate_runs(const std::vector<RunMetrics>& runs) {
    MetricAggregate agg;
    if (runs.empty()) return agg;
    const double n = static_cast<double>(runs.size());
    for (const RunMetrics& r : runs) {
        agg.mean.precision += r.metrics.precision;
        agg.mean.recall += r.metrics.recall;
        agg.mean.f1 += r.metrics.f1;
    }
    agg.mean.precision /= n;
    agg.mean.recall /= n;
    agg.mean.f1 /= n;
    for (const RunMetrics& r : runs) {
        agg.stddev.precision += std::pow(r.metrics.precision - agg.mean.precision, 2);
        agg.stddev.recall += std::pow(r.metrics.recall - agg.mean.recall, 2);
        agg.stddev.f1 += std::pow(r.metrics.f1 - agg.mean.f1, 2);
    }
    agg.stddev.precision = std::sqrt(agg.stddev.precision / n);
    agg.stddev.recall = std::sqrt(agg.stddev.recall / n);
    agg.stddev.f1 = std::sqrt(agg.stddev.f1 / n);
    return agg;
}

namespace {

RunMetrics evaluate_model(const TextClassifier& model,
                          const std::vector<LabeledParagraph>& test) {
    std::vector<Topic> preds, golds;
    preds.reserve(test.size());
    golds.reserve(test.size());
    for (const LabeledParagraph& p : test) {
        preds.push_back(model.classify(p.text));
        golds.push_back(p.topic);
    }
    RunMetrics run;
    run.metrics = macro_metrics(preds, golds);
    run.confusion = confusion_matrix(preds, golds);
    return run;
}

}  // namespace

EvalReport run_cv(const Trainer& trainer, const std::vector<LabeledParagraph>& dataset,
                  const FoldPlan& plan, const std::vector<LabeledParagraph>& unseen) {
    if (plan.assignments.size() != dataset.size())
        throw DimensionError("run_cv: plan does not match dataset");

    EvalReport report;
    report.model = trainer.name();
    report.seed = plan.seed;
    report.k = plan.k;

    for (int run = 0; run < plan.k; ++run) {
        const int test_fold = run;
        const int val_fold = (run + 1) % plan.k;
        std::vector<LabeledParagraph> train, val, test;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            int fold = plan.assignments[i];
            if (fold == test_fold)
                test.push_back(dataset[i]);
            else if (fold == val_fold)
                val.push_back(dataset[i]);
            else
                train.push_back(dataset[i]);
        }
        try {
            std::unique_ptr<TextClassifier> model =
                trainer.fit(train, val, derive_seed(plan.seed, static_cast<std::uint64_t>(run)));
            RunMetrics rm = evaluate_model(*model, test);
            rm.run = run;
            rm.test_fold = test_fold;
            rm.val_fold = val_fold;
            report.runs.push_back(std::move(rm));
            if (!unseen.empty()) {
                RunMetrics um = evaluate_model(*model, unseen);
                um.run = run;
                um.test_fold = -1;
                um.val_fold = -1;
                report.unseen_runs.push_back(std::move(um));
            }
        } catch (const Error& e) {
            throw CvError("run_cv: trainer '" + trainer.name() + "' failed in run " +
                              std::to_string(run) + ": " + e.what(),
                          report.runs);
        }
    }
    report.aggregate = aggregate_runs(report.runs);
    report.unseen_aggregate = aggregate_runs(report.unseen_runs);
    return report;
}

std::vector<CurveRow> learning_curve(const std::vector<const Trainer*>& trainers,
                                     const std::vector<LabeledParagraph>& dataset,
                                     std::vector<int> per_class_sizes, int holdout_per_class,
                                     std::uint64_t seed) {
    if (per_class_sizes.empty()) throw ConfigError("learning_curve: empty sizes list");
    std::sort(per_class_sizes.begin(), per_class_sizes.end());
    per_class_sizes.erase(std::unique(per_class_sizes.begin(), per_class_sizes.end()),
                          per_class_sizes.end());
    if (per_class_sizes.front() < 1)
        throw ConfigError("learning_curve: sizes must be positive");

    // Seeded per-class order; the leading holdout_per_class go to the holdout,
    // the rest form the training pool.
    std::vector<LabeledParagraph> holdout;
    std::array<std::vector<const LabeledParagraph*>, kNumTopics> pools;
    for (Topic topic : kAllTopics) {
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset[i].topic == topic) indices.push_back(i);
        SplitMix64 rng(derive_seed(seed, 0x40C0ULL + static_cast<std::uint64_t>(topic_index(topic))));
        shuffle(indices, rng);
        std::size_t take = std::min(indices.size(), static_cast<std::size_t>(holdout_per_class));
        for (std::size_t j = 0; j < take; ++j) holdout.push_back(dataset[indices[j]]);
        for (std::size_t j = take; j < indices.size(); ++j)
            pools[static_cast<std::size_t>(topic_index(topic))].push_back(&dataset[indices[j]]);
    }
    if (holdout.empty()) throw TrainError("learning_curve: empty holdout");

    std::vector<CurveRow> rows;
    for (std::size_t si = 0; si < per_class_sizes.size(); ++si) {
        int size = per_class_sizes[si];
        std::vector<LabeledParagraph> train;
        for (const auto& pool : pools) {
            if (pool.empty()) continue;
            std::size_t take = std::min(pool.size(), static_cast<std::size_t>(size));
            if (take < static_cast<std::size_t>(size))
                std::cerr << "learning_curve: size " << size << " capped to " << take
                          << " for one class\n";
            for (std::size_t j = 0; j < take; ++j) train.push_back(*pool[j]);
        }
        for (const Trainer* trainer : trainers) {
            std::unique_ptr<TextClassifier> model = trainer->fit(
                train, {}, derive_seed(seed, 0x10D0ULL + static_cast<std::uint64_t>(si)));
            RunMetrics rm = evaluate_model(*model, holdout);
            rows.push_back({size, trainer->name(), rm.metrics.f1});
        }
    }
    return rows;
}

namespace {

json metrics_to_json(const Metrics& m) {
    return json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

json confusion_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json runs_to_json(const std::vector<RunMetrics>& runs) {
    json out = json::array();
    for (const RunMetrics& r : runs) {
        json entry{{"run", r.run},
                   {"test_fold", r.test_fold},
                   {"val_fold", r.val_fold},
                   {"precision", r.metrics.precision},
                   {"recall", r.metrics.recall},
                   {"f1", r.metrics.f1},
                   {"confusion", confusion_to_json(r.confusion)}};
        out.push_back(entry);
    }
    return out;
}

json aggregate_to_json(const MetricAggregate& agg) {
    return json{
        {"precision", {{"mean", agg.mean.precision}, {"std", agg.stddev.precision}}},
        {"recall", {{"mean", agg.mean.recall}, {"std", agg.stddev.recall}}},
        {"f1", {{"mean", agg.mean.f1}, {"std", agg.stddev.f1}}},
    };
}

}  // namespace

json report_to_json(const EvalReport& report) {
    json class_order = json::array();
    for (Topic t : kAllTopics) class_order.push_back(to_string(t));
    json out{
        {"format_version", 1},
        {"model", report.model},
        {"seed", report.seed},
        {"k", report.k},
        {"std_kind", "population"},
        {"class_order", class_order},
        {"config", report.config_snapshot},
        {"runs", runs_to_json(report.runs)},
        {"aggregate", aggregate_to_json(report.aggregate)},
    };
    if (!report.unseen_runs.empty()) {
        out["unseen_runs"] = runs_to_json(report.unseen_runs);
        out["unseen_aggregate"] = aggregate_to_json(report.unseen_aggregate);
    }
    return out;
}

void write_report(const EvalReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report: " + path);
    out << report_to_json(report).dump(2) << '\n';
}

}  // namespace adme
