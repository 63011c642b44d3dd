#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adme/error.hpp"
#include "adme/types.hpp"

namespace adme {

struct FoldPlan {
    int k = 5;
    std::vector<int> assignments;  // fold index per example
    std::uint64_t seed = 0;
};

// Within each class, examples are shuffled by a seed-derived stream and dealt
// round-robin, so per-class fold counts differ by at most one. Throws when a
// class present in the data has fewer than k examples.
FoldPlan stratified_kfold(const std::vector<Topic>& labels, int k, std::uint64_t seed);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Macro-averaged P/R/F1 with 0/0 -> 0 per class. Classes absent from the
// gold set are excluded from the macro mean.
Metrics macro_metrics(const std::vector<Topic>& predictions, const std::vector<Topic>& golds);

// Rows = gold, columns = predicted, fixed class order (A, D, M, E, Other).
IntMatrix confusion_matrix(const std::vector<Topic>& predictions,
                           const std::vector<Topic>& golds);

class TextClassifier {
  public:
    virtual ~TextClassifier() = default;
    virtual Topic classify(const std::string& text) const = 0;
};

class Trainer {
  public:
    virtual ~Trainer() = default;
    virtual std::unique_ptr<TextClassifier> fit(const std::vector<LabeledParagraph>& train,
                                                const std::vector<LabeledParagraph>& val,
                                                std::uint64_t seed) const = 0;
    virtual std::string name() const = 0;
};

struct RunMetrics {
    int run = 0;
    int test_fold = 0;
    int val_fold = 0;
    Metrics metrics;
    IntMatrix confusion;
};

struct MetricAggregate {
    Metrics mean;
    Metrics stddev;  // population standard deviation over the runs
};

struct EvalReport {
    std::string model;
    std::uint64_t seed = 0;
    int k = 5;
    std::vector<RunMetrics> runs;
    MetricAggregate aggregate;
    std::vector<RunMetrics> unseen_runs;  // empty without an unseen set
    MetricAggregate unseen_aggregate;
    nlohmann::json config_snapshot = nlohmann::json::object();
};

// Carries the runs that finished before a trainer failure.
class CvError : public Error {
  public:
    CvError(const std::string& what, std::vector<RunMetrics> completed)
        : Error(what), completed_(std::move(completed)) {}
    const std::vector<RunMetrics>& completed_runs() const { return completed_; }
    int exit_code() const override { return kExitRuntime; }

  private:
    std::vector<RunMetrics> completed_;
};

// Run r: test = fold r, validation = fold (r+1) mod k, train = the rest.
// Each run's model is also evaluated on the unseen set when one is given.
EvalReport run_cv(const Trainer& trainer, const std::vector<LabeledParagraph>& dataset,
                  const FoldPlan& plan,
                  const std::vector<LabeledParagraph>& unseen = {});

MetricAggregate aggregate_runs(const std::vector<RunMetrics>& runs);

struct CurveRow {
    int size = 0;
    std::string model;
    double f1 = 0.0;
};

// Seeded fixed holdout per class; for each training size s, fits each trainer
// on s seeded samples per class and scores macro-F1 on the holdout. Sizes are
// deduplicated ascending; sizes beyond the available pool are capped with a
// warning on stderr.
std::vector<CurveRow> learning_curve(const std::vector<const Trainer*>& trainers,
                                     const std::vector<LabeledParagraph>& dataset,
                                     std::vector<int> per_class_sizes, int holdout_per_class,
                                     std::uint64_t seed);

nlohmann::json report_to_json(const EvalReport& report);
void write_report(const EvalReport& report, const std::string& path);

}  // namespace adme
