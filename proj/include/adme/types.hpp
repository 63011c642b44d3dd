#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace adme {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;

// Reporting order is fixed: A, D, M, E, Other.
enum class Topic : int {
    Absorption = 0,
    Distribution = 1,
    Metabolism = 2,
    Excretion = 3,
    Other = 4,
};

inline constexpr int kNumTopics = 5;

inline constexpr std::array<Topic, kNumTopics> kAllTopics = {
    Topic::Absorption, Topic::Distribution, Topic::Metabolism,
    Topic::Excretion, Topic::Other};

const char* to_string(Topic topic);
std::optional<Topic> topic_from_string(std::string_view name);

inline int topic_index(Topic t) { return static_cast<int>(t); }
inline Topic topic_at(int i) { return static_cast<Topic>(i); }

enum class LabelSource : int {
    RegexOutside = 0,
    RegexInline = 1,
    Manual = 2,
};

const char* to_string(LabelSource source);
std::optional<LabelSource> label_source_from_string(std::string_view name);

// One pharmacokinetics paragraph with its ADME topic and provenance.
struct LabeledParagraph {
    std::string text;
    Topic topic = Topic::Other;
    LabelSource source = LabelSource::RegexOutside;
    std::string set_id;
    std::string application_number;
    std::string raw_title;  // matched title text; empty for manual records
};

}  // namespace adme
