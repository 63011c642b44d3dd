#include "adme/introspect.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "adme/error.hpp"

namespace adme {

using nlohmann::json;

AttentionRecord capture_attentions(const EncoderParams& params, const SubwordVocab& vocab,
                                   std::string_view text) {
    if (vocab.size() != params.config.vocab_size)
        throw ConfigError("capture_attentions: vocab does not match encoder config");
    Encoding enc = encode(vocab, text, params.config.max_seq_len);
    ForwardResult result = forward(params, enc, /*capture=*/true);
    AttentionRecord record = std::move(*result.attention);
    record.tokens.reserve(static_cast<std::size_t>(enc.num_real));
    for (int t = 0; t < enc.num_real; ++t)
        record.tokens.push_back(vocab.pieces[static_cast<std::size_t>(enc.ids[static_cast<std::size_t>(t)])]);
    return record;
}

AttentionRecord merge_subword_attention(const AttentionRecord& record) {
    const int T = static_cast<int>(record.word_alignment.size());

    // Unit = maximal run of positions sharing a word index; specials (-1)
    // are always singletons.
    std::vector<int> unit_of(static_cast<std::size_t>(T));
    std::vector<std::pair<int, int>> units;  // [begin, end)
    for (int t = 0; t < T;) {
        int w = record.word_alignment[static_cast<std::size_t>(t)];
        int end = t + 1;
        if (w >= 0) {
            while (end < T && record.word_alignment[static_cast<std::size_t>(end)] == w) ++end;
        }
        for (int i = t; i < end; ++i)
            unit_of[static_cast<std::size_t>(i)] = static_cast<int>(units.size());
        units.emplace_back(t, end);
        t = end;
    }
    const int U = static_cast<int>(units.size());

    AttentionRecord merged;
    merged.merged = true;
    merged.word_alignment.reserve(static_cast<std::size_t>(U));
    if (!record.tokens.empty()) {
        merged.tokens.reserve(static_cast<std::size_t>(U));
        for (const auto& [begin, end] : units) {
            std::string token = record.tokens[static_cast<std::size_t>(begin)];
            for (int i = begin + 1; i < end; ++i) {
                const std::string& piece = record.tokens[static_cast<std::size_t>(i)];
                token += piece.rfind("##", 0) == 0 ? piece.substr(2) : piece;
            }
            merged.tokens.push_back(std::move(token));
        }
    }
    for (const auto& [begin, end] : units)
        merged.word_alignment.push_back(record.word_alignment[static_cast<std::size_t>(begin)]);

    merged.weights.resize(record.weights.size());
    for (std::size_t l = 0; l < record.weights.size(); ++l) {
        merged.weights[l].resize(record.weights[l].size());
        for (std::size_t h = 0; h < record.weights[l].size(); ++h) {
            const Matrix& src = record.weights[l][h];
            // Keys first (sum preserves row mass), then queries (average).
            Matrix keyed = Matrix::Zero(T, U);
            for (int j = 0; j < T; ++j)
                keyed.col(unit_of[static_cast<std::size_t>(j)]) += src.col(j);
            Matrix out = Matrix::Zero(U, U);
            for (int i = 0; i < T; ++i)
                out.row(unit_of[static_cast<std::size_t>(i)]) += keyed.row(i);
            for (int u = 0; u < U; ++u)
                out.row(u) /= static_cast<double>(units[static_cast<std::size_t>(u)].second -
                                                  units[static_cast<std::size_t>(u)].first);
            merged.weights[l][h] = std::move(out);
        }
    }
    return merged;
}

CosineResult flattened_cosine_checked(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("flattened_cosine: shape mismatch");
    double dot = a.cwiseProduct(b).sum();
    double norm_a = a.norm();
    double norm_b = b.norm();
    if (norm_a == 0.0 || norm_b == 0.0) return {0.0, true};
    return {dot / (norm_a * norm_b), false};
}

double flattened_cosine(const Matrix& a, const Matrix& b) {
    return flattened_cosine_checked(a, b).value;
}

DriftResult attention_drift(const EncoderParams& before, const EncoderParams& after,
                            const SubwordVocab& vocab, const std::vector<std::string>& texts,
                            bool merged) {
    if (!(before.config == after.config))
        throw ConfigError("attention_drift: encoder configs differ");
    if (texts.empty()) throw TrainError("attention_drift: empty sample set");

    const int layers = before.config.num_layers;
    const int heads = before.config.num_heads;
    DriftResult result;
    result.mean_similarity = Matrix::Zero(layers, heads);
    result.sample_count = static_cast<int>(texts.size());

    for (const std::string& text : texts) {
        AttentionRecord rb = capture_attentions(before, vocab, text);
        AttentionRecord ra = capture_attentions(after, vocab, text);
        if (merged) {
            rb = merge_subword_attention(rb);
            ra = merge_subword_attention(ra);
        }
        for (int l = 0; l < layers; ++l)
            for (int h = 0; h < heads; ++h)
                result.mean_similarity(l, h) +=
                    flattened_cosine(rb.weights[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)],
                                     ra.weights[static_cast<std::size_t>(l)][static_cast<std::size_t>(h)]);
    }
    result.mean_similarity /= static_cast<double>(texts.size());

    double min = result.mean_similarity(0, 0);
    for (int l = 0; l < layers; ++l) {
        for (int h = 0; h < heads; ++h) {
            if (result.mean_similarity(l, h) < min) {
                min = result.mean_similarity(l, h);
                result.argmin_layer = l;
                result.argmin_head = h;
            }
        }
    }
    return result;
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    return m;
}

}  // namespace

void export_attention_view(const AttentionRecord& record,
                           const std::optional<DriftResult>& drift, const std::string& path) {
    json out{
        {"format_version", 1},
        {"tokens", record.tokens},
        {"word_alignment", record.word_alignment},
        {"merged", record.merged},
        {"num_layers", record.num_layers()},
        {"num_heads", record.num_heads()},
    };
    json layers = json::array();
    for (const auto& layer : record.weights) {
        json heads = json::array();
        for (const Matrix& head : layer) heads.push_back(matrix_to_json(head));
        layers.push_back(heads);
    }
    out["attentions"] = layers;
    if (drift) {
        out["drift"] = json{{"matrix", matrix_to_json(drift->mean_similarity)},
                            {"argmin", {{"layer", drift->argmin_layer}, {"head", drift->argmin_head}}},
                            {"sample_count", drift->sample_count}};
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write attention export: " + path);
    file << out.dump(2) << '\n';
    if (!file) throw IoError("error writing attention export: " + path);
}

AttentionView read_attention_view(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open attention export: " + path);
    json in;
    try {
        file >> in;
    } catch (const json::parse_error& e) {
        throw ParseError("corrupt attention export: " + std::string(e.what()));
    }
    AttentionView view;
    view.record.tokens = in.at("tokens").get<std::vector<std::string>>();
    view.record.word_alignment = in.at("word_alignment").get<std::vector<int>>();
    view.record.merged = in.at("merged").get<bool>();
    for (const json& layer : in.at("attentions")) {
        std::vector<Matrix> heads;
        for (const json& head : layer) heads.push_back(matrix_from_json(head));
        view.record.weights.push_back(std::move(heads));
    }
    if (in.contains("drift")) {
        DriftResult drift;
        drift.mean_similarity = matrix_from_json(in["drift"].at("matrix"));
        drift.argmin_layer = in["drift"].at("argmin").at("layer").get<int>();
        drift.argmin_head = in["drift"].at("argmin").at("head").get<int>();
        drift.sample_count = in["drift"].value("sample_count", 0);
        view.drift = std::move(drift);
    }
    return view;
}

}  // namespace adme
