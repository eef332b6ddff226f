#include "iqrip/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace iqrip {

double Distribution::prob_of(TokenId id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return probs[i];
    }
    return 0.0;
}

std::size_t Distribution::index_of(TokenId id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return i;
    }
    return npos;
}

Distribution normalize(const std::vector<double>& weights,
                       const std::vector<TokenId>& ids) {
    if (weights.size() != ids.size()) {
        throw ParameterError("normalize: weights and ids differ in length");
    }
    std::vector<std::size_t> keep;
    keep.reserve(ids.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0 || !std::isfinite(weights[i])) {
            throw ParameterError("normalize: weight " + std::to_string(i) +
                                 " is negative or non-finite");
        }
        if (weights[i] > 0.0) keep.push_back(i);
    }
    if (keep.empty()) {
        throw ParameterError("normalize: no positive weights");
    }
    {
        std::unordered_set<TokenId> seen;
        for (std::size_t i : keep) {
            if (!seen.insert(ids[i]).second) {
                throw ParameterError("normalize: duplicate id " +
                                     std::to_string(ids[i]));
            }
        }
    }
    // Canonical order: descending weight, ties by ascending id. Sorting the
    // raw weights gives the same order as sorting the probabilities, since
    // division by the (positive) total preserves it.
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) {
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return ids[a] < ids[b];
    });
    Distribution out;
    out.ids.reserve(keep.size());
    out.probs.reserve(keep.size());
    double total = 0.0;
    for (std::size_t i : keep) total += weights[i];
    for (std::size_t i : keep) {
        out.ids.push_back(ids[i]);
        out.probs.push_back(weights[i] / total);
    }
    return out;
}

double quantile(const std::vector<double>& values, double q) {
    if (values.empty()) {
        throw ParameterError("quantile: empty value set");
    }
    if (q < 0.0 || q > 1.0) {
        throw ParameterError("quantile: q outside [0,1]");
    }
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double quantile(const Distribution& dist, double q) {
    return quantile(dist.probs, q);
}

double entropy(const Distribution& dist) {
    double h = 0.0;
    for (double p : dist.probs) h -= p * std::log(p);
    return h;
}

TokenId sample_token(const Distribution& dist, RngState& rng) {
    if (dist.empty()) {
        throw ParameterError("sample_token: empty distribution");
    }
    const double u = rng.next_uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        cum += dist.probs[i];
        if (u < cum) return dist.ids[i];
    }
    return dist.ids.back();
}

Distribution distribution_from_json_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("distribution line: bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("ids") || !j.contains("probs")) {
        throw DataError("distribution line: expected {\"ids\":[...],\"probs\":[...]}");
    }
    std::vector<TokenId> ids;
    std::vector<double> probs;
    try {
        ids = j.at("ids").get<std::vector<TokenId>>();
        probs = j.at("probs").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("distribution line: bad field: ") + e.what());
    }
    try {
        return normalize(probs, ids);
    } catch (const ParameterError& e) {
        throw DataError(std::string("distribution line: ") + e.what());
    }
}

std::string distribution_to_json_line(const Distribution& dist) {
    nlohmann::ordered_json j;
    j["ids"] = dist.ids;
    j["probs"] = dist.probs;
    return j.dump();
}

}  // namespace iqrip
