#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iqrip/common.hpp"

namespace iqrip {

/// A finite categorical distribution over token ids.
///
/// Invariants, enforced by normalize():
///  - probs are strictly positive (zero-weight candidates are dropped),
///  - probs sum to 1 within 1e-9,
///  - ids are unique,
///  - entries are stored in canonical order: descending probability,
///    ties broken by ascending id.
///
/// The canonical order is what gives "rank", "argmax" and "cumulative mass"
/// a single well-defined meaning everywhere in the pipeline.
struct Distribution {
    std::vector<TokenId> ids;
    std::vector<double> probs;

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }

    /// Probability of `id`, or 0.0 if absent. Linear scan; supports here are
    /// at most a few hundred entries.
    double prob_of(TokenId id) const;

    /// Index of `id` in canonical order (rank - 1), or npos if absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(TokenId id) const;
};

/// Deterministic random source for sampling. One engine per generation
/// stream; the draw sequence is fully determined by the seed.
class RngState {
   public:
    explicit RngState(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1): top 53 bits of the engine output.
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

   private:
    std::mt19937_64 engine_;
};

/// Build a Distribution from nonnegative weights. Weights of exactly zero are
/// dropped; a negative weight, duplicate id, length mismatch, or an empty
/// result is an error. The remaining weights are divided by their sum and the
/// entries are put in canonical order.
Distribution normalize(const std::vector<double>& weights,
                       const std::vector<TokenId>& ids);

/// Linear-interpolation quantile of a value set (the common "type 7" rule):
/// with the n values sorted ascending, the q-quantile sits at fractional
/// position h = (n-1)*q and interpolates linearly between the two neighbours.
double quantile(const std::vector<double>& values, double q);

/// Quantile of the probability values of a distribution.
double quantile(const Distribution& dist, double q);

/// Shannon entropy in nats: -sum p ln p.
double entropy(const Distribution& dist);

/// Draw one token by inverse CDF over the canonical order, consuming exactly
/// one uniform variate: the first candidate whose cumulative probability
/// exceeds the draw wins; rounding at the very top falls back to the last
/// candidate.
TokenId sample_token(const Distribution& dist, RngState& rng);

/// One-line JSON round trip, format {"ids":[...],"probs":[...]}.
/// Parsing re-normalizes, so hand-written weight lines are accepted.
Distribution distribution_from_json_line(const std::string& line);
std::string distribution_to_json_line(const Distribution& dist);

}  // namespace iqrip
