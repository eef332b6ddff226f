#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "iqrip/distribution.hpp"
#include "iqrip/iqr_ip.hpp"
#include "iqrip/metrics.hpp"

namespace iqrip {

/// Decoding strategies selectable at generation time.
enum class Method { iqr_ip, nucleus, top_k, pure };

/// Canonical names: "iqr-ip", "nucleus", "top-k", "pure".
std::string method_name(Method method);
Method method_from_name(const std::string& name);

/// Deterministic interpolated add-alpha n-gram model over a word vocabulary.
///
/// The conditional probability of token t given a context is built level by
/// level from the unigram estimate upward:
///
///   P_0(t)            = (c_0(t) + alpha) / (N + alpha * V)
///   P_j(t | last j)   = lambda * A_j(t) + (1 - lambda) * P_{j-1}(t)
///   A_j(t)            = (c_j(ctx, t) + alpha) / (total_j(ctx) + alpha * V)
///
/// for j = 1 .. order-1, where c_j counts the training occurrences of t after
/// the j-token context. A context never seen in training contributes no
/// level: P_j = P_{j-1} exactly, so unseen contexts back off to the
/// next-shorter estimate. Every probability is bounded away from zero by the
/// smoothing, so the model can score any token in any context.
///
/// The model is a pure function of (corpus, order, alpha, lambda): retraining
/// on the same corpus reproduces it bit for bit.
class ToyModel {
public:
    /// Per-context successor counts for one interpolation level.
    struct ContextCounts {
        std::map<TokenId, std::size_t> next;
        std::size_t total = 0;
    };
    using Level = std::map<std::vector<TokenId>, ContextCounts>;

    int order = 3;
    double alpha = 0.01;
    double backoff_lambda = 0.8;
    std::vector<std::string> vocab;           ///< id -> word (first-appearance order)
    std::map<std::string, TokenId> word_ids;  ///< word -> id
    std::vector<std::size_t> unigram;         ///< id -> corpus frequency
    std::size_t total_tokens = 0;
    std::vector<Level> levels;  ///< index j-1 holds the j-token-context tables
    std::vector<TokenId> default_prompt;

    std::size_t vocab_size() const { return vocab.size(); }

    /// Full-vocabulary next-token distribution for the given context (only
    /// the last order-1 tokens matter). Never returns zero-probability
    /// tokens; the result is canonically ordered and sums to 1.
    Distribution next(const std::vector<TokenId>& context) const;

    /// Map words to ids. Unknown words raise a parameter error.
    std::vector<TokenId> ids_for(const std::vector<std::string>& words) const;
    const std::string& word_of(TokenId id) const;

    /// Deterministic JSON serialization (sorted count tables, versioned
    /// header). save/load round-trip exactly.
    std::string to_json() const;
    static ToyModel from_json(const std::string& text);
    void save(const std::string& path) const;
    static ToyModel load(const std::string& path);

private:
    // Cached at train/load time: smoothed unigram probabilities and the
    // identity id list, so next() does not rebuild them per step.
    std::vector<double> unigram_probs_;
    std::vector<TokenId> all_ids_;
    friend ToyModel train_ngram(const std::vector<std::string>&, int, double, double);
    void rebuild_caches();
};

/// Whitespace tokenization with optional ASCII lowercasing.
std::vector<std::string> tokenize(const std::string& text, bool lowercase = true);

/// Train the interpolated n-gram model. The default prompt is chosen at
/// training time: the phrase "she walks in beauty" when all four words are in
/// vocabulary, else the corpus's first sentence (up to and including the
/// first '.', ';' or '?' token).
///
/// Preconditions: order >= 2, alpha > 0, lambda in (0,1), corpus length >=
/// order.
ToyModel train_ngram(const std::vector<std::string>& corpus, int order = 3,
                     double alpha = 0.01, double backoff_lambda = 0.8);

/// One generated sample plus everything needed to reproduce and re-score it.
/// sample.step_logprobs holds the chosen token's log probability under the
/// filtered (pre-permutation) distribution so perplexity comparisons across
/// methods score the same quantity; the probability under the actually
/// sampled (post-permutation) distribution is kept separately.
struct GenerationRecord {
    Sample sample;
    SamplerConfig config;
    Method method = Method::iqr_ip;
    std::vector<double> step_logprobs_permuted;
};

/// Autoregressively sample up to cfg.max_len tokens from the model, applying
/// the selected method's filter pipeline at every step. Fully deterministic
/// given (model, cfg, method, prompt). The prompt must be nonempty; generated
/// tokens do not include it. record_dists controls whether the raw per-step
/// model distributions are retained on the sample (needed for trajectory
/// analysis, dropped for bulk sweeps).
GenerationRecord generate(const ToyModel& model, const SamplerConfig& cfg,
                          Method method, const std::vector<TokenId>& prompt,
                          bool record_dists = true);

/// One grid cell of an experiment sweep.
struct ExperimentCell {
    std::string label;
    Method method = Method::iqr_ip;
    SamplerConfig config;
};
struct CellResult {
    ExperimentCell cell;
    MetricsReport report;
};

/// For each cell, generate samples_per_cell samples (per-sample seed =
/// cell.config.seed + sample index, streams generated in parallel but keyed
/// by index, so the schedule cannot change the output) and evaluate the full
/// metrics suite on the cell's corpus.
std::vector<CellResult> run_experiment(const ToyModel& model,
                                       const std::vector<ExperimentCell>& grid,
                                       std::size_t samples_per_cell,
                                       const std::vector<TokenId>& prompt,
                                       std::size_t window_len = 200);

}  // namespace iqrip
