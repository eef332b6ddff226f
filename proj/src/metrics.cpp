#include "iqrip/metrics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <map>
#include <thread>
#include <vector>

#include "iqrip/common.hpp"
#include "iqrip/toy_lm.hpp"

namespace iqrip {

namespace {

/// Ordered token -> count map so every iteration order downstream is
/// deterministic regardless of hash seeding.
std::map<TokenId, std::size_t> count_tokens(const std::vector<TokenId>& tokens,
                                            std::size_t begin, std::size_t end) {
    std::map<TokenId, std::size_t> counts;
    for (std::size_t i = begin; i < end; ++i) counts[tokens[i]] += 1;
    return counts;
}

double entropy_of_counts(const std::map<TokenId, std::size_t>& counts,
                         std::size_t total) {
    double h = 0.0;
    for (const auto& [tok, c] : counts) {
        (void)tok;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

double h_rep(const std::vector<TokenId>& window) {
    if (window.empty()) throw ParameterError("h_rep: window must be nonempty");
    const auto counts = count_tokens(window, 0, window.size());
    return entropy_of_counts(counts, window.size());
}

double sample_h_rep(const std::vector<TokenId>& tokens, std::size_t window_len) {
    if (tokens.empty()) throw ParameterError("sample_h_rep: sample must be nonempty");
    if (window_len == 0) throw ParameterError("sample_h_rep: window_len must be >= 1");
    const std::size_t n = tokens.size();
    if (n <= window_len) return h_rep(tokens);
    double sum = 0.0;
    std::size_t windows = 0;
    for (std::size_t start = 0; start + window_len <= n; ++start) {
        const auto counts = count_tokens(tokens, start, start + window_len);
        sum += entropy_of_counts(counts, window_len);
        ++windows;
    }
    return sum / static_cast<double>(windows);
}

std::vector<LoopSpan> detect_loops(const std::vector<TokenId>& tokens,
                                   std::size_t window_len, double threshold) {
    if (window_len == 0) throw ParameterError("detect_loops: window_len must be >= 1");
    std::vector<LoopSpan> spans;
    const std::size_t n = tokens.size();
    if (n == 0) return spans;
    if (n <= window_len) {
        // One window covering the whole sample, mirroring sample_h_rep.
        if (h_rep(tokens) < threshold) spans.push_back(LoopSpan{0, 0, n});
        return spans;
    }
    bool open = false;
    std::size_t run_start = 0;
    std::size_t run_last = 0;
    for (std::size_t start = 0; start + window_len <= n; ++start) {
        const auto counts = count_tokens(tokens, start, start + window_len);
        const bool below = entropy_of_counts(counts, window_len) < threshold;
        if (below) {
            if (!open) {
                open = true;
                run_start = start;
            }
            run_last = start;
        } else if (open) {
            spans.push_back(LoopSpan{0, run_start, run_last + window_len});
            open = false;
        }
    }
    if (open) spans.push_back(LoopSpan{0, run_start, run_last + window_len});
    return spans;
}

std::vector<Trajectory> extract_trajectories(const std::vector<Sample>& samples,
                                             std::size_t window_len,
                                             std::size_t min_count) {
    std::vector<Trajectory> out;
    for (const auto& sample : samples) {
        if (sample.step_distributions.size() != sample.tokens.size()) {
            throw ParameterError(
                "extract_trajectories: samples must carry one step distribution "
                "per token");
        }
        const auto spans = detect_loops(sample.tokens, window_len);
        if (spans.empty()) continue;
        // Count appearances inside the loop spans only.
        std::map<TokenId, std::size_t> counts;
        for (const auto& span : spans)
            for (std::size_t i = span.start; i < span.end; ++i)
                counts[sample.tokens[i]] += 1;
        for (const auto& [word, count] : counts) {
            if (count <= min_count) continue;
            Trajectory traj;
            traj.word = word;
            for (const auto& span : spans) {
                for (std::size_t i = span.start; i < span.end; ++i) {
                    if (sample.tokens[i] != word) continue;
                    const Distribution& dist = sample.step_distributions[i];
                    TrajectoryPoint pt;
                    pt.appearance = traj.points.size();
                    pt.prob = dist.prob_of(word);
                    const std::size_t idx = dist.index_of(word);
                    pt.rank = idx == Distribution::npos ? 0 : idx + 1;
                    pt.entropy = entropy(dist);
                    traj.points.push_back(pt);
                }
            }
            out.push_back(std::move(traj));
        }
    }
    return out;
}

double zipf_coefficient(const std::vector<Sample>& samples) {
    std::map<TokenId, std::size_t> counts;
    for (const auto& sample : samples)
        for (TokenId tok : sample.tokens) counts[tok] += 1;
    if (counts.size() < 2) {
        throw NumericError(
            "zipf_coefficient: need at least 2 distinct tokens for a fit");
    }
    std::vector<std::size_t> freqs;
    freqs.reserve(counts.size());
    for (const auto& [tok, c] : counts) {
        (void)tok;
        freqs.push_back(c);
    }
    std::sort(freqs.begin(), freqs.end(), std::greater<>());
    // Least-squares slope of ln(frequency) on ln(rank), every rank included.
    const std::size_t k = freqs.size();
    double mean_x = 0.0;
    double mean_y = 0.0;
    std::vector<double> xs(k);
    std::vector<double> ys(k);
    for (std::size_t r = 0; r < k; ++r) {
        xs[r] = std::log(static_cast<double>(r + 1));
        ys[r] = std::log(static_cast<double>(freqs[r]));
        mean_x += xs[r];
        mean_y += ys[r];
    }
    mean_x /= static_cast<double>(k);
    mean_y /= static_cast<double>(k);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        sxy += (xs[r] - mean_x) * (ys[r] - mean_y);
        sxx += (xs[r] - mean_x) * (xs[r] - mean_x);
    }
    return -(sxy / sxx);
}

namespace {

constexpr double kBleuEpsilon = 1e-9;

/// n-gram counts for one sample, one ordered map per n (index n-1).
using GramCounts = std::map<std::vector<TokenId>, std::size_t>;

std::vector<GramCounts> build_gram_counts(const std::vector<TokenId>& tokens,
                                          int max_ngram) {
    std::vector<GramCounts> by_n(static_cast<std::size_t>(max_ngram));
    for (int n = 1; n <= max_ngram; ++n) {
        if (tokens.size() < static_cast<std::size_t>(n)) break;
        auto& counts = by_n[static_cast<std::size_t>(n - 1)];
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
            std::vector<TokenId> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i) +
                                          n);
            counts[std::move(gram)] += 1;
        }
    }
    return by_n;
}

/// Modified n-gram precisions combined with the closest-reference brevity
/// penalty (ties broken toward the shorter reference). `clipped` returns, for
/// one hypothesis n-gram, the largest count of that gram in any reference.
template <typename ClipFn>
double bleu_score(std::size_t hyp_len, const std::vector<GramCounts>& hyp_grams,
                  const std::vector<std::size_t>& ref_lens, int max_ngram,
                  ClipFn&& clipped) {
    const std::size_t c = hyp_len;
    if (c == 0) return 0.0;
    double log_score = 0.0;
    const double weight = 1.0 / static_cast<double>(max_ngram);
    for (int n = 1; n <= max_ngram; ++n) {
        const std::size_t total =
            c >= static_cast<std::size_t>(n) ? c - static_cast<std::size_t>(n) + 1 : 0;
        double matched = 0.0;
        if (total > 0) {
            for (const auto& [gram, count] : hyp_grams[static_cast<std::size_t>(n - 1)])
                matched += static_cast<double>(std::min(count, clipped(n, gram)));
        }
        const double p_n = (total == 0 || matched == 0.0)
                               ? kBleuEpsilon
                               : matched / static_cast<double>(total);
        log_score += weight * std::log(p_n);
    }
    std::size_t best_r = ref_lens.front();
    for (std::size_t r : ref_lens) {
        const auto diff = [&](std::size_t len) {
            return len > c ? len - c : c - len;
        };
        if (diff(r) < diff(best_r) || (diff(r) == diff(best_r) && r < best_r))
            best_r = r;
    }
    const double bp =
        c >= best_r ? 1.0
                    : std::exp(1.0 - static_cast<double>(best_r) / static_cast<double>(c));
    return bp * std::exp(log_score);
}

/// Largest and second-largest per-sample counts of one n-gram, with the owner
/// of the largest. max over all samples j != i is then best (or second when i
/// owns best), which makes all-references clipping O(own grams) instead of
/// O(own grams * samples).
struct Top2Counts {
    std::size_t best = 0;
    std::size_t second = 0;
    std::size_t owner = static_cast<std::size_t>(-1);
};

}  // namespace

double self_bleu(const std::vector<Sample>& samples, int max_ngram,
                 std::size_t ref_count) {
    if (samples.size() < 2)
        throw ParameterError("self_bleu: need at least 2 samples");
    if (max_ngram != 4 && max_ngram != 5)
        throw ParameterError("self_bleu: max_ngram must be 4 or 5");
    const std::size_t n = samples.size();

    std::vector<std::vector<GramCounts>> grams(n);
    std::vector<std::size_t> lens(n);
    for (std::size_t i = 0; i < n; ++i) {
        grams[i] = build_gram_counts(samples[i].tokens, max_ngram);
        lens[i] = samples[i].tokens.size();
    }

    // All-references mode: precompute the global top-2 count table per n.
    std::vector<std::map<std::vector<TokenId>, Top2Counts>> top2;
    if (ref_count == 0) {
        top2.resize(static_cast<std::size_t>(max_ngram));
        for (std::size_t j = 0; j < n; ++j) {
            for (int g = 1; g <= max_ngram; ++g) {
                for (const auto& [gram, count] : grams[j][static_cast<std::size_t>(g - 1)]) {
                    Top2Counts& t = top2[static_cast<std::size_t>(g - 1)][gram];
                    if (count > t.best) {
                        t.second = t.best;
                        t.best = count;
                        t.owner = j;
                    } else if (count > t.second) {
                        t.second = count;
                    }
                }
            }
        }
    }

    // Each hypothesis index is scored independently into its own slot and the
    // slots are reduced in index order, so the thread schedule cannot change
    // the result.
    std::vector<double> scores(n, 0.0);
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            if (ref_count == 0) {
                std::vector<std::size_t> ref_lens;
                ref_lens.reserve(n - 1);
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) ref_lens.push_back(lens[j]);
                const auto clip = [&](int g, const std::vector<TokenId>& gram) {
                    const auto& table = top2[static_cast<std::size_t>(g - 1)];
                    const auto it = table.find(gram);
                    if (it == table.end()) return std::size_t{0};
                    return it->second.owner == i ? it->second.second
                                                 : it->second.best;
                };
                scores[i] = bleu_score(lens[i], grams[i], ref_lens, max_ngram, clip);
            } else {
                std::vector<const std::vector<GramCounts>*> refs;
                std::vector<std::size_t> ref_lens;
                const std::size_t take = std::min(ref_count, n - 1);
                for (std::size_t t = 1; refs.size() < take; ++t) {
                    const std::size_t j = (i + t) % n;
                    if (j == i) continue;
                    refs.push_back(&grams[j]);
                    ref_lens.push_back(lens[j]);
                }
                const auto clip = [&](int g, const std::vector<TokenId>& gram) {
                    std::size_t best = 0;
                    for (const auto* ref : refs) {
                        const auto& counts = (*ref)[static_cast<std::size_t>(g - 1)];
                        const auto it = counts.find(gram);
                        if (it != counts.end()) best = std::max(best, it->second);
                    }
                    return best;
                };
                scores[i] = bleu_score(lens[i], grams[i], ref_lens, max_ngram, clip);
            }
        }
    };
    const std::size_t hw = std::thread::hardware_concurrency();
    const std::size_t nthreads = std::max<std::size_t>(1, std::min(hw == 0 ? 1 : hw, n));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double total = 0.0;
    for (double s : scores) total += s;
    return total / static_cast<double>(n);
}

double perplexity(const ToyModel& model, const std::vector<Sample>& samples) {
    double total_nll = 0.0;
    std::size_t tokens_scored = 0;
    for (const auto& sample : samples) {
        std::vector<TokenId> context = sample.prompt;
        for (TokenId tok : sample.tokens) {
            const Distribution dist = model.next(context);
            const double p = dist.prob_of(tok);
            if (p <= 0.0) {
                throw NumericError(
                    "perplexity: token has zero probability under the model "
                    "(infinite perplexity)");
            }
            total_nll -= std::log(p);
            context.push_back(tok);
            ++tokens_scored;
        }
    }
    if (tokens_scored == 0)
        throw ParameterError("perplexity: no tokens to score");
    return std::exp(total_nll / static_cast<double>(tokens_scored));
}

}  // namespace iqrip
