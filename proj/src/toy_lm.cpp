#include "iqrip/toy_lm.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "iqrip/common.hpp"
#include "iqrip/filters.hpp"

namespace iqrip {

std::string method_name(Method method) {
    switch (method) {
        case Method::iqr_ip: return "iqr-ip";
        case Method::nucleus: return "nucleus";
        case Method::top_k: return "top-k";
        case Method::pure: return "pure";
    }
    throw ParameterError("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "iqr-ip") return Method::iqr_ip;
    if (name == "nucleus") return Method::nucleus;
    if (name == "top-k") return Method::top_k;
    if (name == "pure") return Method::pure;
    throw ParameterError("unknown method '" + name +
                         "' (expected iqr-ip, nucleus, top-k or pure)");
}

std::vector<std::string> tokenize(const std::string& text, bool lowercase) {
    std::vector<std::string> words;
    std::istringstream in(text);
    std::string word;
    while (in >> word) {
        if (lowercase) {
            for (char& c : word)
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        words.push_back(std::move(word));
        word.clear();
    }
    return words;
}

void ToyModel::rebuild_caches() {
    const std::size_t v = vocab.size();
    unigram_probs_.assign(v, 0.0);
    all_ids_.resize(v);
    const double denom =
        static_cast<double>(total_tokens) + alpha * static_cast<double>(v);
    for (std::size_t i = 0; i < v; ++i) {
        unigram_probs_[i] = (static_cast<double>(unigram[i]) + alpha) / denom;
        all_ids_[i] = static_cast<TokenId>(i);
    }
}

Distribution ToyModel::next(const std::vector<TokenId>& context) const {
    const std::size_t v = vocab.size();
    std::vector<double> probs = unigram_probs_;
    const std::size_t max_ctx =
        std::min(context.size(), static_cast<std::size_t>(order - 1));
    for (std::size_t j = 1; j <= max_ctx; ++j) {
        const std::vector<TokenId> key(context.end() - static_cast<std::ptrdiff_t>(j),
                                       context.end());
        const Level& level = levels[j - 1];
        const auto it = level.find(key);
        if (it == level.end()) continue;  // unseen context: this level is skipped
        const ContextCounts& cc = it->second;
        const double denom =
            static_cast<double>(cc.total) + alpha * static_cast<double>(v);
        const double unseen = alpha / denom;
        for (std::size_t t = 0; t < v; ++t)
            probs[t] = backoff_lambda * unseen + (1.0 - backoff_lambda) * probs[t];
        const double bump = backoff_lambda / denom;
        for (const auto& [tok, count] : cc.next)
            probs[static_cast<std::size_t>(tok)] += bump * static_cast<double>(count);
    }
    return normalize(probs, all_ids_);
}

std::vector<TokenId> ToyModel::ids_for(const std::vector<std::string>& words) const {
    std::vector<TokenId> ids;
    ids.reserve(words.size());
    for (const auto& w : words) {
        const auto it = word_ids.find(w);
        if (it == word_ids.end())
            throw ParameterError("word not in vocabulary: '" + w + "'");
        ids.push_back(it->second);
    }
    return ids;
}

const std::string& ToyModel::word_of(TokenId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab.size())
        throw ParameterError("token id out of range");
    return vocab[static_cast<std::size_t>(id)];
}

ToyModel train_ngram(const std::vector<std::string>& corpus, int order,
                     double alpha, double backoff_lambda) {
    if (order < 2) throw ParameterError("train_ngram: order must be >= 2");
    if (!(alpha > 0.0)) throw ParameterError("train_ngram: alpha must be > 0");
    if (!(backoff_lambda > 0.0) || !(backoff_lambda < 1.0))
        throw ParameterError("train_ngram: lambda must be in (0, 1)");
    if (corpus.size() < static_cast<std::size_t>(order))
        throw DataError("train_ngram: corpus shorter than the model order");

    ToyModel model;
    model.order = order;
    model.alpha = alpha;
    model.backoff_lambda = backoff_lambda;

    // Vocabulary ids in order of first appearance.
    std::vector<TokenId> tokens;
    tokens.reserve(corpus.size());
    for (const auto& word : corpus) {
        auto [it, inserted] = model.word_ids.try_emplace(
            word, static_cast<TokenId>(model.vocab.size()));
        if (inserted) model.vocab.push_back(word);
        tokens.push_back(it->second);
    }

    model.unigram.assign(model.vocab.size(), 0);
    for (TokenId t : tokens) model.unigram[static_cast<std::size_t>(t)] += 1;
    model.total_tokens = tokens.size();

    model.levels.resize(static_cast<std::size_t>(order - 1));
    for (std::size_t j = 1; j + 1 <= static_cast<std::size_t>(order); ++j) {
        auto& level = model.levels[j - 1];
        for (std::size_t i = j; i < tokens.size(); ++i) {
            std::vector<TokenId> key(tokens.begin() + static_cast<std::ptrdiff_t>(i - j),
                                     tokens.begin() + static_cast<std::ptrdiff_t>(i));
            auto& cc = level[std::move(key)];
            cc.next[tokens[i]] += 1;
            cc.total += 1;
        }
    }

    // Default prompt: the standard phrase when fully in vocabulary, else the
    // corpus's first sentence.
    const std::vector<std::string> phrase = {"she", "walks", "in", "beauty"};
    const bool have_phrase =
        std::all_of(phrase.begin(), phrase.end(),
                    [&](const std::string& w) { return model.word_ids.count(w) > 0; });
    if (have_phrase) {
        model.default_prompt = model.ids_for(phrase);
    } else {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            model.default_prompt.push_back(tokens[i]);
            const std::string& w = corpus[i];
            if (w == "." || w == ";" || w == "?") break;
            if (model.default_prompt.size() >= 32) break;  // pathological corpora
        }
    }

    model.rebuild_caches();
    return model;
}

std::string ToyModel::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "iqrip-toy-lm";
    j["version"] = 1;
    j["order"] = order;
    j["alpha"] = alpha;
    j["backoff_lambda"] = backoff_lambda;
    j["vocab"] = vocab;
    j["default_prompt"] = default_prompt;
    j["total_tokens"] = total_tokens;
    j["unigram"] = unigram;
    nlohmann::ordered_json jlevels = nlohmann::ordered_json::array();
    for (std::size_t li = 0; li < levels.size(); ++li) {
        nlohmann::ordered_json jlevel;
        jlevel["context_len"] = li + 1;
        nlohmann::ordered_json jctxs = nlohmann::ordered_json::array();
        for (const auto& [key, cc] : levels[li]) {  // std::map: sorted, deterministic
            nlohmann::ordered_json jc;
            jc["ctx"] = key;
            nlohmann::ordered_json jnext = nlohmann::ordered_json::array();
            for (const auto& [tok, count] : cc.next)
                jnext.push_back(nlohmann::ordered_json::array({tok, count}));
            jc["next"] = std::move(jnext);
            jctxs.push_back(std::move(jc));
        }
        jlevel["contexts"] = std::move(jctxs);
        jlevels.push_back(std::move(jlevel));
    }
    j["levels"] = std::move(jlevels);
    return j.dump();
}

ToyModel ToyModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model parse error: ") + e.what());
    }
    try {
        if (j.at("format") != "iqrip-toy-lm")
            throw DataError("model file has wrong format tag");
        if (j.at("version") != 1) throw DataError("unsupported model version");
        ToyModel model;
        model.order = j.at("order").get<int>();
        model.alpha = j.at("alpha").get<double>();
        model.backoff_lambda = j.at("backoff_lambda").get<double>();
        model.vocab = j.at("vocab").get<std::vector<std::string>>();
        model.default_prompt = j.at("default_prompt").get<std::vector<TokenId>>();
        model.total_tokens = j.at("total_tokens").get<std::size_t>();
        model.unigram = j.at("unigram").get<std::vector<std::size_t>>();
        for (std::size_t i = 0; i < model.vocab.size(); ++i)
            model.word_ids[model.vocab[i]] = static_cast<TokenId>(i);
        model.levels.resize(static_cast<std::size_t>(model.order - 1));
        for (const auto& jlevel : j.at("levels")) {
            const std::size_t li = jlevel.at("context_len").get<std::size_t>() - 1;
            if (li >= model.levels.size())
                throw DataError("model level out of range");
            for (const auto& jc : jlevel.at("contexts")) {
                ToyModel::ContextCounts cc;
                for (const auto& pair : jc.at("next")) {
                    const TokenId tok = pair.at(0).get<TokenId>();
                    const std::size_t count = pair.at(1).get<std::size_t>();
                    cc.next[tok] = count;
                    cc.total += count;
                }
                model.levels[li][jc.at("ctx").get<std::vector<TokenId>>()] =
                    std::move(cc);
            }
        }
        model.rebuild_caches();
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model parse error: ") + e.what());
    }
}

void ToyModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out << to_json() << '\n';
    if (!out) throw DataError("failed writing model file: " + path);
}

ToyModel ToyModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

GenerationRecord generate(const ToyModel& model, const SamplerConfig& cfg,
                          Method method, const std::vector<TokenId>& prompt,
                          bool record_dists) {
    cfg.validate();
    if (prompt.empty()) throw ParameterError("generate: prompt must be nonempty");

    GenerationRecord rec;
    rec.config = cfg;
    rec.method = method;
    rec.sample.prompt = prompt;
    rec.sample.tokens.reserve(cfg.max_len);
    rec.sample.step_logprobs.reserve(cfg.max_len);
    rec.step_logprobs_permuted.reserve(cfg.max_len);

    RngState rng(cfg.seed);
    std::vector<TokenId> context = prompt;
    for (std::size_t step = 0; step < cfg.max_len; ++step) {
        Distribution raw = model.next(context);
        Distribution filtered;
        Distribution sampled_from;
        switch (method) {
            case Method::iqr_ip: {
                StepResult sr = iqr_ip_step_detail(raw, cfg);
                filtered = std::move(sr.filtered);
                sampled_from = std::move(sr.permuted);
                break;
            }
            case Method::nucleus:
                filtered = renormalize(raw, top_p_set(raw, cfg.p));
                sampled_from = filtered;
                break;
            case Method::top_k:
                filtered = renormalize(raw, top_k_set(raw, cfg.k));
                sampled_from = filtered;
                break;
            case Method::pure:
                filtered = raw;
                sampled_from = raw;
                break;
        }
        const TokenId tok = sample_token(sampled_from, rng);
        rec.sample.tokens.push_back(tok);
        rec.sample.step_logprobs.push_back(std::log(filtered.prob_of(tok)));
        rec.step_logprobs_permuted.push_back(std::log(sampled_from.prob_of(tok)));
        if (record_dists) rec.sample.step_distributions.push_back(std::move(raw));
        context.push_back(tok);
    }
    return rec;
}

std::vector<CellResult> run_experiment(const ToyModel& model,
                                       const std::vector<ExperimentCell>& grid,
                                       std::size_t samples_per_cell,
                                       const std::vector<TokenId>& prompt,
                                       std::size_t window_len) {
    if (grid.empty()) throw ParameterError("run_experiment: grid must be nonempty");
    if (samples_per_cell == 0)
        throw ParameterError("run_experiment: samples_per_cell must be >= 1");

    std::vector<CellResult> results;
    results.reserve(grid.size());
    for (const auto& cell : grid) {
        // Generate the cell's corpus; each sample owns seed = cfg.seed + index
        // and lands in its own slot, so parallel order is irrelevant.
        std::vector<Sample> samples(samples_per_cell);
        std::atomic<std::size_t> cursor{0};
        const auto worker = [&]() {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= samples_per_cell) return;
                SamplerConfig cfg = cell.config;
                cfg.seed = cell.config.seed + i;
                samples[i] = generate(model, cfg, cell.method, prompt,
                                      /*record_dists=*/false)
                                 .sample;
            }
        };
        const std::size_t hw = std::thread::hardware_concurrency();
        const std::size_t nthreads =
            std::max<std::size_t>(1, std::min<std::size_t>(hw == 0 ? 1 : hw,
                                                           samples_per_cell));
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(nthreads);
            for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        MetricsReport report;
        report.perplexity = perplexity(model, samples);
        report.self_bleu4 = samples.size() >= 2 ? self_bleu(samples, 4, 0) : 0.0;
        report.self_bleu5 = samples.size() >= 2 ? self_bleu(samples, 5, 0) : 0.0;
        report.zipf = zipf_coefficient(samples);
        double h_sum = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            h_sum += sample_h_rep(samples[i].tokens, window_len);
            auto spans = detect_loops(samples[i].tokens, window_len);
            for (auto& span : spans) {
                span.sample_index = i;
                report.loop_spans.push_back(span);
            }
        }
        report.h_rep = h_sum / static_cast<double>(samples.size());
        results.push_back(CellResult{cell, std::move(report)});
    }
    return results;
}

}  // namespace iqrip
