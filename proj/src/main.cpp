#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iqrip/common.hpp"
#include "iqrip/distribution.hpp"
#include "iqrip/iqr_ip.hpp"
#include "iqrip/manifest.hpp"
#include "iqrip/metrics.hpp"
#include "iqrip/toy_lm.hpp"
#include "iqrip/variance_bounds.hpp"

namespace {

using iqrip::DataError;
using iqrip::Distribution;
using iqrip::GenerationRecord;
using iqrip::MetricsReport;
using iqrip::NumericError;
using iqrip::ParameterError;
using iqrip::Sample;
using iqrip::SamplerConfig;
using iqrip::TokenId;
using iqrip::ToyModel;
using nlohmann::ordered_json;

/// Shortest round-trip decimal form, shared by JSON and TSV output so both
/// are deterministic.
std::string fmt_double(double v) { return ordered_json(v).dump(); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open output file for writing: " + path);
    return out;
}

// ---------------------------------------------------------------------------
// Sample line (de)serialization. One JSON object per line; `tokens` is the
// only required field when reading, so externally produced corpora are
// accepted.
// ---------------------------------------------------------------------------

std::string record_to_line(const GenerationRecord& rec, bool with_dists) {
    ordered_json j;
    j["method"] = iqrip::method_name(rec.method);
    j["seed"] = rec.config.seed;
    j["prompt"] = rec.sample.prompt;
    j["tokens"] = rec.sample.tokens;
    j["logprobs"] = rec.sample.step_logprobs;
    j["logprobs_permuted"] = rec.step_logprobs_permuted;
    if (with_dists) {
        ordered_json dists = ordered_json::array();
        for (const auto& d : rec.sample.step_distributions) {
            ordered_json jd;
            jd["ids"] = d.ids;
            jd["probs"] = d.probs;
            dists.push_back(std::move(jd));
        }
        j["dists"] = std::move(dists);
    }
    return j.dump();
}

Sample sample_from_line(const std::string& line, std::size_t line_no) {
    const std::string where = "samples line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(where + e.what());
    }
    try {
        if (!j.contains("tokens")) throw DataError(where + "missing 'tokens'");
        Sample s;
        s.tokens = j.at("tokens").get<std::vector<TokenId>>();
        if (j.contains("prompt"))
            s.prompt = j.at("prompt").get<std::vector<TokenId>>();
        if (j.contains("logprobs")) {
            s.step_logprobs = j.at("logprobs").get<std::vector<double>>();
            if (s.step_logprobs.size() != s.tokens.size())
                throw DataError(where + "'logprobs' length differs from 'tokens'");
        }
        if (j.contains("dists")) {
            const auto& dists = j.at("dists");
            if (dists.size() != s.tokens.size())
                throw DataError(where + "'dists' length differs from 'tokens'");
            for (const auto& jd : dists) {
                s.step_distributions.push_back(
                    iqrip::normalize(jd.at("probs").get<std::vector<double>>(),
                                     jd.at("ids").get<std::vector<TokenId>>()));
            }
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(where + e.what());
    }
}

std::vector<Sample> read_samples(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open samples file: " + path);
    std::vector<Sample> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        samples.push_back(sample_from_line(line, line_no));
    }
    if (samples.empty()) throw DataError("no samples in file: " + path);
    return samples;
}

ordered_json report_to_json(const MetricsReport& report) {
    ordered_json j;
    j["perplexity"] = report.perplexity;
    j["self_bleu4"] = report.self_bleu4;
    j["self_bleu5"] = report.self_bleu5;
    j["zipf"] = report.zipf;
    j["h_rep"] = report.h_rep;
    ordered_json spans = ordered_json::array();
    for (const auto& span : report.loop_spans)
        spans.push_back(ordered_json::array({span.sample_index, span.start, span.end}));
    j["loop_spans"] = std::move(spans);
    return j;
}

ordered_json config_to_json(const SamplerConfig& cfg) {
    ordered_json j;
    j["p"] = cfg.p;
    j["k"] = cfg.k;
    j["n"] = cfg.n;
    j["rho"] = cfg.rho;
    j["seed"] = cfg.seed;
    j["max_len"] = cfg.max_len;
    return j;
}

/// Run the per-index work function over 0..count-1 on a small thread pool.
/// Each index writes only its own slot in the caller's buffers, so the
/// schedule cannot affect the result.
template <typename Fn>
void parallel_indexed(std::size_t count, Fn&& fn) {
    if (count == 0) return;
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    const std::size_t hw = std::thread::hardware_concurrency();
    const std::size_t nthreads =
        std::max<std::size_t>(1, std::min<std::size_t>(hw == 0 ? 1 : hw, count));
    if (nthreads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Subcommand argument bundles.
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string corpus;
    std::string out;
    int order = 3;
    double alpha = 0.01;
    double lambda = 0.8;
    bool no_lowercase = false;
};

struct GenerateArgs {
    std::string model;
    std::string out;
    std::string method = "iqr-ip";
    std::string prompt;
    SamplerConfig cfg;
    std::size_t count = 1;
    bool record_dists = false;
};

struct AnalyzeArgs {
    std::string samples;
    std::string model;
    std::string out;
    std::size_t window = 200;
    bool emit_plot_data = false;
};

struct BoundArgs {
    std::string in;
    std::string out;
    double rho = 1.5;
};

struct AblateArgs {
    std::string model;
    std::string outdir;
    std::string param = "rho";
    std::vector<double> values;
    std::size_t samples = 48;
    std::uint64_t seed = 0;
    std::size_t max_len = 200;
    std::size_t window = 200;
};

std::vector<std::string> argv_to_command(int argc, char** argv) {
    return std::vector<std::string>(argv, argv + argc);
}

// ---------------------------------------------------------------------------
// Handlers.
// ---------------------------------------------------------------------------

int run_train(const TrainArgs& args, const std::vector<std::string>& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string text = read_text_file(args.corpus);
    const auto words = iqrip::tokenize(text, !args.no_lowercase);
    const ToyModel model =
        iqrip::train_ngram(words, args.order, args.alpha, args.lambda);
    model.save(args.out);

    iqrip::RunManifest manifest;
    manifest.command = command;
    manifest.config = {{"corpus", args.corpus},
                       {"order", args.order},
                       {"alpha", args.alpha},
                       {"lambda", args.lambda},
                       {"lowercase", !args.no_lowercase},
                       {"out", args.out}};
    manifest.inputs.emplace_back(args.corpus,
                                 iqrip::hex64(iqrip::fnv1a64_file(args.corpus)));
    manifest.outputs.push_back(args.out);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(args.out + ".manifest.json");

    std::cout << "trained model: vocab " << model.vocab_size() << ", tokens "
              << model.total_tokens << " -> " << args.out << "\n";
    return 0;
}

int run_generate(const GenerateArgs& args, const std::vector<std::string>& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const ToyModel model = ToyModel::load(args.model);
    const iqrip::Method method = iqrip::method_from_name(args.method);
    args.cfg.validate();

    std::vector<TokenId> prompt = model.default_prompt;
    if (!args.prompt.empty())
        prompt = model.ids_for(iqrip::tokenize(args.prompt, true));

    std::vector<std::string> lines(args.count);
    parallel_indexed(args.count, [&](std::size_t i) {
        SamplerConfig cfg = args.cfg;
        cfg.seed = args.cfg.seed + i;  // stable per-sample streams
        const GenerationRecord rec =
            iqrip::generate(model, cfg, method, prompt, args.record_dists);
        lines[i] = record_to_line(rec, args.record_dists);
    });
    auto out = open_output(args.out);
    for (const auto& line : lines) out << line << '\n';
    out.close();

    iqrip::RunManifest manifest;
    manifest.command = command;
    manifest.config = {{"model", args.model},
                       {"method", args.method},
                       {"sampler", config_to_json(args.cfg)},
                       {"count", args.count},
                       {"prompt", prompt},
                       {"record_dists", args.record_dists},
                       {"out", args.out}};
    manifest.inputs.emplace_back(args.model,
                                 iqrip::hex64(iqrip::fnv1a64_file(args.model)));
    manifest.outputs.push_back(args.out);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(args.out + ".manifest.json");
    return 0;
}

int run_analyze(const AnalyzeArgs& args, const std::vector<std::string>& command) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Sample> samples = read_samples(args.samples);

    bool have_model = !args.model.empty();
    ToyModel model;
    if (have_model) model = ToyModel::load(args.model);

    MetricsReport report;
    if (have_model) {
        report.perplexity = iqrip::perplexity(model, samples);
    } else {
        // No model available: fall back to the generation-time scores.
        double total = 0.0;
        std::size_t n = 0;
        for (const auto& s : samples) {
            if (s.step_logprobs.size() != s.tokens.size())
                throw DataError(
                    "no model given and samples lack per-token logprobs; pass "
                    "--model or set IQRIP_MODEL");
            for (double lp : s.step_logprobs) total += lp;
            n += s.tokens.size();
        }
        if (n == 0) throw DataError("samples contain no tokens");
        report.perplexity = std::exp(-total / static_cast<double>(n));
    }
    report.self_bleu4 = samples.size() >= 2 ? iqrip::self_bleu(samples, 4, 0) : 0.0;
    report.self_bleu5 = samples.size() >= 2 ? iqrip::self_bleu(samples, 5, 0) : 0.0;
    report.zipf = iqrip::zipf_coefficient(samples);
    double h_sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        h_sum += iqrip::sample_h_rep(samples[i].tokens, args.window);
        auto spans = iqrip::detect_loops(samples[i].tokens, args.window);
        for (auto& span : spans) {
            span.sample_index = i;
            report.loop_spans.push_back(span);
        }
    }
    report.h_rep = h_sum / static_cast<double>(samples.size());

    auto out = open_output(args.out);
    out << report_to_json(report).dump(2) << '\n';
    out.close();

    std::vector<std::string> extra_outputs;
    if (args.emit_plot_data) {
        // Per-window entropy series (the loop-detection curve).
        const std::string hrep_path = args.out + ".hrep.tsv";
        auto hrep_out = open_output(hrep_path);
        hrep_out << "sample\twindow_start\th_rep\n";
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto& toks = samples[i].tokens;
            if (toks.size() <= args.window) {
                hrep_out << i << "\t0\t" << fmt_double(iqrip::h_rep(toks)) << "\n";
                continue;
            }
            for (std::size_t s = 0; s + args.window <= toks.size(); ++s) {
                const std::vector<TokenId> win(
                    toks.begin() + static_cast<std::ptrdiff_t>(s),
                    toks.begin() + static_cast<std::ptrdiff_t>(s + args.window));
                hrep_out << i << "\t" << s << "\t" << fmt_double(iqrip::h_rep(win))
                         << "\n";
            }
        }
        hrep_out.close();
        extra_outputs.push_back(hrep_path);

        // Trajectory series for the samples that carry step distributions.
        const std::string traj_path = args.out + ".trajectories.tsv";
        auto traj_out = open_output(traj_path);
        traj_out << "word_id\tword\tappearance\tprob\trank\tentropy\n";
        std::vector<Sample> with_dists;
        for (const auto& s : samples)
            if (!s.step_distributions.empty() &&
                s.step_distributions.size() == s.tokens.size())
                with_dists.push_back(s);
        if (!with_dists.empty()) {
            const auto trajectories =
                iqrip::extract_trajectories(with_dists, args.window);
            for (const auto& traj : trajectories) {
                const std::string word =
                    have_model ? model.word_of(traj.word) : std::string();
                for (const auto& pt : traj.points) {
                    traj_out << traj.word << "\t" << word << "\t" << pt.appearance
                             << "\t" << fmt_double(pt.prob) << "\t" << pt.rank
                             << "\t" << fmt_double(pt.entropy) << "\n";
                }
            }
        }
        traj_out.close();
        extra_outputs.push_back(traj_path);
    }

    iqrip::RunManifest manifest;
    manifest.command = command;
    manifest.config = {{"samples", args.samples},
                       {"model", args.model},
                       {"window", args.window},
                       {"emit_plot_data", args.emit_plot_data},
                       {"out", args.out}};
    manifest.inputs.emplace_back(args.samples,
                                 iqrip::hex64(iqrip::fnv1a64_file(args.samples)));
    if (have_model)
        manifest.inputs.emplace_back(args.model,
                                     iqrip::hex64(iqrip::fnv1a64_file(args.model)));
    manifest.outputs.push_back(args.out);
    for (const auto& p : extra_outputs) manifest.outputs.push_back(p);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(args.out + ".manifest.json");
    return 0;
}

int run_bound(const BoundArgs& args, const std::vector<std::string>& command) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(args.rho > 0.0)) throw ParameterError("--rho must be > 0");
    std::ifstream in(args.in, std::ios::binary);
    if (!in) throw DataError("cannot open distributions file: " + args.in);

    auto out = open_output(args.out);
    std::string line;
    std::size_t line_no = 0;
    std::size_t reports = 0;
    std::size_t violations = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Distribution dist;
        try {
            dist = iqrip::distribution_from_json_line(line);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        const auto partition = iqrip::iqr_partition(dist, args.rho);
        const iqrip::BoundReport rep =
            iqrip::corollary_bound(dist, partition.very_high(), dist);
        ordered_json j;
        j["line"] = line_no;
        j["z_p"] = rep.z_p;
        j["m"] = rep.m;
        j["kl"] = rep.kl;
        j["tv"] = rep.tv;
        j["bound"] = rep.bound;
        j["slack"] = rep.bound - rep.tv * rep.tv;
        j["satisfied"] = rep.satisfied;
        out << j.dump() << '\n';
        ++reports;
        if (!rep.satisfied) ++violations;
    }
    if (reports == 0) throw DataError("no distributions in file: " + args.in);
    ordered_json summary;
    summary["lines"] = reports;
    summary["violations"] = violations;
    out << summary.dump() << '\n';
    out.close();

    iqrip::RunManifest manifest;
    manifest.command = command;
    manifest.config = {{"in", args.in}, {"rho", args.rho}, {"out", args.out}};
    manifest.inputs.emplace_back(args.in,
                                 iqrip::hex64(iqrip::fnv1a64_file(args.in)));
    manifest.outputs.push_back(args.out);
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(args.out + ".manifest.json");
    return 0;
}

int run_ablate(const AblateArgs& args, const std::vector<std::string>& command) {
    const auto t0 = std::chrono::steady_clock::now();
    if (args.values.empty()) throw ParameterError("--values must list at least one value");
    const ToyModel model = ToyModel::load(args.model);

    std::vector<iqrip::ExperimentCell> grid;
    for (std::size_t i = 0; i < args.values.size(); ++i) {
        const double value = args.values[i];
        iqrip::ExperimentCell cell;
        cell.method = iqrip::Method::iqr_ip;
        cell.config.max_len = args.max_len;
        // Deterministic per-cell seed block: cells never share sample seeds.
        cell.config.seed = args.seed + i * 100000;
        if (args.param == "rho") {
            cell.config.rho = value;
        } else if (args.param == "n") {
            cell.config.n = value;
        } else if (args.param == "p") {
            cell.config.p = value;
        } else if (args.param == "k") {
            if (value < 1.0)
                throw ParameterError("--values for k must be >= 1");
            cell.config.k = static_cast<std::size_t>(value);
        } else {
            throw ParameterError("--param must be one of rho, n, p, k");
        }
        cell.label = args.param + "=" + fmt_double(value);
        grid.push_back(std::move(cell));
    }

    std::filesystem::create_directories(args.outdir);
    const auto results = iqrip::run_experiment(model, grid, args.samples,
                                               model.default_prompt, args.window);

    std::vector<std::string> outputs;
    const std::string table_path = args.outdir + "/results.tsv";
    auto table = open_output(table_path);
    table << "param\tvalue\tperplexity\tself_bleu4\tself_bleu5\tzipf\th_rep\tloop_"
             "spans\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& res = results[i];
        const std::string cell_path =
            args.outdir + "/cell-" + std::to_string(i) + ".report.json";
        ordered_json jc;
        jc["label"] = res.cell.label;
        jc["method"] = iqrip::method_name(res.cell.method);
        jc["sampler"] = config_to_json(res.cell.config);
        jc["samples"] = args.samples;
        jc["report"] = report_to_json(res.report);
        auto cell_out = open_output(cell_path);
        cell_out << jc.dump(2) << '\n';
        cell_out.close();
        outputs.push_back(cell_path);

        table << args.param << "\t" << fmt_double(args.values[i]) << "\t"
              << fmt_double(res.report.perplexity) << "\t"
              << fmt_double(res.report.self_bleu4) << "\t"
              << fmt_double(res.report.self_bleu5) << "\t"
              << fmt_double(res.report.zipf) << "\t"
              << fmt_double(res.report.h_rep) << "\t"
              << res.report.loop_spans.size() << "\n";
    }
    table.close();
    outputs.push_back(table_path);

    iqrip::RunManifest manifest;
    manifest.command = command;
    ordered_json jvalues = ordered_json::array();
    for (double v : args.values) jvalues.push_back(v);
    manifest.config = {{"model", args.model},   {"param", args.param},
                       {"values", jvalues},     {"samples", args.samples},
                       {"seed", args.seed},     {"max_len", args.max_len},
                       {"window", args.window}, {"outdir", args.outdir}};
    manifest.inputs.emplace_back(args.model,
                                 iqrip::hex64(iqrip::fnv1a64_file(args.model)));
    manifest.outputs = outputs;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(args.outdir + "/manifest.json");
    return 0;
}

void print_error_json(const char* kind, const std::string& message) {
    ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << std::endl;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParameterError& e) {
        print_error_json("parameter", e.what());
        return 1;
    } catch (const DataError& e) {
        print_error_json("data", e.what());
        return 2;
    } catch (const NumericError& e) {
        print_error_json("numeric", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error_json("internal", e.what());
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IQR inverse-probability decoding toolkit"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train the bundled n-gram toy model");
    train->add_option("--corpus", train_args.corpus, "UTF-8 text corpus")->required();
    train->add_option("--order", train_args.order, "n-gram order (>= 2)");
    train->add_option("--alpha", train_args.alpha, "add-alpha smoothing constant");
    train->add_option("--lambda", train_args.lambda, "interpolation weight in (0,1)");
    train->add_flag("--no-lowercase", train_args.no_lowercase,
                    "keep corpus capitalization");
    train->add_option("--out", train_args.out, "model output path")->required();

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "Sample from a trained model");
    gen->add_option("--model", gen_args.model, "model path")
        ->envname("IQRIP_MODEL")
        ->required();
    gen->add_option("--method", gen_args.method,
                    "iqr-ip | nucleus | top-k | pure");
    gen->add_option("--top-p", gen_args.cfg.p, "nucleus mass in (0,1]");
    gen->add_option("--top-k", gen_args.cfg.k, "top-k cutoff (>= 1)");
    gen->add_option("--top1ctrl-n", gen_args.cfg.n, "relative-distance divisor (>= 1)");
    gen->add_option("--rho", gen_args.cfg.rho, "IQR spread coefficient (> 0)");
    gen->add_option("--seed", gen_args.cfg.seed, "base seed; sample i uses seed+i");
    gen->add_option("--count", gen_args.count, "number of samples");
    gen->add_option("--max-len", gen_args.cfg.max_len, "tokens per sample");
    gen->add_option("--prompt", gen_args.prompt,
                    "prompt text (default: the model's stored prompt)");
    gen->add_flag("--record-dists", gen_args.record_dists,
                  "store every raw step distribution in the samples");
    gen->add_option("--out", gen_args.out, "samples output path (JSONL)")->required();

    AnalyzeArgs an_args;
    auto* an = app.add_subcommand("analyze", "Evaluate a samples file");
    an->add_option("--samples", an_args.samples, "samples JSONL path")->required();
    an->add_option("--model", an_args.model, "model path (for perplexity)")
        ->envname("IQRIP_MODEL");
    an->add_option("--window", an_args.window, "entropy window length");
    an->add_flag("--emit-plot-data", an_args.emit_plot_data,
                 "write h_rep and trajectory series files next to the report");
    an->add_option("--out", an_args.out, "report output path")->required();

    BoundArgs bound_args;
    auto* bound = app.add_subcommand(
        "bound", "Check the permutation variance bound on a distribution stream");
    bound->add_option("--in", bound_args.in, "distribution JSONL path")->required();
    bound->add_option("--rho", bound_args.rho, "IQR spread coefficient (> 0)");
    bound->add_option("--out", bound_args.out, "report output path (JSONL)")
        ->required();

    AblateArgs ab_args;
    auto* ab = app.add_subcommand("ablate", "Parameter sweep with full metrics");
    ab->add_option("--model", ab_args.model, "model path")
        ->envname("IQRIP_MODEL")
        ->required();
    ab->add_option("--param", ab_args.param, "swept parameter: rho | n | p | k");
    ab->add_option("--values", ab_args.values, "swept values")
        ->required()
        ->delimiter(',');
    ab->add_option("--samples", ab_args.samples, "samples per cell");
    ab->add_option("--seed", ab_args.seed, "base seed; cell i uses seed+i*100000");
    ab->add_option("--max-len", ab_args.max_len, "tokens per sample");
    ab->add_option("--window", ab_args.window, "entropy window length");
    ab->add_option("--outdir", ab_args.outdir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const auto command = argv_to_command(argc, argv);
    if (app.got_subcommand(train))
        return guarded([&]() { return run_train(train_args, command); });
    if (app.got_subcommand(gen))
        return guarded([&]() { return run_generate(gen_args, command); });
    if (app.got_subcommand(an))
        return guarded([&]() { return run_analyze(an_args, command); });
    if (app.got_subcommand(bound))
        return guarded([&]() { return run_bound(bound_args, command); });
    if (app.got_subcommand(ab))
        return guarded([&]() { return run_ablate(ab_args, command); });
    return 1;
}
