#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "iqrip/common.hpp"
#include "iqrip/distribution.hpp"
#include "iqrip/filters.hpp"
#include "iqrip/iqr_ip.hpp"
#include "iqrip/manifest.hpp"
#include "iqrip/metrics.hpp"
#include "iqrip/toy_lm.hpp"
#include "iqrip/variance_bounds.hpp"

namespace py = pybind11;

using namespace iqrip;

namespace {

std::vector<Sample> samples_from_token_lists(
    const std::vector<std::vector<TokenId>>& token_lists) {
    std::vector<Sample> samples(token_lists.size());
    for (std::size_t i = 0; i < token_lists.size(); ++i)
        samples[i].tokens = token_lists[i];
    return samples;
}

}  // namespace

PYBIND11_MODULE(iqrip_py, m) {
    m.doc() = "IQR inverse-probability decoding toolkit";

    py::register_exception<ParameterError>(m, "ParameterError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    // ---- distributions -----------------------------------------------------
    py::class_<Distribution>(m, "Distribution")
        .def(py::init([](std::vector<double> weights, std::vector<TokenId> ids) {
                 return normalize(weights, ids);
             }),
             py::arg("weights"), py::arg("ids"))
        .def_readonly("ids", &Distribution::ids)
        .def_readonly("probs", &Distribution::probs)
        .def("prob_of", &Distribution::prob_of)
        .def("index_of", &Distribution::index_of)
        .def("__len__", &Distribution::size);

    m.def("normalize", &normalize, py::arg("weights"), py::arg("ids"));
    m.def("quantile",
          py::overload_cast<const std::vector<double>&, double>(&quantile),
          py::arg("values"), py::arg("q"));
    m.def("entropy", &entropy, py::arg("dist"));

    // ---- filters -----------------------------------------------------------
    py::class_<CandidateSet>(m, "CandidateSet")
        .def(py::init([](std::vector<TokenId> ids) {
                 return CandidateSet{std::move(ids)};
             }),
             py::arg("ids"))
        .def_readonly("ids", &CandidateSet::ids)
        .def("contains", &CandidateSet::contains)
        .def("__len__", &CandidateSet::size);

    m.def("top_k_set", &top_k_set, py::arg("dist"), py::arg("k"));
    m.def("top_p_set", &top_p_set, py::arg("dist"), py::arg("p"));
    m.def("top1ctrl_set", &top1ctrl_set, py::arg("dist"), py::arg("n"));
    m.def("joint_filter", &joint_filter, py::arg("dist"), py::arg("k"), py::arg("p"));
    m.def("dynamic_prune", &dynamic_prune, py::arg("partition"), py::arg("k0"),
          py::arg("vn"));
    m.def("renormalize", &renormalize, py::arg("src"), py::arg("keep"));

    // ---- partition and permutation ------------------------------------------
    py::enum_<Band>(m, "Band")
        .value("very_high", Band::very_high)
        .value("high", Band::high)
        .value("medium", Band::medium)
        .value("low", Band::low)
        .value("very_low", Band::very_low);

    py::class_<IqrPartition>(m, "IqrPartition")
        .def_readonly("q1", &IqrPartition::q1)
        .def_readonly("q3", &IqrPartition::q3)
        .def_readonly("iqr", &IqrPartition::iqr)
        .def_readonly("rho", &IqrPartition::rho)
        .def_readonly("ids", &IqrPartition::ids)
        .def_readonly("bands", &IqrPartition::bands)
        .def("ids_in", &IqrPartition::ids_in)
        .def("band_of", &IqrPartition::band_of)
        .def("very_high", &IqrPartition::very_high)
        .def("very_high_or_high", &IqrPartition::very_high_or_high);

    m.def("iqr_partition", &iqr_partition, py::arg("p_fil"), py::arg("rho"));
    m.def("inverse_permute", &inverse_permute, py::arg("p_fil"),
          py::arg("very_high"));

    py::class_<SamplerConfig>(m, "SamplerConfig")
        .def(py::init<>())
        .def_readwrite("p", &SamplerConfig::p)
        .def_readwrite("k", &SamplerConfig::k)
        .def_readwrite("n", &SamplerConfig::n)
        .def_readwrite("rho", &SamplerConfig::rho)
        .def_readwrite("seed", &SamplerConfig::seed)
        .def_readwrite("max_len", &SamplerConfig::max_len)
        .def("validate", &SamplerConfig::validate);

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("filtered", &StepResult::filtered)
        .def_readonly("permuted", &StepResult::permuted)
        .def_readonly("partition", &StepResult::partition)
        .def_readonly("k1", &StepResult::k1);

    m.def("iqr_ip_step", &iqr_ip_step, py::arg("raw"), py::arg("cfg"),
          py::arg("repartition_on_k1") = false);
    m.def("iqr_ip_step_detail", &iqr_ip_step_detail, py::arg("raw"), py::arg("cfg"),
          py::arg("repartition_on_k1") = false);

    // ---- variance bound ------------------------------------------------------
    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("z_p", &BoundReport::z_p)
        .def_readonly("m", &BoundReport::m)
        .def_readonly("kl", &BoundReport::kl)
        .def_readonly("tv", &BoundReport::tv)
        .def_readonly("bound", &BoundReport::bound)
        .def_readonly("satisfied", &BoundReport::satisfied);

    m.def("tv_distance", &tv_distance, py::arg("p"), py::arg("q"));
    m.def("kl_divergence", &kl_divergence, py::arg("p_ref"), py::arg("p_fil"));
    m.def("corollary_bound", &corollary_bound, py::arg("p_fil"),
          py::arg("very_high"), py::arg("p_ref"));

    // ---- metrics ---------------------------------------------------------------
    py::class_<LoopSpan>(m, "LoopSpan")
        .def_readonly("sample_index", &LoopSpan::sample_index)
        .def_readonly("start", &LoopSpan::start)
        .def_readonly("end", &LoopSpan::end);

    m.def("h_rep", &h_rep, py::arg("window"));
    m.def("sample_h_rep", &sample_h_rep, py::arg("tokens"), py::arg("window_len"));
    m.def("detect_loops", &detect_loops, py::arg("tokens"),
          py::arg("window_len") = 200, py::arg("threshold") = 2.0);
    m.def(
        "zipf_coefficient",
        [](const std::vector<std::vector<TokenId>>& token_lists) {
            return zipf_coefficient(samples_from_token_lists(token_lists));
        },
        py::arg("token_lists"));
    m.def(
        "self_bleu",
        [](const std::vector<std::vector<TokenId>>& token_lists, int max_ngram,
           std::size_t ref_count) {
            return self_bleu(samples_from_token_lists(token_lists), max_ngram,
                             ref_count);
        },
        py::arg("token_lists"), py::arg("max_ngram") = 4, py::arg("ref_count") = 0);

    // ---- toy model -----------------------------------------------------------
    py::enum_<Method>(m, "Method")
        .value("iqr_ip", Method::iqr_ip)
        .value("nucleus", Method::nucleus)
        .value("top_k", Method::top_k)
        .value("pure", Method::pure);

    py::class_<ToyModel>(m, "ToyModel")
        .def_readonly("order", &ToyModel::order)
        .def_readonly("alpha", &ToyModel::alpha)
        .def_readonly("backoff_lambda", &ToyModel::backoff_lambda)
        .def_readonly("vocab", &ToyModel::vocab)
        .def_readonly("default_prompt", &ToyModel::default_prompt)
        .def_property_readonly("vocab_size", &ToyModel::vocab_size)
        .def("next", &ToyModel::next, py::arg("context"))
        .def("ids_for", &ToyModel::ids_for, py::arg("words"))
        .def("word_of", &ToyModel::word_of, py::arg("id"))
        .def("to_json", &ToyModel::to_json)
        .def_static("from_json", &ToyModel::from_json, py::arg("text"))
        .def("save", &ToyModel::save, py::arg("path"))
        .def_static("load", &ToyModel::load, py::arg("path"));

    m.def("tokenize", &tokenize, py::arg("text"), py::arg("lowercase") = true);
    m.def("train_ngram", &train_ngram, py::arg("corpus"), py::arg("order") = 3,
          py::arg("alpha") = 0.01, py::arg("backoff_lambda") = 0.8);

    py::class_<Sample>(m, "Sample")
        .def_readonly("prompt", &Sample::prompt)
        .def_readonly("tokens", &Sample::tokens)
        .def_readonly("step_logprobs", &Sample::step_logprobs);

    py::class_<GenerationRecord>(m, "GenerationRecord")
        .def_readonly("sample", &GenerationRecord::sample)
        .def_readonly("config", &GenerationRecord::config)
        .def_readonly("method", &GenerationRecord::method)
        .def_readonly("step_logprobs_permuted",
                      &GenerationRecord::step_logprobs_permuted);

    m.def("generate", &generate, py::arg("model"), py::arg("cfg"), py::arg("method"),
          py::arg("prompt"), py::arg("record_dists") = true);

    m.def(
        "perplexity",
        [](const ToyModel& model,
           const std::vector<std::pair<std::vector<TokenId>, std::vector<TokenId>>>&
               prompted_samples) {
            std::vector<Sample> samples(prompted_samples.size());
            for (std::size_t i = 0; i < prompted_samples.size(); ++i) {
                samples[i].prompt = prompted_samples[i].first;
                samples[i].tokens = prompted_samples[i].second;
            }
            return perplexity(model, samples);
        },
        py::arg("model"), py::arg("prompted_samples"),
        "Perplexity of (prompt, tokens) pairs under the model.");

    m.def("fnv1a64_file", &fnv1a64_file, py::arg("path"));
}
