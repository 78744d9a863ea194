#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bitextdir/corpus.hpp"
#include "bitextdir/direction.hpp"
#include "bitextdir/error.hpp"
#include "bitextdir/evalmetrics.hpp"
#include "bitextdir/pipeline.hpp"
#include "bitextdir/pseudoqe.hpp"
#include "bitextdir/ter.hpp"
#include "bitextdir/textstats.hpp"

namespace py = pybind11;
namespace bx = bitextdir;
using Tokens = std::vector<std::string>;

namespace {

bx::TokenizerConfig tokenizer(const std::string& mode, bool lowercase) {
  return {bx::parse_tokenizer_mode(mode), lowercase};
}

bx::FunctionWordList function_words(const py::object& words, const std::string& language) {
  if (words.is_none()) return bx::FunctionWordList::builtin(language);
  std::set<std::string, std::less<>> set;
  for (const auto& w : words) set.insert(py::cast<std::string>(w));
  return bx::FunctionWordList(language, std::move(set));
}

py::list tag_list(const std::vector<bx::QualityTag>& tags) {
  py::list out;
  for (auto t : tags) out.append(bx::to_string(t));
  return out;
}

py::dict score_dict(const bx::EnsembleScore& s) {
  py::dict d;
  d["p_src_side"] = s.p_src_side;
  d["p_tgt_side"] = s.p_tgt_side;
  d["p_ensemble"] = s.p_ensemble;
  d["decision"] = std::string(bx::to_string(s.decision));
  return d;
}

std::vector<int> flags(const std::vector<bool>& v) { return {v.begin(), v.end()}; }

}  // namespace

PYBIND11_MODULE(_bitextdir, m) {
  m.doc() = "Translation-direction analysis and pseudo-QE labelling";

  // Leaked on purpose: the type must outlive module teardown.
  static PyObject* error_type =
      PyErr_NewException("bitextdir._bitextdir.BitextdirError", PyExc_ValueError, nullptr);
  m.attr("BitextdirError") = py::handle(error_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const bx::Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(bx::errc_name(e.code()));
      PyErr_SetObject(error_type, inst.ptr());
    }
  });

  m.def("tokenize", [](const std::string& text, const std::string& mode, bool lowercase) {
        return bx::tokenize(text, tokenizer(mode, lowercase));
      },
      py::arg("text"), py::arg("mode") = "cjk", py::arg("lowercase") = true,
      "Split text into tokens. mode is 'cjk' (one token per CJK character) or 'whitespace'.");

  m.def("ttr", [](const Tokens& t) { return bx::compute_ttr(t); }, py::arg("tokens"));
  m.def("lexical_density",
        [](const Tokens& t, const py::object& words, const std::string& language) {
          return bx::compute_lexical_density(t, function_words(words, language));
        },
        py::arg("tokens"), py::arg("function_words") = py::none(), py::arg("language") = "en",
        "Share of tokens that are not function words. Uses the bundled list for `language` when "
        "function_words is None.");
  m.def("vocab_distribution",
        [](const Tokens& t, std::size_t max_types) {
          py::dict d;
          for (const auto& [k, v] : bx::vocab_distribution(t, max_types).probs) d[py::str(k)] = v;
          return d;
        },
        py::arg("tokens"), py::arg("max_types") = 0);
  m.def("js_divergence",
        [](const Tokens& a, const Tokens& b, std::size_t max_types) {
          return bx::js_divergence(bx::vocab_distribution(a, max_types), bx::vocab_distribution(b, max_types));
        },
        py::arg("tokens_a"), py::arg("tokens_b"), py::arg("max_types") = 0,
        "Jensen-Shannon divergence (nats) between the unigram distributions of two token lists.");
  m.def("kl_divergence",
        [](const Tokens& a, const Tokens& b, double epsilon) {
          return bx::kl_divergence(bx::vocab_distribution(a), bx::vocab_distribution(b), epsilon);
        },
        py::arg("tokens_p"), py::arg("tokens_q"), py::arg("epsilon") = 1e-6);

  m.def("levenshtein_distance", [](const Tokens& h, const Tokens& r) { return bx::levenshtein_distance(h, r); },
        py::arg("hyp"), py::arg("ref"));
  m.def("ter",
        [](const Tokens& h, const Tokens& r, std::size_t max_shift_distance, std::size_t max_shift_size) {
          const auto out = bx::ter(h, r, {max_shift_distance, max_shift_size});
          const auto tags = bx::word_tags(out.script, h.size());
          py::dict d;
          d["score"] = out.result.score;
          d["n_edits"] = out.result.n_edits;
          d["n_shifts"] = out.result.n_shifts;
          d["ref_len"] = out.result.ref_len;
          d["tgt_tags"] = tag_list(tags.tgt_tags);
          d["gap_tags"] = tag_list(tags.gap_tags);
          d["output"] = bx::apply_script(h, out.script);
          return d;
        },
        py::arg("hyp"), py::arg("ref"), py::arg("max_shift_distance") = 10, py::arg("max_shift_size") = 10,
        "TER with shifts. Returns score, edit counts, OK/BAD word and gap tags, and the reference "
        "reconstructed from the edit script.");

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return bx::pearson(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("mcc",
        [](const std::vector<bool>& pred, const std::vector<bool>& gold) { return bx::mcc(flags(pred), flags(gold), 1); },
        py::arg("pred"), py::arg("gold"), "MCC with True as the positive (BAD) class.");
  m.def("macro_f1",
        [](const std::vector<int>& pred, const std::vector<int>& gold, const std::vector<int>& classes) {
          return bx::macro_f1(pred, gold, classes).macro_f1;
        },
        py::arg("pred"), py::arg("gold"), py::arg("classes"));

  py::class_<bx::DirectionModel>(m, "DirectionModel")
      .def_static(
          "train",
          [](const std::string& side, const std::vector<std::string>& original,
             const std::vector<std::string>& translationese, double alpha, int hash_bits,
             std::vector<int> word_orders, std::vector<int> char_orders, const std::string& mode, bool lowercase) {
            const auto s = bx::parse_side(side);
            if (!s) bx::fail(bx::Errc::InvalidArgument, "side must be 'source' or 'target'");
            if (hash_bits < 10 || hash_bits > 28) bx::fail(bx::Errc::InvalidArgument, "hash_bits must lie in [10, 28]");
            bx::FeatureConfig f;
            f.word_ngram_orders = std::move(word_orders);
            f.char_ngram_orders = std::move(char_orders);
            f.hash_buckets = 1u << hash_bits;
            py::gil_scoped_release release;
            return bx::train_side_classifier(*s, original, translationese, f, alpha, tokenizer(mode, lowercase));
          },
          py::arg("side"), py::arg("original"), py::arg("translationese"), py::arg("alpha") = 1.0,
          py::arg("hash_bits") = 20, py::arg("word_orders") = std::vector<int>{1, 2},
          py::arg("char_orders") = std::vector<int>{2, 3}, py::arg("tokenizer") = "cjk", py::arg("lowercase") = true)
      .def_static("load", [](const std::filesystem::path& p) { return bx::load_model(p); }, py::arg("path"))
      .def("save", [](const bx::DirectionModel& self, const std::filesystem::path& p) { bx::save_model(self, p); },
           py::arg("path"))
      .def("predict", &bx::DirectionModel::predict_text, py::arg("text"),
           "Probability that the text is original (not translated).")
      .def_property_readonly("side", [](const bx::DirectionModel& self) { return std::string(bx::to_string(self.side())); });

  m.def("combine_side_scores",
        [](double p_src, double p_tgt, double band) { return score_dict(bx::combine_side_scores(p_src, p_tgt, band)); },
        py::arg("p_src_side"), py::arg("p_tgt_side"), py::arg("band") = 0.0);
  m.def("classify_pair",
        [](const bx::DirectionModel& src, const bx::DirectionModel& tgt, const std::string& s, const std::string& t,
           double band) {
          bx::SentencePair p{0, "", s, t, bx::Direction::Unknown};
          return score_dict(bx::classify_pair(src, tgt, p, band));
        },
        py::arg("model_src"), py::arg("model_tgt"), py::arg("src"), py::arg("tgt"), py::arg("band") = 0.0);

  m.def("validate_format",
        [](const std::filesystem::path& prefix) {
          const auto r = bx::validate_format(prefix);
          py::dict d;
          d["ok"] = r.ok();
          d["n_records"] = r.n_records;
          d["has_gap_tags"] = r.has_gap_tags;
          d["problems"] = r.problems;
          return d;
        },
        py::arg("prefix"));
  m.def("forge",
        [](const std::optional<std::filesystem::path>& config, const std::vector<std::string>& overrides) {
          const auto cfg = bx::load_forge_config(config, overrides);
          const auto s = [&] {
            py::gil_scoped_release release;
            return bx::run_forge(cfg);
          }();
          py::dict d;
          d["sampled"] = s.counts.sampled;
          d["scored"] = s.counts.scored;
          d["kept"] = s.counts.kept;
          d["filtered_out"] = s.counts.filtered_out;
          d["abstained"] = s.counts.abstained;
          d["emitted"] = s.counts.emitted;
          d["run_manifest"] = s.run_manifest;
          d["outputs"] = s.outputs;
          return d;
        },
        py::arg("config") = py::none(), py::arg("overrides") = std::vector<std::string>{},
        "Run sample -> classify -> filter -> label -> emit. Overrides are 'section.key=value' strings.");
}
