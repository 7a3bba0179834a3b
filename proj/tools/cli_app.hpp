#pragma once

// `idiom` command-line front end. Exit codes: 0 success, 2 usage error,
// 3 data error, 4 provider error. Errors are one line on stderr:
//   error: <usage|data|provider|internal>: <message>
// Outputs are staged next to their destination and renamed into place only
// after the whole subcommand succeeded.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "idiom/aligner.hpp"
#include "idiom/combine.hpp"
#include "idiom/corpus.hpp"
#include "idiom/eval.hpp"
#include "idiom/glossinput.hpp"
#include "idiom/http_provider.hpp"
#include "idiom/lexkb.hpp"
#include "idiom/morph.hpp"
#include "idiom/mtclassify.hpp"
#include "idiom/prediction.hpp"
#include "idiom/translate.hpp"
#include "idiom/unatt.hpp"

namespace idiom::cli {

inline std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 15]);
  }
  return out;
}

// Provenance lines: command, input hashes, parameters. No timestamps, so
// reruns on identical inputs are byte-identical.
class Provenance {
 public:
  explicit Provenance(std::string command) { lines_.push_back("idiom " + command); }

  void input(const std::string& role, const std::string& path) {
    lines_.push_back("input " + role + " " + path + " sha256=" + sha256_file(path));
  }
  void param(const std::string& key, const std::string& value) {
    lines_.push_back("param " + key + "=" + value);
  }
  void note(std::string line) { lines_.push_back(std::move(line)); }

  const std::vector<std::string>& lines() const noexcept { return lines_; }

  std::string as_text() const {
    std::string out;
    for (const auto& l : lines_) out += "# " + l + "\n";
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

// Collects outputs and commits them together; staging files are removed when
// the commit fails.
class OutputSet {
 public:
  void add(const std::string& path, std::string content) {
    pending_.emplace_back(path, std::move(content));
  }

  void commit() {
    std::vector<std::string> staged;
    try {
      for (const auto& [path, content] : pending_) {
        const auto tmp = path + ".partial";
        tsv::write_file(tmp, content);
        staged.push_back(tmp);
      }
      for (std::size_t k = 0; k < pending_.size(); ++k)
        std::filesystem::rename(staged[k], pending_[k].first);
    } catch (...) {
      std::error_code ec;
      for (const auto& tmp : staged) std::filesystem::remove(tmp, ec);
      throw;
    }
    pending_.clear();
  }

 private:
  std::vector<std::pair<std::string, std::string>> pending_;
};

inline LanguageRouting parse_routes(const std::vector<std::string>& routes) {
  LanguageRouting routing;
  for (const auto& r : routes) {
    const auto eq = r.find('=');
    if (eq == std::string::npos) throw UsageError("route must look like SRC=TGT: '" + r + "'");
    routing.set(Lang(r.substr(0, eq)), Lang(r.substr(eq + 1)));
  }
  return routing;
}

inline Label parse_label_option(const std::string& s) {
  try {
    return parse_label(s);
  } catch (const DataError&) {
    throw UsageError("unknown class '" + s + "'");
  }
}

inline MultiWordnetIndex load_index(const std::vector<std::string>& snapshots, Provenance& prov) {
  MultiWordnetIndex index;
  for (const auto& path : snapshots) {
    prov.input("kb", path);
    index.add(read_kb_snapshot(path));
  }
  return index;
}

inline MorphLexicon load_lexicon(const std::optional<std::string>& path, Provenance& prov) {
  if (!path) return {};
  prov.input("lexicon", *path);
  return MorphLexicon::load(*path);
}

// `--model [LANG=]PATH`: per source language, or a bare path for all.
class ModelSet {
 public:
  void load(const std::vector<std::string>& specs, Provenance& prov) {
    for (const auto& spec : specs) {
      const auto eq = spec.find('=');
      std::string key;
      std::string path = spec;
      if (eq != std::string::npos && eq >= 2 && eq <= 3) {
        key = Lang(spec.substr(0, eq)).code();
        path = spec.substr(eq + 1);
      }
      prov.input(key.empty() ? "model" : "model:" + key, path);
      models_[key] = AlignmentModel::deserialize(tsv::read_lines(path), path);
    }
  }

  const AlignmentModel& for_language(const Lang& lang) const {
    for (const auto& l : lookup_languages(lang))
      if (auto it = models_.find(l.code()); it != models_.end()) return it->second;
    if (auto it = models_.find(""); it != models_.end()) return it->second;
    throw UsageError("no alignment model for language " + lang.code());
  }

 private:
  std::map<std::string, AlignmentModel> models_;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Idiomaticity detection toolkit for multi-word expressions"};
  app.require_subcommand(1);

  // build-kb
  auto* build_kb = app.add_subcommand("build-kb", "Load a knowledge base and write a snapshot");
  std::string kb_name, kb_synsets, kb_out;
  std::optional<std::string> kb_glosses;
  build_kb->add_option("--name", kb_name, "Knowledge base name")->required();
  build_kb->add_option("--synsets", kb_synsets, "synsets.tsv")->required();
  build_kb->add_option("--glosses", kb_glosses, "glosses.tsv");
  build_kb->add_option("--out", kb_out, "Snapshot path (default NAME.kb)");

  // train-aligner
  auto* train = app.add_subcommand("train-aligner", "Train the word alignment model");
  std::vector<std::string> train_bitexts, train_routes;
  std::optional<std::string> train_translations, train_instances, train_lang;
  std::string train_out;
  AlignerOptions aligner_options;
  train->add_option("--bitext", train_bitexts, "bitext.tsv files");
  train->add_option("--translations", train_translations, "translations.tsv cache");
  train->add_option("--instances", train_instances, "instances.tsv paired with --translations");
  train->add_option("--source-lang", train_lang, "Use only instances in this language");
  train->add_option("--route", train_routes, "Override routing, SRC=TGT");
  train->add_option("--out", train_out, "Model output path")->required();
  train->add_option("--iters", aligner_options.iterations, "EM iterations")->capture_default_str();
  train->add_option("--lambda", aligner_options.tension, "Diagonal tension")->capture_default_str();
  train->add_option("--p0", aligner_options.null_prob, "Null alignment probability")
      ->capture_default_str();
  train->add_option("--alpha", aligner_options.smoothing, "Add-alpha smoothing")
      ->capture_default_str();

  // translate
  auto* translate = app.add_subcommand("translate", "Fill the translation cache");
  std::string tr_instances, tr_cache;
  std::optional<std::string> tr_provider, tr_replay, tr_credential_env;
  std::vector<std::string> tr_routes;
  int tr_timeout = 30;
  translate->add_option("--instances", tr_instances, "instances.tsv")->required();
  translate->add_option("--cache", tr_cache, "translations.tsv (read if present, then written)")
      ->required();
  auto* provider_opt = translate->add_option("--provider", tr_provider, "HTTP JSON endpoint URL");
  translate->add_option("--replay", tr_replay, "Replay provider file")->excludes(provider_opt);
  translate->add_option("--credential-env", tr_credential_env,
                        "Environment variable holding the provider key");
  translate->add_option("--timeout", tr_timeout, "Provider timeout in seconds")
      ->capture_default_str();
  translate->add_option("--route", tr_routes, "Override routing, SRC=TGT");

  // classify
  auto* classify = app.add_subcommand("classify", "Classify instances");
  std::string cl_method, cl_instances, cl_out, cl_mt_mode = "all";
  std::vector<std::string> cl_train, cl_models, cl_kbs, cl_routes;
  std::optional<std::string> cl_cache, cl_lexicon, cl_default, cl_combine_with;
  bool cl_overlay = false;
  classify->add_option("--method", cl_method, "mt-one | mt-all | unatt | combined")
      ->required()
      ->check(CLI::IsMember({"mt-one", "mt-all", "unatt", "combined"}));
  classify->add_option("--instances", cl_instances, "instances.tsv")->required();
  classify->add_option("--train", cl_train, "Labeled training instances (UNATT table)");
  classify->add_option("--model", cl_models, "Alignment model, [LANG=]PATH");
  classify->add_option("--kb", cl_kbs, "Knowledge base snapshots");
  classify->add_option("--cache", cl_cache, "translations.tsv");
  classify->add_option("--lexicon", cl_lexicon, "lexicon.tsv");
  classify->add_option("--mt-mode", cl_mt_mode, "MT variant inside combined: one | all")
      ->check(CLI::IsMember({"one", "all"}))
      ->capture_default_str();
  classify->add_option("--combine-with", cl_combine_with,
                       "predictions.tsv of the second method for --method combined");
  classify->add_option("--default-class", cl_default, "Class returned on disagreement");
  classify->add_flag("--unatt-overlay", cl_overlay, "Let UNATT override where it fires");
  classify->add_option("--route", cl_routes, "Override routing, SRC=TGT");
  classify->add_option("--out", cl_out, "predictions.tsv")->required();

  // export-sequences
  auto* exporter = app.add_subcommand("export-sequences", "Write classifier input sequences");
  std::string ex_variant, ex_instances, ex_out;
  std::vector<std::string> ex_kbs;
  std::optional<std::string> ex_lexicon;
  std::size_t ex_budget = kDefaultTokenBudget;
  exporter->add_option("--variant", ex_variant, "baseline | gloss-en | gloss-src")
      ->required()
      ->check(CLI::IsMember({"baseline", "gloss-en", "gloss-src"}));
  exporter->add_option("--instances", ex_instances, "instances.tsv")->required();
  exporter->add_option("--kb", ex_kbs, "Knowledge base snapshots");
  exporter->add_option("--lexicon", ex_lexicon, "lexicon.tsv");
  exporter->add_option("--budget", ex_budget, "Whitespace-token budget")->capture_default_str();
  exporter->add_option("--out", ex_out, "sequences.tsv")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions with macro F1");
  std::vector<std::string> ev_gold, ev_pred, ev_settings;
  std::optional<std::string> ev_method;
  std::string ev_out;
  evaluate->add_option("--gold", ev_gold, "Gold instances.tsv (repeatable)")->required();
  evaluate->add_option("--pred", ev_pred, "predictions.tsv (repeatable, paired with --gold)")
      ->required();
  evaluate->add_option("--setting", ev_settings, "zero-shot | one-shot (per pair)");
  evaluate->add_option("--method", ev_method, "Method name for the report");
  evaluate->add_option("--out", ev_out, "report.tsv")->required();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }

    OutputSet outputs;

    if (*build_kb) {
      Provenance prov("build-kb");
      prov.param("name", kb_name);
      prov.input("synsets", kb_synsets);
      if (kb_glosses) prov.input("glosses", *kb_glosses);
      KbLoadReport report;
      auto kb = read_knowledge_base(kb_name, kb_synsets, kb_glosses, &report);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      std::string snapshot = kb.snapshot();
      // Provenance goes right after the magic line; readers skip '#' lines.
      const auto first_newline = snapshot.find('\n') + 1;
      snapshot.insert(first_newline, prov.as_text());
      outputs.add(kb_out.empty() ? kb_name + ".kb" : kb_out, snapshot);
      outputs.commit();
      out << "kb " << kb_name << ": " << report.synsets << " synsets, " << report.members
          << " members, " << report.glosses << " glosses\n";
      return 0;
    }

    if (*train) {
      Provenance prov("train-aligner");
      Bitext bitext;
      if (train_translations.has_value() != train_instances.has_value())
        throw UsageError("--translations and --instances must be given together");
      if (train_translations) {
        prov.input("instances", *train_instances);
        prov.input("translations", *train_translations);
        const auto routing = parse_routes(train_routes);
        const auto dataset = load_instances(*train_instances, false);
        const auto cache = TranslationCache::load(*train_translations);
        std::optional<Lang> only;
        if (train_lang) only = Lang(*train_lang);
        for (const auto& inst : dataset.instances) {
          if (only && inst.language != *only) continue;
          auto hit = cache.find(inst.id, routing.route(inst.language));
          if (!hit) continue;
          SentencePair pair{tokenize(inst.target), tokenize(*hit)};
          if (!pair.source.empty() && !pair.target.empty()) bitext.push_back(std::move(pair));
        }
      }
      for (const auto& path : train_bitexts) {
        prov.input("bitext", path);
        auto more = load_bitext(path);
        bitext.insert(bitext.end(), std::make_move_iterator(more.begin()),
                      std::make_move_iterator(more.end()));
      }
      if (bitext.empty()) throw UsageError("no training sentence pairs (give --bitext or --translations)");
      prov.param("iters", std::to_string(aligner_options.iterations));
      prov.param("lambda", detail::format_double(aligner_options.tension));
      prov.param("p0", detail::format_double(aligner_options.null_prob));
      prov.param("alpha", detail::format_double(aligner_options.smoothing));
      if (train_lang) prov.param("source-lang", *train_lang);
      const auto model = train_aligner(bitext, aligner_options);
      std::string text = model.serialize();
      text.insert(text.find('\n') + 1, prov.as_text());
      outputs.add(train_out, text);
      outputs.commit();
      out << "trained on " << bitext.size() << " sentence pairs; final log-likelihood "
          << detail::format_double(model.log_likelihoods().back()) << "\n";
      return 0;
    }

    if (*translate) {
      Provenance prov("translate");
      prov.input("instances", tr_instances);
      const auto routing = parse_routes(tr_routes);
      const auto dataset = load_instances(tr_instances, false);
      TranslationCache cache;
      if (std::filesystem::exists(tr_cache)) {
        prov.input("cache", tr_cache);
        cache = TranslationCache::load(tr_cache);
      }
      std::unique_ptr<TranslationProvider> provider;
      if (tr_provider) {
        prov.param("provider", *tr_provider);
        provider = std::make_unique<HttpProvider>(
            HttpProviderConfig{*tr_provider, tr_credential_env, tr_timeout});
      } else if (tr_replay) {
        prov.input("replay", *tr_replay);
        provider = std::make_unique<ReplayProvider>(ReplayProvider::load(*tr_replay));
      }
      const std::size_t before = cache.size();
      for (const auto& inst : dataset.instances)
        translate_instance(inst, cache, provider.get(), routing);
      outputs.add(tr_cache, cache.serialize());
      outputs.add(tr_cache + ".provenance", prov.as_text());
      outputs.commit();
      out << "translations: " << cache.size() - before << " new, " << cache.size() << " cached\n";
      return 0;
    }

    if (*classify) {
      Provenance prov("classify");
      prov.param("method", cl_method);
      prov.input("instances", cl_instances);
      const auto dataset = load_instances(cl_instances, false);
      const auto routing = parse_routes(cl_routes);

      std::optional<UnattTable> table;
      if (!cl_train.empty()) {
        Dataset train_set;
        for (const auto& path : cl_train) {
          prov.input("train", path);
          auto part = load_instances(path, true);
          train_set.instances.insert(train_set.instances.end(), part.instances.begin(),
                                     part.instances.end());
        }
        table = build_unatt_table(train_set);
      }
      if ((cl_overlay || cl_method == "unatt") && !table)
        throw UsageError("UNATT needs --train");
      if (cl_overlay) prov.param("unatt-overlay", "true");

      std::vector<Prediction> predictions;
      if (cl_method == "unatt") {
        for (const auto& inst : dataset.instances)
          if (auto p = classify_unatt(inst, *table)) predictions.push_back(std::move(*p));
        bool labeled = std::all_of(dataset.instances.begin(), dataset.instances.end(),
                                   [](const Instance& i) { return i.label.has_value(); });
        if (labeled && !dataset.instances.empty()) {
          const auto s = unatt_precision_recall(*table, dataset);
          out << "unatt: precision " << format_percent(s.precision) << " recall "
              << format_percent(s.recall) << " (" << s.correct << "/" << s.predicted
              << " correct, " << s.total << " instances)\n";
        }
      } else {
        const MtMode mode = cl_method == "mt-one" || (cl_method == "combined" && cl_mt_mode == "one")
                                ? MtMode::One
                                : MtMode::All;
        prov.param("mt-mode", mode == MtMode::One ? "one" : "all");
        ModelSet models;
        models.load(cl_models, prov);
        const auto index = load_index(cl_kbs, prov);
        const auto lexicon = load_lexicon(cl_lexicon, prov);
        TranslationCache cache;
        if (cl_cache) {
          prov.input("cache", *cl_cache);
          cache = TranslationCache::load(*cl_cache);
        }

        std::map<std::string, Prediction> others;
        std::optional<Label> default_class;
        if (cl_method == "combined") {
          if (!cl_combine_with) throw UsageError("--method combined needs --combine-with");
          if (!cl_default) throw UsageError("--method combined needs --default-class");
          default_class = parse_label_option(*cl_default);
          prov.param("default-class", std::string(to_string(*default_class)));
          prov.input("combine-with", *cl_combine_with);
          for (auto& p : load_predictions(*cl_combine_with)) others.emplace(p.instance_id, p);
        }

        for (const auto& inst : dataset.instances) {
          const Lang target = routing.route(inst.language);
          TranslationRecord record{inst.id, target, cache.find(inst.id, target).value_or("")};
          Prediction pred;
          const auto mwe = analyze_mwe(inst.mwe, inst.language, lexicon);
          if (mwe.has_proper_noun || !record.translated_target_sentence.empty()) {
            const AlignmentModel* model = nullptr;
            if (!mwe.has_proper_noun) model = &models.for_language(inst.language);
            static const AlignmentModel kUnused;
            pred = classify_mt(inst, record, model ? *model : kUnused, index, lexicon, mode);
          } else {
            throw ProviderError("no cached translation into " + target.code() +
                                " for instance '" + inst.id + "'");
          }
          if (default_class) {
            auto it = others.find(inst.id);
            if (it == others.end())
              throw DataError("no prediction for instance '" + inst.id + "' in '" +
                              *cl_combine_with + "'");
            pred = combine(pred, it->second, *default_class);
          }
          if (cl_overlay) pred = overlay_unatt(classify_unatt(inst, *table), pred);
          predictions.push_back(std::move(pred));
        }
      }
      outputs.add(cl_out, format_predictions(predictions, prov.lines()));
      outputs.commit();
      out << "predictions: " << predictions.size() << " of " << dataset.instances.size()
          << " instances\n";
      return 0;
    }

    if (*exporter) {
      Provenance prov("export-sequences");
      prov.param("variant", ex_variant);
      prov.param("budget", std::to_string(ex_budget));
      prov.input("instances", ex_instances);
      const auto variant = parse_variant(ex_variant);
      const auto dataset = load_instances(ex_instances, false);
      const auto index = load_index(ex_kbs, prov);
      const auto lexicon = load_lexicon(ex_lexicon, prov);
      std::vector<SequenceRecord> records;
      for (const auto& inst : dataset.instances)
        records.push_back(variant == SequenceVariant::Baseline
                              ? build_baseline_sequence(inst)
                              : build_gloss_sequence(inst, index, lexicon, variant, ex_budget));
      outputs.add(ex_out, format_sequences(records));
      outputs.add(ex_out + ".provenance", prov.as_text());
      outputs.commit();
      out << "sequences: " << records.size() << "\n";
      return 0;
    }

    if (*evaluate) {
      Provenance prov("evaluate");
      if (ev_gold.size() != ev_pred.size())
        throw UsageError("--gold and --pred must be given the same number of times");
      if (!ev_settings.empty() && ev_settings.size() != ev_gold.size())
        throw UsageError("--setting must be given once per --gold/--pred pair");
      std::vector<ScoreReport> reports;
      for (std::size_t k = 0; k < ev_gold.size(); ++k) {
        prov.input("gold", ev_gold[k]);
        prov.input("pred", ev_pred[k]);
        const Setting setting = ev_settings.empty() ? Setting::ZeroShot : parse_setting(ev_settings[k]);
        const auto gold = load_instances(ev_gold[k], true);
        const auto preds = load_predictions(ev_pred[k]);
        reports.push_back(score_report(gold, preds, setting, ev_method.value_or("")));
      }
      // Carry the classify parameters (e.g. the default class) into the report.
      for (const auto& path : ev_pred)
        for (const auto& line : tsv::read_lines(path))
          if (line.rfind("# param ", 0) == 0) prov.note("pred " + path + " " + line.substr(2));
      outputs.add(ev_out, format_report_tsv(reports, prov.lines()));
      outputs.commit();
      out << render_table(reports);
      return 0;
    }
    throw UsageError("no subcommand");
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n' || c == '\r') c = ' ';
    const char* kind = e.kind() == ErrorKind::Usage ? "usage"
                       : e.kind() == ErrorKind::Data ? "data"
                                                     : "provider";
    err << "error: " << kind << ": " << msg << "\n";
    return e.kind() == ErrorKind::Usage ? 2 : e.kind() == ErrorKind::Data ? 3 : 4;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n' || c == '\r') c = ' ';
    err << "error: internal: " << msg << "\n";
    return 1;
  }
}

}  // namespace idiom::cli
