#pragma once

// Translation routing, provider interface and the on-disk translation cache.

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idiom/common.hpp"
#include "idiom/corpus.hpp"

namespace idiom {

// Source -> target language for the MT method. Defaults: EN->IT, PT->EN, GL->EN.
class LanguageRouting {
 public:
  LanguageRouting() : routes_{{kEnglish, kItalian}, {kPortuguese, kEnglish}, {kGalician, kEnglish}} {}

  void set(const Lang& source, const Lang& target) {
    if (!is_instance_language(source))
      throw UsageError("unsupported source language '" + source.code() + "'");
    routes_[source] = target;
  }

  Lang route(const Lang& source) const {
    auto it = routes_.find(source);
    if (it == routes_.end())
      throw UsageError("unsupported source language '" + source.code() + "'");
    return it->second;
  }

 private:
  std::map<Lang, Lang> routes_;
};

inline Lang route_target_language(const Lang& source, const LanguageRouting& routing = {}) {
  return routing.route(source);
}

struct TranslationRecord {
  std::string instance_id;
  Lang target_language;
  std::string translated_target_sentence;

  bool operator==(const TranslationRecord&) const = default;
};

// Single text-in/text-out call. Implementations throw ProviderError.
class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;
  virtual std::string translate(std::string_view text, const Lang& source, const Lang& target) = 0;
};

// Replays translations from a table keyed by (source text, target language).
class ReplayProvider : public TranslationProvider {
 public:
  void add(std::string source_text, const Lang& target, std::string translation) {
    table_[{std::move(source_text), target}] = std::move(translation);
  }

  std::string translate(std::string_view text, const Lang&, const Lang& target) override {
    ++calls_;
    auto it = table_.find({std::string(text), target});
    if (it == table_.end())
      throw ProviderError("no replay translation into " + target.code() + " for '" +
                          std::string(text) + "'");
    return it->second;
  }

  std::size_t calls() const noexcept { return calls_; }

  // Replay file: `target_lang<TAB>source sentence<TAB>translation`, no header.
  static ReplayProvider load(const std::string& path) {
    ReplayProvider provider;
    const auto lines = tsv::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      const auto f = tsv::split(lines[n]);
      if (f.size() != 3) throw DataError("expected 3 columns in '" + path + "'", n + 1);
      provider.add(f[1], Lang(f[0]), f[2]);
    }
    return provider;
  }

 private:
  std::map<std::pair<std::string, Lang>, std::string> table_;
  std::size_t calls_ = 0;
};

// (instance id, target language) -> translated target sentence. Reads are
// concurrent; writes are serialized and never overwrite differing text.
class TranslationCache {
 public:
  TranslationCache() = default;
  TranslationCache(const TranslationCache& other) : entries_(other.snapshot()) {}
  TranslationCache& operator=(const TranslationCache& other) {
    if (this != &other) {
      auto copy = other.snapshot();
      std::unique_lock lock(mutex_);
      entries_ = std::move(copy);
    }
    return *this;
  }

  std::optional<std::string> find(const std::string& instance_id, const Lang& target) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find({instance_id, target});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // Inserting the same text twice is a no-op; differing text is an error.
  void insert(const std::string& instance_id, const Lang& target, std::string sentence) {
    if (sentence.empty())
      throw DataError("empty translation for '" + instance_id + "'");
    tsv::check_field(instance_id, "instance id");
    tsv::check_field(sentence, "translation");
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(std::make_pair(instance_id, target), sentence);
    if (!inserted && it->second != sentence)
      throw DataError("conflicting translations for (" + instance_id + ", " + target.code() + ")");
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  // translations.tsv: `instance_id target_lang translated_sentence`, no header.
  std::string serialize() const {
    std::shared_lock lock(mutex_);
    std::string out;
    for (const auto& [key, sentence] : entries_)
      out += tsv::join({key.first, key.second.code(), sentence}) + "\n";
    return out;
  }

  static TranslationCache parse(const std::vector<std::string>& lines,
                                const std::string& source = "translations") {
    TranslationCache cache;
    for (std::size_t n = 0; n < lines.size(); ++n) {
      if (lines[n].empty()) continue;
      const auto f = tsv::split(lines[n]);
      if (f.size() != 3) throw DataError("expected 3 columns in '" + source + "'", n + 1);
      try {
        cache.insert(f[0], Lang(f[1]), f[2]);
      } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " in '" + source + "'", n + 1);
      }
    }
    return cache;
  }

  static TranslationCache load(const std::string& path) {
    return parse(tsv::read_lines(path), path);
  }

  void save(const std::string& path) const { tsv::write_file(path, serialize()); }

 private:
  std::map<std::pair<std::string, Lang>, std::string> snapshot() const {
    std::shared_lock lock(mutex_);
    return entries_;
  }

  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::string, Lang>, std::string> entries_;
};

// Cache hit, or a provider call for the target sentence only, written back
// to the cache.
inline TranslationRecord translate_instance(const Instance& instance, TranslationCache& cache,
                                            TranslationProvider* provider,
                                            const LanguageRouting& routing = {}) {
  const Lang target = routing.route(instance.language);
  if (auto hit = cache.find(instance.id, target))
    return {instance.id, target, std::move(*hit)};
  if (!provider)
    throw ProviderError("no cached translation into " + target.code() + " for instance '" +
                        instance.id + "' and no provider configured");
  std::string sentence;
  try {
    sentence = provider->translate(instance.target, instance.language, target);
  } catch (const Error& e) {
    throw ProviderError("translation of instance '" + instance.id + "' failed: " + e.what());
  }
  if (sentence.empty())
    throw ProviderError("provider returned an empty translation for instance '" + instance.id + "'");
  cache.insert(instance.id, target, sentence);
  return {instance.id, target, std::move(sentence)};
}

}  // namespace idiom
