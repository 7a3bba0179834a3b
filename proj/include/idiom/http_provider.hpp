#pragma once

// JSON-over-HTTP translation provider. Sends
//   {"q": text, "source": "en", "target": "it", "format": "text"}
// as a POST to the configured endpoint and accepts either a
// {"data":{"translations":[{"translatedText": ...}]}} response or a flat
// {"translation": ...} response. The credential, when configured, is read
// from the named environment variable and sent as the `key` query parameter.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "idiom/translate.hpp"

namespace idiom {

struct HttpProviderConfig {
  std::string endpoint;                        // scheme://host[:port]/path
  std::optional<std::string> credential_env;   // name of the variable holding the key
  int timeout_seconds = 30;
};

class HttpProvider : public TranslationProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos)
      throw UsageError("provider endpoint must be an absolute URL: '" + config_.endpoint + "'");
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    origin_ = config_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
    if (config_.credential_env) {
      const char* value = std::getenv(config_.credential_env->c_str());
      if (!value)
        throw UsageError("credential variable '" + *config_.credential_env + "' is not set");
      key_ = value;
    }
  }

  std::string translate(std::string_view text, const Lang& source, const Lang& target) override {
    ++request_count();
    httplib::Client client(origin_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    nlohmann::json body = {{"q", std::string(text)},
                           {"source", text::to_lower(source.code())},
                           {"target", text::to_lower(target.code())},
                           {"format", "text"}};
    std::string path = path_;
    if (key_) path += std::string(path.find('?') == std::string::npos ? "?" : "&") + "key=" +
                      httplib::detail::encode_query_param(*key_);
    auto res = client.Post(path, body.dump(), "application/json");
    if (!res) throw ProviderError("request to " + origin_ + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw ProviderError("provider returned HTTP " + std::to_string(res->status));

    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      throw ProviderError("provider returned invalid JSON");
    }
    std::string translation;
    if (reply.contains("translation") && reply["translation"].is_string()) {
      translation = reply["translation"].get<std::string>();
    } else {
      const auto ptr = nlohmann::json::json_pointer("/data/translations/0/translatedText");
      if (!reply.contains(ptr) || !reply[ptr].is_string())
        throw ProviderError("provider response has no translation");
      translation = reply[ptr].get<std::string>();
    }
    for (char& c : translation)
      if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return translation;
  }

  // Requests issued by every HttpProvider in this process.
  static std::atomic<std::size_t>& request_count() {
    static std::atomic<std::size_t> count{0};
    return count;
  }

 private:
  HttpProviderConfig config_;
  std::string origin_;
  std::string path_;
  std::optional<std::string> key_;
};

}  // namespace idiom
