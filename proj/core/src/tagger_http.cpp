#include <httplib.h>
#include <json.hpp>

#include "spamlens/topics.hpp"
#include "spamlens/util.hpp"

namespace spamlens::topics {

struct HttpTagger::Impl {
  Impl(const std::string& base_url, int timeout_seconds)
      : client(base_url) {
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
  }
  httplib::Client client;
};

HttpTagger::HttpTagger(const std::string& base_url, int timeout_seconds)
    : impl_(std::make_unique<Impl>(base_url, timeout_seconds)) {}

HttpTagger::~HttpTagger() = default;

TagResult HttpTagger::analyze(const std::string& text) const {
  nlohmann::json body;
  body["text"] = text;
  const auto res = impl_->client.Post("/", body.dump(), "application/json");
  if (!res)
    throw DataError("external tagger: request failed (" +
                    httplib::to_string(res.error()) + ")");
  if (res->status != 200)
    throw DataError("external tagger: HTTP status " + std::to_string(res->status));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("external tagger: invalid response JSON: ") +
                    e.what());
  }
  TagResult out;
  if (j.contains("categories")) {
    for (const auto& cat : j["categories"]) {
      out.categories.emplace_back(cat.at("label").get<std::string>(),
                                  cat.at("score").get<double>());
    }
  }
  if (j.contains("sentiment") && j["sentiment"].contains("score"))
    out.sentiment = j["sentiment"]["score"].get<double>();
  return out;
}

}  // namespace spamlens::topics
