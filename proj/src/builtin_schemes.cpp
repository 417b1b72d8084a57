#include <map>
#include <string>

#include "graphlogm/scheme.hpp"

namespace graphlogm {

// Generated at configure time from data/schemes/*.scheme.
struct EmbeddedScheme {
  const char* name;
  const char* text;
};
extern const EmbeddedScheme kEmbeddedSchemes[];
extern const std::size_t kEmbeddedSchemeCount;

namespace {

const std::map<std::string, GraphScheme>& registry() {
  static const std::map<std::string, GraphScheme> r = [] {
    std::map<std::string, GraphScheme> m;
    for (std::size_t i = 0; i < kEmbeddedSchemeCount; ++i)
      m.emplace(kEmbeddedSchemes[i].name, load_scheme(kEmbeddedSchemes[i].text));
    return m;
  }();
  return r;
}

}  // namespace

const GraphScheme& builtin_scheme(int k) {
  const auto& r = registry();
  const auto it = r.find("k" + std::to_string(k));
  if (it == r.end()) throw ArgumentError("builtin_scheme: no scheme with k=" + std::to_string(k));
  return it->second;
}

const GraphScheme& published_k5_scheme() {
  const auto& r = registry();
  const auto it = r.find("published_k5");
  if (it == r.end()) throw ArgumentError("builtin_scheme: published k=5 scheme missing");
  return it->second;
}

int builtin_max_k() {
  const auto& r = registry();
  int k = 0;
  double prev = 0.0;
  while (true) {
    const auto it = r.find("k" + std::to_string(k + 1));
    if (it == r.end() || !(it->second.meta.theta > prev)) break;
    prev = it->second.meta.theta;
    ++k;
  }
  return k;
}

}  // namespace graphlogm
