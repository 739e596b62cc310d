#include "cwlab/common.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>

namespace cwlab {

namespace {

std::map<std::string, int> load_caps() {
  std::map<std::string, int> out;
  const char* env = std::getenv("CWLAB_CAPS");
  if (!env) return out;
  std::stringstream ss(env);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    try {
      out[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
    }
  }
  return out;
}

}  // namespace

int cap(const std::string& name, int fallback) {
  static std::once_flag once;
  static std::map<std::string, int> caps;
  std::call_once(once, [] { caps = load_caps(); });
  auto it = caps.find(name);
  if (it == caps.end() || it->second < fallback) return fallback;
  return it->second;
}

}  // namespace cwlab
