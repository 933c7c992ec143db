#pragma once

// Sample sources: local files, or URLs fetched once with a plain GET and
// cached on disk.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <httplib.h>

#include "structprov/error.hpp"

namespace structprov {

struct FetchConfig {
  std::filesystem::path cache_dir = ".structprov-cache";
  std::chrono::seconds timeout{10};
  bool use_cache = true;
};

inline bool is_url(std::string_view s) { return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FetchError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FetchError("cannot write '" + path.string() + "'");
  out << text;
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// URL path without query, e.g. "/data/people.json" for extension sniffing.
inline std::string url_path(std::string_view url) {
  std::size_t scheme = url.find("://");
  std::size_t start = url.find('/', scheme == std::string_view::npos ? 0 : scheme + 3);
  if (start == std::string_view::npos) return "/";
  std::size_t end = url.find_first_of("?#", start);
  return std::string(url.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

inline std::filesystem::path cache_path(const std::string& url, const FetchConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(detail::fnv1a(url)));
  return cfg.cache_dir / (std::string(buf) + std::filesystem::path(url_path(url)).extension().string());
}

inline std::string fetch_url(const std::string& url, const FetchConfig& cfg = {}) {
  std::filesystem::path cached = cache_path(url, cfg);
  if (cfg.use_cache && std::filesystem::exists(cached)) return read_file(cached);

  std::size_t scheme_end = url.find("://");
  std::size_t path_start = url.find('/', scheme_end + 3);
  std::string origin = url.substr(0, path_start);
  std::string target = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(origin);
  if (!client.is_valid()) throw FetchError("unsupported URL '" + url + "'");
  client.set_connection_timeout(cfg.timeout);
  client.set_read_timeout(cfg.timeout);
  client.set_follow_location(true);
  auto res = client.Get(target);
  if (!res) throw FetchError("GET " + url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw FetchError("GET " + url + " returned HTTP " + std::to_string(res->status));
  if (cfg.use_cache) write_file(cached, res->body);
  return res->body;
}

/// Text of a sample given as a path or URL.
inline std::string load_source(const std::string& where, const FetchConfig& cfg = {}) {
  return is_url(where) ? fetch_url(where, cfg) : read_file(where);
}

}  // namespace structprov
