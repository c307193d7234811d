#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ruinlab::cache {

// JSON result cache keyed by config hash. Directory resolution order:
// explicit argument, RUINLAB_CACHE_DIR, ".ruinlab-cache".
class ResultCache {
  public:
    explicit ResultCache(std::string dir = "");

    const std::string& dir() const { return dir_; }

    std::optional<std::string> lookup(std::uint64_t key) const;
    void store(std::uint64_t key, const std::string& payload) const;

    std::vector<std::string> list() const;
    std::size_t clear() const;

  private:
    std::string dir_;
    std::string path_for(std::uint64_t key) const;
};

std::string default_cache_dir();

} // namespace ruinlab::cache
