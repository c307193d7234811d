#include "ruinlab/cache.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ruinlab::cache {

namespace fs = std::filesystem;

std::string default_cache_dir() {
    if (const char* env = std::getenv("RUINLAB_CACHE_DIR"); env && *env) return env;
    return ".ruinlab-cache";
}

ResultCache::ResultCache(std::string dir) : dir_(dir.empty() ? default_cache_dir() : dir) {}

std::string ResultCache::path_for(std::uint64_t key) const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(key));
    return (fs::path(dir_) / (std::string(buf) + ".json")).string();
}

std::optional<std::string> ResultCache::lookup(std::uint64_t key) const {
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void ResultCache::store(std::uint64_t key, const std::string& payload) const {
    fs::create_directories(dir_);
    const std::string path = path_for(key);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << payload;
    }
    fs::rename(tmp, path);
}

std::vector<std::string> ResultCache::list() const {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir_, ec))
        if (e.path().extension() == ".json") out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t ResultCache::clear() const {
    std::size_t n = 0;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir_, ec))
        if (e.path().extension() == ".json") n += fs::remove(e.path(), ec) ? 1 : 0;
    return n;
}

} // namespace ruinlab::cache
