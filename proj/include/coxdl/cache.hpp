#pragma once

#include <filesystem>
#include <fstream>
#include <map>

#include "coxdl/dlchar.hpp"

namespace coxdl {

// JSON-lines store of S-counts, one record per (class, t). Records carry the
// enumeration-order hash so a change of class or generator ordering
// invalidates them.
class SCountCache {
public:
    static constexpr int kFormat = 1;

    SCountCache(std::filesystem::path dir, const GroupSpec& spec, std::string order_hash);
    // Rewrites the file with one record per key when anything changed.
    ~SCountCache();
    SCountCache(const SCountCache&) = delete;
    SCountCache& operator=(const SCountCache&) = delete;

    std::optional<std::uint64_t> lookup(std::size_t cls, std::uint64_t t) const;
    void store(std::size_t cls, std::uint64_t t, std::uint64_t count);
    void attach(PipelineOptions& opt);
    void attach(Pipeline& P) { attach(P.options()); }

    const std::filesystem::path& path() const { return path_; }
    std::size_t loaded() const { return data_.size(); }
    std::size_t hits() const { return hits_; }
    std::size_t written() const { return written_; }
    std::size_t rejected() const { return rejected_; }   // corrupt or stale lines

private:
    std::filesystem::path path_;
    GroupSpec spec_;
    std::string hash_;
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> data_;
    std::ofstream out_;
    mutable std::size_t hits_ = 0;
    std::size_t written_ = 0;
    std::size_t rejected_ = 0;
};

}  // namespace coxdl
