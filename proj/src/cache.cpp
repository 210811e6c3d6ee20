#include "coxdl/cache.hpp"

#include <cstdio>
#include <iostream>

#include <json.hpp>

namespace coxdl {

using nlohmann::json;

namespace {

json record(const GroupSpec& s, std::size_t cls, std::uint64_t t, std::uint64_t count, const std::string& hash) {
    return {{"spec", {s.q, s.n, s.kappa, s.h}}, {"class", cls}, {"t", t}, {"count", count}, {"v", SCountCache::kFormat}, {"order", hash}};
}

}  // namespace

SCountCache::SCountCache(std::filesystem::path dir, const GroupSpec& spec, std::string order_hash)
    : spec_(spec), hash_(std::move(order_hash)) {
    std::filesystem::create_directories(dir);
    path_ = dir / ("scount_" + std::to_string(spec.q) + "_" + std::to_string(spec.n) + "_" +
                   std::to_string(spec.kappa) + "_" + std::to_string(spec.h) + ".jsonl");
    const json key = {spec.q, spec.n, spec.kappa, spec.h};
    if (std::ifstream in(path_); in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json rec = json::parse(line, nullptr, false);
            bool ok = !rec.is_discarded() && rec.is_object() && rec.value("v", -1) == kFormat &&
                      rec.value("order", std::string()) == hash_ && rec.value("spec", json()) == key &&
                      rec.contains("class") && rec["class"].is_number_unsigned() && rec.contains("t") &&
                      rec["t"].is_number_unsigned() && rec.contains("count") && rec["count"].is_number_unsigned();
            if (!ok) {
                ++rejected_;
                continue;
            }
            data_[{rec["class"].get<std::size_t>(), rec["t"].get<std::uint64_t>()}] = rec["count"].get<std::uint64_t>();
        }
        if (rejected_)
            std::cerr << "warning: " << path_.string() << ": ignored " << rejected_
                      << " corrupt or stale cache lines\n";
    }
    out_.open(path_, std::ios::app);
}

std::optional<std::uint64_t> SCountCache::lookup(std::size_t cls, std::uint64_t t) const {
    auto it = data_.find({cls, t});
    if (it == data_.end()) return std::nullopt;
    ++hits_;
    return it->second;
}

void SCountCache::store(std::size_t cls, std::uint64_t t, std::uint64_t count) {
    if (!data_.emplace(std::pair{cls, t}, count).second) return;
    out_ << record(spec_, cls, t, count, hash_).dump() << '\n';
    out_.flush();
    ++written_;
}

SCountCache::~SCountCache() {
    out_.close();
    if (!written_ && !rejected_) return;
    std::error_code ec;
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::trunc);
        for (const auto& [k, v] : data_) o << record(spec_, k.first, k.second, v, hash_).dump() << '\n';
        if (!o) return;
    }
    std::filesystem::rename(tmp, path_, ec);
}

void SCountCache::attach(PipelineOptions& opt) {
    opt.lookup = [this](std::size_t c, std::uint64_t t) { return lookup(c, t); };
    opt.store = [this](std::size_t c, std::uint64_t t, std::uint64_t v) { store(c, t, v); };
}

}  // namespace coxdl
