#include "fogfed/federation.hpp"

#include <algorithm>
#include <cstdlib>

#include "fogfed/error.hpp"
#include "fogfed/rng.hpp"

namespace fogfed {

FederationTopology::FederationTopology(std::vector<FogSystem> fogs) : fogs_(std::move(fogs)) {
    adjacency_.resize(fogs_.size());
    for (std::size_t i = 0; i < fogs_.size(); ++i) {
        if (fogs_[i].id != i) {
            throw Error(ErrorCode::InvalidArgument, "fog ids must match their list position");
        }
        if (fogs_[i].node_count < 1) {
            throw Error(ErrorCode::InvalidArgument, "fog needs at least one node");
        }
        if (!(fogs_[i].node_mips > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "fog node_mips must be positive");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (fogs_[i].x == fogs_[j].x && fogs_[i].y == fogs_[j].y) {
                throw Error(ErrorCode::InvalidArgument, "two fogs share a grid position");
            }
        }
    }
    for (std::size_t i = 0; i < fogs_.size(); ++i) {
        for (std::size_t j = 0; j < fogs_.size(); ++j) {
            if (std::abs(fogs_[i].x - fogs_[j].x) + std::abs(fogs_[i].y - fogs_[j].y) == 1) {
                adjacency_[i].push_back(j);
            }
        }
    }
}

const FogSystem& FederationTopology::fog(FogId id) const {
    if (id >= fogs_.size()) {
        throw Error(ErrorCode::InvalidId, "unknown fog id " + std::to_string(id));
    }
    return fogs_[id];
}

std::span<const FogId> FederationTopology::neighbors(FogId id) const {
    fog(id);
    return adjacency_[id];
}

std::optional<FogId> FederationTopology::at(int x, int y) const {
    for (const auto& f : fogs_) {
        if (f.x == x && f.y == y) {
            return f.id;
        }
    }
    return std::nullopt;
}

std::size_t FederationTopology::diameter() const {
    std::size_t best = 0;
    for (const auto& a : fogs_) {
        for (const auto& b : fogs_) {
            best = std::max(best, hop_distance(*this, a.id, b.id));
        }
    }
    return best;
}

FederationTopology build_grid(int width, int height, std::uint64_t seed, int node_count) {
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::InvalidArgument, "grid dimensions must be at least 1x1");
    }
    Rng rng(seed);
    std::vector<FogSystem> fogs;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            FogSystem f;
            f.id = fogs.size();
            f.x = x;
            f.y = y;
            f.node_count = node_count;
            f.node_mips = rng.uniform(kMinFogMips, kMaxFogMips);
            fogs.push_back(f);
        }
    }
    return FederationTopology(std::move(fogs));
}

std::size_t hop_distance(const FederationTopology& topology, FogId from, FogId to) {
    const auto& a = topology.fog(from);
    const auto& b = topology.fog(to);
    return static_cast<std::size_t>(std::abs(a.x - b.x) + std::abs(a.y - b.y));
}

EtcMatrix::EtcMatrix(std::size_t fog_count, double bin_width)
    : fog_count_(fog_count), bin_width_(bin_width) {}

void EtcMatrix::set(const std::string& type, FogId fog, LatencyPmf pmf) {
    if (fog >= fog_count_) {
        throw Error(ErrorCode::InvalidId, "ETC fog id out of range");
    }
    auto& row = rows_[type];
    if (row.pmfs.empty()) {
        row.pmfs.resize(fog_count_);
        row.means.assign(fog_count_, 0.0);
    }
    row.means[fog] = pmf.mean();
    row.pmfs[fog] = std::move(pmf);
}

const LatencyPmf& EtcMatrix::at(const std::string& type, FogId fog) const {
    auto it = rows_.find(type);
    if (it == rows_.end() || fog >= fog_count_ || !it->second.pmfs[fog]) {
        throw Error(ErrorCode::MissingProfile,
                    "no ETC entry for '" + type + "' on fog " + std::to_string(fog));
    }
    return *it->second.pmfs[fog];
}

double EtcMatrix::mean(const std::string& type, FogId fog) const {
    at(type, fog);
    return rows_.at(type).means[fog];
}

EttMatrix::EttMatrix(std::size_t fog_count, std::size_t max_hops, double bin_width)
    : fog_count_(fog_count), max_hops_(max_hops), bin_width_(bin_width) {}

void EttMatrix::set(const std::string& type, std::size_t hops, LatencyPmf pmf) {
    if (hops > max_hops_) {
        throw Error(ErrorCode::InvalidArgument, "ETT hop count out of range");
    }
    auto& row = rows_[type];
    auto& means = means_[type];
    if (row.empty()) {
        row.resize(max_hops_ + 1);
        means.assign(max_hops_ + 1, 0.0);
    }
    means[hops] = pmf.mean();
    row[hops] = std::move(pmf);
}

const LatencyPmf& EttMatrix::at(const std::string& type, FogId destination,
                                std::size_t hops) const {
    if (destination >= fog_count_) {
        throw Error(ErrorCode::InvalidId, "ETT destination fog out of range");
    }
    auto it = rows_.find(type);
    if (it == rows_.end() || hops > max_hops_ || !it->second[hops]) {
        throw Error(ErrorCode::MissingProfile, "no ETT entry for '" + type + "' at " +
                                                   std::to_string(hops) + " hops");
    }
    return *it->second[hops];
}

double EttMatrix::mean(const std::string& type, FogId destination, std::size_t hops) const {
    at(type, destination, hops);
    return means_.at(type)[hops];
}

EtcMatrix build_etc(const FederationTopology& topology,
                    const std::map<std::string, NormalSpec>& profiles_mi, double bin_width) {
    if (profiles_mi.empty()) {
        throw Error(ErrorCode::InvalidArgument, "build_etc needs at least one profile");
    }
    EtcMatrix etc(topology.size(), bin_width);
    for (const auto& [type, work] : profiles_mi) {
        for (const auto& fog : topology.fogs()) {
            const double scale = 1000.0 / fog.node_mips;
            etc.set(type, fog.id,
                    pmf_from_normal({work.mean * scale, work.std_dev * scale}, bin_width));
        }
    }
    return etc;
}

EttMatrix build_ett(const FederationTopology& topology, const LinkProfile& link,
                    const std::map<std::string, double>& data_mb, double bin_width) {
    if (!(link.bandwidth_mbps > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, "link bandwidth must be positive");
    }
    const std::size_t max_hops = topology.diameter();
    EttMatrix ett(topology.size(), max_hops, bin_width);
    const LatencyPmf hop = link.per_hop_latency.mean > 0.0
                               ? pmf_from_normal(link.per_hop_latency, bin_width)
                               : LatencyPmf::point(0.0, bin_width);
    for (const auto& [type, mb] : data_mb) {
        const double transfer_ms = mb * 8.0 / link.bandwidth_mbps * 1000.0;
        ett.set(type, 0, LatencyPmf::point(0.0, bin_width));
        LatencyPmf acc = hop;
        for (std::size_t h = 1; h <= max_hops; ++h) {
            if (h > 1) {
                acc = convolve(acc, hop);
            }
            ett.set(type, h, shift(acc, transfer_ms * static_cast<double>(h)));
        }
    }
    return ett;
}

double mean_exec_profile(const EtcMatrix& etc, const std::string& type) {
    if (!etc.contains(type)) {
        throw Error(ErrorCode::MissingProfile, "no ETC row for '" + type + "'");
    }
    double total = 0.0;
    for (FogId f = 0; f < etc.fog_count(); ++f) {
        total += etc.mean(type, f);
    }
    return total / static_cast<double>(etc.fog_count());
}

FederationModel::FederationModel(FederationTopology topology, EtcMatrix etc, EttMatrix ett)
    : topology_(std::move(topology)), etc_(std::move(etc)), ett_(std::move(ett)) {}

namespace {

std::string chain_key(std::span<const std::string> types, FogId fog) {
    std::string key = std::to_string(fog);
    for (const auto& t : types) {
        key += '|';
        key += t;
    }
    return key;
}

} // namespace

std::shared_ptr<const LatencyPmf> FederationModel::chain(std::span<const std::string> types,
                                                         FogId fog) const {
    if (types.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty micro-service chain");
    }
    const std::string key = chain_key(types, fog);
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
    }
    std::shared_ptr<const LatencyPmf> result;
    if (types.size() == 1) {
        result = std::make_shared<const LatencyPmf>(etc_.at(types[0], fog));
    } else {
        // Prefix reuse: sub-chains produced by recursive bisection share prefixes.
        auto prefix = chain(types.first(types.size() - 1), fog);
        result = std::make_shared<const LatencyPmf>(convolve(*prefix, etc_.at(types.back(), fog)));
    }
    std::lock_guard lock(mutex_);
    return memo_.emplace(key, std::move(result)).first->second;
}

std::shared_ptr<const LatencyPmf> FederationModel::end_to_end(std::span<const std::string> types,
                                                              FogId fog, std::size_t hops) const {
    if (hops == 0) {
        return chain(types, fog);
    }
    const std::string key = chain_key(types, fog) + "#" + std::to_string(hops);
    {
        std::lock_guard lock(mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
    }
    auto base = chain(types, fog);
    auto result =
        std::make_shared<const LatencyPmf>(convolve(*base, ett_.at(types.front(), fog, hops)));
    std::lock_guard lock(mutex_);
    return memo_.emplace(key, std::move(result)).first->second;
}

double FederationModel::chain_mean(std::span<const std::string> types, FogId fog) const {
    double total = 0.0;
    for (const auto& t : types) {
        total += etc_.mean(t, fog);
    }
    return total;
}

} // namespace fogfed
