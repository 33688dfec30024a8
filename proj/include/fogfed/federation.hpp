#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fogfed/dist.hpp"
#include "fogfed/model.hpp"

namespace fogfed {

using FogId = std::size_t;

inline constexpr double kMinFogMips = 1500.0;
inline constexpr double kMaxFogMips = 2500.0;

struct FogSystem {
    FogId id = 0;
    int x = 0;
    int y = 0;
    int node_count = 8;
    double node_mips = 2000.0;   // shared by every node of the fog
};

/// Fogs on an integer grid with 4-adjacency.
class FederationTopology {
public:
    FederationTopology() = default;
    /// Adjacency is derived from grid positions; ids must equal list positions.
    explicit FederationTopology(std::vector<FogSystem> fogs);

    std::span<const FogSystem> fogs() const noexcept { return fogs_; }
    std::size_t size() const noexcept { return fogs_.size(); }
    const FogSystem& fog(FogId id) const;
    std::span<const FogId> neighbors(FogId id) const;
    std::size_t degree(FogId id) const { return neighbors(id).size(); }
    std::optional<FogId> at(int x, int y) const;
    /// Largest hop distance between any two fogs.
    std::size_t diameter() const;

private:
    std::vector<FogSystem> fogs_;
    std::vector<std::vector<FogId>> adjacency_;
};

/// width x height fogs; ids are row-major (id = y * width + x). MIPS are drawn
/// uniformly from [1500, 2500] on a stream seeded by `seed`.
FederationTopology build_grid(int width, int height, std::uint64_t seed, int node_count = 8);

/// Manhattan distance between the two fogs' grid positions.
std::size_t hop_distance(const FederationTopology& topology, FogId from, FogId to);

/// Computational latency PMF per (micro-service type, fog).
class EtcMatrix {
public:
    EtcMatrix() = default;
    EtcMatrix(std::size_t fog_count, double bin_width);

    void set(const std::string& type, FogId fog, LatencyPmf pmf);
    const LatencyPmf& at(const std::string& type, FogId fog) const;
    /// Mean of the ETC entry; cached at insertion.
    double mean(const std::string& type, FogId fog) const;
    bool contains(const std::string& type) const { return rows_.count(type) != 0; }
    std::size_t fog_count() const noexcept { return fog_count_; }
    double bin_width() const noexcept { return bin_width_; }

private:
    struct Row {
        std::vector<std::optional<LatencyPmf>> pmfs;
        std::vector<double> means;
    };
    std::size_t fog_count_ = 0;
    double bin_width_ = 1.0;
    std::unordered_map<std::string, Row> rows_;
};

struct LinkProfile {
    double bandwidth_mbps = 1000.0;
    NormalSpec per_hop_latency{20.0, 5.0};
};

/// Communication latency PMF per (micro-service type, destination fog, hop
/// count). With a homogeneous link model the entry does not vary with the
/// destination, so rows are stored per (type, hops) and the destination is
/// only range-checked.
class EttMatrix {
public:
    EttMatrix() = default;
    EttMatrix(std::size_t fog_count, std::size_t max_hops, double bin_width);

    void set(const std::string& type, std::size_t hops, LatencyPmf pmf);
    const LatencyPmf& at(const std::string& type, FogId destination, std::size_t hops) const;
    double mean(const std::string& type, FogId destination, std::size_t hops) const;
    std::size_t max_hops() const noexcept { return max_hops_; }
    double bin_width() const noexcept { return bin_width_; }

private:
    std::size_t fog_count_ = 0;
    std::size_t max_hops_ = 0;
    double bin_width_ = 1.0;
    std::unordered_map<std::string, std::vector<std::optional<LatencyPmf>>> rows_;
    std::unordered_map<std::string, std::vector<double>> means_;
};

/// ETC(i, j) = discretized N(mu_MI / mips_j * 1000, sigma_MI / mips_j * 1000).
EtcMatrix build_etc(const FederationTopology& topology,
                    const std::map<std::string, NormalSpec>& profiles_mi, double bin_width);

/// ETT(i, j, h): h-fold convolution of the per-hop latency, shifted by the
/// store-and-forward transfer time of the type's input data on every hop.
/// Hop 0 is a point mass at 0 ms.
EttMatrix build_ett(const FederationTopology& topology, const LinkProfile& link,
                    const std::map<std::string, double>& data_mb, double bin_width);

/// Mean over all fogs of the ETC means for `type`.
double mean_exec_profile(const EtcMatrix& etc, const std::string& type);

/// Topology and matrices for one federation, plus a memo of the convolved
/// completion distributions that the estimators keep asking for. The memo is
/// guarded by a mutex so one model can serve concurrent runs.
class FederationModel {
public:
    FederationModel(FederationTopology topology, EtcMatrix etc, EttMatrix ett);

    const FederationTopology& topology() const noexcept { return topology_; }
    const EtcMatrix& etc() const noexcept { return etc_; }
    const EttMatrix& ett() const noexcept { return ett_; }
    double bin_width() const noexcept { return etc_.bin_width(); }

    /// convolve_chain of ETC(type, fog) over `types` in the given order.
    std::shared_ptr<const LatencyPmf> chain(std::span<const std::string> types, FogId fog) const;

    /// chain(types, fog) convolved with ETT(source_type, fog, hops).
    std::shared_ptr<const LatencyPmf> end_to_end(std::span<const std::string> types, FogId fog,
                                                 std::size_t hops) const;

    /// Sum of ETC means along `types` on `fog`.
    double chain_mean(std::span<const std::string> types, FogId fog) const;

private:
    FederationTopology topology_;
    EtcMatrix etc_;
    EttMatrix ett_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, std::shared_ptr<const LatencyPmf>> memo_;
};

} // namespace fogfed
