#pragma once

#include "spectrade/market.hpp"
#include "spectrade/rational.hpp"
#include "spectrade/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spectrade {

// Price and quantity ranges for generated bids. base_bid lifts the floor of
// the unit price draw: buyers land in (base_bid, 1], sellers in (base_bid, 2],
// so a higher base compresses the spread between the two sides.
struct BiddingPattern {
    int max_supply = 3;
    int max_demand = 5;
    Rational base_bid = 0;

    bool operator==(const BiddingPattern&) const = default;
};

enum class Distribution { Random, Cluster };

inline const char* to_string(Distribution distribution) {
    return distribution == Distribution::Random ? "random" : "cluster";
}

inline std::optional<Distribution> parse_distribution(std::string_view text) {
    if (text == "random") return Distribution::Random;
    if (text == "cluster") return Distribution::Cluster;
    return std::nullopt;
}

struct GeneratorConfig {
    int sellers = 10;
    int buyers = 100;
    Rational area_side = 100;
    Rational protection_distance = 10;
    BiddingPattern pattern;
    Distribution distribution = Distribution::Random;
    int hotspots = 2;           // cluster only
    Rational hotspot_side = 20; // cluster only
    int hotspot_buyers = 20;    // per hotspot, cluster only

    bool operator==(const GeneratorConfig&) const = default;
};

// "3,5,0.1" or "3:5:0.1" -> max supply, max demand, base bid.
inline std::optional<BiddingPattern> parse_pattern(std::string_view text) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ':') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    if (fields.size() != 3) return std::nullopt;
    BiddingPattern pattern;
    try {
        std::size_t used = 0;
        pattern.max_supply = std::stoi(fields[0], &used);
        if (used != fields[0].size()) return std::nullopt;
        pattern.max_demand = std::stoi(fields[1], &used);
        if (used != fields[1].size()) return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    auto base = parse_decimal(fields[2]);
    if (!base) return std::nullopt;
    pattern.base_bid = *base;
    if (pattern.max_supply < 1 || pattern.max_demand < 1) return std::nullopt;
    if (pattern.base_bid < 0 || pattern.base_bid >= 1) return std::nullopt;
    return pattern;
}

inline std::string to_string(const BiddingPattern& pattern) {
    return std::to_string(pattern.max_supply) + ":" +
           std::to_string(pattern.max_demand) + ":" +
           format_decimal_exact(pattern.base_bid);
}

namespace detail {

// Substream tags; entity draws stay stable when other entity counts change.
inline constexpr std::uint64_t kSellerStream = 1;
inline constexpr std::uint64_t kBuyerStream = 2;
inline constexpr std::uint64_t kHotspotStream = 3;

// All generated quantities live on a millionths grid so they stay exact and
// the conflict graph can compare distances in integers.
inline constexpr std::int64_t kGrid = 1000000;

// Uniform over (0, 1], millionth steps.
inline Rational unit_price(SplitMix64& rng) {
    return Rational(rng.between(1, kGrid), kGrid);
}

// Uniform over [lo, lo + span], millionth steps.
inline Rational offset_in(SplitMix64& rng, const Rational& lo,
                          const Rational& span) {
    return lo + span * Rational(rng.between(0, kGrid), kGrid);
}

}  // namespace detail

inline void validate_config(const GeneratorConfig& config) {
    if (config.sellers < 1 || config.buyers < 1)
        throw ScenarioError("need at least one seller and one buyer");
    if (config.area_side <= 0 || config.protection_distance <= 0)
        throw ScenarioError("area and protection distance must be positive");
    if (config.pattern.max_supply < 1 || config.pattern.max_demand < 1)
        throw ScenarioError("pattern quantities must be at least 1");
    if (config.pattern.base_bid < 0 || config.pattern.base_bid >= 1)
        throw ScenarioError("base bid must lie in [0, 1)");
    if (config.distribution == Distribution::Cluster) {
        if (config.hotspots < 1 || config.hotspot_buyers < 1)
            throw ScenarioError("cluster needs hotspots with buyers");
        if (config.hotspot_side <= 0 || config.hotspot_side > config.area_side)
            throw ScenarioError("hotspot side must fit inside the area");
        if (config.hotspots * config.hotspot_buyers > config.buyers)
            throw ScenarioError("hotspot buyers exceed the buyer count");
    }
}

// Deterministic scenario generation: every entity draws from its own
// substream of the seed, asks are base + unit * (2 - base), bids are
// base + unit * (1 - base), and positions are uniform over the area or over
// hotspot boxes placed uniformly inside the area.
inline Scenario generate_scenario(const GeneratorConfig& config,
                                  std::uint64_t seed) {
    validate_config(config);
    Scenario scenario;
    scenario.area_side = config.area_side;
    scenario.protection_distance = config.protection_distance;
    scenario.rng_seed = seed;

    for (int i = 0; i < config.sellers; ++i) {
        SplitMix64 rng = substream(seed, detail::kSellerStream,
                                   static_cast<std::uint64_t>(i));
        Ask ask;
        ask.seller_id = i + 1;
        ask.per_channel = config.pattern.base_bid +
                          detail::unit_price(rng) * (2 - config.pattern.base_bid);
        ask.supply = static_cast<int>(rng.between(1, config.pattern.max_supply));
        scenario.asks.push_back(std::move(ask));
    }

    int clustered = config.distribution == Distribution::Cluster
                        ? config.hotspots * config.hotspot_buyers
                        : 0;
    int base_buyers = config.buyers - clustered;

    std::vector<std::pair<Rational, Rational>> hotspot_corners;
    for (int h = 0; h < config.hotspots && clustered > 0; ++h) {
        SplitMix64 rng = substream(seed, detail::kHotspotStream,
                                   static_cast<std::uint64_t>(h));
        Rational range = config.area_side - config.hotspot_side;
        hotspot_corners.emplace_back(detail::offset_in(rng, 0, range),
                                     detail::offset_in(rng, 0, range));
    }

    for (int i = 0; i < config.buyers; ++i) {
        SplitMix64 rng = substream(seed, detail::kBuyerStream,
                                   static_cast<std::uint64_t>(i));
        Bid bid;
        bid.buyer_id = i + 1;
        bid.per_channel = config.pattern.base_bid +
                          detail::unit_price(rng) * (1 - config.pattern.base_bid);
        bid.demand = static_cast<int>(rng.between(1, config.pattern.max_demand));
        if (i < base_buyers) {
            bid.x = detail::offset_in(rng, 0, config.area_side);
            bid.y = detail::offset_in(rng, 0, config.area_side);
        } else {
            const auto& corner =
                hotspot_corners[static_cast<std::size_t>(i - base_buyers) /
                                static_cast<std::size_t>(config.hotspot_buyers)];
            bid.x = detail::offset_in(rng, corner.first, config.hotspot_side);
            bid.y = detail::offset_in(rng, corner.second, config.hotspot_side);
        }
        scenario.bids.push_back(std::move(bid));
    }
    return scenario;
}

}  // namespace spectrade
