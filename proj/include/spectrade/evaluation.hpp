#pragma once

#include "spectrade/clearing.hpp"
#include "spectrade/market.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spectrade {

struct Metrics {
    Rational alpha;                 // traded bid value minus traded ask value
    long long channels_traded = 0;  // N_t
    Rational beta;                  // alpha per traded channel, 0 if no trade
    std::optional<Rational> eta;    // efficiency loss vs pure allocation

    bool operator==(const Metrics&) const = default;
};

// alpha_pa is the pure-allocation benchmark for the same scenario and the
// same channel budget. eta = 1 - alpha/alpha_pa is only meaningful when the
// benchmark is positive; otherwise it stays empty.
inline Metrics compute_metrics(const Settlement& settlement,
                               const Scenario& scenario,
                               const Rational& alpha_pa) {
    Metrics metrics;
    metrics.alpha = 0;
    metrics.beta = 0;
    for (const Bid& bid : scenario.bids) {
        auto it = settlement.buyers.find(bid.buyer_id);
        if (it != settlement.buyers.end())
            metrics.alpha += bid.per_channel * it->second.channels_won;
    }
    for (const Ask& ask : scenario.asks) {
        auto it = settlement.sellers.find(ask.seller_id);
        if (it != settlement.sellers.end()) {
            metrics.alpha -= ask.per_channel * it->second.channels_sold;
            metrics.channels_traded += it->second.channels_sold;
        }
    }
    if (metrics.channels_traded > 0)
        metrics.beta = metrics.alpha / metrics.channels_traded;
    if (alpha_pa > 0) metrics.eta = 1 - metrics.alpha / alpha_pa;
    return metrics;
}

// Pure-allocation benchmark: split every buyer group into demand levels
// without any elimination, hand the available channels to the largest level
// sets (ties by group id then level), and buy the same number of channels
// from the cheapest sellers. This is the welfare an allocator could reach
// with the same grouping if it ignored incentives, so it bounds what the
// truthful mechanism gives up.
inline Rational pure_allocation_with_groups(const Scenario& scenario,
                                            const std::vector<BuyerGroup>& groups,
                                            long long channel_budget) {
    std::map<int, Bid> bids = bid_table(scenario);
    struct Candidate {
        std::size_t size;
        int group_id;
        int level;
        Rational value;
    };
    std::vector<Candidate> candidates;
    for (const BuyerGroup& group : groups) {
        auto levels = split_levels(group.members, bids);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            Candidate c;
            c.size = levels[l].size();
            c.group_id = group.group_id;
            c.level = static_cast<int>(l) + 1;
            c.value = 0;
            for (int id : levels[l]) c.value += bids.at(id).per_channel;
            candidates.push_back(std::move(c));
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.size != b.size) return a.size > b.size;
                  if (a.group_id != b.group_id) return a.group_id < b.group_id;
                  return a.level < b.level;
              });
    std::vector<Money> asks;
    for (const Ask& ask : scenario.asks)
        for (int c = 0; c < ask.supply; ++c) asks.push_back(ask.per_channel);
    std::sort(asks.begin(), asks.end());

    long long assigned = std::min<long long>(
        {channel_budget, static_cast<long long>(candidates.size()),
         static_cast<long long>(asks.size())});
    Rational value = 0;
    Rational cost = 0;
    for (long long i = 0; i < assigned; ++i) {
        value += candidates[static_cast<std::size_t>(i)].value;
        cost += asks[static_cast<std::size_t>(i)];
    }
    return value - cost;
}

inline Rational pure_allocation(const Scenario& scenario,
                                long long channel_budget) {
    ConflictGraph graph =
        build_conflict_graph(scenario.bids, scenario.protection_distance);
    return pure_allocation_with_groups(scenario, form_buyer_groups(graph),
                                       channel_budget);
}

inline std::string metrics_csv_header() {
    return "seed,mechanism,pattern,sellers,buyers,distance,alpha,nt,beta,eta,"
           "alpha_pa,phi";
}

// One result row. Means over many rounds reuse the same shape, which is why
// nt is rational here.
struct CsvRow {
    std::uint64_t seed = 0;
    std::string mechanism;
    std::string pattern;
    int sellers = 0;
    int buyers = 0;
    Rational distance;
    Rational alpha;
    Rational nt;
    Rational beta;
    std::optional<Rational> eta;
    Rational alpha_pa;
    Rational phi;
};

inline std::string metrics_csv_row(const CsvRow& row) {
    std::string out = std::to_string(row.seed);
    out += "," + row.mechanism;
    out += "," + row.pattern;
    out += "," + std::to_string(row.sellers);
    out += "," + std::to_string(row.buyers);
    out += "," + format_decimal_exact(row.distance);
    out += "," + format_decimal_trimmed(row.alpha, 6);
    out += "," + format_decimal_trimmed(row.nt, 6);
    out += "," + format_decimal_trimmed(row.beta, 6);
    out += ",";
    if (row.eta) out += format_decimal_trimmed(*row.eta, 6);
    out += "," + format_decimal_trimmed(row.alpha_pa, 6);
    out += "," + format_decimal_trimmed(row.phi, 6);
    return out;
}

}  // namespace spectrade
