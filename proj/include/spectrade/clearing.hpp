#pragma once

#include "spectrade/interference.hpp"
#include "spectrade/market.hpp"
#include "spectrade/rng.hpp"
#include "spectrade/vbg.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace spectrade {

// Sellers sorted by ascending ask, their channels laid out as one ladder:
// channel i (1-based) is the i-th cheapest channel in the market.
struct ChannelLadder {
    struct Slot {
        int seller_id = 0;
        Money ask;
        int supply = 0;

        bool operator==(const Slot&) const = default;
    };

    std::vector<Slot> sellers;        // ascending ask, ties by tie-break key
    std::vector<int> channel_owner;   // per channel, index into sellers
    std::vector<long long> prefix_supply;  // prefix_supply[r] = channels of sellers[0..r]
};

inline ChannelLadder build_ladder(const std::vector<Ask>& asks,
                                  TieBreak tie = {}) {
    ChannelLadder ladder;
    for (const Ask& ask : asks)
        ladder.sellers.push_back({ask.seller_id, ask.per_channel, ask.supply});
    std::sort(ladder.sellers.begin(), ladder.sellers.end(),
              [&](const ChannelLadder::Slot& a, const ChannelLadder::Slot& b) {
                  if (a.ask != b.ask) return a.ask < b.ask;
                  return tie.key(a.seller_id) < tie.key(b.seller_id);
              });
    long long total = 0;
    for (std::size_t rank = 0; rank < ladder.sellers.size(); ++rank) {
        for (int c = 0; c < ladder.sellers[rank].supply; ++c)
            ladder.channel_owner.push_back(static_cast<int>(rank));
        total += ladder.sellers[rank].supply;
        ladder.prefix_supply.push_back(total);
    }
    return ladder;
}

// Global descending order of VBG bids; ties by group id then level so that a
// group's levels clear in their nested order.
inline std::vector<VirtualBuyerGroup> sort_vbgs(
    std::vector<VirtualBuyerGroup> vbgs, TieBreak tie = {}) {
    std::sort(vbgs.begin(), vbgs.end(),
              [&](const VirtualBuyerGroup& a, const VirtualBuyerGroup& b) {
                  if (a.bid != b.bid) return a.bid > b.bid;
                  std::uint64_t ka = tie.key(a.group_id);
                  std::uint64_t kb = tie.key(b.group_id);
                  if (ka != kb) return ka < kb;
                  return a.level < b.level;
              });
    return vbgs;
}

struct ClearingResult {
    long long k_prime = 0;           // last sustainable trade in the scan
    int winning_seller_count = 0;    // sellers strictly cheaper than the cut
    long long winning_vbg_count = 0; // channels actually traded
    Money clearing_ask;              // ask of the first excluded seller
    std::vector<ChannelLadder::Slot> winning_sellers;  // ascending ask
    std::vector<VirtualBuyerGroup> winning_vbgs;       // descending bid

    bool trade() const { return winning_vbg_count > 0; }
};

// Trade reduction: walk the candidate trades pairing the i-th highest VBG
// with the i-th cheapest channel and stop before the first i whose cumulative
// VBG revenue cannot cover i channels at that channel's ask. The seller
// owning the stopping channel is excluded and prices the trade; everyone
// cheaper sells their full supply to the highest VBGs.
inline ClearingResult determine_winners(const std::vector<Ask>& asks,
                                        const std::vector<VirtualBuyerGroup>& vbgs,
                                        TieBreak tie = {}) {
    ChannelLadder ladder = build_ladder(asks, tie);
    std::vector<VirtualBuyerGroup> ordered = sort_vbgs(vbgs, tie);
    long long supply = static_cast<long long>(ladder.channel_owner.size());
    long long depth = std::min(supply, static_cast<long long>(ordered.size()));

    ClearingResult result;
    Money revenue = 0;
    long long k_prime = depth;
    for (long long i = 1; i <= depth; ++i) {
        revenue += ordered[static_cast<std::size_t>(i - 1)].bid;
        const ChannelLadder::Slot& owner =
            ladder.sellers[static_cast<std::size_t>(
                ladder.channel_owner[static_cast<std::size_t>(i - 1)])];
        if (revenue < owner.ask * i) {
            k_prime = i - 1;
            break;
        }
    }
    result.k_prime = k_prime;
    if (k_prime == 0) return result;

    int cut_rank = ladder.channel_owner[static_cast<std::size_t>(k_prime - 1)];
    if (cut_rank == 0) return result;  // cheapest seller excluded: no trade

    result.winning_seller_count = cut_rank;
    result.winning_vbg_count = ladder.prefix_supply[static_cast<std::size_t>(cut_rank - 1)];
    result.clearing_ask = ladder.sellers[static_cast<std::size_t>(cut_rank)].ask;
    result.winning_sellers.assign(ladder.sellers.begin(),
                                  ladder.sellers.begin() + cut_rank);
    result.winning_vbgs.assign(
        ordered.begin(),
        ordered.begin() + static_cast<std::size_t>(result.winning_vbg_count));
    return result;
}

// Uniform is the real rule: all winning sellers are paid the excluded
// seller's ask. PayOwnAsk pays each winning seller its own ask instead; it
// breaks seller truthfulness by design and exists so the deviation probe can
// demonstrate that it detects a broken mechanism.
enum class PricingRule { Uniform, PayOwnAsk };

struct SellerAward {
    int channels_sold = 0;
    Money per_channel_payment;

    bool operator==(const SellerAward&) const = default;
};

struct BuyerAward {
    int channels_won = 0;
    Money total_charge;

    bool operator==(const BuyerAward&) const = default;
};

struct Settlement {
    std::map<int, SellerAward> sellers;  // winning sellers only
    std::map<int, BuyerAward> buyers;    // winning buyers only
    Rational profit;                     // auctioneer intake minus payout

    bool operator==(const Settlement&) const = default;
};

inline Settlement settle(const ClearingResult& clearing,
                         PricingRule pricing = PricingRule::Uniform) {
    Settlement settlement;
    settlement.profit = 0;
    if (!clearing.trade()) return settlement;
    for (const ChannelLadder::Slot& slot : clearing.winning_sellers) {
        Money payment = pricing == PricingRule::Uniform ? clearing.clearing_ask
                                                        : slot.ask;
        settlement.sellers[slot.seller_id] = {slot.supply, payment};
        settlement.profit -= payment * slot.supply;
    }
    for (const VirtualBuyerGroup& vbg : clearing.winning_vbgs) {
        Money share = vbg.bid / static_cast<int>(vbg.members.size());
        for (int buyer : vbg.members) {
            BuyerAward& award = settlement.buyers[buyer];
            award.channels_won += 1;
            award.total_charge += share;
        }
        settlement.profit += vbg.bid;
    }
    return settlement;
}

// Everything the pipeline computed on the way to a settlement, for reporting
// and invariant checks.
struct AuctionTrace {
    std::vector<BuyerGroup> groups;
    std::vector<GroupBidding> biddings;    // groups that produced VBGs
    std::vector<int> eliminated_groups;    // group ids with no bidding
    std::vector<VirtualBuyerGroup> sorted_vbgs;
    ChannelLadder ladder;
    ClearingResult clearing;
};

struct AuctionOutcome {
    Settlement settlement;
    AuctionTrace trace;
};

// Runs group bidding and clearing on a fixed grouping. Deviation probes use
// this to rerun price changes without regrouping, which is sound because
// grouping never reads prices.
inline AuctionOutcome run_auction_with_groups(const Scenario& scenario,
                                              std::vector<BuyerGroup> groups,
                                              BiddingRule rule,
                                              TieBreak tie = {},
                                              PricingRule pricing = PricingRule::Uniform) {
    AuctionOutcome outcome;
    outcome.trace.groups = std::move(groups);
    std::map<int, Bid> bids = bid_table(scenario);
    std::vector<VirtualBuyerGroup> vbgs;
    for (const BuyerGroup& group : outcome.trace.groups) {
        if (auto bidding = group_bidding(rule, group, bids, tie)) {
            vbgs.insert(vbgs.end(), bidding->vbgs.begin(), bidding->vbgs.end());
            outcome.trace.biddings.push_back(std::move(*bidding));
        } else {
            outcome.trace.eliminated_groups.push_back(group.group_id);
        }
    }
    outcome.trace.sorted_vbgs = sort_vbgs(vbgs, tie);
    outcome.trace.ladder = build_ladder(scenario.asks, tie);
    outcome.trace.clearing = determine_winners(scenario.asks, vbgs, tie);
    outcome.settlement = settle(outcome.trace.clearing, pricing);
    return outcome;
}

inline AuctionOutcome run_auction(const Scenario& scenario, BiddingRule rule,
                                  TieBreak tie = {},
                                  PricingRule pricing = PricingRule::Uniform) {
    ConflictGraph graph =
        build_conflict_graph(scenario.bids, scenario.protection_distance);
    return run_auction_with_groups(scenario, form_buyer_groups(graph, tie),
                                   rule, tie, pricing);
}

}  // namespace spectrade
