#pragma once

#include "spectrade/clearing.hpp"
#include "spectrade/evaluation.hpp"
#include "spectrade/market.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace spectrade {

struct BidderRef {
    enum class Side { Seller, Buyer };
    Side side = Side::Buyer;
    int id = 0;
};

// Utility against private valuations. A seller earns the payment minus its
// valuation on every channel sold. A buyer values won channels only up to its
// true demand but pays for all of them, so overstated demand hurts while the
// charge stays what the settlement says. Non-participants sit at zero.
inline Rational utility_of(const Settlement& settlement,
                           const TruthProfile& truths, BidderRef ref) {
    if (ref.side == BidderRef::Side::Seller) {
        auto award = settlement.sellers.find(ref.id);
        if (award == settlement.sellers.end()) return 0;
        const SellerTruth& truth = truths.sellers.at(ref.id);
        return (award->second.per_channel_payment - truth.valuation) *
               award->second.channels_sold;
    }
    auto award = settlement.buyers.find(ref.id);
    if (award == settlement.buyers.end()) return 0;
    const BuyerTruth& truth = truths.buyers.at(ref.id);
    int valued = std::min(award->second.channels_won, truth.demand);
    return truth.valuation * valued - award->second.total_charge;
}

struct BuyerDeviation {
    Money per_channel;
    int demand = 0;
};

struct SellerDeviation {
    Money per_channel;
};

namespace detail {

// Price ladder around the truthful value: scaled versions of the valuation
// plus probes just below, at and just above nearby competing prices, which is
// where the mechanism's case distinctions flip.
inline std::vector<Money> price_candidates(const Money& valuation,
                                           std::vector<Money> others) {
    static const Rational kEpsilon(1, 1000000);
    std::set<Money> prices;
    for (const auto& factor :
         {Rational(1, 2), Rational(3, 4), Rational(9, 10), Rational(1),
          Rational(11, 10), Rational(3, 2), Rational(2)})
        prices.insert(valuation * factor);
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    auto above = std::upper_bound(others.begin(), others.end(), valuation);
    int taken = 0;
    for (auto it = above; it != others.end() && taken < 2; ++it, ++taken) {
        prices.insert(*it - kEpsilon);
        prices.insert(*it);
        prices.insert(*it + kEpsilon);
    }
    taken = 0;
    for (auto it = std::make_reverse_iterator(above);
         it != others.rend() && taken < 2; ++it, ++taken) {
        prices.insert(*it - kEpsilon);
        prices.insert(*it);
        prices.insert(*it + kEpsilon);
    }
    std::vector<Money> out;
    for (const Money& price : prices)
        if (price > 0) out.push_back(price);
    return out;
}

}  // namespace detail

// Precomputed scenario state shared by all probes: groups never depend on
// prices or demands, so one grouping serves every deviation rerun.
struct ProbeContext {
    Scenario scenario;
    TruthProfile truths;
    std::vector<BuyerGroup> groups;
    Settlement truthful;
    BiddingRule rule = BiddingRule::Mmin;
    TieBreak tie;
    PricingRule pricing = PricingRule::Uniform;
};

inline ProbeContext make_probe_context(const Scenario& scenario,
                                       BiddingRule rule, TieBreak tie = {},
                                       PricingRule pricing = PricingRule::Uniform) {
    ProbeContext context;
    context.scenario = scenario;
    context.truths = truthful_profile(scenario);
    ConflictGraph graph =
        build_conflict_graph(scenario.bids, scenario.protection_distance);
    context.groups = form_buyer_groups(graph, tie);
    context.truthful =
        run_auction_with_groups(scenario, context.groups, rule, tie, pricing)
            .settlement;
    context.rule = rule;
    context.tie = tie;
    context.pricing = pricing;
    return context;
}

// (price, demand) pairs a buyer might try instead of the truth. Prices probe
// around its own valuation and its group co-members' bids; demands cover
// understatement, the truth and overstatement. Includes the truthful pair.
inline std::vector<BuyerDeviation> buyer_deviation_grid(
    const ProbeContext& context, int buyer_id) {
    const BuyerTruth& truth = context.truths.buyers.at(buyer_id);
    std::vector<Money> others;
    for (const BuyerGroup& group : context.groups) {
        if (std::find(group.members.begin(), group.members.end(), buyer_id) ==
            group.members.end())
            continue;
        for (int member : group.members)
            if (member != buyer_id)
                others.push_back(
                    context.truths.buyers.at(member).valuation);
        break;
    }
    std::set<int> demands{1, truth.demand, truth.demand + 1, truth.demand + 3};
    if (truth.demand > 1) demands.insert(truth.demand - 1);
    std::vector<BuyerDeviation> grid;
    for (const Money& price :
         detail::price_candidates(truth.valuation, std::move(others)))
        for (int demand : demands) grid.push_back({price, demand});
    return grid;
}

// Ask values a seller might try; supply is fixed spectrum it actually owns.
// Padded with small ask increments so every seller sees at least 20 probes.
inline std::vector<SellerDeviation> seller_deviation_grid(
    const ProbeContext& context, int seller_id) {
    const SellerTruth& truth = context.truths.sellers.at(seller_id);
    std::vector<Money> others;
    for (const Ask& ask : context.scenario.asks)
        if (ask.seller_id != seller_id) others.push_back(ask.per_channel);
    std::set<Money> prices;
    for (const Money& price :
         detail::price_candidates(truth.valuation, std::move(others)))
        prices.insert(price);
    for (int step = 1; prices.size() < 20; ++step)
        prices.insert(truth.valuation * (100 + step) / 100);
    std::vector<SellerDeviation> grid;
    for (const Money& price : prices) grid.push_back({price});
    return grid;
}

// Outcome of probing one bidder. The four cases follow the win/lose change
// between the deviant and the truthful run: 1 = lost both ways, 2 = deviation
// turned a win into a loss, 3 = deviation turned a loss into a win, 4 = won
// both ways. A violation is any deviation whose utility beats the truth.
struct DeviationReport {
    BidderRef bidder;
    Rational truthful_utility;
    Rational best_utility;
    // Best utility over deviations that keep the stated demand truthful.
    // Sellers have no demand axis, so for them this equals best_utility.
    Rational best_price_only_utility;
    long long deviations = 0;
    std::array<long long, 4> case_counts{};

    struct Violation {
        Money per_channel;
        int demand = 0;  // unused for sellers
        Rational gain;
    };
    std::optional<Violation> violation;
};

namespace detail {

inline void record_case(DeviationReport& report, bool deviant_won,
                        bool truthful_won) {
    int index = deviant_won ? (truthful_won ? 3 : 2) : (truthful_won ? 1 : 0);
    ++report.case_counts[static_cast<std::size_t>(index)];
}

}  // namespace detail

inline DeviationReport probe_buyer(const ProbeContext& context, int buyer_id) {
    DeviationReport report;
    report.bidder = {BidderRef::Side::Buyer, buyer_id};
    report.truthful_utility =
        utility_of(context.truthful, context.truths, report.bidder);
    report.best_utility = report.truthful_utility;
    report.best_price_only_utility = report.truthful_utility;
    bool truthful_won = context.truthful.buyers.count(buyer_id) > 0;
    int true_demand = context.truths.buyers.at(buyer_id).demand;
    Scenario deviant = context.scenario;
    auto bid = std::find_if(
        deviant.bids.begin(), deviant.bids.end(),
        [&](const Bid& b) { return b.buyer_id == buyer_id; });
    for (const BuyerDeviation& deviation :
         buyer_deviation_grid(context, buyer_id)) {
        bid->per_channel = deviation.per_channel;
        bid->demand = deviation.demand;
        Settlement settlement =
            run_auction_with_groups(deviant, context.groups, context.rule,
                                    context.tie, context.pricing)
                .settlement;
        Rational utility = utility_of(settlement, context.truths, report.bidder);
        ++report.deviations;
        detail::record_case(report, settlement.buyers.count(buyer_id) > 0,
                            truthful_won);
        if (deviation.demand == true_demand &&
            utility > report.best_price_only_utility)
            report.best_price_only_utility = utility;
        if (utility > report.best_utility) {
            report.best_utility = utility;
            report.violation = {deviation.per_channel, deviation.demand,
                                utility - report.truthful_utility};
        }
    }
    return report;
}

inline DeviationReport probe_seller(const ProbeContext& context, int seller_id) {
    DeviationReport report;
    report.bidder = {BidderRef::Side::Seller, seller_id};
    report.truthful_utility =
        utility_of(context.truthful, context.truths, report.bidder);
    report.best_utility = report.truthful_utility;
    report.best_price_only_utility = report.truthful_utility;
    bool truthful_won = context.truthful.sellers.count(seller_id) > 0;
    Scenario deviant = context.scenario;
    auto ask = std::find_if(
        deviant.asks.begin(), deviant.asks.end(),
        [&](const Ask& a) { return a.seller_id == seller_id; });
    for (const SellerDeviation& deviation :
         seller_deviation_grid(context, seller_id)) {
        ask->per_channel = deviation.per_channel;
        Settlement settlement =
            run_auction_with_groups(deviant, context.groups, context.rule,
                                    context.tie, context.pricing)
                .settlement;
        Rational utility = utility_of(settlement, context.truths, report.bidder);
        ++report.deviations;
        detail::record_case(report, settlement.sellers.count(seller_id) > 0,
                            truthful_won);
        if (utility > report.best_utility) {
            report.best_utility = utility;
            report.best_price_only_utility = utility;
            report.violation =
                {deviation.per_channel, 0, utility - report.truthful_utility};
        }
    }
    return report;
}

// Structural soundness of one auction outcome. Returns human-readable
// violation descriptions; an empty vector means every check passed.
inline std::vector<std::string> economic_violations(const AuctionOutcome& outcome,
                                                    const Scenario& scenario) {
    std::vector<std::string> problems;
    const Settlement& settlement = outcome.settlement;
    const ClearingResult& clearing = outcome.trace.clearing;

    if (settlement.profit < 0)
        problems.push_back("auctioneer profit is negative");

    std::map<int, Ask> asks;
    for (const Ask& ask : scenario.asks) asks[ask.seller_id] = ask;
    long long sold = 0;
    for (const auto& [id, award] : settlement.sellers) {
        const Ask& ask = asks.at(id);
        if (award.channels_sold != ask.supply)
            problems.push_back("seller " + std::to_string(id) +
                               " sold a partial supply");
        if (award.per_channel_payment < ask.per_channel)
            problems.push_back("seller " + std::to_string(id) +
                               " paid below its ask");
        sold += award.channels_sold;
    }

    std::map<int, Bid> bids = bid_table(scenario);
    for (const auto& [id, award] : settlement.buyers) {
        const Bid& bid = bids.at(id);
        if (award.channels_won > bid.demand)
            problems.push_back("buyer " + std::to_string(id) +
                               " won more than its demand");
        if (award.total_charge > bid.per_channel * award.channels_won)
            problems.push_back("buyer " + std::to_string(id) +
                               " charged above its bid");
    }

    // Channels leave sellers one per winning VBG; every member of that VBG
    // shares the channel, so buyer awards are checked against winning
    // levels below, not against the channel count.
    if (sold != clearing.winning_vbg_count)
        problems.push_back("traded channel counts disagree");

    // Winning VBGs of a group must be its levels 1..m, so each winning
    // member's award equals the number of winning levels that contain it.
    std::map<int, int> group_levels;
    std::map<int, int> member_wins;
    for (const VirtualBuyerGroup& vbg : clearing.winning_vbgs) {
        int& top = group_levels[vbg.group_id];
        if (vbg.level != top + 1)
            problems.push_back("group " + std::to_string(vbg.group_id) +
                               " won level " + std::to_string(vbg.level) +
                               " out of order");
        top = std::max(top, vbg.level);
        for (int member : vbg.members) ++member_wins[member];
    }
    for (const auto& [id, award] : settlement.buyers)
        if (member_wins[id] != award.channels_won)
            problems.push_back("buyer " + std::to_string(id) +
                               " award disagrees with winning levels");

    return problems;
}

}  // namespace spectrade
