#pragma once

#include "spectrade/interference.hpp"
#include "spectrade/market.hpp"
#include "spectrade/rng.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace spectrade {

// A virtual buyer group: the members of one buyer group that want at least
// `level` channels, bidding `bid` for one shared channel. Splitting a group
// into one VBG per demand level turns multi-channel demands into single
// channel bids while keeping group members on a common price.
struct VirtualBuyerGroup {
    int group_id = 0;
    int level = 0;
    std::vector<int> members;  // buyer ids, ascending
    Money bid;

    bool operator==(const VirtualBuyerGroup&) const = default;
};

// Result of one group's internal bidding: the critical member whose price the
// others adopt, the per-member share, and the VBG ladder. A group that ends
// up with no biddable members (singletons in particular) produces none.
struct GroupBidding {
    int group_id = 0;
    int critical_buyer = 0;
    Money per_member_share;
    std::vector<VirtualBuyerGroup> vbgs;
};

enum class BiddingRule { Mmin, Gmax };

inline const char* to_string(BiddingRule rule) {
    return rule == BiddingRule::Mmin ? "mmin" : "gmax";
}

inline std::optional<BiddingRule> parse_bidding_rule(std::string_view text) {
    if (text == "mmin") return BiddingRule::Mmin;
    if (text == "gmax") return BiddingRule::Gmax;
    return std::nullopt;
}

// Demand-level split of a member set: level l holds everyone demanding at
// least l channels, for l = 1..max demand. Levels are nested by construction.
inline std::vector<std::vector<int>> split_levels(
    const std::vector<int>& members, const std::map<int, Bid>& bids) {
    int max_demand = 0;
    for (int id : members)
        max_demand = std::max(max_demand, bids.at(id).demand);
    std::vector<std::vector<int>> levels;
    for (int level = 1; level <= max_demand; ++level) {
        std::vector<int> ids;
        for (int id : members)
            if (bids.at(id).demand >= level) ids.push_back(id);
        levels.push_back(std::move(ids));
    }
    return levels;
}

namespace detail {

inline std::vector<VirtualBuyerGroup> build_vbgs(
    int group_id, const std::vector<int>& members,
    const std::map<int, Bid>& bids, const Money& share) {
    std::vector<VirtualBuyerGroup> vbgs;
    auto levels = split_levels(members, bids);
    for (std::size_t l = 0; l < levels.size(); ++l) {
        VirtualBuyerGroup vbg;
        vbg.group_id = group_id;
        vbg.level = static_cast<int>(l) + 1;
        vbg.members = levels[l];
        vbg.bid = share * static_cast<int>(levels[l].size());
        vbgs.push_back(std::move(vbg));
    }
    return vbgs;
}

}  // namespace detail

// Minimum-member bidding: the lowest bidder is the critical member and drops
// out; everyone else stays and adopts its price. The ladder then spans the
// demand levels of the remaining members. Bid-monotone: raising a bid can
// only move a member out of the critical seat, never into it.
inline std::optional<GroupBidding> bid_mmin(const BuyerGroup& group,
                                            const std::map<int, Bid>& bids,
                                            TieBreak tie = {}) {
    if (group.members.size() < 2) return std::nullopt;
    int critical = group.members.front();
    for (int id : group.members) {
        const Money& price = bids.at(id).per_channel;
        const Money& best = bids.at(critical).per_channel;
        if (price < best || (price == best && tie.key(id) < tie.key(critical)))
            critical = id;
    }
    std::vector<int> remaining;
    for (int id : group.members)
        if (id != critical) remaining.push_back(id);
    GroupBidding bidding;
    bidding.group_id = group.group_id;
    bidding.critical_buyer = critical;
    bidding.per_member_share = bids.at(critical).per_channel;
    bidding.vbgs = detail::build_vbgs(group.group_id, remaining, bids,
                                      bidding.per_member_share);
    return bidding;
}

// Gain-maximising bidding: order members by descending bid, evaluate each
// rank i >= 2 as candidate revenue b_(i) * (i - 1), and make the best rank
// the critical member (ties toward the smaller rank). Members bidding
// strictly below the critical price drop out with it; the survivors adopt
// the critical price.
inline std::optional<GroupBidding> bid_gmax(const BuyerGroup& group,
                                            const std::map<int, Bid>& bids,
                                            TieBreak tie = {}) {
    if (group.members.size() < 2) return std::nullopt;
    std::vector<int> ranked = group.members;
    std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        const Money& pa = bids.at(a).per_channel;
        const Money& pb = bids.at(b).per_channel;
        if (pa != pb) return pa > pb;
        return tie.key(a) < tie.key(b);
    });
    std::size_t best_rank = 1;
    Money best_revenue = -1;
    for (std::size_t rank = 1; rank < ranked.size(); ++rank) {
        Money revenue =
            bids.at(ranked[rank]).per_channel * static_cast<int>(rank);
        if (revenue > best_revenue) {
            best_revenue = revenue;
            best_rank = rank;
        }
    }
    int critical = ranked[best_rank];
    const Money& critical_price = bids.at(critical).per_channel;
    std::vector<int> survivors;
    for (int id : group.members)
        if (id != critical && bids.at(id).per_channel >= critical_price)
            survivors.push_back(id);
    GroupBidding bidding;
    bidding.group_id = group.group_id;
    bidding.critical_buyer = critical;
    bidding.per_member_share = critical_price;
    bidding.vbgs =
        detail::build_vbgs(group.group_id, survivors, bids, critical_price);
    return bidding;
}

inline std::optional<GroupBidding> group_bidding(BiddingRule rule,
                                                 const BuyerGroup& group,
                                                 const std::map<int, Bid>& bids,
                                                 TieBreak tie = {}) {
    return rule == BiddingRule::Mmin ? bid_mmin(group, bids, tie)
                                     : bid_gmax(group, bids, tie);
}

}  // namespace spectrade
