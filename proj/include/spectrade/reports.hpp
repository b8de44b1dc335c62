#pragma once

#include "spectrade/clearing.hpp"
#include "spectrade/evaluation.hpp"
#include "spectrade/market.hpp"

#include <map>
#include <sstream>
#include <string>

namespace spectrade {

inline std::string dump_groups(const std::vector<BuyerGroup>& groups) {
    std::ostringstream out;
    for (const BuyerGroup& group : groups) {
        out << "group " << group.group_id << ":";
        for (int id : group.members) out << " B" << id;
        out << "\n";
    }
    return out.str();
}

// Per group: the critical member, then one line per VBG level with its
// member set and bid.
inline std::string dump_biddings(const AuctionTrace& trace) {
    std::ostringstream out;
    for (const GroupBidding& bidding : trace.biddings) {
        out << "group " << bidding.group_id << " critical B"
            << bidding.critical_buyer << " share "
            << format_decimal_exact(bidding.per_member_share) << "\n";
        for (const VirtualBuyerGroup& vbg : bidding.vbgs) {
            out << "  level " << vbg.level << " bid "
                << format_decimal_exact(vbg.bid) << " members";
            for (int id : vbg.members) out << " B" << id;
            out << "\n";
        }
    }
    for (int group_id : trace.eliminated_groups)
        out << "group " << group_id << " eliminated\n";
    return out.str();
}

// The trade-reduction scan: VBG bids in clearing order against the channel
// ladder, with the cut marked.
inline std::string dump_clearing(const AuctionTrace& trace) {
    std::ostringstream out;
    const auto& vbgs = trace.sorted_vbgs;
    const auto& ladder = trace.ladder;
    std::size_t depth =
        std::min(vbgs.size(), ladder.channel_owner.size());
    for (std::size_t i = 0; i < depth; ++i) {
        const ChannelLadder::Slot& owner =
            ladder.sellers[static_cast<std::size_t>(ladder.channel_owner[i])];
        out << (static_cast<long long>(i) <
                        trace.clearing.winning_vbg_count
                    ? "  win "
                    : "      ")
            << i + 1 << ": vbg (G" << vbgs[i].group_id << ",l"
            << vbgs[i].level << ") bid " << format_decimal_exact(vbgs[i].bid)
            << " vs S" << owner.seller_id << " ask "
            << format_decimal_exact(owner.ask) << "\n";
    }
    out << "cut k'=" << trace.clearing.k_prime << ", trades "
        << trace.clearing.winning_vbg_count;
    if (trace.clearing.trade())
        out << " at clearing ask "
            << format_decimal_exact(trace.clearing.clearing_ask);
    out << "\n";
    return out.str();
}

inline std::string dump_settlement(const Settlement& settlement) {
    std::ostringstream out;
    for (const auto& [id, award] : settlement.sellers)
        out << "seller S" << id << ": sold " << award.channels_sold << " at "
            << format_decimal_exact(award.per_channel_payment) << ", paid "
            << format_decimal_exact(Rational(award.per_channel_payment) *
                                    award.channels_sold)
            << "\n";
    for (const auto& [id, award] : settlement.buyers)
        out << "buyer B" << id << ": won " << award.channels_won
            << ", charged " << format_decimal_exact(award.total_charge)
            << "\n";
    out << "auctioneer profit " << format_decimal_exact(settlement.profit)
        << "\n";
    return out.str();
}

inline std::string dump_metrics(const Metrics& metrics,
                                const Rational& alpha_pa) {
    std::ostringstream out;
    out << "alpha " << format_decimal_trimmed(metrics.alpha, 6) << ", traded "
        << metrics.channels_traded << ", beta "
        << format_decimal_trimmed(metrics.beta, 6) << ", alpha_pa "
        << format_decimal_trimmed(alpha_pa, 6);
    if (metrics.eta)
        out << ", eta " << format_decimal_trimmed(*metrics.eta, 6);
    out << "\n";
    return out.str();
}

}  // namespace spectrade
