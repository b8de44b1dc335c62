#pragma once

#include "spectrade/clearing.hpp"
#include "spectrade/evaluation.hpp"
#include "spectrade/generator.hpp"
#include "spectrade/parallel.hpp"
#include "spectrade/rng.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spectrade {

struct RunConfig {
    GeneratorConfig generator;
    BiddingRule rule = BiddingRule::Mmin;
    TieBreak tie;
    PricingRule pricing = PricingRule::Uniform;
};

// Seed of the scenario used by one round of one sweep point. Derived, not
// sequential, so neighbouring points never share scenarios.
inline std::uint64_t round_seed(std::uint64_t master, std::uint64_t point,
                                std::uint64_t round) {
    return mix_seed(mix_seed(master, point), round);
}

struct RoundOutput {
    Metrics metrics;
    Rational alpha_pa;
    Rational phi;
};

inline RoundOutput evaluate_outcome(const AuctionOutcome& outcome,
                                    const Scenario& scenario) {
    RoundOutput output;
    long long traded = 0;
    for (const auto& [id, award] : outcome.settlement.sellers)
        traded += award.channels_sold;
    output.alpha_pa =
        pure_allocation_with_groups(scenario, outcome.trace.groups, traded);
    output.metrics =
        compute_metrics(outcome.settlement, scenario, output.alpha_pa);
    output.phi = outcome.settlement.profit;
    return output;
}

inline RoundOutput run_round(const RunConfig& config, std::uint64_t scenario_seed) {
    Scenario scenario = generate_scenario(config.generator, scenario_seed);
    AuctionOutcome outcome =
        run_auction(scenario, config.rule, config.tie, config.pricing);
    return evaluate_outcome(outcome, scenario);
}

enum class SweptParameter { Sellers, Buyers, Distance, Pattern, Distribution, Bidding };

inline std::optional<SweptParameter> parse_swept_parameter(std::string_view text) {
    if (text == "sellers") return SweptParameter::Sellers;
    if (text == "buyers") return SweptParameter::Buyers;
    if (text == "distance") return SweptParameter::Distance;
    if (text == "pattern") return SweptParameter::Pattern;
    if (text == "distribution") return SweptParameter::Distribution;
    if (text == "bidding") return SweptParameter::Bidding;
    return std::nullopt;
}

inline void apply_value(RunConfig& config, SweptParameter parameter,
                        const std::string& value) {
    auto as_count = [&](const char* what) {
        try {
            std::size_t used = 0;
            int count = std::stoi(value, &used);
            if (used != value.size() || count < 1)
                throw std::invalid_argument(what);
            return count;
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad ") + what + " '" +
                                        value + "'");
        }
    };
    switch (parameter) {
        case SweptParameter::Sellers:
            config.generator.sellers = as_count("seller count");
            break;
        case SweptParameter::Buyers:
            config.generator.buyers = as_count("buyer count");
            break;
        case SweptParameter::Distance: {
            auto distance = parse_decimal(value);
            if (!distance || *distance <= 0)
                throw std::invalid_argument("bad distance '" + value + "'");
            config.generator.protection_distance = *distance;
            break;
        }
        case SweptParameter::Pattern: {
            auto pattern = parse_pattern(value);
            if (!pattern)
                throw std::invalid_argument("bad pattern '" + value + "'");
            config.generator.pattern = *pattern;
            break;
        }
        case SweptParameter::Distribution: {
            auto distribution = parse_distribution(value);
            if (!distribution)
                throw std::invalid_argument("bad distribution '" + value + "'");
            config.generator.distribution = *distribution;
            break;
        }
        case SweptParameter::Bidding: {
            auto rule = parse_bidding_rule(value);
            if (!rule)
                throw std::invalid_argument("bad bidding rule '" + value + "'");
            config.rule = *rule;
            break;
        }
    }
}

struct SweepPlan {
    RunConfig base;
    SweptParameter parameter = SweptParameter::Sellers;
    std::vector<std::string> values;
    int rounds = 500;
};

// Per-point means over the rounds. eta averages only the rounds where the
// benchmark was positive; eta_rounds says how many those were.
struct PointSummary {
    std::string value;
    RunConfig config;
    long long rounds = 0;
    Rational mean_alpha;
    Rational mean_nt;
    Rational mean_beta;
    Rational mean_alpha_pa;
    Rational mean_phi;
    std::optional<Rational> mean_eta;
    long long eta_rounds = 0;
};

inline std::vector<PointSummary> run_sweep(const SweepPlan& plan,
                                           std::uint64_t master_seed,
                                           int workers = 1) {
    if (plan.values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    if (plan.rounds < 1)
        throw std::invalid_argument("sweep needs at least one round");
    std::vector<PointSummary> summaries;
    for (std::size_t point = 0; point < plan.values.size(); ++point) {
        PointSummary summary;
        summary.value = plan.values[point];
        summary.config = plan.base;
        apply_value(summary.config, plan.parameter, plan.values[point]);
        validate_config(summary.config.generator);
        summary.rounds = plan.rounds;

        std::vector<RoundOutput> rounds(static_cast<std::size_t>(plan.rounds));
        parallel_for(plan.rounds, workers, [&](long long round) {
            rounds[static_cast<std::size_t>(round)] = run_round(
                summary.config,
                round_seed(master_seed, static_cast<std::uint64_t>(point),
                           static_cast<std::uint64_t>(round)));
        });

        Rational alpha = 0, nt = 0, beta = 0, alpha_pa = 0, phi = 0, eta = 0;
        for (const RoundOutput& round : rounds) {
            alpha += round.metrics.alpha;
            nt += round.metrics.channels_traded;
            beta += round.metrics.beta;
            alpha_pa += round.alpha_pa;
            phi += round.phi;
            if (round.metrics.eta) {
                eta += *round.metrics.eta;
                ++summary.eta_rounds;
            }
        }
        summary.mean_alpha = alpha / plan.rounds;
        summary.mean_nt = nt / plan.rounds;
        summary.mean_beta = beta / plan.rounds;
        summary.mean_alpha_pa = alpha_pa / plan.rounds;
        summary.mean_phi = phi / plan.rounds;
        if (summary.eta_rounds > 0) summary.mean_eta = eta / summary.eta_rounds;
        summaries.push_back(std::move(summary));
    }
    return summaries;
}

inline CsvRow summary_csv_row(const PointSummary& summary,
                              std::uint64_t master_seed) {
    CsvRow row;
    row.seed = master_seed;
    row.mechanism = to_string(summary.config.rule);
    row.pattern = to_string(summary.config.generator.pattern);
    row.sellers = summary.config.generator.sellers;
    row.buyers = summary.config.generator.buyers;
    row.distance = summary.config.generator.protection_distance;
    row.alpha = summary.mean_alpha;
    row.nt = summary.mean_nt;
    row.beta = summary.mean_beta;
    row.eta = summary.mean_eta;
    row.alpha_pa = summary.mean_alpha_pa;
    row.phi = summary.mean_phi;
    return row;
}

inline std::string sweep_csv(const std::vector<PointSummary>& summaries,
                             std::uint64_t master_seed) {
    std::string out = metrics_csv_header() + "\n";
    for (const PointSummary& summary : summaries)
        out += metrics_csv_row(summary_csv_row(summary, master_seed)) + "\n";
    return out;
}

}  // namespace spectrade
