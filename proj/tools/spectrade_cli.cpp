// Command line front end for the double auction stack: generate scenarios,
// clear single markets, sweep experiment grids and probe truthfulness.

#include "spectrade/spectrade.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace spectrade;

struct GenerationFlags {
    int sellers = 10;
    int buyers = 100;
    std::string area = "100";
    std::string distance = "10";
    std::string pattern = "3,5,0";
    std::string distribution = "random";
    int hotspots = 2;
    std::string hotspot_side = "20";
    int hotspot_buyers = 20;
};

void add_generation_flags(CLI::App* cmd, GenerationFlags& flags) {
    cmd->add_option("--sellers", flags.sellers, "number of sellers");
    cmd->add_option("--buyers", flags.buyers, "number of buyers");
    cmd->add_option("--area", flags.area, "square area side length");
    cmd->add_option("--distance", flags.distance, "protection distance");
    cmd->add_option("--pattern", flags.pattern,
                    "max supply, max demand, base bid (c,d,b)");
    cmd->add_option("--distribution", flags.distribution,
                    "buyer placement: random or cluster");
    cmd->add_option("--hotspots", flags.hotspots,
                    "hotspot count for cluster placement");
    cmd->add_option("--hotspot-side", flags.hotspot_side,
                    "hotspot box side length");
    cmd->add_option("--hotspot-buyers", flags.hotspot_buyers,
                    "buyers per hotspot");
}

GeneratorConfig make_generator_config(const GenerationFlags& flags) {
    GeneratorConfig config;
    config.sellers = flags.sellers;
    config.buyers = flags.buyers;
    auto area = parse_decimal(flags.area);
    if (!area) throw std::invalid_argument("bad --area '" + flags.area + "'");
    config.area_side = *area;
    auto distance = parse_decimal(flags.distance);
    if (!distance)
        throw std::invalid_argument("bad --distance '" + flags.distance + "'");
    config.protection_distance = *distance;
    auto pattern = parse_pattern(flags.pattern);
    if (!pattern)
        throw std::invalid_argument("bad --pattern '" + flags.pattern + "'");
    config.pattern = *pattern;
    auto distribution = parse_distribution(flags.distribution);
    if (!distribution)
        throw std::invalid_argument("bad --distribution '" +
                                    flags.distribution + "'");
    config.distribution = *distribution;
    config.hotspots = flags.hotspots;
    auto side = parse_decimal(flags.hotspot_side);
    if (!side)
        throw std::invalid_argument("bad --hotspot-side '" +
                                    flags.hotspot_side + "'");
    config.hotspot_side = *side;
    config.hotspot_buyers = flags.hotspot_buyers;
    validate_config(config);
    return config;
}

BiddingRule make_bidding_rule(const std::string& text) {
    auto rule = parse_bidding_rule(text);
    if (!rule) throw std::invalid_argument("bad --bidding '" + text + "'");
    return *rule;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario '" + path + "'");
    return parse_scenario(in);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << content;
}

int cmd_gen(const GenerationFlags& flags, std::uint64_t seed,
            const std::string& out_path) {
    GeneratorConfig config = make_generator_config(flags);
    Scenario scenario = generate_scenario(config, round_seed(seed, 0, 0));
    std::string text = serialize_scenario(scenario);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return 0;
}

int cmd_run(const GenerationFlags& flags, const std::string& scenario_path,
            const std::string& bidding, std::uint64_t seed,
            const std::string& out_path, bool quiet) {
    Scenario scenario;
    std::uint64_t seed_column = seed;
    std::string pattern_column = "-";
    if (scenario_path.empty()) {
        GeneratorConfig config = make_generator_config(flags);
        scenario = generate_scenario(config, round_seed(seed, 0, 0));
        pattern_column = to_string(config.pattern);
    } else {
        scenario = load_scenario(scenario_path);
        seed_column = scenario.rng_seed;
    }
    BiddingRule rule = make_bidding_rule(bidding);
    AuctionOutcome outcome = run_auction(scenario, rule);
    RoundOutput output = evaluate_outcome(outcome, scenario);

    if (!quiet) {
        std::cout << dump_groups(outcome.trace.groups);
        std::cout << dump_biddings(outcome.trace);
        std::cout << dump_clearing(outcome.trace);
        std::cout << dump_settlement(outcome.settlement);
        std::cout << dump_metrics(output.metrics, output.alpha_pa);
    }

    CsvRow row;
    row.seed = seed_column;
    row.mechanism = to_string(rule);
    row.pattern = pattern_column;
    row.sellers = static_cast<int>(scenario.asks.size());
    row.buyers = static_cast<int>(scenario.bids.size());
    row.distance = scenario.protection_distance;
    row.alpha = output.metrics.alpha;
    row.nt = output.metrics.channels_traded;
    row.beta = output.metrics.beta;
    row.eta = output.metrics.eta;
    row.alpha_pa = output.alpha_pa;
    row.phi = output.phi;
    std::string csv = metrics_csv_header() + "\n" + metrics_csv_row(row) + "\n";
    std::cout << csv;
    if (!out_path.empty()) write_file(out_path, csv);
    return 0;
}

int cmd_sweep(const GenerationFlags& flags, const std::string& bidding,
              const std::string& parameter, const std::string& values,
              int rounds, std::uint64_t seed, int workers,
              const std::string& out_path) {
    SweepPlan plan;
    plan.base.generator = make_generator_config(flags);
    plan.base.rule = make_bidding_rule(bidding);
    auto swept = parse_swept_parameter(parameter);
    if (!swept) throw std::invalid_argument("bad --param '" + parameter + "'");
    plan.parameter = *swept;
    std::stringstream list(values);
    std::string item;
    while (std::getline(list, item, ','))
        if (!item.empty()) plan.values.push_back(item);
    plan.rounds = rounds;

    std::string csv = sweep_csv(run_sweep(plan, seed, workers), seed);
    std::cout << csv;
    if (!out_path.empty()) write_file(out_path, csv);
    return 0;
}

std::string describe_deviation(const DeviationReport& report) {
    std::ostringstream out;
    const auto& violation = *report.violation;
    if (report.bidder.side == BidderRef::Side::Buyer)
        out << "buyer " << report.bidder.id << " deviates to bid "
            << format_decimal_exact(violation.per_channel) << " demand "
            << violation.demand;
    else
        out << "seller " << report.bidder.id << " deviates to ask "
            << format_decimal_exact(violation.per_channel);
    out << ", utility gain " << format_decimal_exact(violation.gain);
    return out.str();
}

// Serializes the deviant market so the violation can be replayed with `run`.
std::string counterexample_text(const Scenario& scenario,
                                const DeviationReport& report) {
    Scenario deviant = scenario;
    const auto& violation = *report.violation;
    if (report.bidder.side == BidderRef::Side::Buyer) {
        for (Bid& bid : deviant.bids)
            if (bid.buyer_id == report.bidder.id) {
                bid.per_channel = violation.per_channel;
                bid.demand = violation.demand;
            }
    } else {
        for (Ask& ask : deviant.asks)
            if (ask.seller_id == report.bidder.id)
                ask.per_channel = violation.per_channel;
    }
    return "# " + describe_deviation(report) + "\n" +
           serialize_scenario(deviant);
}

int cmd_verify(const GenerationFlags& flags, const std::string& bidding,
               int scenarios, std::uint64_t seed, int workers,
               const std::string& out_path, bool broken_pricing) {
    GeneratorConfig config = make_generator_config(flags);
    BiddingRule rule = make_bidding_rule(bidding);
    PricingRule pricing =
        broken_pricing ? PricingRule::PayOwnAsk : PricingRule::Uniform;

    struct ScenarioResult {
        long long bidders = 0;
        long long deviations = 0;
        std::array<long long, 4> case_counts{};
        Rational max_gain = 0;
        std::optional<std::pair<Scenario, DeviationReport>> violation;
        std::vector<std::string> economic_problems;
    };
    std::vector<ScenarioResult> results(static_cast<std::size_t>(scenarios));

    parallel_for(scenarios, workers, [&](long long index) {
        ScenarioResult& result = results[static_cast<std::size_t>(index)];
        Scenario scenario = generate_scenario(
            config, round_seed(seed, 0, static_cast<std::uint64_t>(index)));
        ProbeContext context =
            make_probe_context(scenario, rule, TieBreak{}, pricing);
        AuctionOutcome outcome =
            run_auction_with_groups(scenario, context.groups, rule, TieBreak{},
                                    pricing);
        result.economic_problems = economic_violations(outcome, scenario);
        auto absorb = [&](const DeviationReport& report) {
            ++result.bidders;
            result.deviations += report.deviations;
            for (std::size_t c = 0; c < 4; ++c)
                result.case_counts[c] += report.case_counts[c];
            Rational gain = report.best_utility - report.truthful_utility;
            if (gain > result.max_gain) result.max_gain = gain;
            if (report.violation && !result.violation)
                result.violation = {scenario, report};
        };
        for (const Ask& ask : scenario.asks)
            absorb(probe_seller(context, ask.seller_id));
        for (const Bid& bid : scenario.bids)
            absorb(probe_buyer(context, bid.buyer_id));
    });

    long long bidders = 0, deviations = 0;
    std::array<long long, 4> case_counts{};
    Rational max_gain = 0;
    const std::pair<Scenario, DeviationReport>* violation = nullptr;
    long long economic_problems = 0;
    for (const ScenarioResult& result : results) {
        bidders += result.bidders;
        deviations += result.deviations;
        for (std::size_t c = 0; c < 4; ++c)
            case_counts[c] += result.case_counts[c];
        if (result.max_gain > max_gain) max_gain = result.max_gain;
        if (result.violation && !violation) violation = &*result.violation;
        economic_problems +=
            static_cast<long long>(result.economic_problems.size());
        for (const std::string& problem : result.economic_problems)
            std::cerr << "economic violation: " << problem << "\n";
    }

    std::cout << "scenarios " << scenarios << ", bidders " << bidders
              << ", deviations " << deviations << "\n";
    std::cout << "outcome cases: both-lose " << case_counts[0]
              << ", win-to-lose " << case_counts[1] << ", lose-to-win "
              << case_counts[2] << ", both-win " << case_counts[3] << "\n";
    std::cout << "max utility gain " << format_decimal_exact(max_gain) << "\n";
    if (violation) {
        std::cout << "violation: " << describe_deviation(violation->second)
                  << "\n";
        if (!out_path.empty()) {
            write_file(out_path,
                       counterexample_text(violation->first, violation->second));
            std::cout << "counterexample written to " << out_path << "\n";
        }
    }
    bool clean = !violation && economic_problems == 0;
    std::cout << (clean ? "truthful: yes" : "truthful: no") << "\n";
    return clean ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truthful multi-channel spectrum double auction toolkit"};
    app.require_subcommand(1);

    GenerationFlags flags;
    std::string bidding = "mmin";
    std::string scenario_path;
    std::string out_path;
    std::string parameter;
    std::string values;
    std::uint64_t seed = 1;
    int rounds = 500;
    int workers = 1;
    int scenarios = 200;
    bool broken_pricing = false;
    bool quiet = false;

    CLI::App* gen = app.add_subcommand("gen", "generate a scenario file");
    add_generation_flags(gen, flags);
    gen->add_option("--seed", seed, "master seed");
    gen->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* run = app.add_subcommand("run", "clear one market");
    add_generation_flags(run, flags);
    run->add_option("--scenario", scenario_path,
                    "scenario file (otherwise generate)");
    run->add_option("--bidding", bidding, "group bidding rule: mmin or gmax");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--out", out_path, "write the metrics CSV here");
    run->add_flag("--quiet", quiet, "print only the CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "mean metrics over a grid");
    add_generation_flags(sweep, flags);
    sweep->add_option("--bidding", bidding, "group bidding rule: mmin or gmax");
    sweep->add_option("--param", parameter,
                      "swept parameter: sellers, buyers, distance, pattern, "
                      "distribution or bidding")
        ->required();
    sweep->add_option("--values", values, "comma separated values")->required();
    sweep->add_option("--rounds", rounds, "rounds per value");
    sweep->add_option("--seed", seed, "master seed");
    sweep->add_option("--workers", workers, "worker threads (0 = all cores)");
    sweep->add_option("--out", out_path, "write the CSV here");

    CLI::App* verify = app.add_subcommand(
        "verify", "probe bidders for profitable deviations");
    add_generation_flags(verify, flags);
    verify->add_option("--bidding", bidding,
                       "group bidding rule: mmin or gmax");
    verify->add_option("--scenarios", scenarios, "number of random scenarios");
    verify->add_option("--seed", seed, "master seed");
    verify->add_option("--workers", workers, "worker threads (0 = all cores)");
    verify->add_option("--out", out_path, "counterexample output path");
    verify->add_flag("--broken-pricing", broken_pricing)->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(flags, seed, out_path);
        if (run->parsed())
            return cmd_run(flags, scenario_path, bidding, seed, out_path, quiet);
        if (sweep->parsed())
            return cmd_sweep(flags, bidding, parameter, values, rounds, seed,
                             workers, out_path);
        if (verify->parsed())
            return cmd_verify(flags, bidding, scenarios, seed, workers,
                              out_path, broken_pricing);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 0;
}
