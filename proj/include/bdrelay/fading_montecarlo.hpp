#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bdrelay/channel_model.hpp"
#include "bdrelay/parallel.hpp"
#include "bdrelay/protocol_bounds.hpp"

namespace bdrelay {

enum class FadingModel { None, Rayleigh };

std::string_view to_string(FadingModel m);
FadingModel parse_fading_model(std::string_view name);

/// Name of the per-sample generator, echoed into output metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64 seeded by splitmix64(seed, index, link)";

struct FadingConfig {
    double path_loss_exponent = 2.0;
    double d_ab = 1.0;
    double d_ar = 1.0;
    double d_br = 1.0;
    FadingModel model = FadingModel::Rayleigh;
    double power = 1.0;  // linear
    std::uint64_t samples = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Gains of realization `index`: G_ij = d_ij^-alpha * F_ij with F_ij = 1 or
/// unit-mean exponential. A pure function of (seed, index).
ChannelGains sample_gains(const FadingConfig& cfg, std::uint64_t index);

enum class SweepParameter { PDb, GAbDb, GArDb, GBrDb };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

struct SweepSpec {
    SweepParameter swept = SweepParameter::PDb;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::optional<double> p_db;
    std::optional<double> g_ab_db;
    std::optional<double> g_ar_db;
    std::optional<double> g_br_db;

    void validate() const;
    std::vector<double> values() const;
    ChannelGains gains_at(double value) const;
};

struct SweepRow {
    double sweep_value;
    Protocol protocol;
    double sum_rate;
    std::vector<double> durations;
};

/// Optimal sum rate for every (sweep point, protocol), sorted by sweep value
/// then protocol name.
std::vector<SweepRow> sweep_sum_rate(const SweepSpec& spec, const std::vector<Protocol>& protocols,
                                     BoundKind bound, Execution exec = Execution::Parallel);

/// `sweep_value,protocol,sum_rate,delta_1,delta_2,delta_3,delta_4`
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

struct RateStats {
    double mean;
    double std_error;
};

struct MonteCarloResult {
    std::map<Protocol, RateStats> stats;
    std::uint64_t samples;
    /// Realizations violating G_ab <= G_ar <= G_br.
    std::uint64_t out_of_regime;
};

/// Per-sample optimal sum rates, indexed [protocol][sample].
std::vector<std::vector<double>> montecarlo_sum_rates(const FadingConfig& cfg,
                                                      const std::vector<Protocol>& protocols,
                                                      Execution exec = Execution::Parallel);

/// Mean and standard error (sample stdev / sqrt(N)). Summation runs over the
/// sorted values, so the result does not depend on sample order.
RateStats summarize(std::vector<double> values);

MonteCarloResult montecarlo_expected_rates(const FadingConfig& cfg, const std::vector<Protocol>& protocols,
                                           Execution exec = Execution::Parallel);

nlohmann::json montecarlo_to_json(const FadingConfig& cfg, const MonteCarloResult& result);

}  // namespace bdrelay
