#include "bdrelay/fading_montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bdrelay/error.hpp"
#include "bdrelay/lp_optimizer.hpp"
#include "bdrelay/region_io.hpp"

namespace bdrelay {

std::string_view to_string(FadingModel m)
{
    return m == FadingModel::None ? "none" : "rayleigh";
}

FadingModel parse_fading_model(std::string_view name)
{
    if (name == "none") return FadingModel::None;
    if (name == "rayleigh") return FadingModel::Rayleigh;
    throw InvalidArgument("model: unknown fading model '" + std::string(name) + "'");
}

void FadingConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument(std::string(name) + ": must be finite and positive");
    };
    positive(path_loss_exponent, "alpha");
    positive(d_ab, "d_ab");
    positive(d_ar, "d_ar");
    positive(d_br, "d_br");
    positive(power, "power");
    if (samples < 1) throw InvalidArgument("samples: must be at least 1");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unit-mean exponential power gain for one link of one realization.
double exponential_draw(std::uint64_t seed, std::uint64_t index, std::uint64_t link)
{
    std::mt19937_64 eng(splitmix64(splitmix64(splitmix64(seed) ^ index) + link));
    const double u = (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
    return -std::log(u);
}

}  // namespace

ChannelGains sample_gains(const FadingConfig& cfg, std::uint64_t index)
{
    cfg.validate();
    const double a = cfg.path_loss_exponent;
    double f_ab = 1.0, f_ar = 1.0, f_br = 1.0;
    if (cfg.model == FadingModel::Rayleigh) {
        f_ab = exponential_draw(cfg.seed, index, 0);
        f_ar = exponential_draw(cfg.seed, index, 1);
        f_br = exponential_draw(cfg.seed, index, 2);
    }
    return ChannelGains(std::pow(cfg.d_ab, -a) * f_ab, std::pow(cfg.d_ar, -a) * f_ar,
                        std::pow(cfg.d_br, -a) * f_br, cfg.power);
}

std::string_view to_string(SweepParameter p)
{
    switch (p) {
    case SweepParameter::PDb: return "p_db";
    case SweepParameter::GAbDb: return "g_ab_db";
    case SweepParameter::GArDb: return "g_ar_db";
    case SweepParameter::GBrDb: return "g_br_db";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name)
{
    for (auto p : {SweepParameter::PDb, SweepParameter::GAbDb, SweepParameter::GArDb, SweepParameter::GBrDb}) {
        if (name == to_string(p)) return p;
    }
    throw InvalidArgument("sweep: unknown sweep parameter '" + std::string(name) + "'");
}

void SweepSpec::validate() const
{
    if (!std::isfinite(start) || !std::isfinite(stop)) throw InvalidArgument("start/stop: must be finite");
    if (!std::isfinite(step) || step <= 0.0) throw InvalidArgument("step: must be positive");
    if (start > stop) throw InvalidArgument("start: must not exceed stop");
    auto need = [&](const std::optional<double>& v, SweepParameter p) {
        if (swept != p && !v)
            throw InvalidArgument(std::string(to_string(p)) + ": fixed value missing for a parameter that is not swept");
    };
    need(p_db, SweepParameter::PDb);
    need(g_ab_db, SweepParameter::GAbDb);
    need(g_ar_db, SweepParameter::GArDb);
    need(g_br_db, SweepParameter::GBrDb);
}

std::vector<double> SweepSpec::values() const
{
    validate();
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

ChannelGains SweepSpec::gains_at(double value) const
{
    validate();
    auto pick = [&](const std::optional<double>& fixed, SweepParameter p) { return swept == p ? value : *fixed; };
    return ChannelGains::from_db(pick(g_ab_db, SweepParameter::GAbDb), pick(g_ar_db, SweepParameter::GArDb),
                                 pick(g_br_db, SweepParameter::GBrDb), pick(p_db, SweepParameter::PDb));
}

namespace {

std::vector<Protocol> by_name(std::vector<Protocol> protocols)
{
    if (protocols.empty()) throw InvalidArgument("protocols: at least one protocol is required");
    std::sort(protocols.begin(), protocols.end(),
              [](Protocol a, Protocol b) { return to_string(a) < to_string(b); });
    protocols.erase(std::unique(protocols.begin(), protocols.end()), protocols.end());
    return protocols;
}

}  // namespace

std::vector<SweepRow> sweep_sum_rate(const SweepSpec& spec, const std::vector<Protocol>& protocols,
                                     BoundKind bound, Execution exec)
{
    const auto values = spec.values();
    const auto order = by_name(protocols);
    for (auto p : order) check_bound_supported(p, bound);

    std::vector<SweepRow> rows(values.size() * order.size());
    [[maybe_unused]] const bool parallel = exec == Execution::Parallel;
    ExceptionSink sink;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t i = 0; i < rows.size(); ++i) {
        sink.run([&] {
            const double v = values[i / order.size()];
            const Protocol p = order[i % order.size()];
            const auto table = gaussian_mi_table(spec.gains_at(v), p);
            const auto opt = optimize_schedule(p, bound, table, 0.5);
            rows[i] = {v, p, 2.0 * opt.value, opt.schedule.durations()};
        });
    }
    sink.rethrow();
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "sweep_value,protocol,sum_rate,delta_1,delta_2,delta_3,delta_4\n";
    for (const auto& r : rows) {
        out += format_double(r.sweep_value);
        out += ',';
        out += to_string(r.protocol);
        out += ',';
        out += format_double(r.sum_rate);
        for (std::size_t l = 0; l < 4; ++l) {
            out += ',';
            if (l < r.durations.size()) out += format_double(r.durations[l]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"sweep_value", r.sweep_value},
                       {"protocol", to_string(r.protocol)},
                       {"sum_rate", r.sum_rate},
                       {"deltas", r.durations}});
    }
    return arr;
}

std::vector<std::vector<double>> montecarlo_sum_rates(const FadingConfig& cfg, const std::vector<Protocol>& protocols,
                                                      Execution exec)
{
    cfg.validate();
    if (protocols.empty()) throw InvalidArgument("protocols: at least one protocol is required");
    const auto n = cfg.samples;
    std::vector<std::vector<double>> rates(protocols.size(), std::vector<double>(n));
    [[maybe_unused]] const bool parallel = exec == Execution::Parallel;
    ExceptionSink sink;
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::uint64_t i = 0; i < n; ++i) {
        sink.run([&] {
            const auto gains = sample_gains(cfg, i);
            for (std::size_t p = 0; p < protocols.size(); ++p)
                rates[p][i] =
                    optimal_sum_rate(protocols[p], BoundKind::Inner, gaussian_mi_table(gains, protocols[p]));
        });
    }
    sink.rethrow();
    return rates;
}

RateStats summarize(std::vector<double> values)
{
    if (values.empty()) throw InvalidArgument("samples: cannot summarize zero values");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    // Shifted by the minimum so a constant sample has an exact mean and zero spread.
    const double base = values.front();
    double shifted = 0.0;
    for (double v : values) shifted += v - base;
    const double mean = base + shifted / n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

MonteCarloResult montecarlo_expected_rates(const FadingConfig& cfg, const std::vector<Protocol>& protocols,
                                           Execution exec)
{
    const auto rates = montecarlo_sum_rates(cfg, protocols, exec);
    MonteCarloResult out{{}, cfg.samples, 0};
    for (std::size_t p = 0; p < protocols.size(); ++p) out.stats[protocols[p]] = summarize(rates[p]);
    for (std::uint64_t i = 0; i < cfg.samples; ++i) out.out_of_regime += sample_gains(cfg, i).ordered() ? 0 : 1;
    return out;
}

nlohmann::json montecarlo_to_json(const FadingConfig& cfg, const MonteCarloResult& result)
{
    nlohmann::json stats = nlohmann::json::object();
    for (const auto& [p, s] : result.stats)
        stats[std::string(to_string(p))] = {{"mean", s.mean}, {"std_error", s.std_error}};
    return {{"seed", cfg.seed},
            {"model", to_string(cfg.model)},
            {"samples", result.samples},
            {"rng", kRngAlgorithm},
            {"out_of_regime", result.out_of_regime},
            {"stats", stats}};
}

}  // namespace bdrelay
