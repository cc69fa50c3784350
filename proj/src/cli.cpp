#include "bdrelay/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdrelay/channel_model.hpp"
#include "bdrelay/discrete_capacity.hpp"
#include "bdrelay/error.hpp"
#include "bdrelay/fading_montecarlo.hpp"
#include "bdrelay/lp_optimizer.hpp"
#include "bdrelay/protocol_bounds.hpp"
#include "bdrelay/rate_region.hpp"
#include "bdrelay/region_io.hpp"

#ifndef _WIN32
#include <unistd.h>
#endif

namespace bdrelay {

using nlohmann::json;

void write_atomically(const std::string& path, std::string_view content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(static_cast<long>(::getpid()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw InvalidArgument("output: cannot open '" + tmp.string() + "' for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw InvalidArgument("output: write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidArgument("output: cannot rename into '" + path + "': " + ec.message());
    }
}

namespace {

struct GainOptions {
    std::optional<double> p_db, g_ab_db, g_ar_db, g_br_db;

    void attach(CLI::App* app, bool required)
    {
        auto* p = app->add_option("--p-db", p_db, "Transmit power P in dB");
        auto* ab = app->add_option("--g-ab-db", g_ab_db, "Gain G_ab in dB");
        auto* ar = app->add_option("--g-ar-db", g_ar_db, "Gain G_ar in dB");
        auto* br = app->add_option("--g-br-db", g_br_db, "Gain G_br in dB");
        if (required) {
            p->required();
            ab->required();
            ar->required();
            br->required();
        }
    }

    ChannelGains gains() const { return ChannelGains::from_db(*g_ab_db, *g_ar_db, *g_br_db, *p_db); }

    json to_json() const
    {
        json j = json::object();
        if (p_db) j["p_db"] = *p_db;
        if (g_ab_db) j["g_ab_db"] = *g_ab_db;
        if (g_ar_db) j["g_ar_db"] = *g_ar_db;
        if (g_br_db) j["g_br_db"] = *g_br_db;
        return j;
    }
};

struct OutputOptions {
    std::string format = "csv";
    std::string output;

    void attach(CLI::App* app, const std::string& default_format)
    {
        format = default_format;
        app->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        app->add_option("--output,-o", output, "Output file (written atomically); stdout when omitted");
    }
};

void emit(const OutputOptions& o, const std::string& content, std::ostream& out)
{
    if (o.output.empty()) {
        out << content;
    } else {
        write_atomically(o.output, content);
    }
}

json metadata(const std::string& command, json parameters)
{
    return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"parameters", std::move(parameters)}};
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

/// Checks the user schedule against a 1e-9 sum tolerance and renormalizes.
PhaseSchedule schedule_from_cli(Protocol p, std::vector<double> d, const std::string& flag)
{
    const auto expected = static_cast<std::size_t>(phase_count(p));
    if (d.size() != expected)
        throw InvalidArgument(flag + ": " + std::string(to_string(p)) + " needs " + std::to_string(expected) +
                              " durations, got " + std::to_string(d.size()));
    for (double v : d) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(flag + ": durations must be nonnegative");
    }
    const double sum = std::accumulate(d.begin(), d.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument(flag + ": durations must sum to 1 within 1e-9");
    for (auto& v : d) v /= sum;
    return PhaseSchedule(p, std::move(d));
}

struct ProtocolBound {
    Protocol protocol;
    BoundKind bound;
};

ProtocolBound parse_protocol_bound(const std::string& text, const std::string& flag)
{
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) return {parse_protocol(text), BoundKind::Inner};
        return {parse_protocol(text.substr(0, colon)), parse_bound(text.substr(colon + 1))};
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(flag + ": " + e.what());
    }
}

std::vector<Protocol> parse_protocol_list(const std::vector<std::string>& names)
{
    std::vector<Protocol> out;
    for (const auto& n : names) out.push_back(parse_protocol(n));
    return out;
}

RateRegion compute_region(ProtocolBound pb, const ChannelGains& gains, const std::vector<double>& delta,
                          int mu_grid, const std::string& delta_flag)
{
    const auto table = gaussian_mi_table(gains, pb.protocol);
    if (!delta.empty())
        return fixed_delta_region(pb.protocol, pb.bound, table, schedule_from_cli(pb.protocol, delta, delta_flag));
    return optimized_region(pb.protocol, pb.bound, table, mu_grid);
}

std::string region_output(const RateRegion& region, const OutputOptions& o, json meta)
{
    if (o.format == "csv") return region_to_csv(region);
    return dump({{"metadata", std::move(meta)}, {"vertices", region_to_json(region)}});
}

std::string deltas_csv(const std::vector<double>& d)
{
    std::string s;
    for (std::size_t l = 0; l < 4; ++l) {
        s += ',';
        if (l < d.size()) s += format_double(d[l]);
    }
    return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Rate regions, outer bounds and optimal phase schedules for half-duplex "
                 "bi-directional relaying (DT, MABC, TDBC, HBC).",
                 std::string(kToolName)};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(kToolVersion));

    // region
    auto* region_cmd = app.add_subcommand("region", "Fixed-schedule or optimized rate region vertices");
    std::string region_protocol, region_bound = "inner";
    std::vector<double> region_delta;
    int region_grid = kDefaultMuGrid;
    GainOptions region_gains;
    OutputOptions region_out;
    region_cmd->add_option("--protocol", region_protocol, "dt, mabc, tdbc or hbc")->required();
    region_cmd->add_option("--bound", region_bound, "inner (alias exact), outer or outer_relay_free")
        ->capture_default_str();
    region_cmd->add_option("--delta", region_delta, "Fixed phase durations, comma separated")->delimiter(',');
    region_cmd->add_option("--mu-grid", region_grid, "Weight grid size for optimized regions")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    region_gains.attach(region_cmd, true);
    region_out.attach(region_cmd, "csv");

    // optimize
    auto* opt_cmd = app.add_subcommand("optimize", "Optimal schedule and rates for a weighted objective");
    std::string opt_protocol, opt_bound = "inner";
    double opt_mu = 0.5;
    GainOptions opt_gains;
    OutputOptions opt_out;
    opt_cmd->add_option("--protocol", opt_protocol, "dt, mabc, tdbc or hbc")->required();
    opt_cmd->add_option("--bound", opt_bound, "inner (alias exact), outer or outer_relay_free")->capture_default_str();
    opt_cmd->add_option("--mu", opt_mu, "Weight on R_a; R_b gets 1 - mu")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    opt_gains.attach(opt_cmd, true);
    opt_out.attach(opt_cmd, "csv");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Optimal sum rates over a swept dB parameter");
    std::string sweep_param, sweep_bound = "inner";
    double sweep_start = 0.0, sweep_stop = 0.0, sweep_step = 1.0;
    std::vector<std::string> sweep_protocols{"dt", "mabc", "tdbc", "hbc"};
    GainOptions sweep_gains;
    OutputOptions sweep_out;
    sweep_cmd->add_option("--sweep", sweep_param, "p_db, g_ab_db, g_ar_db or g_br_db")->required();
    sweep_cmd->add_option("--start", sweep_start, "First sweep value (dB)")->required();
    sweep_cmd->add_option("--stop", sweep_stop, "Last sweep value (dB)")->required();
    sweep_cmd->add_option("--step", sweep_step, "Sweep step (dB)")->required();
    sweep_cmd->add_option("--protocols", sweep_protocols, "Protocols, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--bound", sweep_bound, "inner, outer or outer_relay_free")->capture_default_str();
    sweep_gains.attach(sweep_cmd, false);
    sweep_out.attach(sweep_cmd, "csv");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Containment test between two regions, with a witness point");
    std::string cmp_a, cmp_b;
    std::vector<double> cmp_delta_a, cmp_delta_b;
    int cmp_grid = kDefaultMuGrid;
    double cmp_tol = kFeasibilityTol;
    GainOptions cmp_gains;
    OutputOptions cmp_out;
    cmp_cmd->add_option("--a", cmp_a, "Region a as protocol:bound")->required();
    cmp_cmd->add_option("--b", cmp_b, "Region b as protocol:bound")->required();
    cmp_cmd->add_option("--delta-a", cmp_delta_a, "Fixed durations for region a")->delimiter(',');
    cmp_cmd->add_option("--delta-b", cmp_delta_b, "Fixed durations for region b")->delimiter(',');
    cmp_cmd->add_option("--mu-grid", cmp_grid, "Weight grid size for optimized regions")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmp_cmd->add_option("--tol", cmp_tol, "Containment tolerance")->capture_default_str();
    cmp_gains.attach(cmp_cmd, true);
    cmp_out.attach(cmp_cmd, "csv");

    // discrete
    auto* disc_cmd = app.add_subcommand("discrete", "MABC capacity region of a discrete channel file");
    std::string disc_channel;
    std::vector<double> disc_delta;
    int disc_k = 8;
    OutputOptions disc_out;
    disc_cmd->add_option("--channel", disc_channel, "Channel JSON file")->required()->check(CLI::ExistingFile);
    disc_cmd->add_option("--delta", disc_delta, "MABC phase durations, comma separated")
        ->required()
        ->delimiter(',');
    disc_cmd->add_option("--k", disc_k, "Input grid resolution")->check(CLI::Range(1, 1000))->capture_default_str();
    disc_out.attach(disc_cmd, "csv");

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo expected optimal sum rates under fading");
    FadingConfig mc_cfg;
    double mc_p_db = 0.0;
    std::string mc_model = "rayleigh";
    std::vector<std::string> mc_protocols{"dt", "mabc", "tdbc", "hbc"};
    OutputOptions mc_out;
    mc_cmd->add_option("--alpha", mc_cfg.path_loss_exponent, "Path-loss exponent")->capture_default_str();
    mc_cmd->add_option("--d-ab", mc_cfg.d_ab, "Distance a-b")->capture_default_str();
    mc_cmd->add_option("--d-ar", mc_cfg.d_ar, "Distance a-r")->capture_default_str();
    mc_cmd->add_option("--d-br", mc_cfg.d_br, "Distance b-r")->capture_default_str();
    mc_cmd->add_option("--model", mc_model, "none or rayleigh")
        ->check(CLI::IsMember({"none", "rayleigh"}))
        ->capture_default_str();
    mc_cmd->add_option("--p-db", mc_p_db, "Transmit power P in dB")->required();
    mc_cmd->add_option("--samples", mc_cfg.samples, "Number of realizations")->capture_default_str();
    mc_cmd->add_option("--seed", mc_cfg.seed, "Seed")->capture_default_str();
    mc_cmd->add_option("--protocols", mc_protocols, "Protocols, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    mc_out.attach(mc_cmd, "json");

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto* sub : app.get_subcommands()) err << "run '" << kToolName << " " << sub->get_name() << " --help' for usage\n";
        return kExitUsage;
    }

    try {
        if (region_cmd->parsed()) {
            const auto pb = ProtocolBound{parse_protocol(region_protocol), parse_bound(region_bound)};
            const auto region = compute_region(pb, region_gains.gains(), region_delta, region_grid, "delta");
            json params = region_gains.to_json();
            params["protocol"] = to_string(pb.protocol);
            params["bound"] = to_string(pb.bound);
            if (!region_delta.empty()) params["delta"] = region_delta;
            else params["mu_grid"] = region_grid;
            emit(region_out, region_output(region, region_out, metadata("region", params)), out);
        } else if (opt_cmd->parsed()) {
            const Protocol p = parse_protocol(opt_protocol);
            const BoundKind b = parse_bound(opt_bound);
            const auto res = optimize_schedule(p, b, gaussian_mi_table(opt_gains.gains(), p), opt_mu);
            std::string text;
            if (opt_out.format == "csv") {
                text = "protocol,bound,mu,value,r_a,r_b,delta_1,delta_2,delta_3,delta_4\n";
                text += std::string(to_string(p)) + "," + std::string(to_string(b)) + "," + format_double(opt_mu) +
                        "," + format_double(res.value) + "," + format_double(res.rates.r_a) + "," +
                        format_double(res.rates.r_b) + deltas_csv(res.schedule.durations()) + "\n";
            } else {
                json params = opt_gains.to_json();
                params["protocol"] = to_string(p);
                params["bound"] = to_string(b);
                params["mu"] = opt_mu;
                text = dump({{"metadata", metadata("optimize", params)},
                             {"value", res.value},
                             {"rates", {res.rates.r_a, res.rates.r_b}},
                             {"deltas", res.schedule.durations()}});
            }
            emit(opt_out, text, out);
        } else if (sweep_cmd->parsed()) {
            SweepSpec spec;
            spec.swept = parse_sweep_parameter(sweep_param);
            spec.start = sweep_start;
            spec.stop = sweep_stop;
            spec.step = sweep_step;
            spec.p_db = sweep_gains.p_db;
            spec.g_ab_db = sweep_gains.g_ab_db;
            spec.g_ar_db = sweep_gains.g_ar_db;
            spec.g_br_db = sweep_gains.g_br_db;
            const BoundKind b = parse_bound(sweep_bound);
            const auto rows = sweep_sum_rate(spec, parse_protocol_list(sweep_protocols), b);
            std::string text;
            if (sweep_out.format == "csv") {
                text = sweep_to_csv(rows);
            } else {
                json params = sweep_gains.to_json();
                params["sweep"] = to_string(spec.swept);
                params["start"] = spec.start;
                params["stop"] = spec.stop;
                params["step"] = spec.step;
                params["bound"] = to_string(b);
                params["protocols"] = sweep_protocols;
                text = dump({{"metadata", metadata("sweep", params)}, {"rows", sweep_to_json(rows)}});
            }
            emit(sweep_out, text, out);
        } else if (cmp_cmd->parsed()) {
            const auto a = parse_protocol_bound(cmp_a, "a");
            const auto b = parse_protocol_bound(cmp_b, "b");
            const auto gains = cmp_gains.gains();
            const auto ra = compute_region(a, gains, cmp_delta_a, cmp_grid, "delta-a");
            const auto rb = compute_region(b, gains, cmp_delta_b, cmp_grid, "delta-b");
            const auto witness = exists_point_outside(ra, rb, cmp_tol);
            std::string text;
            if (cmp_out.format == "csv") {
                text = "result,r_a,r_b\n";
                text += witness ? "witness," + format_double(witness->r_a) + "," + format_double(witness->r_b) + "\n"
                                : std::string("contained,,\n");
            } else {
                json params = cmp_gains.to_json();
                params["a"] = cmp_a;
                params["b"] = cmp_b;
                params["tol"] = cmp_tol;
                json body = {{"metadata", metadata("compare", params)}, {"contained", !witness.has_value()}};
                body["witness"] = witness ? json{witness->r_a, witness->r_b} : json(nullptr);
                text = dump(body);
            }
            emit(cmp_out, text, out);
        } else if (disc_cmd->parsed()) {
            std::ifstream f(disc_channel);
            json j;
            try {
                j = json::parse(f);
            } catch (const json::exception& e) {
                throw InvalidArgument("channel: '" + disc_channel + "' is not valid JSON: " + e.what());
            }
            const auto ch = DiscreteChannel::from_json(j);
            const auto sched = schedule_from_cli(Protocol::MABC, disc_delta, "delta");
            const auto region = mabc_capacity_region(ch, sched, InputGrid(disc_k));
            json params = {{"channel", disc_channel}, {"delta", disc_delta}, {"k", disc_k}};
            emit(disc_out, region_output(region, disc_out, metadata("discrete", params)), out);
        } else if (mc_cmd->parsed()) {
            mc_cfg.model = parse_fading_model(mc_model);
            mc_cfg.power = db_to_linear(mc_p_db);
            const auto protocols = parse_protocol_list(mc_protocols);
            const auto res = montecarlo_expected_rates(mc_cfg, protocols);
            std::string text;
            if (mc_out.format == "csv") {
                text = "protocol,mean,std_error\n";
                for (const auto& [p, s] : res.stats)
                    text += std::string(to_string(p)) + "," + format_double(s.mean) + "," + format_double(s.std_error) + "\n";
            } else {
                json params = {{"alpha", mc_cfg.path_loss_exponent}, {"d_ab", mc_cfg.d_ab}, {"d_ar", mc_cfg.d_ar},
                               {"d_br", mc_cfg.d_br}, {"p_db", mc_p_db}, {"protocols", mc_protocols}};
                json body = montecarlo_to_json(mc_cfg, res);
                body["metadata"] = metadata("mc", params);
                text = dump(body);
            }
            emit(mc_out, text, out);
        }
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const json::exception& e) {
        err << "error: channel: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitOk;
}

}  // namespace bdrelay
