#include "bdrelay/channel_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "bdrelay/error.hpp"

namespace bdrelay {

std::string_view to_string(Protocol p)
{
    switch (p) {
    case Protocol::DT: return "dt";
    case Protocol::MABC: return "mabc";
    case Protocol::TDBC: return "tdbc";
    case Protocol::HBC: return "hbc";
    }
    return "?";
}

Protocol parse_protocol(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (Protocol p : {Protocol::DT, Protocol::MABC, Protocol::TDBC, Protocol::HBC}) {
        if (lower == to_string(p)) return p;
    }
    throw InvalidArgument("protocol: unknown protocol '" + std::string(name) + "'");
}

int phase_count(Protocol p)
{
    switch (p) {
    case Protocol::DT:
    case Protocol::MABC: return 2;
    case Protocol::TDBC: return 3;
    case Protocol::HBC: return 4;
    }
    return 0;
}

double db_to_linear(double x_db)
{
    if (!std::isfinite(x_db)) throw InvalidArgument("db_to_linear: input must be finite");
    return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x)
{
    if (!std::isfinite(x) || x <= 0.0)
        throw InvalidArgument("linear_to_db: input must be finite and positive");
    return 10.0 * std::log10(x);
}

double capacity_c(double snr)
{
    if (!std::isfinite(snr) || snr < 0.0)
        throw InvalidArgument("capacity_c: snr must be finite and nonnegative");
    return std::log2(1.0 + snr);
}

ChannelGains::ChannelGains(double g_ab, double g_ar, double g_br, double power)
    : g_ab_(g_ab), g_ar_(g_ar), g_br_(g_br), power_(power)
{
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidArgument(std::string(name) + ": gain must be finite and nonnegative");
    };
    check(g_ab, "g_ab");
    check(g_ar, "g_ar");
    check(g_br, "g_br");
    if (!std::isfinite(power) || power <= 0.0)
        throw InvalidArgument("power: must be finite and positive");
}

ChannelGains ChannelGains::from_db(double g_ab_db, double g_ar_db, double g_br_db, double power_db)
{
    return ChannelGains(db_to_linear(g_ab_db), db_to_linear(g_ar_db), db_to_linear(g_br_db),
                        db_to_linear(power_db));
}

std::string_view to_string(Link l)
{
    switch (l) {
    case Link::UplinkA: return "uplink_a";
    case Link::UplinkB: return "uplink_b";
    case Link::MacSum: return "mac_sum";
    case Link::DownlinkA: return "downlink_a";
    case Link::DownlinkB: return "downlink_b";
    case Link::Direct: return "direct";
    case Link::JointA: return "joint_a";
    case Link::JointB: return "joint_b";
    }
    return "?";
}

std::vector<MIKey> required_keys(Protocol p)
{
    using L = Link;
    switch (p) {
    case Protocol::DT:
        return {{1, L::Direct}, {2, L::Direct}};
    case Protocol::MABC:
        return {{1, L::UplinkA}, {1, L::UplinkB}, {1, L::MacSum},
                {2, L::DownlinkA}, {2, L::DownlinkB}};
    case Protocol::TDBC:
        return {{1, L::UplinkA}, {1, L::Direct}, {1, L::JointA},
                {2, L::UplinkB}, {2, L::Direct}, {2, L::JointB},
                {3, L::DownlinkA}, {3, L::DownlinkB}};
    case Protocol::HBC:
        return {{1, L::UplinkA}, {1, L::Direct},
                {2, L::UplinkB}, {2, L::Direct},
                {3, L::UplinkA}, {3, L::UplinkB}, {3, L::MacSum},
                {4, L::DownlinkA}, {4, L::DownlinkB}};
    }
    return {};
}

void MITable::set(int phase, Link link, double bits)
{
    if (!std::isfinite(bits) || bits < 0.0)
        throw InvalidArgument("mi_table: entry (" + std::to_string(phase) + ", " +
                              std::string(to_string(link)) + ") must be finite and nonnegative");
    entries_[MIKey{phase, link}] = bits;
}

double MITable::at(int phase, Link link) const
{
    auto it = entries_.find(MIKey{phase, link});
    if (it == entries_.end())
        throw InvalidArgument("mi_table: missing entry (" + std::to_string(phase) + ", " +
                              std::string(to_string(link)) + ")");
    return it->second;
}

bool MITable::has(int phase, Link link) const
{
    return entries_.count(MIKey{phase, link}) != 0;
}

void MITable::validate() const
{
    auto keys = required_keys(protocol_);
    for (const auto& k : keys) {
        if (!entries_.count(k))
            throw InvalidArgument("mi_table: " + std::string(to_string(protocol_)) +
                                  " table is missing (" + std::to_string(k.phase) + ", " +
                                  std::string(to_string(k.link)) + ")");
    }
    if (entries_.size() != keys.size())
        throw InvalidArgument("mi_table: " + std::string(to_string(protocol_)) +
                              " table has entries outside its constraint template");
}

MITable gaussian_mi_table(const ChannelGains& gains, Protocol protocol)
{
    const double p = gains.power();
    const double up_a = capacity_c(p * gains.g_ar());
    const double up_b = capacity_c(p * gains.g_br());
    const double mac_sum = capacity_c(p * (gains.g_ar() + gains.g_br()));
    const double direct = capacity_c(p * gains.g_ab());
    const double joint_a = capacity_c(p * (gains.g_ar() + gains.g_ab()));
    const double joint_b = capacity_c(p * (gains.g_br() + gains.g_ab()));

    // Reciprocity: the relay broadcast reaches a over g_ar and b over g_br.
    const double down_a = up_a;
    const double down_b = up_b;

    MITable t(protocol);
    switch (protocol) {
    case Protocol::DT:
        t.set(1, Link::Direct, direct);
        t.set(2, Link::Direct, direct);
        break;
    case Protocol::MABC:
        t.set(1, Link::UplinkA, up_a);
        t.set(1, Link::UplinkB, up_b);
        t.set(1, Link::MacSum, mac_sum);
        t.set(2, Link::DownlinkA, down_a);
        t.set(2, Link::DownlinkB, down_b);
        break;
    case Protocol::TDBC:
        t.set(1, Link::UplinkA, up_a);
        t.set(1, Link::Direct, direct);
        t.set(1, Link::JointA, joint_a);
        t.set(2, Link::UplinkB, up_b);
        t.set(2, Link::Direct, direct);
        t.set(2, Link::JointB, joint_b);
        t.set(3, Link::DownlinkA, down_a);
        t.set(3, Link::DownlinkB, down_b);
        break;
    case Protocol::HBC:
        t.set(1, Link::UplinkA, up_a);
        t.set(1, Link::Direct, direct);
        t.set(2, Link::UplinkB, up_b);
        t.set(2, Link::Direct, direct);
        t.set(3, Link::UplinkA, up_a);
        t.set(3, Link::UplinkB, up_b);
        t.set(3, Link::MacSum, mac_sum);
        t.set(4, Link::DownlinkA, down_a);
        t.set(4, Link::DownlinkB, down_b);
        break;
    }
    return t;
}

}  // namespace bdrelay
