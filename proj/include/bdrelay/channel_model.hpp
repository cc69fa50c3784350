#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bdrelay {

enum class Protocol { DT, MABC, TDBC, HBC };

std::string_view to_string(Protocol p);
Protocol parse_protocol(std::string_view name);

/// Number of phases the protocol divides a block into.
int phase_count(Protocol p);

double db_to_linear(double x_db);
double linear_to_db(double x);

/// C(x) = log2(1 + x), bits per channel use.
double capacity_c(double snr);

/// Linear power gains of one channel realization. Reciprocal links share
/// one gain, so a node pair is stored once.
class ChannelGains {
public:
    ChannelGains(double g_ab, double g_ar, double g_br, double power);

    static ChannelGains from_db(double g_ab_db, double g_ar_db, double g_br_db, double power_db);

    double g_ab() const { return g_ab_; }
    double g_ar() const { return g_ar_; }
    double g_br() const { return g_br_; }
    double power() const { return power_; }

    /// True when G_ab <= G_ar <= G_br.
    bool ordered() const { return g_ab_ <= g_ar_ && g_ar_ <= g_br_; }

private:
    double g_ab_;
    double g_ar_;
    double g_br_;
    double power_;
};

/// Mutual-information terms that appear in the protocol bounds.
enum class Link {
    UplinkA,    // I(X_a; Y_r | X_b)
    UplinkB,    // I(X_b; Y_r | X_a)
    MacSum,     // I(X_a, X_b; Y_r)
    DownlinkA,  // I(X_r; Y_a)
    DownlinkB,  // I(X_r; Y_b)
    Direct,     // I(X_a; Y_b) or I(X_b; Y_a), depending on the phase
    JointA,     // I(X_a; Y_r, Y_b)
    JointB,     // I(X_b; Y_r, Y_a)
};

std::string_view to_string(Link l);

struct MIKey {
    int phase;  // 1-based
    Link link;

    friend auto operator<=>(const MIKey&, const MIKey&) = default;
};

/// The exact key set a protocol's constraint templates read.
std::vector<MIKey> required_keys(Protocol p);

/// Per-phase mutual-information constants in bits per channel use.
class MITable {
public:
    explicit MITable(Protocol protocol) : protocol_(protocol) {}

    Protocol protocol() const { return protocol_; }

    void set(int phase, Link link, double bits);
    double at(int phase, Link link) const;
    bool has(int phase, Link link) const;

    const std::map<MIKey, double>& entries() const { return entries_; }

    /// Throws InvalidArgument unless the keys equal required_keys(protocol()).
    void validate() const;

private:
    Protocol protocol_;
    std::map<MIKey, double> entries_;
};

/// Evaluates every term with independent circularly symmetric complex
/// Gaussian inputs of power P, unit noise and a single time-sharing state.
MITable gaussian_mi_table(const ChannelGains& gains, Protocol protocol);

}  // namespace bdrelay
