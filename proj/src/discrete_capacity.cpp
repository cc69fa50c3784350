#include "bdrelay/discrete_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bdrelay/error.hpp"

namespace bdrelay {

namespace {

constexpr double kStochasticTol = 1e-12;

void check_alphabet(const Alphabet& a, const std::string& name)
{
    if (a.size() < 2)
        throw InvalidArgument("channel: alphabet " + name + " needs the silence symbol and at least one other");
    if (a.silence >= a.size())
        throw InvalidArgument("channel: alphabet " + name + " silence index is out of range");
    std::set<std::string> seen(a.symbols.begin(), a.symbols.end());
    if (seen.size() != a.size()) throw InvalidArgument("channel: alphabet " + name + " repeats a symbol");
}

void check_row(std::span<const double> row, std::size_t silent_col, const std::string& where)
{
    double sum = 0.0;
    for (double v : row) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidArgument("channel: " + where + " has a negative or non-finite entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
        throw InvalidArgument("channel: " + where + " sums to " + std::to_string(sum) + ", not 1");
    if (silent_col < row.size() && row[silent_col] != 0.0)
        throw InvalidArgument("channel: " + where + " puts mass on the silence output of a listening node");
}

Alphabet alphabet_from_json(const nlohmann::json& j, const std::string& name)
{
    if (!j.is_object() || !j.contains("symbols") || !j.contains("silence"))
        throw InvalidArgument("channel: alphabet " + name + " needs 'symbols' and 'silence'");
    Alphabet a;
    a.symbols = j.at("symbols").get<std::vector<std::string>>();
    a.silence = j.at("silence").get<std::size_t>();
    return a;
}

std::vector<double> flatten3(const nlohmann::json& j, std::size_t d0, std::size_t d1, std::size_t d2,
                             const std::string& name)
{
    auto bad = [&] {
        return InvalidArgument("channel: tensor " + name + " must have shape [" + std::to_string(d0) +
                               "][" + std::to_string(d1) + "][" + std::to_string(d2) + "]");
    };
    if (!j.is_array() || j.size() != d0) throw bad();
    std::vector<double> out;
    out.reserve(d0 * d1 * d2);
    for (const auto& a : j) {
        if (!a.is_array() || a.size() != d1) throw bad();
        for (const auto& b : a) {
            if (!b.is_array() || b.size() != d2) throw bad();
            for (const auto& v : b) {
                if (!v.is_number()) throw bad();
                out.push_back(v.get<double>());
            }
        }
    }
    return out;
}

nlohmann::json nest3(const std::vector<double>& flat, std::size_t d0, std::size_t d1, std::size_t d2)
{
    auto out = nlohmann::json::array();
    for (std::size_t i = 0; i < d0; ++i) {
        auto mid = nlohmann::json::array();
        for (std::size_t j = 0; j < d1; ++j) {
            auto inner = nlohmann::json::array();
            for (std::size_t k = 0; k < d2; ++k) inner.push_back(flat[(i * d1 + j) * d2 + k]);
            mid.push_back(std::move(inner));
        }
        out.push_back(std::move(mid));
    }
    return out;
}

nlohmann::json alphabet_to_json(const Alphabet& a)
{
    return {{"symbols", a.symbols}, {"silence", a.silence}};
}

void check_distribution(std::span<const double> p, std::size_t size, const char* name)
{
    if (p.size() != size)
        throw InvalidArgument(std::string(name) + ": expected " + std::to_string(size) + " probabilities, got " +
                              std::to_string(p.size()));
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(std::string(name) + ": negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument(std::string(name) + ": probabilities do not sum to 1");
}

}  // namespace

DiscreteChannel::DiscreteChannel(Alphabet x_a, Alphabet x_b, Alphabet x_r, Alphabet y_r, Alphabet y_a,
                                 Alphabet y_b, std::vector<double> mac_law, std::vector<double> broadcast_law)
    : x_a_(std::move(x_a)), x_b_(std::move(x_b)), x_r_(std::move(x_r)), y_r_(std::move(y_r)),
      y_a_(std::move(y_a)), y_b_(std::move(y_b)), mac_(std::move(mac_law)), broadcast_(std::move(broadcast_law))
{
    check_alphabet(x_a_, "x_a");
    check_alphabet(x_b_, "x_b");
    check_alphabet(x_r_, "x_r");
    check_alphabet(y_r_, "y_r");
    check_alphabet(y_a_, "y_a");
    check_alphabet(y_b_, "y_b");

    const std::size_t nyr = y_r_.size();
    if (mac_.size() != x_a_.size() * x_b_.size() * nyr)
        throw InvalidArgument("channel: mac tensor has the wrong number of entries");
    for (std::size_t a = 0; a < x_a_.size(); ++a) {
        for (std::size_t b = 0; b < x_b_.size(); ++b) {
            const std::size_t row = a * x_b_.size() + b;
            check_row(std::span<const double>(mac_).subspan(row * nyr, nyr), y_r_.silence,
                      "mac row " + std::to_string(row) + " (x_a=" + x_a_.symbols[a] + ", x_b=" +
                          x_b_.symbols[b] + ")");
        }
    }

    const std::size_t nya = y_a_.size();
    const std::size_t nyb = y_b_.size();
    if (broadcast_.size() != x_r_.size() * nya * nyb)
        throw InvalidArgument("channel: broadcast tensor has the wrong number of entries");
    for (std::size_t r = 0; r < x_r_.size(); ++r) {
        const std::string where = "broadcast row " + std::to_string(r) + " (x_r=" + x_r_.symbols[r] + ")";
        check_row(std::span<const double>(broadcast_).subspan(r * nya * nyb, nya * nyb), nya * nyb, where);
        for (std::size_t ya = 0; ya < nya; ++ya) {
            for (std::size_t yb = 0; yb < nyb; ++yb) {
                if ((ya == y_a_.silence || yb == y_b_.silence) && broadcast(r, ya, yb) != 0.0)
                    throw InvalidArgument("channel: " + where +
                                          " puts mass on the silence output of a listening node");
            }
        }
    }
}

double DiscreteChannel::mac(std::size_t xa, std::size_t xb, std::size_t yr) const
{
    return mac_[(xa * x_b_.size() + xb) * y_r_.size() + yr];
}

double DiscreteChannel::broadcast(std::size_t xr, std::size_t ya, std::size_t yb) const
{
    return broadcast_[(xr * y_a_.size() + ya) * y_b_.size() + yb];
}

DiscreteChannel DiscreteChannel::from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("alphabets") || !j.contains("mac") || !j.contains("broadcast"))
        throw InvalidArgument("channel: expected an object with 'alphabets', 'mac' and 'broadcast'");
    const auto& al = j.at("alphabets");
    auto get = [&](const char* name) {
        if (!al.contains(name)) throw InvalidArgument(std::string("channel: missing alphabet ") + name);
        return alphabet_from_json(al.at(name), name);
    };
    Alphabet x_a = get("x_a"), x_b = get("x_b"), x_r = get("x_r");
    Alphabet y_r = get("y_r"), y_a = get("y_a"), y_b = get("y_b");
    auto mac = flatten3(j.at("mac"), x_a.size(), x_b.size(), y_r.size(), "mac");
    auto bc = flatten3(j.at("broadcast"), x_r.size(), y_a.size(), y_b.size(), "broadcast");
    return DiscreteChannel(std::move(x_a), std::move(x_b), std::move(x_r), std::move(y_r), std::move(y_a),
                           std::move(y_b), std::move(mac), std::move(bc));
}

nlohmann::json DiscreteChannel::to_json() const
{
    return {{"alphabets",
             {{"x_a", alphabet_to_json(x_a_)},
              {"x_b", alphabet_to_json(x_b_)},
              {"x_r", alphabet_to_json(x_r_)},
              {"y_r", alphabet_to_json(y_r_)},
              {"y_a", alphabet_to_json(y_a_)},
              {"y_b", alphabet_to_json(y_b_)}}},
            {"mac", nest3(mac_, x_a_.size(), x_b_.size(), y_r_.size())},
            {"broadcast", nest3(broadcast_, x_r_.size(), y_a_.size(), y_b_.size())}};
}

StochasticMatrix DiscreteChannel::downlink_to_a() const
{
    StochasticMatrix w{inputs_r(), y_a_.size(), std::vector<double>(inputs_r() * y_a_.size(), 0.0)};
    for (std::size_t i = 0; i < inputs_r(); ++i) {
        const std::size_t xr = x_r_.augmented_index(i);
        for (std::size_t ya = 0; ya < y_a_.size(); ++ya)
            for (std::size_t yb = 0; yb < y_b_.size(); ++yb) w(i, ya) += broadcast(xr, ya, yb);
    }
    return w;
}

StochasticMatrix DiscreteChannel::downlink_to_b() const
{
    StochasticMatrix w{inputs_r(), y_b_.size(), std::vector<double>(inputs_r() * y_b_.size(), 0.0)};
    for (std::size_t i = 0; i < inputs_r(); ++i) {
        const std::size_t xr = x_r_.augmented_index(i);
        for (std::size_t ya = 0; ya < y_a_.size(); ++ya)
            for (std::size_t yb = 0; yb < y_b_.size(); ++yb) w(i, yb) += broadcast(xr, ya, yb);
    }
    return w;
}

double mutual_information(std::span<const double> px, const StochasticMatrix& w)
{
    if (px.size() != w.rows || w.data.size() != w.rows * w.cols)
        throw InvalidArgument("mutual_information: input distribution and channel dimensions differ");
    std::vector<double> py(w.cols, 0.0);
    for (std::size_t x = 0; x < w.rows; ++x)
        for (std::size_t y = 0; y < w.cols; ++y) py[y] += px[x] * w(x, y);

    double info = 0.0;
    for (std::size_t x = 0; x < w.rows; ++x) {
        if (px[x] <= 0.0) continue;
        for (std::size_t y = 0; y < w.cols; ++y) {
            const double p = w(x, y);
            if (p <= 0.0) continue;
            info += px[x] * p * std::log2(p / py[y]);
        }
    }
    return std::max(info, 0.0);
}

MacInformation mutual_information_cond(std::span<const double> pxa, std::span<const double> pxb,
                                       const DiscreteChannel& ch)
{
    const std::size_t na = ch.inputs_a();
    const std::size_t nb = ch.inputs_b();
    const std::size_t ny = ch.y_r().size();
    check_distribution(pxa, na, "pxa");
    check_distribution(pxb, nb, "pxb");

    MacInformation out{0.0, 0.0, 0.0};

    StochasticMatrix given_b{na, ny, std::vector<double>(na * ny)};
    for (std::size_t j = 0; j < nb; ++j) {
        if (pxb[j] <= 0.0) continue;
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t y = 0; y < ny; ++y)
                given_b(i, y) = ch.mac(ch.x_a().augmented_index(i), ch.x_b().augmented_index(j), y);
        out.a_given_b += pxb[j] * mutual_information(pxa, given_b);
    }

    StochasticMatrix given_a{nb, ny, std::vector<double>(nb * ny)};
    for (std::size_t i = 0; i < na; ++i) {
        if (pxa[i] <= 0.0) continue;
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t y = 0; y < ny; ++y)
                given_a(j, y) = ch.mac(ch.x_a().augmented_index(i), ch.x_b().augmented_index(j), y);
        out.b_given_a += pxa[i] * mutual_information(pxb, given_a);
    }

    StochasticMatrix joint{na * nb, ny, std::vector<double>(na * nb * ny)};
    std::vector<double> pjoint(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            pjoint[i * nb + j] = pxa[i] * pxb[j];
            for (std::size_t y = 0; y < ny; ++y)
                joint(i * nb + j, y) = ch.mac(ch.x_a().augmented_index(i), ch.x_b().augmented_index(j), y);
        }
    }
    out.sum = mutual_information(pjoint, joint);
    return out;
}

namespace {

MITable mabc_table(const MacInformation& mac, double down_a, double down_b)
{
    MITable t(Protocol::MABC);
    t.set(1, Link::UplinkA, mac.a_given_b);
    t.set(1, Link::UplinkB, mac.b_given_a);
    t.set(1, Link::MacSum, mac.sum);
    t.set(2, Link::DownlinkA, down_a);
    t.set(2, Link::DownlinkB, down_b);
    return t;
}

void check_mabc_schedule(const PhaseSchedule& sched)
{
    if (sched.protocol() != Protocol::MABC)
        throw InvalidArgument("delta: discrete capacity regions need an mabc schedule");
}

}  // namespace

RateRegion mabc_fixed_inputs_region(const DiscreteChannel& ch, std::span<const double> pxa,
                                    std::span<const double> pxb, std::span<const double> pxr,
                                    const PhaseSchedule& sched)
{
    check_mabc_schedule(sched);
    check_distribution(pxr, ch.inputs_r(), "pxr");
    const auto mac = mutual_information_cond(pxa, pxb, ch);
    const double down_a = mutual_information(pxr, ch.downlink_to_a());
    const double down_b = mutual_information(pxr, ch.downlink_to_b());
    return fixed_delta_region(Protocol::MABC, BoundKind::Inner, mabc_table(mac, down_a, down_b), sched);
}

InputGrid::InputGrid(int resolution) : k_(resolution)
{
    if (resolution < 1) throw InvalidArgument("k: grid resolution must be at least 1");
}

std::uint64_t InputGrid::count(std::size_t size) const
{
    // C(k + size - 1, size - 1), saturating.
    if (size == 0) return 0;
    long double c = 1.0L;
    for (std::size_t i = 1; i < size; ++i) c = c * static_cast<long double>(k_ + i) / static_cast<long double>(i);
    if (c > 1.8e19L) return UINT64_MAX;
    return static_cast<std::uint64_t>(std::llround(c));
}

std::vector<std::vector<double>> InputGrid::distributions(std::size_t size) const
{
    std::vector<std::vector<double>> out;
    if (size == 0) return out;
    std::vector<int> counts(size, 0);
    const double k = static_cast<double>(k_);
    // Enumerate compositions of k into `size` parts in lexicographic order.
    auto emit = [&] {
        std::vector<double> p(size);
        for (std::size_t i = 0; i < size; ++i) p[i] = counts[i] / k;
        out.push_back(std::move(p));
    };
    auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == size) {
            counts[pos] = remaining;
            emit();
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    recurse(recurse, 0, k_);
    return out;
}

namespace {

struct Pentagon {
    double cap_a, cap_b, cap_sum;
};

void append_pentagon(const Pentagon& p, std::vector<RatePair>& out)
{
    const double a = std::min(p.cap_a, p.cap_sum);
    const double b = std::min(p.cap_b, p.cap_sum);
    out.push_back({a, 0.0});
    out.push_back({a, std::min(b, p.cap_sum - a)});
    out.push_back({std::min(a, p.cap_sum - b), b});
    out.push_back({0.0, b});
}

constexpr std::uint64_t kChunk = 4096;

}  // namespace

RateRegion mabc_capacity_region(const DiscreteChannel& ch, const PhaseSchedule& sched, const InputGrid& grid,
                                Execution exec)
{
    check_mabc_schedule(sched);
    const std::uint64_t ca = grid.count(ch.inputs_a());
    const std::uint64_t cb = grid.count(ch.inputs_b());
    const std::uint64_t cr = grid.count(ch.inputs_r());
    const long double total_ld = static_cast<long double>(ca) * cb * cr;
    if (total_ld > static_cast<long double>(kMaxGridTuples))
        throw ResourceLimit("k: grid enumeration needs " + std::to_string(static_cast<double>(total_ld)) +
                            " input tuples, above the limit of " + std::to_string(kMaxGridTuples));

    const auto pa = grid.distributions(ch.inputs_a());
    const auto pb = grid.distributions(ch.inputs_b());
    const auto pr = grid.distributions(ch.inputs_r());
    const double d1 = sched.delta(1);
    const double d2 = sched.delta(2);

    std::vector<MacInformation> mac(pa.size() * pb.size());
    std::vector<std::pair<double, double>> down(pr.size());
    [[maybe_unused]] const bool parallel = exec == Execution::Parallel;
    const auto to_a = ch.downlink_to_a();
    const auto to_b = ch.downlink_to_b();

    ExceptionSink sink;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::size_t idx = 0; idx < mac.size(); ++idx)
        sink.run([&] { mac[idx] = mutual_information_cond(pa[idx / pb.size()], pb[idx % pb.size()], ch); });
#pragma omp parallel for schedule(static) if (parallel)
    for (std::size_t idx = 0; idx < pr.size(); ++idx)
        sink.run([&] { down[idx] = {mutual_information(pr[idx], to_a), mutual_information(pr[idx], to_b)}; });
    sink.rethrow();

    // Chunk boundaries do not depend on the thread count, so the merged hull
    // is bit-identical between the serial and parallel paths.
    const std::uint64_t total = static_cast<std::uint64_t>(mac.size()) * pr.size();
    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::vector<RatePair>> partial(chunks);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::uint64_t c = 0; c < chunks; ++c) {
        std::vector<RatePair> pts{{0.0, 0.0}};
        const std::uint64_t end = std::min(total, (c + 1) * kChunk);
        for (std::uint64_t t = c * kChunk; t < end; ++t) {
            const auto& m = mac[t / pr.size()];
            const auto& d = down[t % pr.size()];
            append_pentagon({std::min(d1 * m.a_given_b, d2 * d.second), std::min(d1 * m.b_given_a, d2 * d.first),
                             d1 * m.sum},
                            pts);
        }
        partial[c] = RateRegion::hull_of(std::move(pts)).vertices();
    }

    std::vector<RatePair> merged{{0.0, 0.0}};
    for (const auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
    return RateRegion::hull_of(std::move(merged));
}

}  // namespace bdrelay
