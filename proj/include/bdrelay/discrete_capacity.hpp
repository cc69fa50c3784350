#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdrelay/parallel.hpp"
#include "bdrelay/protocol_bounds.hpp"
#include "bdrelay/rate_region.hpp"

namespace bdrelay {

/// Row-stochastic matrix W(y | x), row-major.
struct StochasticMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t x, std::size_t y) const { return data[x * cols + y]; }
    double& operator()(std::size_t x, std::size_t y) { return data[x * cols + y]; }
};

/// Symbols of one node's input or output alphabet, including the silence
/// symbol at `silence`.
struct Alphabet {
    std::vector<std::string> symbols;
    std::size_t silence = 0;

    std::size_t size() const { return symbols.size(); }
    /// Augmented index of the i-th non-silent symbol.
    std::size_t augmented_index(std::size_t i) const { return i < silence ? i : i + 1; }
};

/// Half-duplex discrete memoryless channel for the two MABC phases.
///
/// `mac` holds W1(y_r | x_a, x_b) indexed [x_a][x_b][y_r] over augmented
/// alphabets; `broadcast` holds W2(y_a, y_b | x_r) indexed [x_r][y_a][y_b].
/// Listening nodes never observe the silence symbol.
class DiscreteChannel {
public:
    DiscreteChannel(Alphabet x_a, Alphabet x_b, Alphabet x_r, Alphabet y_r, Alphabet y_a,
                    Alphabet y_b, std::vector<double> mac, std::vector<double> broadcast);

    static DiscreteChannel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    const Alphabet& x_a() const { return x_a_; }
    const Alphabet& x_b() const { return x_b_; }
    const Alphabet& x_r() const { return x_r_; }
    const Alphabet& y_r() const { return y_r_; }
    const Alphabet& y_a() const { return y_a_; }
    const Alphabet& y_b() const { return y_b_; }

    double mac(std::size_t xa, std::size_t xb, std::size_t yr) const;
    double broadcast(std::size_t xr, std::size_t ya, std::size_t yb) const;

    /// Non-silent alphabet sizes.
    std::size_t inputs_a() const { return x_a_.size() - 1; }
    std::size_t inputs_b() const { return x_b_.size() - 1; }
    std::size_t inputs_r() const { return x_r_.size() - 1; }

    /// W2 marginals restricted to non-silent relay inputs: rows x_r, cols y.
    StochasticMatrix downlink_to_a() const;
    StochasticMatrix downlink_to_b() const;

private:
    Alphabet x_a_, x_b_, x_r_, y_r_, y_a_, y_b_;
    std::vector<double> mac_;
    std::vector<double> broadcast_;
};

/// I(X; Y) in bits, with 0 log 0 = 0.
double mutual_information(std::span<const double> px, const StochasticMatrix& w);

struct MacInformation {
    double a_given_b;  // I(X_a; Y_r | X_b)
    double b_given_a;  // I(X_b; Y_r | X_a)
    double sum;        // I(X_a, X_b; Y_r)
};

/// MAC terms for independent inputs over the non-silent alphabets.
MacInformation mutual_information_cond(std::span<const double> pxa, std::span<const double> pxb,
                                       const DiscreteChannel& ch);

RateRegion mabc_fixed_inputs_region(const DiscreteChannel& ch, std::span<const double> pxa,
                                    std::span<const double> pxb, std::span<const double> pxr,
                                    const PhaseSchedule& sched);

/// Probability vectors whose entries are multiples of 1/resolution.
class InputGrid {
public:
    explicit InputGrid(int resolution);
    int resolution() const { return k_; }

    /// Number of grid distributions over an alphabet of `size` symbols.
    std::uint64_t count(std::size_t size) const;
    /// All grid distributions, in lexicographic order of their counts.
    std::vector<std::vector<double>> distributions(std::size_t size) const;

private:
    int k_;
};

inline constexpr std::uint64_t kMaxGridTuples = 10'000'000;

/// Hull of the fixed-input pentagons over every grid tuple (pxa, pxb, pxr).
RateRegion mabc_capacity_region(const DiscreteChannel& ch, const PhaseSchedule& sched,
                                const InputGrid& grid, Execution exec = Execution::Parallel);

}  // namespace bdrelay
