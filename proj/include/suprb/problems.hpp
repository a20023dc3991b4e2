#pragma once

// Benchmark quality functions with known optima.
//
// frog:     x, a in [0, 1], payoff x + a below the ridge x + a = 1 and
//           2 - (x + a) above it; optimum a = 1 - x with payoff 1.
// AM-Gauss: y = (x1..x5, a1..a6) in [-1, 1]^11,
//           q(y) = sum over ordered pairs j != k of
//                  exp(-((y_j, y_k) - s_jk)^T P_jk ((y_j, y_k) - s_jk))
//           with random PSD P_jk (eigenvalues in [0, 30]) and shifts s_jk in [-1, 1]^2.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "suprb/core.hpp"
#include "suprb/dataset_io.hpp"
#include "suprb/errors.hpp"
#include "suprb/linalg.hpp"
#include "suprb/random.hpp"

namespace suprb {

// ---------------------------------------------------------------- frog

inline double frog_quality(double x, double a)
{
    const double s = x + a;
    return s <= 1.0 ? s : 2.0 - s;
}

inline double frog_optimal(double x)
{
    return 1.0 - x;
}

inline BoundsSpec frog_bounds()
{
    return BoundsSpec::uniform(1, 1, {0.0, 1.0});
}

/// Uniform native samples, normalized to [-1, 1]; q stays in native units.
inline Dataset frog_dataset(std::size_t n, Rng& rng)
{
    const auto bounds = frog_bounds();
    Dataset data(1, 1);
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = uniform(rng, 0.0, 1.0);
        const double a = uniform(rng, 0.0, 1.0);
        const double raw_x[] = {x};
        const double raw_a[] = {a};
        data.add({Situation(normalize(raw_x, bounds.situation)), Parametrization(normalize(raw_a, bounds.parametrization)),
                  frog_quality(x, a)});
    }
    return data;
}

// ------------------------------------------------------------ AM-Gauss

inline constexpr std::size_t kAmGaussDx = 5;
inline constexpr std::size_t kAmGaussDa = 6;
inline constexpr std::size_t kAmGaussDims = kAmGaussDx + kAmGaussDa;

struct AmGaussTerm {
    std::size_t j = 0; // 0-based indices into y
    std::size_t k = 0;
    Psd2x2 p;
    std::array<double, 2> shift{};

    double value(double yj, double yk) const { return std::exp(-p.quad(yj - shift[0], yk - shift[1])); }
};

struct AmGaussInstance {
    std::uint64_t seed = 0;
    std::vector<AmGaussTerm> terms;
};

/// Ordered pairs iterated j-major then k; P drawn before the shift.
inline AmGaussInstance am_gauss_generate(std::uint64_t seed)
{
    Rng rng(seed);
    AmGaussInstance inst;
    inst.seed = seed;
    inst.terms.reserve(kAmGaussDims * (kAmGaussDims - 1));
    for (std::size_t j = 0; j < kAmGaussDims; ++j)
        for (std::size_t k = 0; k < kAmGaussDims; ++k) {
            if (j == k) continue;
            AmGaussTerm t;
            t.j = j;
            t.k = k;
            t.p = random_psd_2x2(rng, 0.0, 30.0);
            t.shift[0] = uniform(rng, -1.0, 1.0);
            t.shift[1] = uniform(rng, -1.0, 1.0);
            inst.terms.push_back(t);
        }
    return inst;
}

inline double am_gauss_quality(const AmGaussInstance& inst, std::span<const double> y)
{
    if (y.size() != kAmGaussDims) throw DimensionError("am_gauss_quality expects 11 components");
    double q = 0.0;
    for (const auto& t : inst.terms) q += t.value(y[t.j], y[t.k]);
    return q;
}

/// Closed-form gradient with respect to all 11 components.
inline std::array<double, kAmGaussDims> am_gauss_gradient(const AmGaussInstance& inst, std::span<const double> y)
{
    if (y.size() != kAmGaussDims) throw DimensionError("am_gauss_gradient expects 11 components");
    std::array<double, kAmGaussDims> g{};
    for (const auto& t : inst.terms) {
        const double u = y[t.j] - t.shift[0];
        const double v = y[t.k] - t.shift[1];
        const auto& m = t.p.m;
        const double pu = m(0, 0) * u + m(0, 1) * v;
        const double pv = m(1, 0) * u + m(1, 1) * v;
        const double e = std::exp(-(u * pu + v * pv));
        g[t.j] += -2.0 * e * pu;
        g[t.k] += -2.0 * e * pv;
    }
    return g;
}

inline std::vector<double> stack(const Situation& x, const Parametrization& a)
{
    std::vector<double> y(x.begin(), x.end());
    y.insert(y.end(), a.begin(), a.end());
    return y;
}

inline Dataset am_gauss_dataset(const AmGaussInstance& inst, std::size_t n, Rng& rng)
{
    Dataset data(kAmGaussDx, kAmGaussDa);
    data.reserve(n);
    std::vector<double> y(kAmGaussDims);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : y) v = uniform(rng, -1.0, 1.0);
        data.add({Situation(std::vector<double>(y.begin(), y.begin() + kAmGaussDx)),
                  Parametrization(std::vector<double>(y.begin() + kAmGaussDx, y.end())), am_gauss_quality(inst, y)});
    }
    return data;
}

struct Optimum {
    Parametrization a;
    double q = 0.0;
};

/// Multi-start projected gradient ascent over a in [-1, 1]^6 for fixed x,
/// with a backtracking (Armijo) step. Each restart begins at a uniform point;
/// the best end point over all restarts is returned.
inline Optimum oracle_argmax(const AmGaussInstance& inst, const Situation& x, std::size_t restarts, double tol,
                             Rng& rng)
{
    if (restarts == 0) throw UsageError("oracle_argmax needs at least one restart");
    if (x.size() != kAmGaussDx) throw DimensionError("oracle_argmax expects a 5-dimensional situation");

    std::vector<double> y(kAmGaussDims);
    std::copy(x.begin(), x.end(), y.begin());
    auto f = [&](const std::vector<double>& yy) { return am_gauss_quality(inst, yy); };

    Optimum best{Parametrization(kAmGaussDa), -1.0};
    std::vector<double> cand(kAmGaussDims);
    constexpr std::size_t kMaxIter = 5000;
    for (std::size_t r = 0; r < restarts; ++r) {
        for (std::size_t k = kAmGaussDx; k < kAmGaussDims; ++k) y[k] = uniform(rng, -1.0, 1.0);
        double fy = f(y);
        double step = 0.05;
        for (std::size_t it = 0; it < kMaxIter; ++it) {
            const auto g = am_gauss_gradient(inst, y);
            bool accepted = false;
            double moved = 0.0;
            double gain = 0.0;
            for (int bt = 0; bt < 60; ++bt) {
                cand = y;
                double dir = 0.0;
                moved = 0.0;
                for (std::size_t k = kAmGaussDx; k < kAmGaussDims; ++k) {
                    cand[k] = std::clamp(y[k] + step * g[k], -1.0, 1.0);
                    dir += g[k] * (cand[k] - y[k]);
                    moved = std::max(moved, std::abs(cand[k] - y[k]));
                }
                if (moved == 0.0) break;
                const double fc = f(cand);
                if (fc >= fy + 1e-4 * dir) {
                    gain = fc - fy;
                    y.swap(cand);
                    fy = fc;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted || moved < tol || gain < tol * tol) break;
            step = std::min(step * 2.0, 10.0);
        }
        if (fy > best.q) {
            best.q = fy;
            for (std::size_t k = 0; k < kAmGaussDa; ++k) best.a[k] = y[kAmGaussDx + k];
        }
    }
    return best;
}

// ------------------------------------------------------- serialization

/// Line format: header, seed, term count, then per term
/// `j k P00 P01 P10 P11 s1 s2` with 1-based j, k and 17 significant digits.
inline void write_am_gauss_instance(std::ostream& os, const AmGaussInstance& inst)
{
    os << "am-gauss-instance 1\n";
    os << "seed " << inst.seed << '\n';
    os << "terms " << inst.terms.size() << '\n';
    for (const auto& t : inst.terms) {
        os << t.j + 1 << ' ' << t.k + 1;
        for (double v : {t.p.m(0, 0), t.p.m(0, 1), t.p.m(1, 0), t.p.m(1, 1), t.shift[0], t.shift[1]})
            os << ' ' << format_real(v);
        os << '\n';
    }
}

inline AmGaussInstance read_am_gauss_instance(std::istream& is)
{
    std::string line;
    std::size_t offset = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(is, line)) throw ParseError(fmt::format("instance: missing {}", what), offset);
        const auto at = offset;
        offset += line.size() + 1;
        return at;
    };

    auto at = next_line("header");
    if (line != "am-gauss-instance 1") throw ParseError("instance: bad header", at);

    AmGaussInstance inst;
    at = next_line("seed");
    {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key >> inst.seed) || key != "seed") throw ParseError("instance: bad seed line", at);
    }
    std::size_t n = 0;
    at = next_line("term count");
    {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key >> n) || key != "terms") throw ParseError("instance: bad term count", at);
    }
    inst.terms.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        at = next_line("term");
        std::istringstream ls(line);
        std::size_t j = 0, k = 0;
        std::array<std::string, 6> tok;
        if (!(ls >> j >> k >> tok[0] >> tok[1] >> tok[2] >> tok[3] >> tok[4] >> tok[5]))
            throw ParseError(fmt::format("instance: bad term {}", i + 1), at);
        std::array<double, 6> v{};
        for (std::size_t t = 0; t < 6; ++t)
            if (!detail::parse_double(tok[t], v[t]))
                throw ParseError(fmt::format("instance: bad number '{}' in term {}", tok[t], i + 1), at);
        if (j < 1 || k < 1 || j > kAmGaussDims || k > kAmGaussDims || j == k)
            throw ParseError(fmt::format("instance: bad pair ({}, {})", j, k), at);
        AmGaussTerm t;
        t.j = j - 1;
        t.k = k - 1;
        t.p.m << v[0], v[1], v[2], v[3];
        t.shift = {v[4], v[5]};
        inst.terms.push_back(t);
    }
    return inst;
}

inline void save_am_gauss_instance(const std::string& path, const AmGaussInstance& inst)
{
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write instance '{}'", path));
    write_am_gauss_instance(out, inst);
}

inline AmGaussInstance load_am_gauss_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open instance '{}'", path));
    return read_am_gauss_instance(in);
}

// ------------------------------------------------- problem abstraction

struct FrogProblem {};

struct AmGaussProblem {
    AmGaussInstance instance;
    std::size_t oracle_restarts = 64;
    double oracle_tol = 1e-8;
};

using Problem = std::variant<FrogProblem, AmGaussProblem>;

inline std::size_t problem_dx(const Problem& p)
{
    return std::holds_alternative<FrogProblem>(p) ? 1 : kAmGaussDx;
}

inline std::size_t problem_da(const Problem& p)
{
    return std::holds_alternative<FrogProblem>(p) ? 1 : kAmGaussDa;
}

inline BoundsSpec problem_bounds(const Problem& p)
{
    if (std::holds_alternative<FrogProblem>(p)) return frog_bounds();
    return BoundsSpec::uniform(kAmGaussDx, kAmGaussDa, {-1.0, 1.0});
}

/// True quality at a normalized (x, a).
inline double true_quality(const Problem& p, const Situation& x, const Parametrization& a)
{
    if (const auto* am = std::get_if<AmGaussProblem>(&p)) return am_gauss_quality(am->instance, stack(x, a));
    const auto b = frog_bounds();
    return frog_quality(denormalize(x.view(), b.situation)[0], denormalize(a.view(), b.parametrization)[0]);
}

/// Oracle restarts are seeded from the bits of x so the result does not
/// depend on evaluation order.
inline Optimum optimum(const Problem& p, const Situation& x)
{
    if (const auto* am = std::get_if<AmGaussProblem>(&p)) {
        std::uint64_t h = 0x5eedULL;
        for (double v : x) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
        Rng rng(h);
        return oracle_argmax(am->instance, x, am->oracle_restarts, am->oracle_tol, rng);
    }
    const auto b = frog_bounds();
    const double xn = denormalize(x.view(), b.situation)[0];
    const double a_opt[] = {frog_optimal(xn)};
    return {Parametrization(normalize(a_opt, b.parametrization)), frog_quality(xn, a_opt[0])};
}

inline Dataset sample_dataset(const Problem& p, std::size_t n, Rng& rng)
{
    if (const auto* am = std::get_if<AmGaussProblem>(&p)) return am_gauss_dataset(am->instance, n, rng);
    return frog_dataset(n, rng);
}

} // namespace suprb
