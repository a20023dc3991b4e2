#pragma once

// JSON model file: run metadata plus the final elitist, classifier by
// classifier (bounds, coefficient blocks, training error, experience).
// Doubles are written in shortest round-trip form, so loading reproduces
// every coefficient bit for bit.

#include <cstddef>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "suprb/classifier.hpp"
#include "suprb/errors.hpp"
#include "suprb/individual.hpp"

namespace suprb::harness {

using json = nlohmann::json;

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
    json metadata = json::object(); // problem, dx, da, seeds, config echo, ...
    Individual elitist;

    std::size_t dx() const { return metadata.at("dx").get<std::size_t>(); }
    std::size_t da() const { return metadata.at("da").get<std::size_t>(); }
};

namespace detail {

inline json classifier_to_json(const Classifier& c)
{
    json j;
    j["lower"] = c.condition.lower();
    j["upper"] = c.condition.upper();
    j["train_error"] = c.train_error;
    j["experience"] = c.experience;
    j["fitted"] = c.fitted();
    if (c.fitted()) {
        const auto& m = *c.model;
        const auto& L = m.layout;
        json xx = json::array(), xa = json::array(), aa = json::array(), lx = json::array(), la = json::array();
        for (std::size_t i = 0; i < L.dx; ++i)
            for (std::size_t k = i; k < L.dx; ++k) xx.push_back(m.w_xx(i, k));
        for (std::size_t i = 0; i < L.dx; ++i)
            for (std::size_t k = 0; k < L.da; ++k) xa.push_back(m.w_xa(i, k));
        for (std::size_t k = 0; k < L.da; ++k) aa.push_back(m.w_aa(k));
        if (L.include_linear) {
            for (std::size_t i = 0; i < L.dx; ++i) lx.push_back(m.w_x(i));
            for (std::size_t k = 0; k < L.da; ++k) la.push_back(m.w_a(k));
        }
        j["model"] = {{"intercept", m.intercept},     {"include_linear", L.include_linear},
                      {"w_xx", xx},                   {"w_xa", xa},
                      {"w_aa", aa},                   {"w_x", lx},
                      {"w_a", la}};
    }
    return j;
}

inline Classifier classifier_from_json(const json& j, std::size_t dx, std::size_t da)
{
    Classifier c;
    c.condition = IntervalCondition(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
    if (c.condition.size() != dx) throw DimensionError("model file: classifier bounds do not match dx");
    c.train_error = j.at("train_error").get<double>();
    c.experience = j.at("experience").get<std::size_t>();
    if (!j.at("fitted").get<bool>()) return c;

    const auto& mj = j.at("model");
    const bool linear = mj.at("include_linear").get<bool>();
    LocalModel m = LocalModel::zero(dx, da, linear);
    m.intercept = mj.at("intercept").get<double>();
    const auto xx = mj.at("w_xx").get<std::vector<double>>();
    const auto xa = mj.at("w_xa").get<std::vector<double>>();
    const auto aa = mj.at("w_aa").get<std::vector<double>>();
    const auto lx = mj.at("w_x").get<std::vector<double>>();
    const auto la = mj.at("w_a").get<std::vector<double>>();
    if (xx.size() != dx * (dx + 1) / 2 || xa.size() != dx * da || aa.size() != da ||
        lx.size() != (linear ? dx : 0) || la.size() != (linear ? da : 0))
        throw DimensionError("model file: coefficient block sizes do not match dx/da");
    std::size_t f = 0;
    for (double v : xx) m.coefficients[f++] = v;
    for (double v : xa) m.coefficients[f++] = v;
    for (double v : aa) m.coefficients[f++] = v;
    for (double v : lx) m.coefficients[f++] = v;
    for (double v : la) m.coefficients[f++] = v;
    c.model = std::move(m);
    return c;
}

} // namespace detail

inline json to_json(const ModelFile& mf)
{
    json j;
    j["format_version"] = kModelFormatVersion;
    j["metadata"] = mf.metadata;
    j["valid_error"] = mf.elitist.valid_error;
    json cls = json::array();
    for (const auto& c : mf.elitist.classifiers) cls.push_back(detail::classifier_to_json(c));
    j["classifiers"] = std::move(cls);
    return j;
}

inline ModelFile model_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("format_version")) throw ParseError("model file: missing format_version", 0);
    if (j.at("format_version").get<int>() != kModelFormatVersion)
        throw ParseError(fmt::format("model file: unsupported format_version {}", j.at("format_version").dump()), 0);
    ModelFile mf;
    mf.metadata = j.at("metadata");
    const auto dx = mf.dx();
    const auto da = mf.da();
    mf.elitist.valid_error = j.at("valid_error").get<double>();
    for (const auto& c : j.at("classifiers")) mf.elitist.classifiers.push_back(detail::classifier_from_json(c, dx, da));
    return mf;
}

inline std::string serialize_model(const ModelFile& mf)
{
    return to_json(mf).dump(2) + "\n";
}

/// Syntax errors carry the byte offset reported by the JSON parser.
inline ModelFile deserialize_model(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("model file: {}", e.what()), e.byte);
    }
    try {
        return model_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("model file: {}", e.what()), 0);
    }
}

inline ModelFile load_model(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open model '{}'", path));
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return deserialize_model(text);
}

} // namespace suprb::harness
