#pragma once

// Run configuration: exactly one frequency spec and one phase spec, model
// grids, task options.  The canonical JSON dump is hashed into every output
// header so identical configs give byte-identical files.

#include <json.hpp>

#include <string>
#include <vector>

#include "mosaic/arithmetic_profile.hpp"
#include "mosaic/continued_fraction.hpp"
#include "mosaic/errors.hpp"
#include "mosaic/io.hpp"

namespace mosaic {

using Json = nlohmann::ordered_json;

struct RunConfig {
    ContinuedFraction cf;
    Real theta{256};
    std::vector<double> energies;
    std::vector<double> lambdas;
    double seed_phase = 0.2137;
    Json task;          // task-specific options, may be empty
    std::string hash;   // fnv1a64 of the canonical config dump
    std::vector<int> resonant_subsequence;  // filled when the phase spec was resonant
};

namespace detail {

inline std::vector<double> grid_from_json(const Json& j, const char* who) {
    std::vector<double> out;
    if (j.is_array()) {
        for (auto& v : j) out.push_back(v.get<double>());
    } else if (j.is_object()) {
        double lo = j.at("min").get<double>(), hi = j.at("max").get<double>();
        int count = j.at("count").get<int>();
        if (count < 1) throw ConfigError(std::string(who) + ": count >= 1");
        for (int i = 0; i < count; ++i)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    } else if (j.is_number()) {
        out.push_back(j.get<double>());
    }
    if (out.empty()) throw ConfigError(std::string(who) + ": empty grid");
    return out;
}

} // namespace detail

inline RunConfig parse_config(const Json& j) {
    RunConfig rc;
    rc.hash = hex16(fnv1a64(j.dump()));

    if (!j.contains("frequency")) throw ConfigError("config: missing frequency spec");
    const Json& fq = j.at("frequency");
    int fspecs = static_cast<int>(fq.contains("coeffs")) + static_cast<int>(fq.contains("real")) +
                 static_cast<int>(fq.contains("liouville"));
    if (fspecs != 1) throw ConfigError("config: exactly one frequency spec (coeffs | real | liouville)");
    int pb = fq.value("precision_bits", 256);
    if (fq.contains("coeffs")) {
        std::vector<mpz_class> coeffs;
        for (auto& a : fq.at("coeffs")) {
            if (a.is_number_integer()) coeffs.emplace_back(a.get<long>());
            else coeffs.emplace_back(mpz_class(a.get<std::string>()));
        }
        rc.cf = cf_from_coeffs(coeffs, pb);
    } else if (fq.contains("real")) {
        Real alpha(fq.at("real").get<std::string>(), pb);
        rc.cf = cf_expand(alpha, fq.value("depth", 30), pb);
    } else {
        const Json& lv = fq.at("liouville");
        rc.cf = build_liouville(lv.at("beta").get<double>(), lv.at("depth").get<int>()).cf;
    }

    if (!j.contains("phase")) throw ConfigError("config: missing phase spec");
    const Json& ph = j.at("phase");
    int pspecs = static_cast<int>(ph.contains("real")) + static_cast<int>(ph.contains("resonant"));
    if (pspecs != 1) throw ConfigError("config: exactly one phase spec (real | resonant)");
    if (ph.contains("real")) {
        if (ph.at("real").is_number())
            rc.theta = Real(ph.at("real").get<double>(), std::max(pb, 256));
        else
            rc.theta = Real(ph.at("real").get<std::string>(), std::max(pb, 256));
    } else {
        const Json& rs = ph.at("resonant");
        int depth = rs.value("depth", rc.cf.depth() - 1);
        ResonantPhase rp = build_resonant_phase(rc.cf, rs.at("delta").get<double>(), depth);
        rc.theta = rp.theta;
        rc.resonant_subsequence = rp.subsequence;
    }

    if (j.contains("model")) {
        const Json& m = j.at("model");
        if (m.contains("E")) rc.energies = detail::grid_from_json(m.at("E"), "model.E");
        if (m.contains("lambda")) rc.lambdas = detail::grid_from_json(m.at("lambda"), "model.lambda");
    }
    rc.seed_phase = j.value("seed_phase", 0.2137);
    if (j.contains("task")) rc.task = j.at("task");
    return rc;
}

inline RunConfig parse_config_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    return parse_config(j);
}

} // namespace mosaic
