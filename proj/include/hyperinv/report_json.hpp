#pragma once

#include <json.hpp>

#include "hyperinv/gmres.hpp"
#include "hyperinv/iterate.hpp"

namespace hyperinv {

/// Stable wire format: loops, terminated, history[], coc, matmuls_per_loop.
template <class T>
nlohmann::json to_json(const IterationReport<T>& rep) {
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& rec : rep.history) {
        nlohmann::json r;
        r["step_norm"] = to_double(rec.step_norm);
        if (rec.residual_norm)
            r["residual_norm"] = to_double(*rec.residual_norm);
        else
            r["residual_norm"] = nullptr;
        r["matmuls"] = rec.matmuls;
        hist.push_back(std::move(r));
    }
    nlohmann::json j;
    j["loops"] = rep.loops;
    j["terminated"] = to_string(rep.terminated);
    j["history"] = std::move(hist);
    if (rep.coc)
        j["coc"] = *rep.coc;
    else
        j["coc"] = nullptr;
    j["matmuls_per_loop"] = rep.matmuls_per_loop;
    if (rep.reliable_rule_degraded) j["reliable_rule_degraded"] = true;
    return j;
}

template <class T>
nlohmann::json to_json(const GmresReport<T>& rep) {
    nlohmann::json j;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["stagnated"] = rep.stagnated;
    j["true_relative_residual"] = rep.true_relative_residual;
    j["residual_history"] = rep.residual_history;
    j["true_residual_history"] = rep.true_residual_history;
    return j;
}

}  // namespace hyperinv
