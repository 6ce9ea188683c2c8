#include "tsr/serialize.hpp"

#include <cstdio>

namespace tsr {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(v));
    return std::string(buf);
}

json to_json(const CorrelationModel& model) {
    json j;
    j["family"] = family_name(model.family);
    j["phi"] = model.phi;
    j["kappa"] = model.kappa;
    return j;
}

json to_json(const PriorSpec& prior) {
    json j;
    j["kind"] = prior.kind == PriorKind::reference ? "reference" : "vague";
    j["a"] = prior.a;
    j["nu_lower"] = prior.nu_lower;
    j["phi_bounds"] = {prior.phi_bounds.first, prior.phi_bounds.second};
    j["lambda_bounds"] = {prior.lambda_bounds.first, prior.lambda_bounds.second};
    return j;
}

json to_json(const SamplerConfig& c) {
    json j;
    j["mode"] = c.mode == SamplerMode::metropolis ? "metropolis" : "grid";
    j["draws"] = c.draws;
    j["burn_in"] = c.burn_in;
    j["proposal_sd"] = {c.proposal_sd[0], c.proposal_sd[1]};
    j["grid_phi"] = c.grid_phi;
    j["grid_nu"] = c.grid_nu;
    j["phi_max"] = c.phi_max;
    j["nu_max"] = c.nu_max;
    j["adapt"] = c.adapt;
    j["seed"] = c.seed;
    return j;
}

json to_json(const ScenarioConfig& c) {
    json j;
    j["scenario"] = scenario_name(c.scenario);
    j["side"] = c.side;
    j["extent"] = c.extent;
    j["model"] = to_json(c.model);
    j["sigma2"] = c.sigma2;
    j["nu"] = c.nu;
    j["beta"] = std::vector<double>(c.beta.data(), c.beta.data() + c.beta.size());
    j["design"] = design_name(c.design);
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    return j;
}

std::string config_digest(const json& j) { return hex64(fnv1a64(j.dump())); }

}  // namespace tsr
