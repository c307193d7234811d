#pragma once

#include "ruinlab/asymptotics.hpp"
#include "ruinlab/constants.hpp"
#include "ruinlab/mc.hpp"
#include "ruinlab/model.hpp"

#include <json.hpp>

namespace ruinlab {

using json = nlohmann::json;

json to_json(const constants::EstimatorResult& r);
constants::EstimatorResult estimator_from_json(const json& j);

json to_json(const constants::MultiEstimate& m);
constants::MultiEstimate multi_from_json(const json& j);

json to_json(const constants::HEstimate& h);
constants::HEstimate h_from_json(const json& j);

json to_json(const model::Regime& regime, const model::ModelParams& params);

json to_json(const constants::ConstantSpec& spec);

json to_json(const asymptotics::LimitResult& r);

json to_json(const mc::ProbeResult& p);

json to_json(const mc::ConvergeTable& t);

} // namespace ruinlab
