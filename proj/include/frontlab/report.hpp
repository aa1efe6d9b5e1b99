#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/assumptions.hpp"
#include "frontlab/asym_demo.hpp"
#include "frontlab/front.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/steady.hpp"
#include "frontlab/terrace.hpp"

namespace frontlab {

using Json = nlohmann::ordered_json;

Json to_json(const GridMetadata& g);
Json to_json(const SpeedEstimate& s);
// Summary of a state: cell mean, range, residual, eigenvalue and label.
Json to_json(const SteadyState& s);
Json to_json(const TerraceReport& r);
Json to_json(const CounterPropagation& c);
Json to_json(const AssumptionReport& r, const std::vector<SteadyState>& states);
Json to_json(const TimeStepReport& r);
Json to_json(const DirectionalSpeeds& s);
Json to_json(const DemoReport& r);

struct Manifest {
    std::string command;
    std::string config_hash;
    std::string config_text;
    GridMetadata grid;
    std::uint64_t seed = 0;
    std::string started;
    std::vector<std::string> outputs;
};

Json to_json(const Manifest& m);

// Library, compiler and dependency versions recorded in manifests.
Json version_info();

// Writes `rows` under `header`, then a "# manifest: <manifest_ref>" line.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, const std::string& manifest_ref);

void append_json_line(const std::string& path, const Json& record);

// Shortest round-trip decimal representation.
std::string format_number(double x);

}  // namespace frontlab
