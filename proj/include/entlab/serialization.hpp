#pragma once

// JSON and CSV forms of the core types. Probabilities are written as
// shortest round-trip decimal strings so that reading them back is exact.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "entlab/constructions.hpp"
#include "entlab/dist_core.hpp"
#include "entlab/hypotheses.hpp"
#include "entlab/learners.hpp"

namespace entlab {

using Json = nlohmann::ordered_json;

// Shortest decimal that parses back to the same double.
std::string format_decimal(double v);
// Accepts a JSON number or a decimal string.
double parse_decimal(const Json& v);

Json to_json(const Pmf& p);
Pmf pmf_from_json(const Json& j);

Json to_json(const JointPmf& j);
JointPmf joint_from_json(const Json& j);

Json to_json(const HteldSpec& spec);

Json to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const Json& j);

Json to_json(const Encoder& enc);
Encoder encoder_from_json(const Json& j);

Json to_json(const EncoderStats& stats);

void write_dataset_csv(const Dataset& s, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);
Json dataset_sidecar(const Dataset& s);

// Writes path (CSV) and path + ".json" (sidecar); reads both back.
void save_dataset(const Dataset& s, const std::string& path);
Dataset load_dataset(const std::string& path);

Json read_json_file(const std::string& path);

}  // namespace entlab
