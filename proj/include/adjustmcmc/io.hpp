#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "adjustmcmc/graph.hpp"
#include "adjustmcmc/model.hpp"
#include "adjustmcmc/sampler.hpp"

namespace adjustmcmc {

using json = nlohmann::json;

/// Thrown for malformed input files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"n": int, "edges": [[from, to], ...], "names": [...]?}
json dag_to_json(const Dag& g, const std::vector<std::string>& names = {});
Dag dag_from_json(const json& j, std::vector<std::string>* names = nullptr);

// {"n": int, "undirected": [[a, b], ...]}
json skeleton_to_json(const Skeleton& s);
Skeleton skeleton_from_json(const json& j);

// {"dag": {...}, "coeff": [[from, to, beta], ...], "noise_var": [...]}
json sem_to_json(const Sem& sem, const std::vector<std::string>& names = {});
Sem sem_from_json(const json& j, std::vector<std::string>* names = nullptr);

json node_set_to_json(const NodeSet& s);
NodeSet node_set_from_json(const json& j);
json node_sets_to_json(const std::vector<NodeSet>& sets);

/// "1.0", "0.8", "0.0": shortest round-trip form with at least one decimal.
std::string format_threshold(double s);

// {"tally": [{"set": [...], "valid": int, "tested": int}], "lists": {"1.0": [[...]], ...}}
json run_result_to_json(const Tally& tally, const std::vector<ThresholdList>& lists);

/// Headered CSV, one row per observation. Throws FormatError on ragged rows
/// or non-numeric cells.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& data);
void write_csv_file(const std::string& path, const Dataset& data);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace adjustmcmc
