#include "adjustmcmc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace adjustmcmc {

namespace {

std::vector<Edge> pairs_from_json(const json& arr, const char* what) {
    if (!arr.is_array()) throw FormatError(std::string(what) + " must be an array of pairs");
    std::vector<Edge> out;
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2) throw FormatError(std::string(what) + " entries must be [a, b] pairs");
        out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
}

int node_count(const json& j) {
    if (!j.is_object() || !j.contains("n")) throw FormatError("graph JSON needs an integer field 'n'");
    return j.at("n").get<int>();
}

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(static_cast<unsigned char>(s[i]))) ++i;
    s.erase(0, i);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

json dag_to_json(const Dag& g, const std::vector<std::string>& names) {
    json j;
    j["n"] = g.n();
    j["edges"] = json::array();
    for (auto [a, b] : g.edges()) j["edges"].push_back({a, b});
    if (!names.empty()) j["names"] = names;
    return j;
}

Dag dag_from_json(const json& j, std::vector<std::string>* names) {
    const int n = node_count(j);
    auto edges = pairs_from_json(j.value("edges", json::array()), "edges");
    try {
        Dag g(n, edges);
        if (names) *names = j.contains("names") ? j.at("names").get<std::vector<std::string>>() : default_names(n);
        if (names && static_cast<int>(names->size()) != n) throw FormatError("names length differs from n");
        return g;
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid DAG: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw FormatError(std::string("invalid DAG: ") + e.what());
    }
}

json skeleton_to_json(const Skeleton& s) {
    json j;
    j["n"] = s.n();
    j["undirected"] = json::array();
    for (auto [a, b] : s.edges()) j["undirected"].push_back({a, b});
    return j;
}

Skeleton skeleton_from_json(const json& j) {
    const int n = node_count(j);
    auto edges = pairs_from_json(j.value("undirected", json::array()), "undirected");
    try {
        return Skeleton(n, edges);
    } catch (const std::exception& e) {
        throw FormatError(std::string("invalid skeleton: ") + e.what());
    }
}

json sem_to_json(const Sem& sem, const std::vector<std::string>& names) {
    json j;
    j["dag"] = dag_to_json(sem.dag, names);
    j["coeff"] = json::array();
    for (auto [a, b] : sem.dag.edges()) j["coeff"].push_back({a, b, sem.coeff(a, b)});
    j["noise_var"] = std::vector<double>(sem.noise_var.data(), sem.noise_var.data() + sem.noise_var.size());
    return j;
}

Sem sem_from_json(const json& j, std::vector<std::string>* names) {
    if (!j.is_object() || !j.contains("dag")) throw FormatError("SEM JSON needs a 'dag' field");
    Sem sem;
    sem.dag = dag_from_json(j.at("dag"), names);
    const int n = sem.dag.n();
    sem.coeff = Eigen::MatrixXd::Zero(n, n);
    int seen = 0;
    for (const auto& c : j.value("coeff", json::array())) {
        if (!c.is_array() || c.size() != 3) throw FormatError("coeff entries must be [from, to, beta]");
        const int a = c[0].get<int>(), b = c[1].get<int>();
        if (!(a >= 0 && a < n && b >= 0 && b < n && sem.dag.has_edge(a, b)))
            throw FormatError("coefficient given for a non-edge");
        sem.coeff(a, b) = c[2].get<double>();
        ++seen;
    }
    if (seen != static_cast<int>(sem.dag.num_edges())) throw FormatError("coeff must list every edge exactly once");
    auto nv = j.value("noise_var", std::vector<double>(static_cast<std::size_t>(n), 1.0));
    if (static_cast<int>(nv.size()) != n) throw FormatError("noise_var length differs from n");
    sem.noise_var = Eigen::Map<Eigen::VectorXd>(nv.data(), n);
    try {
        sem.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    return sem;
}

json node_set_to_json(const NodeSet& s) { return json(s.ids()); }

NodeSet node_set_from_json(const json& j) { return NodeSet(j.get<std::vector<NodeId>>()); }

json node_sets_to_json(const std::vector<NodeSet>& sets) {
    json arr = json::array();
    for (const auto& s : sets) arr.push_back(node_set_to_json(s));
    return arr;
}

std::string format_threshold(double s) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, s);
    std::string out(buf, res.ptr);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
}

json run_result_to_json(const Tally& tally, const std::vector<ThresholdList>& lists) {
    json j;
    j["tally"] = json::array();
    for (const auto& [set, tested] : tally.tested_count) {
        auto v = tally.valid_count.find(set);
        j["tally"].push_back({{"set", node_set_to_json(set)},
                              {"valid", v == tally.valid_count.end() ? 0 : v->second},
                              {"tested", tested}});
    }
    j["lists"] = json::object();
    for (const auto& l : lists) j["lists"][format_threshold(l.threshold)] = node_sets_to_json(l.sets);
    return j;
}

Dataset read_csv(std::istream& in) {
    std::string line;
    Dataset data;
    while (std::getline(in, line) && trim(line).empty()) {
    }
    if (trim(line).empty()) throw FormatError("CSV has no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    data.names = split_csv_line(line);
    const std::size_t cols = data.names.size();
    std::vector<double> flat;
    long row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++row;
        auto cells = split_csv_line(line);
        if (cells.size() != cols)
            throw FormatError("CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                              " cells, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            double v = 0.0;
            const char* first = cells[c].data();
            const char* last = first + cells[c].size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last || !std::isfinite(v))
                throw FormatError("CSV row " + std::to_string(row) + ", column '" + data.names[c] +
                                  "': non-numeric value '" + cells[c] + "'");
            flat.push_back(v);
        }
    }
    if (row == 0) throw FormatError("CSV has no data rows");
    data.values.resize(row, static_cast<Eigen::Index>(cols));
    for (long r = 0; r < row; ++r)
        for (std::size_t c = 0; c < cols; ++c) data.values(r, static_cast<Eigen::Index>(c)) = flat[static_cast<std::size_t>(r) * cols + c];
    return data;
}

Dataset read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
    auto names = data.names.empty() ? default_names(data.cols()) : data.names;
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    out << '\n';
    char buf[64];
    for (Eigen::Index r = 0; r < data.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.values.cols(); ++c) {
            auto res = std::to_chars(buf, buf + sizeof buf, data.values(r, c));
            if (c) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    write_csv(out, data);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << text;
}

}  // namespace adjustmcmc
