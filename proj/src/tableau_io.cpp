#include "peerimex/tableau_io.hpp"

#include "peerimex/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace peerimex {

namespace {

using nlohmann::json;

Matrix read_matrix(const json& j, const char* key, std::size_t s) {
    if (!j.contains(key)) throw Error(ErrorCode::malformed_file, std::string("missing key '") + key + "'");
    const json& m = j.at(key);
    if (!m.is_array() || m.size() != s)
        throw Error(ErrorCode::malformed_file, std::string("'") + key + "' must have s rows");
    std::vector<std::vector<double>> rows;
    for (const json& row : m) {
        if (!row.is_array() || row.size() != s)
            throw Error(ErrorCode::malformed_file, std::string("'") + key + "' must have s columns");
        std::vector<double> r;
        for (const json& v : row) {
            if (!v.is_number()) throw Error(ErrorCode::malformed_file, std::string("non-numeric entry in '") + key + "'");
            r.push_back(v.get<double>());
        }
        rows.push_back(std::move(r));
    }
    return from_rows(rows);
}

json write_matrix(const Matrix& m) {
    json rows = json::array();
    for (const auto& row : to_rows(m)) rows.push_back(row);
    return rows;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"imex-euler", "imex-bdf2", "imex-bdf3",
                                                   "imex-bdf4", "imex-peer2"};
    return names;
}

ImexTableau builtin(const std::string& name) {
    if (name == "imex-bdf2") return bdf_to_peer(2);
    if (name == "imex-bdf3") return bdf_to_peer(3);
    if (name == "imex-bdf4") return bdf_to_peer(4);
    if (name == "imex-peer2")
        return peer2_family(peer2_mu_star() + 0.1).with_source("BDF2 base, s21 = 10 - 4 sqrt(5) + 1/10");
    if (name == "imex-euler") {
        const Matrix one = Matrix::Ones(1, 1);
        return assemble_imex(Vector::Ones(1), one, one, Matrix::Zero(1, 1), "imex-euler", 1)
            .with_source("implicit/explicit Euler pair");
    }
    throw Error(ErrorCode::unknown_method, "unknown built-in method '" + name + "'");
}

ImexTableau parse_tableau(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::malformed_file, std::string("invalid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::malformed_file, "tableau file must hold a JSON object");
    try {
        const auto name = j.value("name", std::string("unnamed"));
        if (!j.contains("c") || !j.at("c").is_array() || j.at("c").empty())
            throw Error(ErrorCode::malformed_file, "missing or empty node array 'c'");
        const auto c = j.at("c").get<std::vector<double>>();
        const std::size_t s = c.size();
        if (j.contains("s") && j.at("s").get<std::size_t>() != s)
            throw Error(ErrorCode::malformed_file, "'s' does not match the length of 'c'");
        const Matrix p = read_matrix(j, "P", s);
        const Matrix r = read_matrix(j, "R", s);
        const Matrix s2 = j.contains("S2") ? read_matrix(j, "S2", s)
                                           : Matrix::Zero(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
        const int order = j.value("order", 0);
        ImexTableau t = [&] {
            try {
                return assemble_imex(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(s)), p, r, s2, name, order);
            } catch (const Error& e) {
                throw Error(ErrorCode::validation, std::string("tableau '") + name + "' invalid: " + e.what());
            }
        }();
        if (j.contains("source")) t = t.with_source(j.at("source").get<std::string>());
        return t;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::malformed_file, std::string("malformed tableau: ") + ex.what());
    }
}

ImexTableau load_tableau(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::malformed_file, "cannot open tableau file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tableau(buf.str());
}

std::string serialize_tableau(const ImexTableau& t) {
    json j;
    j["name"] = t.label();
    j["s"] = t.stages();
    j["c"] = std::vector<double>(t.nodes().data(), t.nodes().data() + t.nodes().size());
    j["P"] = write_matrix(t.propagation());
    j["R"] = write_matrix(t.implicit_coupling());
    j["S2"] = write_matrix(t.extrapolation_curr());
    j["order"] = t.order();
    if (!t.source().empty()) j["source"] = t.source();
    return j.dump(2) + "\n";
}

void save_tableau(const ImexTableau& t, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_tableau(t));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + tmp.string());
        out << contents;
        if (!out) throw Error(ErrorCode::invalid_argument, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace peerimex
