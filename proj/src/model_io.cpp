#include "levyedge/model_io.hpp"

#include "levyedge/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace levyedge {

namespace {

using json = nlohmann::ordered_json;

constexpr double inf = std::numeric_limits<double>::infinity();

double parse_bound(const json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return inf;
        if (s == "-inf") return -inf;
    }
    throw config_error(std::string("model: ") + what + " must be a number, \"inf\" or \"-inf\"");
}

json bound_to_json(double v) {
    if (v == inf) return json("inf");
    if (v == -inf) return json("-inf");
    return json(v);
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw config_error(std::string("model: missing or non-numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::vector<double> number_array(const json& j, const char* key, bool required) {
    if (!j.contains(key)) {
        if (required) throw config_error(std::string("model: missing array '") + key + "'");
        return {};
    }
    const auto& arr = j.at(key);
    if (!arr.is_array())
        throw config_error(std::string("model: field '") + key + "' must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number())
            throw config_error(std::string("model: array '") + key + "' has a non-numeric entry");
        out.push_back(v.get<double>());
    }
    return out;
}

DensityPiece parse_piece(const json& j) {
    DensityPiece piece;
    if (!j.contains("kind") || !j.at("kind").is_string())
        throw config_error("model: density piece needs a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    if (!j.contains("support") || !j.at("support").is_array() || j.at("support").size() != 2)
        throw config_error("model: density piece needs 'support': [lo, hi]");
    piece.lo = parse_bound(j.at("support")[0], "support endpoint");
    piece.hi = parse_bound(j.at("support")[1], "support endpoint");
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (kind == "polyexp") {
        piece.kind = PieceKind::polyexp;
        piece.poly = number_array(params, "poly", true);
        piece.exp_poly = number_array(params, "exp_poly", false);
        piece.power = params.contains("power") ? require_number(params, "power") : 0.0;
    } else if (kind == "tabulated") {
        piece.kind = PieceKind::tabulated;
        piece.xs = number_array(params, "xs", true);
        piece.values = number_array(params, "values", true);
        piece.monotone_tail =
            params.contains("monotone_tail") && params.at("monotone_tail").is_boolean()
                ? params.at("monotone_tail").get<bool>()
                : false;
    } else {
        throw config_error("model: unknown density piece kind '" + kind + "'");
    }
    return piece;
}

} // namespace

LevyTriplet parse_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw config_error(std::string("model: JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) throw config_error("model: top level must be an object");
    const double sigma2 = require_number(j, "sigma2");
    const double rho = require_number(j, "rho");
    LevyMeasure measure;
    if (j.contains("atoms")) {
        if (!j.at("atoms").is_array()) throw config_error("model: 'atoms' must be an array");
        for (const auto& a : j.at("atoms"))
            measure.atoms.push_back({require_number(a, "x"), require_number(a, "mass")});
    }
    if (j.contains("density_pieces")) {
        if (!j.at("density_pieces").is_array())
            throw config_error("model: 'density_pieces' must be an array");
        for (const auto& p : j.at("density_pieces")) measure.density_pieces.push_back(parse_piece(p));
    }
    bool declared = false;
    if (j.contains("cramer_declared")) {
        if (!j.at("cramer_declared").is_boolean())
            throw config_error("model: 'cramer_declared' must be a boolean");
        declared = j.at("cramer_declared").get<bool>();
    }
    return LevyTriplet(sigma2, rho, std::move(measure), declared);
}

LevyTriplet load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("model: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string serialize_model(const LevyTriplet& triplet) {
    json j;
    j["sigma2"] = triplet.sigma2();
    j["rho"] = triplet.rho();
    j["atoms"] = json::array();
    for (const auto& atom : triplet.measure().atoms)
        j["atoms"].push_back(json{{"x", atom.x}, {"mass", atom.mass}});
    j["density_pieces"] = json::array();
    for (const auto& piece : triplet.measure().density_pieces) {
        json p;
        p["kind"] = piece.kind == PieceKind::polyexp ? "polyexp" : "tabulated";
        p["support"] = json::array({bound_to_json(piece.lo), bound_to_json(piece.hi)});
        json params;
        if (piece.kind == PieceKind::polyexp) {
            params["poly"] = piece.poly;
            params["exp_poly"] = piece.exp_poly;
            params["power"] = piece.power;
        } else {
            params["xs"] = piece.xs;
            params["values"] = piece.values;
            params["monotone_tail"] = piece.monotone_tail;
        }
        p["params"] = std::move(params);
        j["density_pieces"].push_back(std::move(p));
    }
    j["cramer_declared"] = triplet.cramer_declared();
    return j.dump(2) + "\n";
}

void save_model(const LevyTriplet& triplet, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("model: cannot write '" + path + "'");
    out << serialize_model(triplet);
}

} // namespace levyedge
