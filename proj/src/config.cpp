#include "sympkit/config.hpp"

#include <fstream>

namespace sympkit {

namespace {

Complex parse_complex(const Json& node, const std::string& where) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
        throw ConfigError(where + ": complex numbers are [re, im] pairs");
    return Complex(node[0].get<double>(), node[1].get<double>());
}

Matrix parse_matrix(const Json& node, const std::string& where) {
    if (!node.is_array() || node.empty())
        throw ConfigError(where + ": expected a nonempty array of rows");
    const std::size_t rows = node.size();
    const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
    if (cols == 0) throw ConfigError(where + ": rows must be nonempty arrays");
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!node[i].is_array() || node[i].size() != cols)
            throw ConfigError(where + ": ragged rows");
        for (std::size_t j = 0; j < cols; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                parse_complex(node[i][j], where);
    }
    return out;
}

Vector parse_vector(const Json& node, const std::string& where) {
    if (!node.is_array() || node.empty())
        throw ConfigError(where + ": expected a nonempty array of [re, im] pairs");
    Vector out(static_cast<Eigen::Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = parse_complex(node[i], where);
    return out;
}

std::vector<double> parse_real_array(const Json& node, const std::string& where) {
    if (!node.is_array() || node.empty())
        throw ConfigError(where + ": expected a nonempty numeric array");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& item : node) {
        if (!item.is_number()) throw ConfigError(where + ": entries must be numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

ToleranceConfig parse_tolerances(const Json& doc) {
    ToleranceConfig tol;
    if (!doc.contains("tolerances")) return tol;
    const Json& node = doc["tolerances"];
    if (!node.is_object()) throw ConfigError("tolerances: expected an object");
    if (node.contains("structural_tol")) tol.structural_tol = node["structural_tol"].get<double>();
    if (node.contains("rank_tol")) tol.rank_tol = node["rank_tol"].get<double>();
    if (node.contains("psd_tol")) tol.psd_tol = node["psd_tol"].get<double>();
    try {
        tol.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("tolerances: ") + err.what());
    }
    return tol;
}

SymplecticSystem parse_system(const Json& doc, const ToleranceConfig& tol) {
    if (!doc.contains("system") || !doc["system"].is_object())
        throw ConfigError("missing \"system\" object");
    const Json& node = doc["system"];
    if (!node.contains("kind") || !node["kind"].is_string())
        throw ConfigError("system.kind must be a string");
    const std::string kind = node["kind"].get<std::string>();

    try {
        if (kind == "sturm_liouville") {
            const auto p = parse_real_array(node.at("p"), "system.p");
            const auto q = parse_real_array(node.at("q"), "system.q");
            const auto w = parse_real_array(node.at("w"), "system.w");
            return from_sturm_liouville(p, q, w, tol);
        }
        if (kind == "constant") {
            if (!node.contains("horizon") || !node["horizon"].is_number_integer())
                throw ConfigError("system.horizon must be an integer for kind constant");
            const int horizon = node["horizon"].get<int>();
            const Matrix S = parse_matrix(node.at("S"), "system.S");
            const Matrix Psi = parse_matrix(node.at("Psi"), "system.Psi");
            return SymplecticSystem::constant(S, Psi, horizon, tol);
        }
        if (kind == "explicit") {
            const Json& s_node = node.at("S");
            const Json& psi_node = node.at("Psi");
            if (!s_node.is_array() || !psi_node.is_array() || s_node.size() != psi_node.size())
                throw ConfigError("system.S and system.Psi must be equally long matrix arrays");
            std::vector<Matrix> Ss, Ps;
            for (std::size_t k = 0; k < s_node.size(); ++k) {
                Ss.push_back(parse_matrix(s_node[k], "system.S[" + std::to_string(k) + "]"));
                Ps.push_back(parse_matrix(psi_node[k], "system.Psi[" + std::to_string(k) + "]"));
            }
            return SymplecticSystem(std::move(Ss), std::move(Ps), tol);
        }
    } catch (const Json::exception& err) {
        throw ConfigError(std::string("system: ") + err.what());
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("system: ") + err.what());
    }
    throw ConfigError("system.kind must be one of sturm_liouville | constant | explicit");
}

} // namespace

RunConfig parse_run_config(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("top-level document must be an object");
    RunConfig config;
    config.echo = doc;

    const ToleranceConfig tol = parse_tolerances(doc);
    config.system = parse_system(doc, tol);
    const int n = config.system->half_dim();

    if (doc.contains("lambda")) {
        if (!doc["lambda"].is_array())
            throw ConfigError("lambda: expected an array of [re, im] pairs");
        for (const auto& item : doc["lambda"]) config.lambdas.push_back(parse_complex(item, "lambda"));
    }
    if (doc.contains("interval")) {
        const Json& node = doc["interval"];
        if (!node.is_array() || node.size() != 2)
            throw ConfigError("interval: expected [lo, hi]");
        config.interval = IndexRange{node[0].get<int>(), node[1].get<int>()};
    }
    if (doc.contains("alpha")) config.alpha = parse_matrix(doc["alpha"], "alpha");
    if (doc.contains("beta")) config.beta = parse_matrix(doc["beta"], "beta");
    if (doc.contains("N_list")) {
        for (const auto& item : doc["N_list"]) {
            if (!item.is_number_integer()) throw ConfigError("N_list: entries must be integers");
            config.N_list.push_back(item.get<int>());
        }
    }
    if (doc.contains("growth_ratio_threshold"))
        config.growth_ratio_threshold = doc["growth_ratio_threshold"].get<double>();
    if (doc.contains("boundary_index"))
        config.boundary_index = doc["boundary_index"].get<int>();
    if (doc.contains("l_index")) config.l_index = doc["l_index"].get<int>();
    if (doc.contains("f")) {
        if (!doc["f"].is_array()) throw ConfigError("f: expected an array of vectors");
        for (std::size_t k = 0; k < doc["f"].size(); ++k) {
            Vector fk = parse_vector(doc["f"][k], "f[" + std::to_string(k) + "]");
            if (fk.size() != 2 * n)
                throw ConfigError("f[" + std::to_string(k) + "]: expected length 2n");
            config.forcing.push_back(std::move(fk));
        }
    }
    if (doc.contains("v")) {
        config.v = parse_vector(doc["v"], "v");
        if (config.v->size() != n) throw ConfigError("v: expected length n");
    }
    if (doc.contains("output")) {
        const Json& node = doc["output"];
        if (node.contains("format")) {
            config.format = node["format"].get<std::string>();
            if (config.format != "json" && config.format != "csv")
                throw ConfigError("output.format must be json or csv");
        }
        if (node.contains("path")) config.out_path = node["path"].get<std::string>();
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream stream(path);
    if (!stream) throw ConfigError("cannot open config file: " + path);
    Json doc;
    try {
        doc = Json::parse(stream);
    } catch (const Json::exception& err) {
        throw ConfigError(std::string("JSON parse error: ") + err.what());
    }
    return parse_run_config(doc);
}

} // namespace sympkit
