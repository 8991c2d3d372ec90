#include "sympkit/reporting.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sympkit {

Json json_complex(Complex value) { return Json::array({value.real(), value.imag()}); }

Json json_matrix(const Matrix& value) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < value.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < value.cols(); ++j) row.push_back(json_complex(value(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json json_real_vector(const RealVector& value) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < value.size(); ++i) out.push_back(value(i));
    return out;
}

Json json_check(const std::string& name, bool pass, double residual) {
    Json check;
    check["name"] = name;
    check["status"] = pass ? "pass" : "fail";
    check["residual"] = residual;
    return check;
}

namespace {

std::string format_double(double value) {
    if (std::isnan(value)) return "null";
    if (std::isinf(value)) return value > 0 ? "1e999" : "-1e999";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void escape_string(const std::string& raw, std::string& out) {
    out.push_back('"');
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
                    out += buffer;
                } else {
                    out.push_back(c);
                }
        }
    }
    out.push_back('"');
}

void write_json(const Json& node, std::string& out) {
    switch (node.type()) {
        case Json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (auto it = node.begin(); it != node.end(); ++it) {
                if (!first) out.push_back(',');
                first = false;
                escape_string(it.key(), out);
                out.push_back(':');
                write_json(it.value(), out);
            }
            out.push_back('}');
            break;
        }
        case Json::value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : node) {
                if (!first) out.push_back(',');
                first = false;
                write_json(item, out);
            }
            out.push_back(']');
            break;
        }
        case Json::value_t::string:
            escape_string(node.get_ref<const std::string&>(), out);
            break;
        case Json::value_t::boolean:
            out += node.get<bool>() ? "true" : "false";
            break;
        case Json::value_t::number_integer:
            out += std::to_string(node.get<std::int64_t>());
            break;
        case Json::value_t::number_unsigned:
            out += std::to_string(node.get<std::uint64_t>());
            break;
        case Json::value_t::number_float:
            out += format_double(node.get<double>());
            break;
        case Json::value_t::null:
        default:
            out += "null";
    }
}

void flatten_csv(const Json& node, const std::string& path, std::string& out) {
    switch (node.type()) {
        case Json::value_t::object:
            for (auto it = node.begin(); it != node.end(); ++it)
                flatten_csv(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
            break;
        case Json::value_t::array: {
            std::size_t index = 0;
            for (const auto& item : node)
                flatten_csv(item, path + "[" + std::to_string(index++) + "]", out);
            break;
        }
        case Json::value_t::string:
            out += path + "," + node.get<std::string>() + "\n";
            break;
        case Json::value_t::boolean:
            out += path + "," + (node.get<bool>() ? "true" : "false") + "\n";
            break;
        case Json::value_t::number_integer:
            out += path + "," + std::to_string(node.get<std::int64_t>()) + "\n";
            break;
        case Json::value_t::number_unsigned:
            out += path + "," + std::to_string(node.get<std::uint64_t>()) + "\n";
            break;
        case Json::value_t::number_float:
            out += path + "," + format_double(node.get<double>()) + "\n";
            break;
        case Json::value_t::null:
        default:
            out += path + ",null\n";
    }
}

} // namespace

std::string to_json_string(const Json& doc) {
    std::string out;
    write_json(doc, out);
    out.push_back('\n');
    return out;
}

std::string to_csv_string(const Json& doc) {
    std::string out = "path,value\n";
    flatten_csv(doc, "", out);
    return out;
}

} // namespace sympkit
