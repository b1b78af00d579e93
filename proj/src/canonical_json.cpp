#include "qgms/canonical_json.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qgms {
namespace {

void dump_into(const nlohmann::json& v, std::string& out) {
    using value_t = nlohmann::json::value_t;
    switch (v.type()) {
        case value_t::object: {
            // nlohmann::json objects are std::map-backed, so iteration is sorted.
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                dump_into(it.value(), out);
            }
            out += '}';
            break;
        }
        case value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) out += ',';
                dump_into(v[i], out);
            }
            out += ']';
            break;
        }
        case value_t::number_float:
            out += canonical_number(v.get<double>());
            break;
        case value_t::discarded:
            throw std::invalid_argument("cannot serialize a discarded JSON value");
        default:
            out += v.dump();
            break;
    }
}

}  // namespace

std::string canonical_number(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("canonical JSON cannot encode non-finite numbers");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string canonical_dump(const nlohmann::json& value) {
    std::string out;
    dump_into(value, out);
    return out;
}

}  // namespace qgms
