#pragma once

// JSON state files:
//   {"dims":[n1,...,nk], "kind":"pure"|"mixed", "data": ...}
// Pure data is nested k deep following dims (n1 outermost), each leaf an
// [re, im] pair. Mixed data is the ∏n × ∏n matrix as a list of rows of
// [re, im] pairs. Numbers are written with 17 significant digits.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "luinv/errors.hpp"
#include "luinv/states.hpp"

namespace luinv {

using State = std::variant<PureState, DensityMatrix>;

namespace detail {

inline void write_number(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

inline void write_pair(std::ostream& os, cplx z) {
    os << '[';
    write_number(os, z.real());
    os << ", ";
    write_number(os, z.imag());
    os << ']';
}

inline void write_dims(std::ostream& os, const Dims& dims) {
    os << "[";
    for (int j = 1; j <= dims.parties(); ++j) os << (j > 1 ? ", " : "") << dims[j];
    os << "]";
}

inline void write_nested(std::ostream& os, const Vector& a, const Dims& dims, int party, std::size_t offset,
                         std::size_t stride) {
    if (party > dims.parties()) {
        write_pair(os, a(static_cast<Eigen::Index>(offset)));
        return;
    }
    const std::size_t inner = stride / static_cast<std::size_t>(dims[party]);
    os << '[';
    for (int i = 0; i < dims[party]; ++i) {
        if (i) os << ", ";
        write_nested(os, a, dims, party + 1, offset + static_cast<std::size_t>(i) * inner, inner);
    }
    os << ']';
}

inline cplx read_pair(const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw parse_error("state file: expected an [re, im] pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

inline void read_nested(const nlohmann::json& v, const Dims& dims, int party, std::size_t offset, std::size_t stride,
                        Vector& out) {
    if (party > dims.parties()) {
        out(static_cast<Eigen::Index>(offset)) = read_pair(v);
        return;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != dims[party])
        throw parse_error("state file: data shape does not match dims at party " + std::to_string(party));
    const std::size_t inner = stride / static_cast<std::size_t>(dims[party]);
    for (int i = 0; i < dims[party]; ++i)
        read_nested(v[static_cast<std::size_t>(i)], dims, party + 1, offset + static_cast<std::size_t>(i) * inner,
                    inner, out);
}

}  // namespace detail

inline std::string to_json(const PureState& psi) {
    std::ostringstream os;
    os << "{\"dims\": ";
    detail::write_dims(os, psi.dims);
    os << ", \"kind\": \"pure\", \"data\": ";
    detail::write_nested(os, psi.amplitudes, psi.dims, 1, 0, psi.dims.total());
    os << "}\n";
    return os.str();
}

inline std::string to_json(const DensityMatrix& rho) {
    std::ostringstream os;
    os << "{\"dims\": ";
    detail::write_dims(os, rho.dims);
    os << ", \"kind\": \"mixed\", \"data\": [";
    for (Eigen::Index r = 0; r < rho.entries.rows(); ++r) {
        os << (r ? ",\n  [" : "\n  [");
        for (Eigen::Index c = 0; c < rho.entries.cols(); ++c) {
            if (c) os << ", ";
            detail::write_pair(os, rho.entries(r, c));
        }
        os << ']';
    }
    os << "]}\n";
    return os.str();
}

inline State parse_state(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("state file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dims") || !doc.contains("kind") || !doc.contains("data"))
        throw parse_error("state file: expected keys dims, kind, data");
    std::vector<int> n;
    if (!doc["dims"].is_array() || doc["dims"].empty()) throw parse_error("state file: dims must be a non-empty array");
    for (const auto& d : doc["dims"]) {
        if (!d.is_number_integer() || d.get<int>() < 1) throw parse_error("state file: dims must be positive integers");
        n.push_back(d.get<int>());
    }
    const Dims dims(std::move(n));
    const auto kind = doc["kind"].is_string() ? doc["kind"].get<std::string>() : "";
    const auto& data = doc["data"];
    if (kind == "pure") {
        Vector a(static_cast<Eigen::Index>(dims.total()));
        detail::read_nested(data, dims, 1, 0, dims.total(), a);
        return PureState(dims, std::move(a));
    }
    if (kind == "mixed") {
        const auto order = dims.total();
        if (!data.is_array() || data.size() != order) throw parse_error("state file: mixed data must have one row per basis state");
        Matrix m(static_cast<Eigen::Index>(order), static_cast<Eigen::Index>(order));
        for (std::size_t r = 0; r < order; ++r) {
            if (!data[r].is_array() || data[r].size() != order) throw parse_error("state file: ragged density matrix row");
            for (std::size_t c = 0; c < order; ++c)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::read_pair(data[r][c]);
        }
        DensityMatrix rho(dims, std::move(m));
        if (!is_hermitian(rho)) throw parse_error("state file: density matrix is not Hermitian");
        return rho;
    }
    throw parse_error("state file: kind must be \"pure\" or \"mixed\"");
}

inline State load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open state file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_state(ss.str());
}

}  // namespace luinv
