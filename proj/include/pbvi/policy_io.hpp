#pragma once

// Policy files:
//
//   # pomdp-policy v1
//   discount: <discount>
//   states: <n>
//   <action_index> <v0> ... <v(n-1)>      one line per vector, 17 significant digits

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pbvi/cassandra.hpp"
#include "pbvi/errors.hpp"
#include "pbvi/solver.hpp"

namespace pbvi {

inline void write_policy(std::ostream& out, const Policy& policy) {
    const std::size_t n = policy.vectors.empty() ? 0 : policy.vectors[0].values.size();
    out << "# pomdp-policy v1\n";
    out << "discount: " << detail::format_real(policy.discount) << '\n';
    out << "states: " << n << '\n';
    for (const auto& v : policy.vectors) {
        out << v.action;
        for (double x : v.values) {
            out << ' ' << detail::format_real(x);
        }
        out << '\n';
    }
}

inline std::string policy_to_string(const Policy& policy) {
    std::ostringstream out;
    write_policy(out, policy);
    return out.str();
}

inline Policy read_policy(std::istream& in, double tolerance = kDefaultTolerance) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
                return true;
            }
        }
        return false;
    };
    if (!next_line() || line.rfind("# pomdp-policy v1", 0) != 0) {
        throw ParseError(line_no, 1, "missing '# pomdp-policy v1' header");
    }
    Policy policy{VectorSet(tolerance), 0.0, 0.0};
    std::size_t n = 0;
    for (const char* key : {"discount:", "states:"}) {
        if (!next_line() || line.rfind(key, 0) != 0) {
            throw ParseError(line_no, 1, std::string("expected '") + key + "'");
        }
        std::istringstream fields(line.substr(std::string(key).size()));
        if (std::string(key) == "discount:") {
            fields >> policy.discount;
        } else {
            fields >> n;
        }
        if (!fields) {
            throw ParseError(line_no, 1, std::string("bad value after '") + key + "'");
        }
    }
    while (next_line()) {
        std::istringstream fields(line);
        AlphaVector v;
        v.values.resize(n);
        fields >> v.action;
        for (auto& x : v.values) {
            fields >> x;
        }
        std::string extra;
        if (!fields || (fields >> extra)) {
            throw ParseError(line_no, 1, "expected an action index and " + std::to_string(n) + " values");
        }
        policy.vectors.push_back(std::move(v));
    }
    if (policy.vectors.empty()) {
        throw ParseError(line_no, 1, "policy has no vectors");
    }
    return policy;
}

}  // namespace pbvi
