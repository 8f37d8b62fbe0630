#pragma once

// Reader and writer for the Cassandra ".POMDP" text format.
//
// Supported directives:
//   discount: <x>            values: reward | cost
//   states: <n> | <names>    actions: ...    observations: ...
//   start: <probs> | uniform | <state>     start include: / start exclude: <states>
//   T: a : s : s' p     T: a : s <row>     T: a <matrix> | identity | uniform
//   O: a : s' : z p     O: a : s' <row>    O: a <matrix> | identity | uniform
//   R: a : s : s' : z v R: a : s : s' <row over z>    R: a : s <matrix s' x z>
// Any identifier field may be '*'. '#' starts a comment.
//
// Rewards that depend on (s', z) are collapsed to r(s, a) by taking the
// expectation under the model's own transition and observation probabilities.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pbvi/errors.hpp"
#include "pbvi/model.hpp"

namespace pbvi {

namespace detail {

struct Token {
    std::string text;
    std::size_t line;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            column = 1;
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') {
                ++i;
            }
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++column;
            ++i;
        } else if (c == ':') {
            tokens.push_back({":", line, column});
            ++column;
            ++i;
        } else {
            const std::size_t start = i;
            const std::size_t start_col = column;
            while (i < text.size() && text[i] != ':' && text[i] != '#' &&
                   !std::isspace(static_cast<unsigned char>(text[i]))) {
                ++i;
                ++column;
            }
            tokens.push_back({std::string(text.substr(start, i - start)), line, start_col});
        }
    }
    return tokens;
}

inline std::optional<double> to_number(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        return std::nullopt;
    }
    return v;
}

inline std::optional<std::size_t> to_count(const std::string& s) {
    if (s.empty() || s.size() > 9) {
        return std::nullopt;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return std::nullopt;
        }
    }
    return static_cast<std::size_t>(std::stoul(s));
}

class CassandraParser {
public:
    explicit CassandraParser(std::string_view text) : tokens_(tokenize(text)) {}

    ModelData parse() {
        while (pos_ < tokens_.size()) {
            directive();
        }
        require_preamble(tokens_.empty() ? Token{"", 1, 1} : tokens_.back());
        return finish();
    }

private:
    static constexpr std::string_view kKeywords[] = {"discount", "values",       "states", "actions",
                                                     "observations", "start",    "T",      "O",
                                                     "R"};

    bool at_end() const { return pos_ >= tokens_.size(); }

    const Token& peek() const { return tokens_[pos_]; }

    const Token& last_token() const { return tokens_.empty() ? kEmpty : tokens_.back(); }

    [[noreturn]] void fail(const Token& at, const std::string& msg) const {
        throw ParseError(at.line, at.column, msg);
    }

    const Token& next(const char* expected) {
        if (at_end()) {
            fail(last_token(), std::string("unexpected end of input, expected ") + expected);
        }
        return tokens_[pos_++];
    }

    void expect_colon() {
        const Token& t = next("':'");
        if (t.text != ":") {
            fail(t, "expected ':' but found '" + t.text + "'");
        }
    }

    bool next_is_colon() const { return !at_end() && peek().text == ":"; }

    // A keyword followed by ':' (or "start include:" / "start exclude:") opens a new directive.
    bool at_directive() const {
        if (at_end()) {
            return true;
        }
        const std::string& t = peek().text;
        bool keyword = false;
        for (auto k : kKeywords) {
            keyword = keyword || t == k;
        }
        if (!keyword || pos_ + 1 >= tokens_.size()) {
            return false;
        }
        const std::string& after = tokens_[pos_ + 1].text;
        return after == ":" || (t == "start" && (after == "include" || after == "exclude"));
    }

    double number() {
        const Token& t = next("a number");
        auto v = to_number(t.text);
        if (!v) {
            fail(t, "expected a number but found '" + t.text + "'");
        }
        return *v;
    }

    std::vector<std::string> name_list(const Token& at) {
        std::vector<std::string> names;
        while (!at_directive()) {
            names.push_back(next("a name").text);
        }
        if (names.empty()) {
            fail(at, "empty declaration");
        }
        if (names.size() == 1) {
            if (auto n = to_count(names.front())) {
                if (*n == 0) {
                    fail(at, "declared count must be positive");
                }
                names.clear();
                for (std::size_t i = 0; i < *n; ++i) {
                    names.push_back(std::to_string(i));
                }
            }
        }
        return names;
    }

    // Resolves an identifier to a list of indices ('*' expands to all).
    std::vector<std::size_t> resolve(const std::vector<std::string>& names, const char* kind) {
        const Token& t = next(kind);
        if (t.text == ":") {
            fail(t, std::string("expected ") + kind + " but found ':'");
        }
        if (t.text == "*") {
            std::vector<std::size_t> all(names.size());
            for (std::size_t i = 0; i < all.size(); ++i) {
                all[i] = i;
            }
            return all;
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == t.text) {
                return {i};
            }
        }
        if (auto n = to_count(t.text); n && *n < names.size()) {
            return {*n};
        }
        fail(t, std::string("unknown ") + kind + " '" + t.text + "'");
    }

    void require_preamble(const Token& at) const {
        if (states_.empty() || actions_.empty() || observations_.empty()) {
            fail(at, "states, actions and observations must be declared before use");
        }
    }

    void allocate() {
        if (!transition_.empty()) {
            return;
        }
        const std::size_t S = states_.size(), A = actions_.size(), Z = observations_.size();
        transition_.assign(A * S * S, 0.0);
        observation_.assign(A * S * Z, 0.0);
        reward4_.assign(A * S * S * Z, 0.0);
    }

    double& t_at(std::size_t a, std::size_t s, std::size_t s2) {
        return transition_[(a * states_.size() + s) * states_.size() + s2];
    }
    double& o_at(std::size_t a, std::size_t s2, std::size_t z) {
        return observation_[(a * states_.size() + s2) * observations_.size() + z];
    }
    double& r_at(std::size_t a, std::size_t s, std::size_t s2, std::size_t z) {
        return reward4_[((a * states_.size() + s) * states_.size() + s2) * observations_.size() + z];
    }

    void directive() {
        const Token& head = next("a directive");
        const std::string& key = head.text;
        if (key == "start" && !at_end() && (peek().text == "include" || peek().text == "exclude")) {
            start_subset(head, next("include/exclude").text == "include");
            return;
        }
        bool keyword = false;
        for (auto k : kKeywords) {
            keyword = keyword || key == k;
        }
        if (!keyword) {
            fail(head, "unknown directive '" + key + "'");
        }
        expect_colon();
        if (key == "discount") {
            discount_ = number();
        } else if (key == "values") {
            const Token& t = next("reward or cost");
            if (t.text != "reward" && t.text != "cost") {
                fail(t, "values must be 'reward' or 'cost'");
            }
            cost_ = t.text == "cost";
        } else if (key == "states") {
            states_ = name_list(head);
        } else if (key == "actions") {
            actions_ = name_list(head);
        } else if (key == "observations") {
            observations_ = name_list(head);
        } else if (key == "start") {
            start(head);
        } else {
            require_preamble(head);
            allocate();
            if (key == "T") {
                transition_entry();
            } else if (key == "O") {
                observation_entry();
            } else {
                reward_entry();
            }
        }
    }

    void start(const Token& head) {
        if (states_.empty()) {
            fail(head, "start must follow the states declaration");
        }
        const std::size_t S = states_.size();
        std::vector<double> b(S, 0.0);
        if (!at_end() && peek().text == "uniform") {
            ++pos_;
            b.assign(S, 1.0 / static_cast<double>(S));
        } else if (!at_end() && to_number(peek().text) && !(S == 1 && peek().text == states_[0])) {
            for (auto& p : b) {
                p = number();
            }
        } else {
            b[resolve(states_, "state").front()] = 1.0;
        }
        start_ = std::move(b);
    }

    void start_subset(const Token& head, bool include) {
        expect_colon();
        if (states_.empty()) {
            fail(head, "start must follow the states declaration");
        }
        std::vector<bool> listed(states_.size(), false);
        while (!at_directive()) {
            for (auto s : resolve(states_, "state")) {
                listed[s] = true;
            }
        }
        std::vector<double> b(states_.size(), 0.0);
        double count = 0.0;
        for (std::size_t s = 0; s < b.size(); ++s) {
            if (listed[s] == include) {
                b[s] = 1.0;
                count += 1.0;
            }
        }
        if (count == 0.0) {
            fail(head, "start subset is empty");
        }
        for (auto& p : b) {
            p /= count;
        }
        start_ = std::move(b);
    }

    // Reads a dense matrix, or one of the keywords 'identity' / 'uniform'.
    std::vector<double> matrix(std::size_t rows, std::size_t cols) {
        std::vector<double> m(rows * cols, 0.0);
        if (!at_end() && peek().text == "uniform") {
            ++pos_;
            m.assign(rows * cols, 1.0 / static_cast<double>(cols));
        } else if (!at_end() && peek().text == "identity") {
            const Token& t = next("identity");
            if (rows != cols) {
                fail(t, "identity requires a square matrix");
            }
            for (std::size_t i = 0; i < rows; ++i) {
                m[i * cols + i] = 1.0;
            }
        } else {
            for (auto& v : m) {
                v = number();
            }
        }
        return m;
    }

    void transition_entry() {
        const std::size_t S = states_.size();
        auto as = resolve(actions_, "action");
        if (!next_is_colon()) {
            auto m = matrix(S, S);
            for (auto a : as)
                for (std::size_t s = 0; s < S; ++s)
                    for (std::size_t s2 = 0; s2 < S; ++s2) t_at(a, s, s2) = m[s * S + s2];
            return;
        }
        expect_colon();
        auto ss = resolve(states_, "state");
        if (!next_is_colon()) {
            auto row = matrix(1, S);
            for (auto a : as)
                for (auto s : ss)
                    for (std::size_t s2 = 0; s2 < S; ++s2) t_at(a, s, s2) = row[s2];
            return;
        }
        expect_colon();
        auto ss2 = resolve(states_, "state");
        const double p = number();
        for (auto a : as)
            for (auto s : ss)
                for (auto s2 : ss2) t_at(a, s, s2) = p;
    }

    void observation_entry() {
        const std::size_t S = states_.size(), Z = observations_.size();
        auto as = resolve(actions_, "action");
        if (!next_is_colon()) {
            auto m = matrix(S, Z);
            for (auto a : as)
                for (std::size_t s2 = 0; s2 < S; ++s2)
                    for (std::size_t z = 0; z < Z; ++z) o_at(a, s2, z) = m[s2 * Z + z];
            return;
        }
        expect_colon();
        auto ss2 = resolve(states_, "state");
        if (!next_is_colon()) {
            auto row = matrix(1, Z);
            for (auto a : as)
                for (auto s2 : ss2)
                    for (std::size_t z = 0; z < Z; ++z) o_at(a, s2, z) = row[z];
            return;
        }
        expect_colon();
        auto zs = resolve(observations_, "observation");
        const double p = number();
        for (auto a : as)
            for (auto s2 : ss2)
                for (auto z : zs) o_at(a, s2, z) = p;
    }

    void reward_entry() {
        const std::size_t S = states_.size(), Z = observations_.size();
        auto as = resolve(actions_, "action");
        expect_colon();
        auto ss = resolve(states_, "state");
        if (!next_is_colon()) {
            std::vector<double> m(S * Z);
            for (auto& v : m) v = number();
            for (auto a : as)
                for (auto s : ss)
                    for (std::size_t s2 = 0; s2 < S; ++s2)
                        for (std::size_t z = 0; z < Z; ++z) r_at(a, s, s2, z) = m[s2 * Z + z];
            return;
        }
        expect_colon();
        auto ss2 = resolve(states_, "state");
        if (!next_is_colon()) {
            std::vector<double> row(Z);
            for (auto& v : row) v = number();
            for (auto a : as)
                for (auto s : ss)
                    for (auto s2 : ss2)
                        for (std::size_t z = 0; z < Z; ++z) r_at(a, s, s2, z) = row[z];
            return;
        }
        expect_colon();
        auto zs = resolve(observations_, "observation");
        const double v = number();
        for (auto a : as)
            for (auto s : ss)
                for (auto s2 : ss2)
                    for (auto z : zs) r_at(a, s, s2, z) = v;
    }

    ModelData finish() {
        allocate();
        const std::size_t S = states_.size(), A = actions_.size(), Z = observations_.size();
        ModelData data;
        data.reward.assign(S * A, 0.0);
        for (std::size_t a = 0; a < A; ++a) {
            for (std::size_t s = 0; s < S; ++s) {
                double r = 0.0;
                for (std::size_t s2 = 0; s2 < S; ++s2) {
                    for (std::size_t z = 0; z < Z; ++z) {
                        const double v = r_at(a, s, s2, z);
                        if (v != 0.0) {
                            r += t_at(a, s, s2) * o_at(a, s2, z) * v;
                        }
                    }
                }
                data.reward[s * A + a] = cost_ ? -r : r;
            }
        }
        data.states = states_;
        data.actions = actions_;
        data.observations = observations_;
        data.transition = transition_;
        data.observation = observation_;
        data.discount = discount_;
        data.start = start_;
        return data;
    }

    static inline const Token kEmpty{"", 1, 1};

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    double discount_ = 0.95;
    bool cost_ = false;
    std::vector<std::string> states_, actions_, observations_;
    std::optional<std::vector<double>> start_;
    std::vector<double> transition_, observation_, reward4_;
};

inline bool is_count_naming(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] != std::to_string(i)) {
            return false;
        }
    }
    return true;
}

// Shortest text that reads back to the same double.
inline std::string format_real(double v) {
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    return std::string(buf, end);
}

}  // namespace detail

/// Parses and validates a model. Throws ParseError on syntax problems and
/// ModelError on semantic ones (row sums, discount range).
inline PomdpModel parse_pomdp(std::string_view text, double tolerance = kDefaultTolerance) {
    return PomdpModel(detail::CassandraParser(text).parse(), tolerance);
}

inline PomdpModel parse_pomdp(std::istream& in, double tolerance = kDefaultTolerance) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_pomdp(std::string_view(text), tolerance);
}

/// Serializes a model in the same format. Rewards are written in collapsed r(s, a) form.
inline std::string write_pomdp(const PomdpModel& model) {
    using detail::format_real;
    const std::size_t S = model.num_states(), A = model.num_actions(), Z = model.num_observations();
    std::ostringstream out;
    auto names = [&](const char* key, const std::vector<std::string>& list) {
        out << key << ":";
        if (detail::is_count_naming(list)) {
            out << ' ' << list.size();
        } else {
            for (const auto& n : list) out << ' ' << n;
        }
        out << '\n';
    };
    out << "discount: " << format_real(model.discount()) << '\n';
    out << "values: reward\n";
    names("states", model.state_names());
    names("actions", model.action_names());
    names("observations", model.observation_names());
    if (model.start()) {
        out << "start:";
        for (double p : *model.start()) out << ' ' << format_real(p);
        out << '\n';
    }
    for (ActionId a = 0; a < A; ++a) {
        out << "\nT: " << model.action_names()[a] << '\n';
        for (StateId s = 0; s < S; ++s) {
            for (StateId s2 = 0; s2 < S; ++s2) out << (s2 ? " " : "") << format_real(model.transition(a, s, s2));
            out << '\n';
        }
    }
    for (ActionId a = 0; a < A; ++a) {
        out << "\nO: " << model.action_names()[a] << '\n';
        for (StateId s2 = 0; s2 < S; ++s2) {
            for (ObsId z = 0; z < Z; ++z) out << (z ? " " : "") << format_real(model.observation(a, s2, z));
            out << '\n';
        }
    }
    out << '\n';
    for (ActionId a = 0; a < A; ++a) {
        for (StateId s = 0; s < S; ++s) {
            out << "R: " << model.action_names()[a] << " : " << model.state_names()[s] << " : * : * " << format_real(model.reward(s, a)) << '\n';
        }
    }
    return out.str();
}

}  // namespace pbvi
