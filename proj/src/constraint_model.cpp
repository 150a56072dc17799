#include "cipanova/constraint_model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace cipanova {

namespace {

enum class TokenKind { Group, Less, Greater, Equal, Comma, LBrace, RBrace, End };

struct Token {
    TokenKind kind;
    int group = -1;  // 0-based, only for Group
    std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        switch (c) {
            case '<': out.push_back({TokenKind::Less, -1, start}); ++i; continue;
            case '>': out.push_back({TokenKind::Greater, -1, start}); ++i; continue;
            case '=': out.push_back({TokenKind::Equal, -1, start}); ++i; continue;
            case ',': out.push_back({TokenKind::Comma, -1, start}); ++i; continue;
            case '{': out.push_back({TokenKind::LBrace, -1, start}); ++i; continue;
            case '}': out.push_back({TokenKind::RBrace, -1, start}); ++i; continue;
            default: break;
        }
        std::size_t prefix = 0;
        if (text.substr(i, 2) == "mu") {
            prefix = 2;
        } else if (text.substr(i, 2) == "\xCE\xBC") {  // UTF-8 'μ'
            prefix = 2;
        }
        if (prefix == 0) {
            throw ModelSpecError("malformed token at position " + std::to_string(start) + ": '" +
                                 std::string(text.substr(start, 8)) + "'");
        }
        i += prefix;
        const std::size_t digits = i;
        long index = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            index = index * 10 + (text[i] - '0');
            if (index > 1'000'000) {
                throw ModelSpecError("group index too large at position " + std::to_string(start));
            }
            ++i;
        }
        if (i == digits) {
            throw ModelSpecError("expected a group index after 'mu' at position " +
                                 std::to_string(start));
        }
        out.push_back({TokenKind::Group, static_cast<int>(index) - 1, start});
    }
    out.push_back({TokenKind::End, -1, text.size()});
    return out;
}

enum class TermKind { Single, EqualityGroup, Set };

struct Term {
    TermKind kind;
    std::vector<int> groups;
};

struct Chain {
    std::vector<Term> terms;
    std::vector<TokenKind> ops;  // ops[i] joins terms[i] and terms[i + 1]
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<Chain> parse() {
        std::vector<Chain> chains;
        chains.push_back(parse_chain());
        while (peek().kind == TokenKind::Comma) {
            ++pos_;
            chains.push_back(parse_chain());
        }
        if (peek().kind != TokenKind::End) {
            fail("unexpected token");
        }
        return chains;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ModelSpecError(what + " at position " + std::to_string(peek().pos));
    }

    int expect_group() {
        if (peek().kind != TokenKind::Group) {
            fail("expected a group 'muK'");
        }
        return tokens_[pos_++].group;
    }

    Term parse_term() {
        if (peek().kind == TokenKind::Group) {
            return {TermKind::Single, {expect_group()}};
        }
        if (peek().kind != TokenKind::LBrace) {
            fail("expected 'muK' or '{'");
        }
        ++pos_;
        Term term{TermKind::Single, {expect_group()}};
        std::optional<TokenKind> separator;
        while (peek().kind == TokenKind::Comma || peek().kind == TokenKind::Equal) {
            if (separator && *separator != peek().kind) {
                fail("a brace group mixes ',' and '='");
            }
            separator = peek().kind;
            ++pos_;
            term.groups.push_back(expect_group());
        }
        if (peek().kind != TokenKind::RBrace) {
            fail("expected '}'");
        }
        ++pos_;
        if (separator == TokenKind::Comma) {
            term.kind = TermKind::Set;
        } else if (separator == TokenKind::Equal) {
            term.kind = TermKind::EqualityGroup;
        }
        return term;
    }

    Chain parse_chain() {
        Chain chain;
        chain.terms.push_back(parse_term());
        while (peek().kind == TokenKind::Less || peek().kind == TokenKind::Greater ||
               peek().kind == TokenKind::Equal) {
            chain.ops.push_back(peek().kind);
            ++pos_;
            chain.terms.push_back(parse_term());
        }
        return chain;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
    std::vector<int> parent_;
};

std::string group_name(int g) { return "mu" + std::to_string(g + 1); }

std::string class_text(const std::vector<int>& members) {
    if (members.size() == 1) {
        return group_name(members.front());
    }
    std::string s = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0) {
            s += " = ";
        }
        s += group_name(members[i]);
    }
    return s + "}";
}

}  // namespace

ConstraintModel parse_model_spec(std::string_view text, int num_groups, std::string name) {
    if (num_groups < 1) {
        throw ModelSpecError("group count must be positive");
    }
    // A blank string constrains nothing: every group is a free singleton.
    const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
    const auto chains = blank ? std::vector<Chain>{} : Parser(tokenize(text)).parse();

    for (const auto& chain : chains) {
        for (const auto& term : chain.terms) {
            for (int g : term.groups) {
                if (g < 0 || g >= num_groups) {
                    throw ModelSpecError("group index " + std::to_string(g + 1) +
                                         " out of range 1.." + std::to_string(num_groups));
                }
            }
        }
    }

    // Equality constructs: brace equality groups and runs of terms joined by '='.
    std::vector<std::set<int>> constructs;
    for (const auto& chain : chains) {
        std::size_t i = 0;
        while (i < chain.terms.size()) {
            std::size_t j = i;
            while (j < chain.ops.size() && chain.ops[j] == TokenKind::Equal) {
                ++j;
            }
            std::set<int> members;
            for (std::size_t t = i; t <= j; ++t) {
                if (j > i && chain.terms[t].kind == TermKind::Set) {
                    throw ModelSpecError("a brace set cannot be equated; write {muA = muB}");
                }
                members.insert(chain.terms[t].groups.begin(), chain.terms[t].groups.end());
            }
            if (j > i || chain.terms[i].kind == TermKind::EqualityGroup) {
                constructs.push_back(std::move(members));
            }
            i = j + 1;
        }
    }
    std::map<int, const std::set<int>*> construct_of;
    for (const auto& c : constructs) {
        for (int g : c) {
            auto [it, inserted] = construct_of.emplace(g, &c);
            if (!inserted && *it->second != c) {
                throw ModelSpecError("group " + group_name(g) +
                                     " appears in two different equality classes");
            }
        }
    }

    DisjointSets sets(num_groups);
    for (const auto& c : constructs) {
        for (int g : c) {
            sets.unite(g, *c.begin());
        }
    }

    ConstraintModel model;
    model.name = std::move(name);
    model.num_groups = num_groups;
    std::map<int, int> class_of_root;
    for (int g = 0; g < num_groups; ++g) {
        const int root = sets.find(g);
        auto [it, inserted] = class_of_root.emplace(root, model.num_classes());
        if (inserted) {
            model.classes.emplace_back();
        }
        model.classes[it->second].push_back(g);
    }
    std::vector<int> class_of_group(num_groups);
    for (int c = 0; c < model.num_classes(); ++c) {
        for (int g : model.classes[c]) {
            class_of_group[g] = c;
        }
    }

    const int k = model.num_classes();
    std::vector<std::vector<char>> less(k, std::vector<char>(k, 0));
    for (const auto& chain : chains) {
        for (std::size_t i = 0; i < chain.ops.size(); ++i) {
            if (chain.ops[i] == TokenKind::Equal) {
                continue;
            }
            const auto* lo = &chain.terms[i];
            const auto* hi = &chain.terms[i + 1];
            if (chain.ops[i] == TokenKind::Greater) {
                std::swap(lo, hi);
            }
            for (int a : lo->groups) {
                for (int b : hi->groups) {
                    const int ca = class_of_group[a];
                    const int cb = class_of_group[b];
                    if (ca == cb) {
                        throw ModelSpecError("cycle in order relation: " + group_name(a) + " < " +
                                             group_name(b) + " contradicts their equality");
                    }
                    less[ca][cb] = 1;
                }
            }
        }
    }
    for (int m = 0; m < k; ++m) {
        for (int i = 0; i < k; ++i) {
            if (!less[i][m]) {
                continue;
            }
            for (int j = 0; j < k; ++j) {
                if (less[m][j]) {
                    less[i][j] = 1;
                }
            }
        }
    }
    for (int i = 0; i < k; ++i) {
        if (less[i][i]) {
            throw ModelSpecError("cycle in order relation involving " +
                                 class_text(model.classes[i]));
        }
        for (int j = 0; j < k; ++j) {
            if (less[i][j]) {
                model.order.emplace_back(i, j);
            }
        }
    }
    return model;
}

std::string to_spec_string(const ConstraintModel& model) {
    const int k = model.num_classes();
    std::set<std::pair<int, int>> closure(model.order.begin(), model.order.end());
    // Covering relations (transitive reduction) of the closed order.
    std::vector<std::pair<int, int>> cover;
    for (const auto& [a, b] : model.order) {
        bool covered = true;
        for (int c = 0; c < k && covered; ++c) {
            if (closure.contains({a, c}) && closure.contains({c, b})) {
                covered = false;
            }
        }
        if (covered) {
            cover.emplace_back(a, b);
        }
    }

    std::vector<char> used(cover.size(), 0);
    std::vector<char> mentioned(k, 0);
    std::vector<std::string> parts;
    auto has_unused_in = [&](int c) {
        for (std::size_t f = 0; f < cover.size(); ++f) {
            if (!used[f] && cover[f].second == c) {
                return true;
            }
        }
        return false;
    };
    for (std::size_t remaining = cover.size(); remaining > 0;) {
        std::size_t e = cover.size();
        for (std::size_t f = 0; f < cover.size(); ++f) {
            if (!used[f] && (e == cover.size() || !has_unused_in(cover[f].first))) {
                e = f;
                if (!has_unused_in(cover[f].first)) {
                    break;
                }
            }
        }
        used[e] = 1;
        --remaining;
        std::vector<int> chain{cover[e].first, cover[e].second};
        for (bool extended = true; extended;) {
            extended = false;
            for (std::size_t f = 0; f < cover.size(); ++f) {
                if (!used[f] && cover[f].first == chain.back()) {
                    used[f] = 1;
                    chain.push_back(cover[f].second);
                    --remaining;
                    extended = true;
                    break;
                }
            }
        }
        std::string s;
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (i > 0) {
                s += " < ";
            }
            s += class_text(model.classes[chain[i]]);
            mentioned[chain[i]] = 1;
        }
        parts.push_back(std::move(s));
    }
    for (int c = 0; c < k; ++c) {
        if (!mentioned[c]) {
            parts.push_back(class_text(model.classes[c]));
        }
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += parts[i];
    }
    return out;
}

EncompassingDesign encompassing_of(const ConstraintModel& model) {
    EncompassingDesign design;
    design.num_groups = model.num_groups;
    design.q = model.num_classes();
    design.class_of_group.assign(model.num_groups, 0);
    for (int c = 0; c < model.num_classes(); ++c) {
        for (int g : model.classes[c]) {
            design.class_of_group[g] = c;
        }
        if (c > 0) {
            design.delta_labels.push_back(model.classes[c].front() + 1);
        }
    }
    return design;
}

Eigen::MatrixXd build_design(const EncompassingDesign& design, std::span<const int> group_sizes) {
    if (static_cast<int>(group_sizes.size()) != design.num_groups) {
        throw std::invalid_argument("group_sizes has " + std::to_string(group_sizes.size()) +
                                    " entries, design has " + std::to_string(design.num_groups) +
                                    " groups");
    }
    Eigen::Index n = 0;
    for (std::size_t g = 0; g < group_sizes.size(); ++g) {
        if (group_sizes[g] < 1) {
            throw std::invalid_argument("group " + std::to_string(g + 1) + " is empty");
        }
        n += group_sizes[g];
    }
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, design.q);
    Eigen::Index row = 0;
    for (int g = 0; g < design.num_groups; ++g) {
        const int c = design.class_of_group[g];
        for (int i = 0; i < group_sizes[g]; ++i, ++row) {
            z(row, 0) = 1.0;
            if (c != 0) {
                z(row, c) = 1.0;
            }
        }
    }
    return z;
}

bool region_contains(const ConstraintModel& model, std::span<const double> delta) {
    if (static_cast<int>(delta.size()) != model.num_classes() - 1) {
        throw std::invalid_argument("delta has dimension " + std::to_string(delta.size()) +
                                    ", model expects " +
                                    std::to_string(model.num_classes() - 1));
    }
    for (const auto& [a, b] : model.order) {
        const double lo = a == 0 ? 0.0 : delta[a - 1];
        const double hi = b == 0 ? 0.0 : delta[b - 1];
        if (!(lo < hi)) {
            return false;
        }
    }
    return true;
}

}  // namespace cipanova
