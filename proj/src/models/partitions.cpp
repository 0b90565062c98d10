#include "nld/models.hpp"

#include "nld/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

namespace nld {

CardinalityTuple parse_cardinality_tuple(std::string_view text) {
    CardinalityTuple h;
    int cur = -1;
    for (char ch : text) {
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            cur = (cur < 0 ? 0 : cur * 10) + (ch - '0');
        } else if (ch == ',' || ch == ' ' || ch == '(' || ch == ')') {
            if (cur >= 0) h.push_back(cur);
            cur = -1;
        } else {
            throw ParseError("bad character in cardinality tuple '" + std::string(text) + "'");
        }
    }
    if (cur >= 0) h.push_back(cur);
    if (h.empty()) throw ParseError("empty cardinality tuple");
    std::sort(h.rbegin(), h.rend());
    return h;
}

std::string to_string(const CardinalityTuple& h) {
    std::string out = "(";
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(h[i]);
    }
    return out + ")";
}

void validate_cardinality_tuple(int n, const CardinalityTuple& h) {
    if (h.empty()) throw InvalidArgument("empty cardinality tuple");
    if (!std::is_sorted(h.rbegin(), h.rend()))
        throw InvalidArgument("cardinality tuple must be nonincreasing");
    if (h.back() < 1) throw InvalidArgument("cell sizes must be positive");
    if (std::accumulate(h.begin(), h.end(), 0) != n)
        throw InvalidArgument("cardinality tuple " + to_string(h) + " does not sum to " +
                              std::to_string(n));
}

std::vector<CardinalityTuple> cardinality_tuples(int n) {
    std::vector<CardinalityTuple> out;
    CardinalityTuple cur;
    std::function<void(int, int)> rec = [&](int left, int max_part) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(left, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

std::vector<Partition> partitions_of_type(int n, const CardinalityTuple& h) {
    validate_cardinality_tuple(n, h);
    std::vector<Partition> out;
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    // cells are filled in the order of h; equal-size cells are ordered by smallest member
    std::function<void(std::size_t)> rec = [&](std::size_t cell) {
        if (cell == h.size()) {
            Partition p;
            p.cells.resize(h.size());
            for (int k = 0; k < n; ++k) p.cells[static_cast<std::size_t>(owner[k])].push_back(k);
            out.push_back(std::move(p));
            return;
        }
        const int size = h[cell];
        int min_first = 0;
        if (cell > 0 && h[cell - 1] == size) {
            for (int k = 0; k < n; ++k)
                if (owner[k] == static_cast<int>(cell - 1)) {
                    min_first = k + 1;
                    break;
                }
        }
        std::vector<int> members;
        std::function<void(int)> pick = [&](int from) {
            if (static_cast<int>(members.size()) == size) {
                rec(cell + 1);
                return;
            }
            for (int k = from; k < n; ++k) {
                if (owner[k] != -1) continue;
                if (members.empty() && k < min_first) continue;
                owner[k] = static_cast<int>(cell);
                members.push_back(k);
                pick(k + 1);
                members.pop_back();
                owner[k] = -1;
            }
        };
        pick(0);
    };
    rec(0);
    return out;
}

}  // namespace nld
