#pragma once

#include <cstddef>
#include <vector>

namespace mtb {

template <class Key>
struct EditAssignment {
    Key total{};
    std::vector<int> match;  // row -> column, -1 if the row is deleted
    int matched = 0;
};

/// Minimum-cost assignment of n1 rows to n2 columns where every row and
/// column may also stay unassigned at its delete/insert cost. Key must form
/// an ordered abelian group (+, -, <). Instances with both sides at most
/// `exhaustive_limit` are enumerated; larger ones run the Hungarian method
/// on the (n1+n2) square matrix padded with dummy rows and columns.
template <class Key, class PairFn, class DelFn, class InsFn>
EditAssignment<Key> solve_edit_assignment(int n1, int n2, PairFn&& pair, DelFn&& del, InsFn&& ins,
                                          int exhaustive_limit = 4)
{
    EditAssignment<Key> out;
    out.match.assign(static_cast<std::size_t>(n1), -1);
    if (n1 == 0 || n2 == 0) {
        for (int i = 0; i < n1; ++i)
            out.total = out.total + del(i);
        for (int j = 0; j < n2; ++j)
            out.total = out.total + ins(j);
        return out;
    }

    std::vector<Key> cost(static_cast<std::size_t>(n1 * n2));
    std::vector<Key> dcost(static_cast<std::size_t>(n1));
    std::vector<Key> icost(static_cast<std::size_t>(n2));
    for (int i = 0; i < n1; ++i) {
        dcost[static_cast<std::size_t>(i)] = del(i);
        for (int j = 0; j < n2; ++j)
            cost[static_cast<std::size_t>(i * n2 + j)] = pair(i, j);
    }
    for (int j = 0; j < n2; ++j)
        icost[static_cast<std::size_t>(j)] = ins(j);

    auto total_of = [&](const std::vector<int>& match) {
        Key t{};
        std::vector<char> used(static_cast<std::size_t>(n2), 0);
        for (int i = 0; i < n1; ++i) {
            const int j = match[static_cast<std::size_t>(i)];
            if (j < 0) {
                t = t + dcost[static_cast<std::size_t>(i)];
            } else {
                t = t + cost[static_cast<std::size_t>(i * n2 + j)];
                used[static_cast<std::size_t>(j)] = 1;
            }
        }
        for (int j = 0; j < n2; ++j) {
            if (!used[static_cast<std::size_t>(j)])
                t = t + icost[static_cast<std::size_t>(j)];
        }
        return t;
    };

    if (n1 <= exhaustive_limit && n2 <= exhaustive_limit) {
        std::vector<int> cur(static_cast<std::size_t>(n1), -1);
        std::vector<char> used(static_cast<std::size_t>(n2), 0);
        bool have = false;
        auto rec = [&](auto&& self, int i) -> void {
            if (i == n1) {
                const Key t = total_of(cur);
                if (!have || t < out.total) {
                    out.total = t;
                    out.match = cur;
                    have = true;
                }
                return;
            }
            cur[static_cast<std::size_t>(i)] = -1;
            self(self, i + 1);
            for (int j = 0; j < n2; ++j) {
                if (used[static_cast<std::size_t>(j)])
                    continue;
                used[static_cast<std::size_t>(j)] = 1;
                cur[static_cast<std::size_t>(i)] = j;
                self(self, i + 1);
                used[static_cast<std::size_t>(j)] = 0;
            }
            cur[static_cast<std::size_t>(i)] = -1;
        };
        rec(rec, 0);
    } else {
        // Rows: n1 real + n2 dummy. Columns: n2 real + n1 dummy.
        const int n = n1 + n2;
        auto a = [&](int i, int j) -> Key {
            const bool real_row = i < n1, real_col = j < n2;
            if (real_row && real_col)
                return cost[static_cast<std::size_t>(i * n2 + j)];
            if (real_row)
                return dcost[static_cast<std::size_t>(i)];
            if (real_col)
                return icost[static_cast<std::size_t>(j)];
            return Key{};
        };
        std::vector<Key> u(static_cast<std::size_t>(n + 1)), v(static_cast<std::size_t>(n + 1));
        std::vector<int> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
        std::vector<Key> minv(static_cast<std::size_t>(n + 1));
        std::vector<char> has(static_cast<std::size_t>(n + 1)), used(static_cast<std::size_t>(n + 1));
        for (int i = 1; i <= n; ++i) {
            p[0] = i;
            int j0 = 0;
            std::fill(has.begin(), has.end(), 0);
            std::fill(used.begin(), used.end(), 0);
            do {
                used[static_cast<std::size_t>(j0)] = 1;
                const int i0 = p[static_cast<std::size_t>(j0)];
                Key delta{};
                int j1 = -1;
                for (int j = 1; j <= n; ++j) {
                    if (used[static_cast<std::size_t>(j)])
                        continue;
                    const Key cur = a(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                    if (!has[static_cast<std::size_t>(j)] || cur < minv[static_cast<std::size_t>(j)]) {
                        minv[static_cast<std::size_t>(j)] = cur;
                        has[static_cast<std::size_t>(j)] = 1;
                        way[static_cast<std::size_t>(j)] = j0;
                    }
                    if (j1 < 0 || minv[static_cast<std::size_t>(j)] < delta) {
                        delta = minv[static_cast<std::size_t>(j)];
                        j1 = j;
                    }
                }
                for (int j = 0; j <= n; ++j) {
                    if (used[static_cast<std::size_t>(j)]) {
                        u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] =
                            u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] + delta;
                        v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)] - delta;
                    } else {
                        minv[static_cast<std::size_t>(j)] = minv[static_cast<std::size_t>(j)] - delta;
                    }
                }
                j0 = j1;
            } while (p[static_cast<std::size_t>(j0)] != 0);
            do {
                const int j1 = way[static_cast<std::size_t>(j0)];
                p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
                j0 = j1;
            } while (j0 != 0);
        }
        for (int j = 1; j <= n; ++j) {
            const int i = p[static_cast<std::size_t>(j)] - 1;
            if (i < n1 && j - 1 < n2)
                out.match[static_cast<std::size_t>(i)] = j - 1;
        }
        out.total = total_of(out.match);
    }
    for (int j : out.match)
        out.matched += j >= 0 ? 1 : 0;
    return out;
}

} // namespace mtb
