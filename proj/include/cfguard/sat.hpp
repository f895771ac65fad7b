#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cfguard::sat {

// Literals are non-zero ints in DIMACS style: +v / -v for variable v >= 1.
enum class Result { SAT, UNSAT, UNKNOWN };

// Small CDCL solver: two watched literals, first-UIP learning, activity-based branching,
// phase saving and Luby restarts. No clause deletion; meant for instances of a few thousand
// variables.
class Solver {
public:
    int new_var() {
        ++nvars_;
        assigns_.push_back(0);
        level_.push_back(0);
        reason_.push_back(-1);
        activity_.push_back(0.0);
        phase_.push_back(false);
        seen_.push_back(0);
        watches_.emplace_back();
        watches_.emplace_back();
        return nvars_;
    }
    int vars() const { return nvars_; }

    void add_clause(std::vector<int> lits) {
        if (!ok_) return;
        for (int l : lits) {
            if (l == 0 || std::abs(l) > nvars_) throw std::invalid_argument("sat: literal out of range");
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (std::size_t i = 0; i + 1 < lits.size(); ++i)
            if (lits[i] == -lits[i + 1]) return;  // tautology
        for (std::size_t i = 0; i < lits.size(); ++i)
            if (std::binary_search(lits.begin(), lits.end(), -lits[i])) return;
        // facts fixed at level 0 by earlier solves
        std::erase_if(lits, [&](int l) { return value(l) < 0; });
        if (std::any_of(lits.begin(), lits.end(), [&](int l) { return value(l) > 0; })) return;
        if (lits.empty()) {
            ok_ = false;
            return;
        }
        if (lits.size() == 1) {
            units_.push_back(lits[0]);
            return;
        }
        attach(std::move(lits));
    }

    Result solve(std::uint64_t conflict_budget) {
        conflicts_ = 0;
        if (!ok_) return Result::UNSAT;
        backtrack(0);
        for (int l : units_) {
            if (value(l) < 0) return fail();
            if (value(l) == 0) enqueue(l, -1);
        }
        if (propagate() >= 0) return fail();
        std::uint64_t restart_index = 0;
        std::uint64_t until_restart = luby(restart_index) * 64;
        while (true) {
            int confl = propagate();
            if (confl >= 0) {
                ++conflicts_;
                if (decision_level() == 0) return fail();
                auto [learnt, back] = analyse(confl);
                backtrack(back);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], -1);
                } else {
                    int idx = attach(learnt);
                    enqueue(learnt[0], idx);
                }
                decay();
                if (conflicts_ >= conflict_budget) {
                    backtrack(0);
                    return Result::UNKNOWN;
                }
                if (--until_restart == 0) {
                    backtrack(0);
                    until_restart = luby(++restart_index) * 64;
                }
                continue;
            }
            int v = pick();
            if (v == 0) {
                model_.assign(static_cast<std::size_t>(nvars_) + 1, false);
                for (int i = 1; i <= nvars_; ++i) model_[static_cast<std::size_t>(i)] = assigns_[idx(i)] > 0;
                backtrack(0);
                return Result::SAT;
            }
            trail_lim_.push_back(trail_.size());
            enqueue(phase_[idx(v)] ? v : -v, -1);
        }
    }

    bool model_value(int v) const { return model_.at(static_cast<std::size_t>(v)); }
    std::uint64_t conflicts() const { return conflicts_; }

private:
    static std::size_t idx(int v) { return static_cast<std::size_t>(v - 1); }
    static std::size_t widx(int l) { return l > 0 ? 2 * idx(l) : 2 * idx(-l) + 1; }

    int value(int l) const {
        int a = assigns_[idx(std::abs(l))];
        return l > 0 ? a : -a;
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    Result fail() {
        ok_ = false;
        return Result::UNSAT;
    }

    int attach(std::vector<int> lits) {
        int id = static_cast<int>(clauses_.size());
        watches_[widx(-lits[0])].push_back(id);
        watches_[widx(-lits[1])].push_back(id);
        clauses_.push_back(std::move(lits));
        return id;
    }

    void enqueue(int l, int reason) {
        int v = std::abs(l);
        assigns_[idx(v)] = l > 0 ? 1 : -1;
        level_[idx(v)] = decision_level();
        reason_[idx(v)] = reason;
        trail_.push_back(l);
    }

    // Returns the index of a conflicting clause, or -1.
    int propagate() {
        while (head_ < trail_.size()) {
            int p = trail_[head_++];
            auto& ws = watches_[widx(p)];  // clauses watching -p, which just became false
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                int ci = ws[i];
                auto& c = clauses_[static_cast<std::size_t>(ci)];
                if (c[0] == -p) std::swap(c[0], c[1]);
                if (value(c[0]) > 0) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k)
                    if (value(c[k]) >= 0) {
                        std::swap(c[1], c[k]);
                        watches_[widx(-c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved) continue;
                ws[keep++] = ci;
                if (value(c[0]) < 0) {
                    for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                    ws.resize(keep);
                    head_ = trail_.size();
                    return ci;
                }
                enqueue(c[0], ci);
            }
            ws.resize(keep);
        }
        return -1;
    }

    std::pair<std::vector<int>, int> analyse(int confl) {
        std::vector<int> learnt{0};
        int pending = 0;
        int p = 0;
        std::size_t pos = trail_.size();
        std::vector<int> touched;
        do {
            const auto& c = clauses_[static_cast<std::size_t>(confl)];
            for (std::size_t k = (p == 0 ? 0 : 1); k < c.size(); ++k) {
                int q = c[k];
                int v = std::abs(q);
                if (seen_[idx(v)] || level_[idx(v)] == 0) continue;
                seen_[idx(v)] = 1;
                touched.push_back(v);
                bump(v);
                if (level_[idx(v)] == decision_level()) ++pending;
                else learnt.push_back(q);
            }
            do {
                p = trail_[--pos];
            } while (!seen_[idx(std::abs(p))]);
            confl = reason_[idx(std::abs(p))];
            --pending;
        } while (pending > 0);
        learnt[0] = -p;
        for (int v : touched) seen_[idx(v)] = 0;
        int back = 0;
        if (learnt.size() > 1) {
            std::size_t best = 1;
            for (std::size_t k = 2; k < learnt.size(); ++k)
                if (level_[idx(std::abs(learnt[k]))] > level_[idx(std::abs(learnt[best]))]) best = k;
            std::swap(learnt[1], learnt[best]);
            back = level_[idx(std::abs(learnt[1]))];
        }
        return {learnt, back};
    }

    void backtrack(int lvl) {
        if (decision_level() <= lvl) return;
        for (std::size_t i = trail_.size(); i-- > trail_lim_[static_cast<std::size_t>(lvl)];) {
            int v = std::abs(trail_[i]);
            phase_[idx(v)] = trail_[i] > 0;
            assigns_[idx(v)] = 0;
            reason_[idx(v)] = -1;
        }
        trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
        trail_lim_.resize(static_cast<std::size_t>(lvl));
        head_ = trail_.size();
    }

    int pick() const {
        int best = 0;
        for (int v = 1; v <= nvars_; ++v)
            if (assigns_[idx(v)] == 0 && (best == 0 || activity_[idx(v)] > activity_[idx(best)])) best = v;
        return best;
    }

    void bump(int v) {
        activity_[idx(v)] += inc_;
        if (activity_[idx(v)] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            inc_ *= 1e-100;
        }
    }
    void decay() { inc_ /= 0.95; }

    // 1 1 2 1 1 2 4 ...
    static std::uint64_t luby(std::uint64_t x) {
        std::uint64_t size = 1;
        int seq = 0;
        while (size < x + 1) {
            ++seq;
            size = 2 * size + 1;
        }
        while (size - 1 != x) {
            size = (size - 1) >> 1;
            --seq;
            x %= size;
        }
        return std::uint64_t{1} << seq;
    }

    int nvars_ = 0;
    bool ok_ = true;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<int> units_;
    std::vector<int> assigns_, level_, reason_;
    std::vector<double> activity_;
    std::vector<bool> phase_;
    std::vector<char> seen_;
    std::vector<int> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t head_ = 0;
    double inc_ = 1.0;
    std::uint64_t conflicts_ = 0;
    std::vector<bool> model_;
};

}  // namespace cfguard::sat
