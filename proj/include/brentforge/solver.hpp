#pragma once

// A small deterministic CDCL solver: two-watched-literal propagation,
// first-UIP clause learning with basic minimization, VSIDS decisions with
// phase saving, geometric restarts, and activity-based learnt reduction.
// Sized for the desk-scale Brent instances; SAT models are re-checked against
// the input formula before they are returned.

#include "brentforge/cnf.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace brentforge {

struct SolverConfig {
    std::uint64_t seed = 0;
    std::int64_t conflict_limit = -1;  // < 0: unlimited
    double time_limit_s = -1.0;        // < 0: unlimited
    std::int64_t restart_base = 1000;  // conflicts before the first restart
    double restart_factor = 1.5;       // geometric growth; <= 0 selects Luby
    int random_decision_one_in = 64;   // frequency of random decisions; 0 disables
    double var_decay = 0.95;
    int learnt_keep_base = 4000;       // learnt clauses kept before reduction
    int learnt_keep_step = 2000;       // growth per reduction
    // Prefer deciding on variables 1..decision_var_limit (e.g. the primary
    // variables of a Tseitin encoding, with auxiliaries left to propagation).
    // Others are still decided if propagation leaves them open, so this is a
    // heuristic, not a completeness restriction. 0 means no preference.
    int decision_var_limit = 0;
    // Every k-th restart re-randomizes the saved phases; 0 disables. Without
    // this the Brent instances replay near-identical trajectories after each
    // restart and routinely stall; with it they solve in well under a second.
    int rephase_every = 1;
};

enum class SolveStatus { Sat, Unsat, Timeout };

inline const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Sat: return "SATISFIABLE";
        case SolveStatus::Unsat: return "UNSATISFIABLE";
        case SolveStatus::Timeout: return "TIMEOUT";
    }
    return "?";
}

struct SolverStats {
    std::int64_t decisions = 0;
    std::int64_t conflicts = 0;
    std::int64_t propagations = 0;
    std::int64_t restarts = 0;
    std::int64_t learned = 0;
    double wall_s = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Timeout;
    Assignment model;  // complete iff status == Sat
    SolverStats stats;
};

namespace cdcl {

// Literals are 2v for var v, 2v+1 for its negation (v 0-based).
class Solver {
public:
    Solver(const CnfFormula& f, const SolverConfig& cfg) : cfg_(cfg), nvars_(f.num_vars) {
        assigns_.assign(nvars_, -1);
        level_.assign(nvars_, 0);
        reason_.assign(nvars_, -1);
        activity_.assign(nvars_, 0.0);
        polarity_.assign(nvars_, 0);
        seen_.assign(nvars_, 0);
        heap_pos_.assign(nvars_, -1);
        watches_.assign(2 * static_cast<size_t>(nvars_), {});
        rng_state_ = cfg.seed * 6364136223846793005ULL + 1442695040888963407ULL;
        decision_limit_ = cfg.decision_var_limit > 0 && cfg.decision_var_limit < nvars_
                              ? cfg.decision_var_limit
                              : nvars_;
        // ascending insertion: with equal activities, low-numbered variables
        // are decided first
        for (int v = 0; v < decision_limit_; ++v) heap_insert(v);

        ok_ = true;
        for (const auto& clause : f.clauses) {
            std::vector<int> lits;
            lits.reserve(clause.size());
            for (int ext : clause) {
                int v = std::abs(ext) - 1;
                int lit = 2 * v + (ext < 0 ? 1 : 0);
                if (std::find(lits.begin(), lits.end(), lit) == lits.end()) lits.push_back(lit);
            }
            if (!add_clause(std::move(lits), false)) {
                ok_ = false;
                break;
            }
        }
    }

    SolveResult solve() {
        auto start = std::chrono::steady_clock::now();
        SolveResult res;
        res.status = search();
        res.stats = stats_;
        res.stats.wall_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (res.status == SolveStatus::Sat) {
            res.model = Assignment(nvars_);
            for (int v = 0; v < nvars_; ++v) res.model.set(v + 1, assigns_[v] == 1);
        }
        return res;
    }

private:
    struct Clause {
        std::vector<int> lits;
        double activity = 0.0;
        bool learnt = false;
        bool removed = false;
    };

    enum : int { kUndef = -1 };

    int value_lit(int lit) const {  // -1 undef, 0 false, 1 true
        int a = assigns_[lit >> 1];
        return a < 0 ? -1 : (a ^ (lit & 1));
    }

    bool add_clause(std::vector<int> lits, bool learnt) {
        if (lits.empty()) return false;
        if (!learnt) {
            // drop clauses already satisfied at level 0, prune false literals
            std::vector<int> kept;
            for (int l : lits) {
                int v = value_lit(l);
                if (v == 1) return true;
                if (v == -1) kept.push_back(l);
            }
            lits = std::move(kept);
            if (lits.empty()) return false;
        }
        if (lits.size() == 1) {
            if (value_lit(lits[0]) == 0) return false;
            if (value_lit(lits[0]) == -1) enqueue(lits[0], kUndef);
            return propagate() == kUndef;
        }
        int ci = static_cast<int>(clauses_.size());
        Clause c;
        c.lits = std::move(lits);
        c.learnt = learnt;
        clauses_.push_back(std::move(c));
        if (learnt) ++learnt_count_;
        watches_[clauses_[ci].lits[0]].push_back(ci);
        watches_[clauses_[ci].lits[1]].push_back(ci);
        return true;
    }

    void enqueue(int lit, int reason) {
        int v = lit >> 1;
        assigns_[v] = 1 ^ (lit & 1);
        level_[v] = current_level();
        reason_[v] = reason;
        trail_.push_back(lit);
    }

    int current_level() const { return static_cast<int>(trail_lim_.size()); }

    int propagate() {
        while (qhead_ < trail_.size()) {
            int p = trail_[qhead_++];
            ++stats_.propagations;
            int false_lit = p ^ 1;
            auto& ws = watches_[false_lit];
            size_t i = 0, j = 0;
            while (i < ws.size()) {
                int ci = ws[i];
                Clause& c = clauses_[ci];
                if (c.removed) {
                    ++i;
                    continue;
                }
                auto& lits = c.lits;
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                if (value_lit(lits[0]) == 1) {
                    ws[j++] = ws[i++];
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < lits.size(); ++k)
                    if (value_lit(lits[k]) != 0) {
                        std::swap(lits[1], lits[k]);
                        watches_[lits[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved) {
                    ++i;
                    continue;
                }
                ws[j++] = ws[i++];
                if (value_lit(lits[0]) == 0) {
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    qhead_ = trail_.size();
                    return ci;
                }
                enqueue(lits[0], ci);
            }
            ws.resize(j);
        }
        return kUndef;
    }

    void analyze(int confl, std::vector<int>& learnt, int& bt_level) {
        learnt.clear();
        learnt.push_back(0);  // slot for the asserting literal
        int counter = 0;
        int p = kUndef;
        int index = static_cast<int>(trail_.size()) - 1;

        do {
            Clause& c = clauses_[confl];
            if (c.learnt) bump_clause(confl);
            for (size_t k = (p == kUndef ? 0 : 1); k < c.lits.size(); ++k) {
                int q = c.lits[k];
                int v = q >> 1;
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    bump_var(v);
                    if (level_[v] >= current_level())
                        ++counter;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[trail_[index] >> 1]) --index;
            p = trail_[index--];
            confl = reason_[p >> 1];
            seen_[p >> 1] = 0;
            --counter;
        } while (counter > 0);
        learnt[0] = p ^ 1;

        // cheap self-subsumption: drop literals whose whole reason is seen
        to_clear_.assign(learnt.begin(), learnt.end());
        size_t keep = 1;
        for (size_t i = 1; i < learnt.size(); ++i) {
            int v = learnt[i] >> 1;
            int r = reason_[v];
            bool redundant = false;
            if (r != kUndef) {
                redundant = true;
                for (size_t k = 1; k < clauses_[r].lits.size(); ++k) {
                    int u = clauses_[r].lits[k] >> 1;
                    if (!seen_[u] && level_[u] > 0) {
                        redundant = false;
                        break;
                    }
                }
            }
            if (!redundant) learnt[keep++] = learnt[i];
        }
        learnt.resize(keep);

        bt_level = 0;
        if (learnt.size() > 1) {
            size_t max_i = 1;
            for (size_t i = 2; i < learnt.size(); ++i)
                if (level_[learnt[i] >> 1] > level_[learnt[max_i] >> 1]) max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            bt_level = level_[learnt[1] >> 1];
        }

        for (int lit : to_clear_) seen_[lit >> 1] = 0;
    }

    void backtrack(int target) {
        while (current_level() > target) {
            size_t bound = trail_lim_.back();
            trail_lim_.pop_back();
            while (trail_.size() > bound) {
                int lit = trail_.back();
                trail_.pop_back();
                int v = lit >> 1;
                polarity_[v] = static_cast<std::uint8_t>(assigns_[v]);
                assigns_[v] = -1;
                reason_[v] = kUndef;
                if (v < decision_limit_ && heap_pos_[v] < 0) heap_insert(v);
            }
        }
        qhead_ = trail_.size();
    }

    void bump_var(int v) {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100) {
            for (double& a : activity_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
    }

    void bump_clause(int ci) {
        clauses_[ci].activity += cla_inc_;
        if (clauses_[ci].activity > 1e20) {
            for (Clause& c : clauses_)
                if (c.learnt) c.activity *= 1e-20;
            cla_inc_ *= 1e-20;
        }
    }

    // indexed binary max-heap on var activity
    void heap_insert(int v) {
        heap_pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        heap_up(heap_pos_[v]);
    }
    void heap_up(int i) {
        int v = heap_[i];
        while (i > 0) {
            int parent = (i - 1) / 2;
            if (activity_[heap_[parent]] >= activity_[v]) break;
            heap_[i] = heap_[parent];
            heap_pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }
    void heap_down(int i) {
        int v = heap_[i];
        int size = static_cast<int>(heap_.size());
        while (true) {
            int child = 2 * i + 1;
            if (child >= size) break;
            if (child + 1 < size && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
            if (activity_[heap_[child]] <= activity_[v]) break;
            heap_[i] = heap_[child];
            heap_pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        heap_pos_[v] = i;
    }
    int heap_pop() {
        int v = heap_[0];
        heap_pos_[v] = -1;
        heap_[0] = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_pos_[heap_[0]] = 0;
            heap_down(0);
        }
        return v;
    }

    std::uint64_t next_rand() {
        rng_state_ ^= rng_state_ << 13;
        rng_state_ ^= rng_state_ >> 7;
        rng_state_ ^= rng_state_ << 17;
        return rng_state_;
    }

    static std::int64_t luby_term(std::int64_t i) {  // 1, 1, 2, 1, 1, 2, 4, ...
        std::int64_t size = 1, seq = 0;
        while (size < i + 1) {
            size = 2 * size + 1;
            ++seq;
        }
        while (size - 1 != i) {
            size = (size - 1) >> 1;
            --seq;
            i = i % size;
        }
        return std::int64_t(1) << seq;
    }

    int pick_branch_var() {
        if (cfg_.random_decision_one_in > 0 &&
            next_rand() % cfg_.random_decision_one_in == 0) {
            int v = static_cast<int>(next_rand() % decision_limit_);
            if (assigns_[v] < 0) return v;
        }
        while (!heap_.empty()) {
            int v = heap_pop();
            if (assigns_[v] < 0) return v;
        }
        // Preference exhausted: fall back to any open variable so the
        // restriction never costs completeness.
        if (decision_limit_ < nvars_)
            for (int v = decision_limit_; v < nvars_; ++v)
                if (assigns_[v] < 0) return v;
        return -1;
    }

    void reduce_learnts() {
        std::vector<int> cands;
        for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
            const Clause& c = clauses_[ci];
            if (!c.learnt || c.removed || c.lits.size() <= 2) continue;
            if (reason_[c.lits[0] >> 1] == ci) continue;  // locked
            cands.push_back(ci);
        }
        std::sort(cands.begin(), cands.end(), [&](int a, int b) {
            return clauses_[a].activity < clauses_[b].activity;
        });
        for (size_t i = 0; i < cands.size() / 2; ++i) {
            clauses_[cands[i]].removed = true;
            --learnt_count_;
        }
        for (auto& ws : watches_) {
            size_t j = 0;
            for (size_t i = 0; i < ws.size(); ++i)
                if (!clauses_[ws[i]].removed) ws[j++] = ws[i];
            ws.resize(j);
        }
    }

    SolveStatus search() {
        if (!ok_) return SolveStatus::Unsat;
        if (propagate() != kUndef) return SolveStatus::Unsat;

        const std::int64_t restart_unit = std::max<std::int64_t>(1, cfg_.restart_base);
        double restart_limit = static_cast<double>(restart_unit);
        std::int64_t conflicts_at_restart = 0;
        auto start = std::chrono::steady_clock::now();
        std::vector<int> learnt;

        while (true) {
            int confl = propagate();
            if (confl != kUndef) {
                ++stats_.conflicts;
                if (current_level() == 0) return SolveStatus::Unsat;

                int bt_level = 0;
                analyze(confl, learnt, bt_level);
                backtrack(bt_level);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kUndef);
                } else {
                    int ci = static_cast<int>(clauses_.size());
                    Clause c;
                    c.lits = learnt;
                    c.learnt = true;
                    c.activity = cla_inc_;
                    clauses_.push_back(std::move(c));
                    ++learnt_count_;
                    ++stats_.learned;
                    watches_[learnt[0]].push_back(ci);
                    watches_[learnt[1]].push_back(ci);
                    enqueue(learnt[0], ci);
                }
                var_inc_ /= cfg_.var_decay;
                cla_inc_ /= 0.999;

                if (cfg_.conflict_limit >= 0 && stats_.conflicts >= cfg_.conflict_limit)
                    return SolveStatus::Timeout;
                if (cfg_.time_limit_s >= 0 && (stats_.conflicts & 255) == 0) {
                    double elapsed =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
                    if (elapsed >= cfg_.time_limit_s) return SolveStatus::Timeout;
                }
                if (learnt_count_ > cfg_.learnt_keep_base +
                                        cfg_.learnt_keep_step * reductions_) {
                    ++reductions_;
                    reduce_learnts();
                }
            } else {
                if (stats_.conflicts - conflicts_at_restart >=
                    static_cast<std::int64_t>(restart_limit)) {
                    conflicts_at_restart = stats_.conflicts;
                    ++stats_.restarts;
                    if (cfg_.restart_factor > 0)
                        restart_limit *= cfg_.restart_factor;
                    else
                        restart_limit = static_cast<double>(luby_term(stats_.restarts) *
                                                            restart_unit);
                    backtrack(0);
                    if (cfg_.rephase_every > 0 && stats_.restarts % cfg_.rephase_every == 0)
                        for (int v = 0; v < nvars_; ++v)
                            polarity_[v] = static_cast<std::uint8_t>(next_rand() & 1);
                    continue;
                }
                int v = pick_branch_var();
                if (v < 0) return SolveStatus::Sat;
                ++stats_.decisions;
                trail_lim_.push_back(trail_.size());
                enqueue(2 * v + (polarity_[v] ? 0 : 1), kUndef);
            }
        }
    }

    SolverConfig cfg_;
    int nvars_;
    int decision_limit_ = 0;
    bool ok_ = true;

    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<std::int8_t> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<size_t> trail_lim_;
    size_t qhead_ = 0;

    std::vector<double> activity_;
    std::vector<std::uint8_t> polarity_;
    std::vector<std::uint8_t> seen_;
    std::vector<int> to_clear_;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::uint64_t rng_state_ = 0;
    int learnt_count_ = 0;
    int reductions_ = 0;

    SolverStats stats_;
};

}  // namespace cdcl

// Solves with the bundled CDCL engine. Deterministic for a fixed seed and
// conflict limit; SAT models are checked against the formula before return.
inline SolveResult solve_cnf(const CnfFormula& f, const SolverConfig& cfg = {}) {
    cdcl::Solver solver(f, cfg);
    SolveResult res = solver.solve();
    if (res.status == SolveStatus::Sat) {
        auto bad = violated_clauses(f, res.model);
        if (!bad.empty())
            throw std::logic_error("solver returned a model violating " +
                                   std::to_string(bad.size()) + " clauses");
    }
    return res;
}

}  // namespace brentforge
