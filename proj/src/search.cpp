#include "flc/search.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "flc/detail/grounding.hpp"

namespace flc {

SearchConfig SearchConfig::up_to(int max_scope) {
    SearchConfig c;
    c.scopes.clear();
    for (int n = 1; n <= max_scope; ++n) c.scopes.push_back(n);
    return c;
}

std::vector<int> parse_scope_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw std::invalid_argument("bad scope '" + text + "'");
        int v = std::stoi(s);
        if (v < 1 || v > 64) throw std::invalid_argument("scope out of range in '" + text + "'");
        return v;
    };
    int lo = 1;
    int hi = 0;
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        hi = to_int(text);
    } else {
        lo = to_int(text.substr(0, dots));
        hi = to_int(text.substr(dots + 2));
    }
    if (lo > hi) throw std::invalid_argument("empty scope range '" + text + "'");
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

namespace {

using detail::Grounding;
using detail::kNoCell;
using Clock = std::chrono::steady_clock;

struct Limits {
    std::uint64_t node_limit = 0;
    std::optional<Clock::time_point> deadline;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> cancel{false};
    std::atomic<bool> hit{false};
    std::mutex mutex;
    std::string reason;

    void trip(const std::string& why) {
        std::lock_guard lock(mutex);
        if (!hit.exchange(true)) reason = why;
    }
};

std::vector<Formula> closed_core(const Theory& t, const std::vector<Formula>& constraints) {
    std::vector<Formula> out;
    for (const auto& a : t.axioms) out.push_back(universal_closure(expand(a.formula)));
    for (const auto& c : constraints) {
        check_well_formed(t.signature, c);
        out.push_back(universal_closure(expand(c)));
    }
    return out;
}

Interpretation to_model(const Signature& sig, const detail::CellLayout& layout, const std::vector<std::int8_t>& v) {
    Interpretation m(sig, layout.size());
    for (Element e = 0; e < layout.size(); ++e) m.set_exists(e, v[layout.flag(e)] == 1);
    for (std::size_t s = 0; s < layout.symbol_count(); ++s) {
        auto& tab = m.table(s);
        for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = v[layout.base(s) + i];
    }
    return m;
}

// Depth-first search over one scope.
class Engine {
public:
    enum class Result { Stopped, Exhausted, Limit };
    using Leaf = std::function<bool(const std::vector<std::int8_t>&)>;

    Engine(const Signature& sig, int n, const std::vector<Formula>& formulas, CellOrder order, bool symmetry,
           Limits& limits)
        : ground_(sig, n, formulas, detail::cell_order(detail::CellLayout(sig, n), order)),
          symmetry_(symmetry),
          limits_(limits) {}

    const detail::CellLayout& layout() const { return ground_.layout(); }

    /// `preset` fixes the first flags (in order) to the given values.
    Result run(const Leaf& on_leaf, const std::vector<std::int8_t>& preset = {}) {
        const auto& layout = ground_.layout();
        values_.assign(layout.total(), -1);
        watch_.assign(layout.total(), {});
        sat_.assign(ground_.instance_count(), 0);
        sat_trail_.clear();
        watch_trail_.clear();
        preset_ = preset;
        for (std::size_t i = 0; i < ground_.instance_count(); ++i) {
            std::size_t w = kNoCell;
            Truth t = ground_.evaluate(i, values_, w);
            if (t == Truth::False) return Result::Exhausted;
            if (t == Truth::True)
                sat_[i] = 1;
            else
                watch_[w].push_back(static_cast<int>(i));
        }
        return dfs(0, on_leaf);
    }

    std::uint64_t nodes() const { return local_nodes_; }

private:
    bool check_limits() {
        if (limits_.cancel.load(std::memory_order_relaxed)) return false;
        std::uint64_t total = limits_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (limits_.node_limit != 0 && total > limits_.node_limit) {
            limits_.trip("node limit of " + std::to_string(limits_.node_limit) + " reached");
            return false;
        }
        if (limits_.deadline && (local_nodes_ & 255) == 0 && Clock::now() > *limits_.deadline) {
            limits_.trip("time limit reached");
            return false;
        }
        return true;
    }

    bool propagate(std::size_t cell) {
        // Watch lists of later cells only grow here; the list for `cell` is
        // drained and re-filled through the trail on undo.
        auto& list = watch_[cell];
        std::size_t i = 0;
        bool ok = true;
        for (; i < list.size(); ++i) {
            int id = list[i];
            std::size_t w = kNoCell;
            Truth t = ground_.evaluate(static_cast<std::size_t>(id), values_, w);
            if (t == Truth::False) {
                ok = false;
                break;
            }
            if (t == Truth::True) {
                sat_[static_cast<std::size_t>(id)] = 1;
                sat_trail_.push_back(id);
            } else {
                watch_[w].push_back(id);
                watch_trail_.push_back(w);
            }
        }
        return ok;
    }

    void undo(std::size_t sat_mark, std::size_t watch_mark) {
        while (sat_trail_.size() > sat_mark) {
            sat_[static_cast<std::size_t>(sat_trail_.back())] = 0;
            sat_trail_.pop_back();
        }
        while (watch_trail_.size() > watch_mark) {
            watch_[watch_trail_.back()].pop_back();
            watch_trail_.pop_back();
        }
    }

    Result dfs(std::size_t depth, const Leaf& on_leaf) {
        const auto& layout = ground_.layout();
        if (depth == layout.total()) return on_leaf(values_) ? Result::Stopped : Result::Exhausted;
        const std::size_t cell = ground_.order()[depth];
        int lo = 0;
        int hi = layout.domain(cell) - 1;
        if (layout.is_flag(cell)) {
            if (depth < preset_.size()) {
                lo = hi = preset_[depth];
            } else if (symmetry_ && cell > 0 && values_[cell - 1] == 0) {
                hi = 0;  // keep the existence set a prefix
            }
        }
        for (int v = lo; v <= hi; ++v) {
            ++local_nodes_;
            if (!check_limits()) {
                values_[cell] = -1;
                return Result::Limit;
            }
            values_[cell] = static_cast<std::int8_t>(v);
            const std::size_t sm = sat_trail_.size();
            const std::size_t wm = watch_trail_.size();
            if (propagate(cell)) {
                Result r = dfs(depth + 1, on_leaf);
                if (r != Result::Exhausted) return r;
            }
            undo(sm, wm);
        }
        values_[cell] = -1;
        return Result::Exhausted;
    }

    Grounding ground_;
    bool symmetry_;
    Limits& limits_;
    std::vector<std::int8_t> values_;
    std::vector<std::vector<int>> watch_;
    std::vector<std::uint8_t> sat_;
    std::vector<int> sat_trail_;
    std::vector<std::size_t> watch_trail_;
    std::vector<std::int8_t> preset_;
    std::uint64_t local_nodes_ = 0;
};

void verify_witness(const Interpretation& m, const Theory& t, const std::vector<Formula>& constraints) {
    bool ok = satisfies(m, t);
    for (const auto& c : constraints) ok = ok && holds(m, c);
    if (!ok) throw std::logic_error("search produced a witness that fails reference evaluation:\n" + format_model(m));
}

// Flag prefixes handed to parallel workers.
std::vector<std::vector<std::int8_t>> flag_tasks(int n, bool symmetry) {
    std::vector<std::vector<std::int8_t>> tasks;
    if (symmetry) {
        for (int k = 0; k <= n; ++k) {
            std::vector<std::int8_t> f(static_cast<std::size_t>(n), 0);
            for (int i = 0; i < k; ++i) f[static_cast<std::size_t>(i)] = 1;
            tasks.push_back(std::move(f));
        }
        return tasks;
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<std::int8_t> f(static_cast<std::size_t>(n));
        // flag 0 most significant so that task order follows enumeration order
        for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = (bits >> (n - 1 - i)) & 1;
        tasks.push_back(std::move(f));
    }
    return tasks;
}

}  // namespace

SearchOutcome find_model(const Theory& t, const std::vector<Formula>& constraints, const SearchConfig& cfg) {
    const auto formulas = closed_core(t, constraints);
    SearchOutcome out;
    Limits limits;
    limits.node_limit = cfg.node_limit;
    if (cfg.time_limit.count() > 0) limits.deadline = Clock::now() + cfg.time_limit;

    for (int n : cfg.scopes) {
        if (!cfg.parallel || cfg.jobs <= 1) {
            Engine engine(t.signature, n, formulas, cfg.order, cfg.symmetry_breaking, limits);
            std::optional<Interpretation> found;
            auto r = engine.run([&](const std::vector<std::int8_t>& v) {
                found = to_model(t.signature, engine.layout(), v);
                return true;
            });
            out.nodes += engine.nodes();
            if (r == Engine::Result::Stopped) {
                verify_witness(*found, t, constraints);
                out.status = SearchOutcome::Status::Sat;
                out.model = std::move(found);
                out.scope = n;
                return out;
            }
            if (r == Engine::Result::Limit) {
                out.status = SearchOutcome::Status::ResourceLimit;
                out.scope = n;
                out.limit_reason = limits.reason;
                return out;
            }
            out.refuted_scopes.push_back(n);
            continue;
        }

        // Parallel: workers take flag prefixes in order; the lowest-indexed
        // satisfiable task wins so that the verdict does not depend on timing.
        const auto tasks = flag_tasks(n, cfg.symmetry_breaking);
        std::atomic<std::size_t> next{0};
        std::mutex mutex;
        std::optional<std::pair<std::size_t, Interpretation>> best;
        std::atomic<std::uint64_t> nodes{0};
        std::atomic<bool> limit_hit{false};
        {
            std::vector<std::jthread> workers;
            const int jobs = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
            for (int j = 0; j < jobs; ++j) {
                workers.emplace_back([&] {
                    Engine engine(t.signature, n, formulas, cfg.order, false, limits);
                    for (;;) {
                        std::size_t i = next.fetch_add(1);
                        if (i >= tasks.size() || limits.cancel.load()) break;
                        {
                            std::lock_guard lock(mutex);
                            if (best && best->first < i) break;
                        }
                        std::optional<Interpretation> found;
                        auto r = engine.run(
                            [&](const std::vector<std::int8_t>& v) {
                                found = to_model(t.signature, engine.layout(), v);
                                return true;
                            },
                            tasks[i]);
                        if (r == Engine::Result::Stopped) {
                            std::lock_guard lock(mutex);
                            if (!best || i < best->first) best.emplace(i, std::move(*found));
                        } else if (r == Engine::Result::Limit) {
                            if (limits.hit.load()) limit_hit = true;
                            break;
                        }
                    }
                    nodes += engine.nodes();
                });
            }
        }
        out.nodes += nodes.load();
        if (best) {
            verify_witness(best->second, t, constraints);
            out.status = SearchOutcome::Status::Sat;
            out.model = std::move(best->second);
            out.scope = n;
            return out;
        }
        if (limit_hit) {
            out.status = SearchOutcome::Status::ResourceLimit;
            out.scope = n;
            out.limit_reason = limits.reason;
            return out;
        }
        out.refuted_scopes.push_back(n);
    }
    out.status = SearchOutcome::Status::UnsatAtScopes;
    return out;
}

std::vector<Interpretation> enumerate_models(const Theory& t, const std::vector<Formula>& constraints, int scope,
                                             std::size_t limit, bool symmetry_breaking) {
    const auto formulas = closed_core(t, constraints);
    Limits limits;
    Engine engine(t.signature, scope, formulas, CellOrder::Canonical, symmetry_breaking, limits);
    std::vector<Interpretation> out;
    if (limit == 0) return out;
    engine.run([&](const std::vector<std::int8_t>& v) {
        out.push_back(to_model(t.signature, engine.layout(), v));
        verify_witness(out.back(), t, constraints);
        return out.size() >= limit;
    });
    return out;
}

std::vector<Interpretation> enumerate_models(const Theory& t, int scope, std::size_t limit) {
    return enumerate_models(t, {}, scope, limit, false);
}

std::uint64_t count_models(const Theory& t, const std::vector<Formula>& constraints, int scope,
                           bool symmetry_breaking, CellOrder order) {
    const auto formulas = closed_core(t, constraints);
    Limits limits;
    Engine engine(t.signature, scope, formulas, order, symmetry_breaking, limits);
    std::uint64_t count = 0;
    engine.run([&](const std::vector<std::int8_t>&) {
        ++count;
        return false;
    });
    return count;
}

}  // namespace flc
