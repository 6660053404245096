#include "xmarl/boolmin.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <set>

namespace xmarl {

int Implicant::literal_count() const { return std::popcount(care); }

namespace {

// Sort key of a literal: variable-major, positive first.
std::vector<std::uint32_t> literal_keys(const Implicant& p) {
    std::vector<std::uint32_t> keys;
    for (std::uint32_t c = p.care; c; c &= c - 1) {
        const auto v = static_cast<std::uint32_t>(std::countr_zero(c));
        keys.push_back(v * 2 + (((p.values >> v) & 1u) ? 0 : 1));
    }
    return keys;
}

bool cover_less(const std::vector<Implicant>& a, const std::vector<Implicant>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), canonical_less);
}

int total_literals(const std::vector<Implicant>& cover) {
    int n = 0;
    for (const auto& p : cover) n += p.literal_count();
    return n;
}

class Deadline {
public:
    Deadline(const MinimizeOptions& options, MinimizeProgress& progress)
        : deadline_(options.deadline), progress_(progress) {}

    void check() {
        if (!deadline_ || (ticks_++ & 0xff) != 0) return;
        if (std::chrono::steady_clock::now() >= *deadline_)
            throw TimeoutError("minimization timed out", progress_);
    }

private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    MinimizeProgress& progress_;
    std::uint64_t ticks_ = 0;
};

// Keeps only the inclusion-minimal masks.
void keep_minimal(std::vector<std::uint32_t>& sets) {
    std::sort(sets.begin(), sets.end(), [](auto a, auto b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<std::uint32_t> out;
    for (auto s : sets) {
        bool absorbed = false;
        for (auto k : out)
            if ((k & s) == k) {
                absorbed = true;
                break;
            }
        if (!absorbed) out.push_back(s);
    }
    sets = std::move(out);
}

// Prime implicants through `one`: each must differ from every zero in some
// cared variable, so their care sets are the minimal hitting sets of the
// difference masks.
std::vector<std::uint32_t> minimal_hitting_sets(std::vector<std::uint32_t> family, Deadline& deadline) {
    keep_minimal(family);
    std::vector<std::uint32_t> hits{0};
    for (auto d : family) {
        // Sets already hitting d stay minimal. An extension h|b can only be
        // absorbed by one of those, never by another extension.
        std::vector<std::uint32_t> kept, grown;
        for (auto h : hits) (h & d ? kept : grown).push_back(h);
        std::vector<std::uint32_t> next = kept;
        for (auto h : grown)
            for (std::uint32_t bits = d; bits; bits &= bits - 1) {
                deadline.check();
                const std::uint32_t c = h | (bits & (~bits + 1));
                if (std::none_of(kept.begin(), kept.end(), [c](auto k) { return (k & c) == k; })) next.push_back(c);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        hits = std::move(next);
    }
    return hits;
}

std::vector<Implicant> greedy_cover(const std::vector<Implicant>& primes, const std::vector<Minterm>& ones,
                                    Deadline& deadline) {
    std::vector<bool> covered(ones.size(), false);
    std::size_t left = ones.size();
    std::vector<Implicant> chosen;
    while (left > 0) {
        std::size_t best = primes.size();
        std::size_t best_gain = 0;
        for (std::size_t p = 0; p < primes.size(); ++p) {
            deadline.check();
            std::size_t gain = 0;
            for (std::size_t k = 0; k < ones.size(); ++k)
                if (!covered[k] && primes[p].covers(ones[k])) ++gain;
            if (gain == 0) continue;
            if (best == primes.size() || gain > best_gain ||
                (gain == best_gain && (primes[p].literal_count() < primes[best].literal_count() ||
                                       (primes[p].literal_count() == primes[best].literal_count() &&
                                        canonical_less(primes[p], primes[best]))))) {
                best = p;
                best_gain = gain;
            }
        }
        chosen.push_back(primes[best]);
        for (std::size_t k = 0; k < ones.size(); ++k)
            if (!covered[k] && primes[best].covers(ones[k])) {
                covered[k] = true;
                --left;
            }
    }
    return chosen;
}

// Petrick expansion over the product of "covered by one of these primes"
// sums; terms are prime bitmasks. Returns nullopt when the term budget runs
// out.
std::optional<std::vector<std::uint64_t>> petrick(const std::vector<std::uint64_t>& clauses, std::size_t bound,
                                                  std::size_t term_limit, Deadline& deadline) {
    std::vector<std::uint64_t> terms{0};
    for (auto clause : clauses) {
        std::vector<std::uint64_t> next;
        for (auto t : terms) {
            deadline.check();
            if (t & clause) {
                next.push_back(t);
                continue;
            }
            for (auto bits = clause; bits; bits &= bits - 1) {
                const auto grown = t | (bits & (~bits + 1));
                if (static_cast<std::size_t>(std::popcount(grown)) <= bound) next.push_back(grown);
            }
        }
        std::sort(next.begin(), next.end(), [](auto a, auto b) {
            const int pa = std::popcount(a), pb = std::popcount(b);
            return pa != pb ? pa < pb : a < b;
        });
        next.erase(std::unique(next.begin(), next.end()), next.end());
        std::vector<std::uint64_t> kept;
        for (auto t : next) {
            bool absorbed = false;
            for (auto k : kept)
                if ((k & t) == k) {
                    absorbed = true;
                    break;
                }
            if (!absorbed) kept.push_back(t);
            if (kept.size() > term_limit) return std::nullopt;
        }
        terms = std::move(kept);
    }
    return terms;
}

}  // namespace

bool canonical_less(const Implicant& a, const Implicant& b) {
    const auto ka = literal_keys(a), kb = literal_keys(b);
    return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
}

bool evaluate(const std::vector<Implicant>& dnf, Minterm m) {
    return std::any_of(dnf.begin(), dnf.end(), [&](const Implicant& p) { return p.covers(m); });
}

std::string format_dnf(const std::vector<Implicant>& dnf, std::size_t variables) {
    if (dnf.empty()) return "FALSE";
    std::string out;
    for (std::size_t k = 0; k < dnf.size(); ++k) {
        if (k) out += " | ";
        if (dnf[k].care == 0) {
            out += "TRUE";
            continue;
        }
        std::string term;
        for (std::size_t v = 0; v < variables; ++v) {
            if (!((dnf[k].care >> v) & 1u)) continue;
            if (!term.empty()) term += " & ";
            term += (((dnf[k].values >> v) & 1u) ? "x" : "!x") + std::to_string(v);
        }
        out += term;
    }
    return out;
}

MinimizeResult minimize(std::vector<Minterm> ones, std::vector<Minterm> zeros, std::size_t variables,
                        const MinimizeOptions& options) {
    if (variables > options.max_variables || variables > 32)
        throw SizeLimitError("Boolean problem has " + std::to_string(variables) + " variables, limit is " +
                                 std::to_string(options.max_variables) +
                                 "; restrict agents and features with relevancy filtering",
                             variables, options.max_variables);
    const std::uint64_t range = std::uint64_t{1} << variables;
    for (const auto* set : {&ones, &zeros})
        for (auto m : *set)
            if (m >= range)
                throw PreconditionError("minterm " + std::to_string(m) + " has bits beyond " +
                                        std::to_string(variables) + " variables");
    std::sort(ones.begin(), ones.end());
    ones.erase(std::unique(ones.begin(), ones.end()), ones.end());
    std::sort(zeros.begin(), zeros.end());
    zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
    std::vector<std::uint64_t> shared;
    std::set_intersection(ones.begin(), ones.end(), zeros.begin(), zeros.end(), std::back_inserter(shared));
    if (!shared.empty())
        throw ConflictError(std::to_string(shared.size()) + " minterm(s) are both ones and zeros", shared);

    MinimizeResult result;
    result.progress.ones_total = ones.size();
    if (ones.empty()) return result;
    if (zeros.empty()) {
        result.implicants.push_back({});
        result.prime_count = 1;
        return result;
    }

    Deadline deadline(options, result.progress);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::vector<Implicant> primes;
    std::vector<std::uint32_t> diffs(zeros.size());
    for (auto m : ones) {
        for (std::size_t k = 0; k < zeros.size(); ++k) diffs[k] = m ^ zeros[k];
        for (auto care : minimal_hitting_sets(diffs, deadline)) {
            if (seen.insert({care, m & care}).second) {
                primes.push_back({care, m & care});
                ++result.progress.primes_found;
            }
        }
        ++result.progress.ones_expanded;
    }
    std::sort(primes.begin(), primes.end(), canonical_less);
    result.prime_count = primes.size();

    // Essential primes belong to every cover.
    std::vector<Implicant> chosen;
    std::vector<bool> taken(primes.size(), false);
    for (auto m : ones) {
        std::size_t only = primes.size(), count = 0;
        for (std::size_t p = 0; p < primes.size(); ++p)
            if (primes[p].covers(m)) {
                only = p;
                ++count;
            }
        if (count == 1 && !taken[only]) {
            taken[only] = true;
            chosen.push_back(primes[only]);
        }
    }
    std::vector<Minterm> rest;
    for (auto m : ones)
        if (!evaluate(chosen, m)) rest.push_back(m);
    std::vector<Implicant> candidates;
    for (std::size_t p = 0; p < primes.size(); ++p)
        if (!taken[p] && std::any_of(rest.begin(), rest.end(), [&](Minterm m) { return primes[p].covers(m); }))
            candidates.push_back(primes[p]);

    if (!rest.empty()) {
        auto greedy = greedy_cover(candidates, rest, deadline);
        std::optional<std::vector<std::uint64_t>> terms;
        if (candidates.size() <= options.exact_prime_limit) {
            std::set<std::uint64_t> clause_set;
            for (auto m : rest) {
                std::uint64_t clause = 0;
                for (std::size_t p = 0; p < candidates.size(); ++p)
                    if (candidates[p].covers(m)) clause |= std::uint64_t{1} << p;
                clause_set.insert(clause);
            }
            std::vector<std::uint64_t> clauses(clause_set.begin(), clause_set.end());
            std::sort(clauses.begin(), clauses.end(),
                      [](auto a, auto b) { return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b; });
            terms = petrick(clauses, greedy.size(), options.petrick_term_limit, deadline);
        }
        if (terms) {
            std::vector<Implicant> best;
            bool have = false;
            for (auto t : *terms) {
                std::vector<Implicant> cover;
                for (std::size_t p = 0; p < candidates.size(); ++p)
                    if ((t >> p) & 1u) cover.push_back(candidates[p]);
                std::sort(cover.begin(), cover.end(), canonical_less);
                if (!have || cover.size() < best.size() ||
                    (cover.size() == best.size() &&
                     (total_literals(cover) < total_literals(best) ||
                      (total_literals(cover) == total_literals(best) && cover_less(cover, best))))) {
                    best = std::move(cover);
                    have = true;
                }
            }
            chosen.insert(chosen.end(), best.begin(), best.end());
        } else {
            result.exact = false;
            chosen.insert(chosen.end(), greedy.begin(), greedy.end());
        }
    }
    std::sort(chosen.begin(), chosen.end(), canonical_less);
    result.implicants = std::move(chosen);

#ifndef NDEBUG
    for (auto m : ones) assert(evaluate(result.implicants, m));
    for (auto m : zeros) assert(!evaluate(result.implicants, m));
#endif
    return result;
}

}  // namespace xmarl
