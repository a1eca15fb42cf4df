#pragma once

// End-to-end retrieval protocol: regime planning, secret-shared storage,
// private queries, per-server answers for two row-scaled instances, erasure
// injection, and over-the-air decoding through the N-sum box. The classical
// single-instance path (answers as plain dits, decode by submatrix
// inversion) lives here too.
//
// Conventions: server indices, message indices (theta) and block indices are
// 0-based throughout the API. Instance 0 carries multipliers u, instance 1
// carries the dual multipliers v.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "codes.hpp"
#include "gf.hpp"
#include "linalg.hpp"
#include "nsumbox.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace qecsa {

enum class Regime { r1, r2_even, r2_odd, r3, classical_only };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::r1: return "R1";
        case Regime::r2_even: return "R2_even";
        case Regime::r2_odd: return "R2_odd";
        case Regime::r3: return "R3";
        case Regime::classical_only: return "classical_only";
    }
    return "?";
}

/// Achievable rate for N servers, X-secure storage, T-private queries and up
/// to E unresponsive servers. Three-case split on how X+T and N-E sit
/// relative to N/2.
inline Rational rate(std::size_t n, std::size_t x, std::size_t t,
                     std::size_t e) {
    if (n <= x + t + e)
        throw std::invalid_argument(
            "rate: zero/negative rate (need N > X+T+E)");
    if (2 * (x + t) >= n) return Rational(2 * (n - x - t - e), n);
    if (2 * (n - e) >= n) {
        const std::size_t classical = n - x - t - e;
        const std::size_t quantum = n - 2 * e; // n >= 2e in this regime
        return Rational(std::max(classical, quantum), n);
    }
    return Rational(n - x - t - e, n);
}

/// Per-instance plan: the privacy level actually used and the number of
/// message symbols it delivers.
struct InstancePlan {
    std::size_t t_effective;
    std::size_t l_symbols;
};

struct SchemeParams {
    std::size_t n_servers;
    std::size_t n_messages;
    std::size_t x_secure;
    std::size_t t_private; // requested; instances may use more
    std::size_t erasures;
    FieldSpec field;
    CodePoints points; // alpha (N values), f (max_l values)
    Multipliers mult;
    Regime regime;
    std::vector<InstancePlan> per_instance; // 2 quantum, 1 classical

    bool quantum() const noexcept {
        return regime == Regime::r1 || regime == Regime::r2_even ||
               regime == Regime::r2_odd;
    }
    std::size_t instances() const noexcept { return per_instance.size(); }

    std::size_t max_l() const {
        std::size_t m = 0;
        for (const auto& inst : per_instance)
            m = std::max(m, inst.l_symbols);
        return m;
    }

    std::size_t delivered_symbols() const {
        std::size_t s = 0;
        for (const auto& inst : per_instance) s += inst.l_symbols;
        return s;
    }

    Rational achieved_rate() const {
        return Rational(delivered_symbols(), n_servers);
    }

    /// Row multipliers of instance i: u, then v; all ones on the classical
    /// path.
    std::vector<Fe> beta(std::size_t i) const {
        if (quantum()) return i == 0 ? mult.u : mult.v;
        return std::vector<Fe>(n_servers, field.one());
    }

    /// Number of GRS columns instance i contributes to the stabilizer side:
    /// ceil(N/2) for instance 0, floor(N/2) for instance 1.
    std::size_t gamma_cols(std::size_t i) const {
        return i == 0 ? (n_servers + 1) / 2 : n_servers / 2;
    }
};

struct PlanOverrides {
    std::optional<std::vector<Fe>> alpha;
    std::optional<std::vector<Fe>> f;
    std::optional<std::vector<Fe>> u;
};

struct RegimePlan {
    Regime regime;
    std::vector<InstancePlan> per_instance;
};

/// Pure arithmetic part of planning: which regime applies and what each
/// instance uses. Needs no field.
inline RegimePlan plan_regime(std::size_t n, std::size_t x, std::size_t t,
                              std::size_t e) {
    if (n <= x + t + e)
        throw std::invalid_argument(
            "plan: zero/negative rate (need N > X+T+E, got N=" +
            std::to_string(n) + ", X+T+E=" + std::to_string(x + t + e) + ")");
    if (2 * (x + t) >= n) {
        const std::size_t l = n - e - x - t;
        return {Regime::r1, {{t, l}, {t, l}}};
    }
    if (2 * (n - e) >= n) {
        if (x + t >= e) {
            // the two-instance scheme with boosted privacy beats (or ties)
            // the classical fallback
            if (n % 2 == 0) {
                const std::size_t t_eff = n / 2 - x;
                return {Regime::r2_even,
                        {{t_eff, n / 2 - e}, {t_eff, n / 2 - e}}};
            }
            const std::size_t t1 = (n + 1) / 2 - x;
            return {Regime::r2_odd,
                    {{t1, n / 2 - e}, {t1 - 1, (n + 1) / 2 - e}}};
        }
        return {Regime::classical_only, {{t, n - x - t - e}}};
    }
    return {Regime::r3, {{t, n - x - t - e}}};
}

inline SchemeParams plan_scheme(std::size_t n, std::size_t k, std::size_t x,
                                std::size_t t, std::size_t e,
                                const FieldSpec& field,
                                const PlanOverrides& overrides = {}) {
    if (k == 0)
        throw std::invalid_argument("plan_scheme: need at least one message");
    const RegimePlan plan = plan_regime(n, x, t, e);
    const Regime regime = plan.regime;
    const std::vector<InstancePlan>& per_instance = plan.per_instance;

    std::size_t max_l = 0;
    for (const auto& inst : per_instance)
        max_l = std::max(max_l, inst.l_symbols);

    std::vector<Fe> alpha, f;
    if (overrides.alpha) {
        alpha = *overrides.alpha;
        if (alpha.size() != n)
            throw std::invalid_argument("plan_scheme: alpha override must "
                                        "have N entries");
    }
    if (overrides.f) {
        f = *overrides.f;
        if (f.size() < max_l)
            throw std::invalid_argument(
                "plan_scheme: f override needs at least " +
                std::to_string(max_l) + " poles");
        f.resize(max_l, field.zero());
    }
    if (!overrides.alpha && !overrides.f) {
        CodePoints pts = default_code_points(field, n, max_l);
        alpha = pts.alpha;
        f = pts.f;
    } else if (!overrides.alpha) {
        for (std::size_t i = 0; i < n; ++i) alpha.push_back(field.element(i));
    } else if (!overrides.f) {
        // pick poles outside the given alphas
        std::vector<bool> used(field.modulus() < 4096 ? field.modulus() : 0);
        if (!used.empty()) {
            for (const Fe& a : alpha) used[a.value()] = true;
            for (std::uint64_t c = 0; c < used.size() && f.size() < max_l; ++c)
                if (!used[c]) f.push_back(field.element(c));
        }
        if (f.size() < max_l)
            throw std::invalid_argument(
                "plan_scheme: could not pick distinct poles; pass f "
                "explicitly");
    }

    CodePoints points(std::move(alpha), std::move(f));
    std::vector<Fe> u = overrides.u
                            ? *overrides.u
                            : std::vector<Fe>(n, field.one());
    Multipliers mult = Multipliers::dual_of(points.alpha, u);

    return SchemeParams{n,     k,      x,      t,           e,
                        field, points, mult,   regime,      per_instance};
}

// ---------------------------------------------------------------------------
// Messages, noise, shares, queries
// ---------------------------------------------------------------------------

/// K messages; message k holds l_symbols(i) field elements per instance i.
struct MessageStore {
    // w[k][i][l]
    std::vector<std::vector<std::vector<Fe>>> w;
};

inline MessageStore random_messages(const SchemeParams& p, Rng& rng) {
    MessageStore store;
    store.w.resize(p.n_messages);
    for (auto& msg : store.w) {
        msg.resize(p.instances());
        for (std::size_t i = 0; i < p.instances(); ++i)
            for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l)
                msg[i].push_back(rng.element(p.field));
    }
    return store;
}

inline MessageStore constant_messages(const SchemeParams& p, Fe value) {
    MessageStore store;
    store.w.resize(p.n_messages);
    for (auto& msg : store.w) {
        msg.resize(p.instances());
        for (std::size_t i = 0; i < p.instances(); ++i)
            msg[i].assign(p.per_instance[i].l_symbols, value);
    }
    return store;
}

/// Storage noise: z[i][l] is an X x K matrix whose row x is the i.i.d.
/// uniform row Z_x attached to block (i, l).
struct StorageNoise {
    std::vector<std::vector<Mat>> z;
};

/// Query noise: z[i][l] is a T_i x K matrix whose row t is Z'_t for block
/// (i, l).
struct QueryNoise {
    std::vector<std::vector<Mat>> z;
};

inline StorageNoise draw_storage_noise(const SchemeParams& p, Rng& rng) {
    StorageNoise noise;
    noise.z.resize(p.instances());
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l) {
            Mat block(p.field, p.x_secure, p.n_messages);
            for (std::size_t r = 0; r < block.rows(); ++r)
                for (std::size_t c = 0; c < block.cols(); ++c)
                    block(r, c) = rng.element(p.field);
            noise.z[i].push_back(std::move(block));
        }
    return noise;
}

inline StorageNoise zero_storage_noise(const SchemeParams& p) {
    StorageNoise noise;
    noise.z.resize(p.instances());
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l)
            noise.z[i].emplace_back(p.field, p.x_secure, p.n_messages);
    return noise;
}

inline QueryNoise draw_query_noise(const SchemeParams& p, Rng& rng) {
    QueryNoise noise;
    noise.z.resize(p.instances());
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l) {
            Mat block(p.field, p.per_instance[i].t_effective, p.n_messages);
            for (std::size_t r = 0; r < block.rows(); ++r)
                for (std::size_t c = 0; c < block.cols(); ++c)
                    block(r, c) = rng.element(p.field);
            noise.z[i].push_back(std::move(block));
        }
    return noise;
}

inline QueryNoise zero_query_noise(const SchemeParams& p) {
    QueryNoise noise;
    noise.z.resize(p.instances());
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l)
            noise.z[i].emplace_back(p.field,
                                    p.per_instance[i].t_effective,
                                    p.n_messages);
    return noise;
}

/// What one server stores: s[i][l] is the length-K row
/// S_n^{(i,l)} = 1/(f_l - alpha_n) W^{(i,l)} + sum_x (f_l - alpha_n)^x Z_x.
struct ServerShare {
    std::vector<std::vector<std::vector<Fe>>> s;
};

/// What one server receives: q[i][l] is the length-K column
/// Q_n^{(i,l)} = e_theta + sum_t (f_l - alpha_n)^{t+1} Z'_t.
struct QueryShare {
    std::vector<std::vector<std::vector<Fe>>> q;
};

inline std::vector<ServerShare> encode_storage(const MessageStore& store,
                                               const SchemeParams& p,
                                               const StorageNoise& noise) {
    std::vector<ServerShare> shares(p.n_servers);
    for (std::size_t n = 0; n < p.n_servers; ++n) {
        shares[n].s.resize(p.instances());
        for (std::size_t i = 0; i < p.instances(); ++i) {
            for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l) {
                const Fe b = p.points.f[l] - p.points.alpha[n];
                const Fe cauchy = b.inv();
                std::vector<Fe> row;
                row.reserve(p.n_messages);
                for (std::size_t k = 0; k < p.n_messages; ++k) {
                    Fe val = cauchy * store.w[k][i][l];
                    for (std::size_t xp = 0; xp < p.x_secure; ++xp)
                        val += b.pow(xp) * noise.z[i][l](xp, k);
                    row.push_back(val);
                }
                shares[n].s[i].push_back(std::move(row));
            }
        }
    }
    return shares;
}

inline std::vector<ServerShare> encode_storage(const MessageStore& store,
                                               const SchemeParams& p,
                                               Rng& rng) {
    return encode_storage(store, p, draw_storage_noise(p, rng));
}

inline std::vector<QueryShare> make_queries(std::size_t theta,
                                            const SchemeParams& p,
                                            const QueryNoise& noise) {
    if (theta >= p.n_messages)
        throw std::invalid_argument("make_queries: theta out of range");
    std::vector<QueryShare> queries(p.n_servers);
    for (std::size_t n = 0; n < p.n_servers; ++n) {
        queries[n].q.resize(p.instances());
        for (std::size_t i = 0; i < p.instances(); ++i) {
            const std::size_t t_eff = p.per_instance[i].t_effective;
            for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l) {
                const Fe b = p.points.f[l] - p.points.alpha[n];
                std::vector<Fe> colv;
                colv.reserve(p.n_messages);
                for (std::size_t k = 0; k < p.n_messages; ++k) {
                    Fe val = k == theta ? p.field.one() : p.field.zero();
                    for (std::size_t tp = 0; tp < t_eff; ++tp)
                        val += b.pow(tp + 1) * noise.z[i][l](tp, k);
                    colv.push_back(val);
                }
                queries[n].q[i].push_back(std::move(colv));
            }
        }
    }
    return queries;
}

inline std::vector<QueryShare> make_queries(std::size_t theta,
                                            const SchemeParams& p, Rng& rng) {
    return make_queries(theta, p, draw_query_noise(p, rng));
}

/// A_n^i = beta_n^i * sum_l <S_n^{(i,l)}, Q_n^{(i,l)}>.
inline Fe server_answer(const ServerShare& share, const QueryShare& query,
                        const SchemeParams& p, std::size_t instance,
                        std::size_t server) {
    Fe acc = p.field.zero();
    for (std::size_t l = 0; l < p.per_instance[instance].l_symbols; ++l)
        for (std::size_t k = 0; k < p.n_messages; ++k)
            acc += share.s[instance][l][k] * query.q[instance][l][k];
    return p.beta(instance)[server] * acc;
}

/// answers[i][n] for every instance and server.
inline std::vector<std::vector<Fe>> server_answers(
    const std::vector<ServerShare>& shares,
    const std::vector<QueryShare>& queries, const SchemeParams& p) {
    std::vector<std::vector<Fe>> answers(p.instances());
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t n = 0; n < p.n_servers; ++n)
            answers[i].push_back(
                server_answer(shares[n], queries[n], p, i, n));
    return answers;
}

/// Stacks the two instances into the length-2N MAC input order
/// [A_1^1 ... A_N^1 A_1^2 ... A_N^2].
inline std::vector<Fe> stack_answers(
    const std::vector<std::vector<Fe>>& answers) {
    if (answers.size() != 2)
        throw std::invalid_argument("stack_answers: need two instances");
    std::vector<Fe> out = answers[0];
    out.insert(out.end(), answers[1].begin(), answers[1].end());
    return out;
}

// ---------------------------------------------------------------------------
// Classical decoding
// ---------------------------------------------------------------------------

struct ClassicalDecoded {
    std::vector<Fe> w;  // desired message symbols, length L_i
    std::vector<Fe> nu; // interference symbols, length X+T_i
};

/// Recovers the L_i desired symbols of one instance from any N-E responsive
/// answers by inverting the corresponding rows of the instance's
/// (row-scaled) Cauchy-Vandermonde matrix.
inline ClassicalDecoded classical_decode(
    const std::vector<Fe>& instance_answers,
    const std::vector<std::size_t>& responsive, const SchemeParams& p,
    std::size_t instance) {
    const std::size_t need = p.n_servers - p.erasures;
    if (responsive.size() < need)
        throw std::invalid_argument(
            "classical_decode: need at least N-E = " + std::to_string(need) +
            " responsive servers, have " + std::to_string(responsive.size()));
    std::vector<std::size_t> rows_sel(responsive.begin(),
                                      responsive.begin() + need);
    for (std::size_t r : rows_sel)
        if (r >= p.n_servers)
            throw std::out_of_range("classical_decode: server index");

    const auto& inst = p.per_instance[instance];
    const Mat code = qcsa_matrix(p.points.truncated(inst.l_symbols),
                                 p.beta(instance),
                                 p.x_secure + inst.t_effective);
    std::vector<Fe> rhs;
    rhs.reserve(need);
    for (std::size_t r : rows_sel) rhs.push_back(instance_answers[r]);
    const Mat sol = solve(take_rows(code, rows_sel), col_vector(rhs));

    ClassicalDecoded out;
    for (std::size_t l = 0; l < inst.l_symbols; ++l)
        out.w.push_back(sol(l, 0));
    for (std::size_t j = inst.l_symbols; j < code.cols(); ++j)
        out.nu.push_back(sol(j, 0));
    return out;
}

// ---------------------------------------------------------------------------
// Box construction and over-the-air decoding
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::size_t> sorted_unique_servers(
    std::vector<std::size_t> set, std::size_t n, const char* who) {
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
        throw std::invalid_argument(std::string(who) +
                                    ": duplicate server index");
    if (!set.empty() && set.back() >= n)
        throw std::out_of_range(std::string(who) +
                                ": server index out of range");
    return set;
}

} // namespace detail

/// Pads a (possibly smaller) set of actually-erased servers up to the E
/// declared positions the box is built for; the unused basis columns simply
/// decode delta = 0.
inline std::vector<std::size_t> pad_erasure_set(
    const SchemeParams& p, const std::vector<std::size_t>& actual) {
    auto declared = detail::sorted_unique_servers(actual, p.n_servers,
                                                  "pad_erasure_set");
    if (declared.size() > p.erasures)
        throw std::invalid_argument(
            "pad_erasure_set: more erasures than the scheme tolerates");
    for (std::size_t n = 0; n < p.n_servers && declared.size() < p.erasures;
         ++n)
        if (!std::binary_search(declared.begin(), declared.end(), n)) {
            declared.insert(
                std::lower_bound(declared.begin(), declared.end(), n), n);
        }
    return declared;
}

struct GhPair {
    Mat g;
    Mat h;
};

/// Builds (G, H) for the two-instance scheme and a declared erasure set of
/// size exactly E. The stabilizer side G takes the leading GRS columns of
/// both instances; H carries the scaled Cauchy blocks, the trailing GRS
/// columns, and one pair of standard basis columns per declared erasure.
inline GhPair build_gh(const SchemeParams& p,
                       const std::vector<std::size_t>& erasure_set) {
    if (!p.quantum())
        throw std::invalid_argument(
            "build_gh: plan has no two-instance quantum path");
    const std::size_t n = p.n_servers;
    auto erased =
        detail::sorted_unique_servers(erasure_set, n, "build_gh");
    if (erased.size() != p.erasures)
        throw std::invalid_argument(
            "build_gh: declared erasure set must have exactly E = " +
            std::to_string(p.erasures) + " positions");

    std::vector<Mat> gammas, lambdas, cauchys;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& inst = p.per_instance[i];
        const std::size_t code_cols = p.x_secure + inst.t_effective;
        const std::size_t g_cols = p.gamma_cols(i);
        if (code_cols < g_cols)
            throw std::invalid_argument(
                "build_gh: instance " + std::to_string(i) +
                " has too few GRS columns for the stabilizer side");
        const Mat grs = grs_matrix(p.points.alpha, p.beta(i), code_cols);
        std::vector<std::size_t> head(g_cols), tail(code_cols - g_cols);
        for (std::size_t j = 0; j < head.size(); ++j) head[j] = j;
        for (std::size_t j = 0; j < tail.size(); ++j) tail[j] = g_cols + j;
        gammas.push_back(take_cols(grs, head));
        lambdas.push_back(take_cols(grs, tail));
        cauchys.push_back(qcsa_matrix(p.points.truncated(inst.l_symbols),
                                      p.beta(i), 0));
    }

    const Mat g = block_diag({gammas[0], gammas[1]});
    Mat h = hstack({block_diag({cauchys[0], cauchys[1]}),
                    block_diag({lambdas[0], lambdas[1]})});

    Mat basis(p.field, 2 * n, 2 * erased.size());
    for (std::size_t e = 0; e < erased.size(); ++e) {
        basis(erased[e], e) = p.field.one();
        basis(n + erased[e], erased.size() + e) = p.field.one();
    }
    if (basis.cols() > 0) h = hstack({h, basis});
    return GhPair{g, h};
}

/// The box input: answers with the error contributions added on the erased
/// coordinate pairs only.
inline std::vector<Fe> inject_erasures(
    const std::vector<Fe>& stacked, const std::vector<std::size_t>& erased,
    const std::vector<std::pair<Fe, Fe>>& deltas) {
    if (stacked.size() % 2 != 0)
        throw std::invalid_argument("inject_erasures: need a 2N vector");
    if (erased.size() != deltas.size())
        throw std::invalid_argument(
            "inject_erasures: one delta pair per erased server");
    const std::size_t n = stacked.size() / 2;
    std::vector<Fe> x = stacked;
    for (std::size_t e = 0; e < erased.size(); ++e) {
        if (erased[e] >= n)
            throw std::out_of_range("inject_erasures: server index");
        x[erased[e]] += deltas[e].first;
        x[n + erased[e]] += deltas[e].second;
    }
    return x;
}

struct QuantumDecoded {
    std::vector<Fe> y;                     // raw box output, length N
    std::vector<std::vector<Fe>> w;        // per instance: desired symbols
    std::vector<std::vector<Fe>> nu_tail;  // per instance: trailing interference
    std::vector<Fe> delta1, delta2;        // recovered errors, declared order
};

/// Splits y = M x into desired symbols, leftover interference and recovered
/// error values, following the column order of H.
inline QuantumDecoded quantum_decode(const NSumBoxSpec& box,
                                     const std::vector<Fe>& x,
                                     const SchemeParams& p) {
    QuantumDecoded out;
    out.y = box.apply(x);
    std::size_t pos = 0;
    auto take = [&](std::size_t count) {
        std::vector<Fe> part(out.y.begin() + pos, out.y.begin() + pos + count);
        pos += count;
        return part;
    };
    out.w.push_back(take(p.per_instance[0].l_symbols));
    out.w.push_back(take(p.per_instance[1].l_symbols));
    out.nu_tail.push_back(take(p.x_secure + p.per_instance[0].t_effective -
                               p.gamma_cols(0)));
    out.nu_tail.push_back(take(p.x_secure + p.per_instance[1].t_effective -
                               p.gamma_cols(1)));
    out.delta1 = take(p.erasures);
    out.delta2 = take(p.erasures);
    return out;
}

// ---------------------------------------------------------------------------
// One full protocol run
// ---------------------------------------------------------------------------

struct Transcript {
    SchemeParams params;
    std::size_t theta;
    std::uint64_t seed;
    MessageStore messages;
    std::vector<ServerShare> shares;
    std::vector<QueryShare> queries;
    std::vector<std::vector<Fe>> answers;       // [instance][server]
    std::vector<std::size_t> actual_erasures;   // as requested, sorted
    std::vector<std::size_t> declared_erasures; // padded to size E (quantum)
    std::vector<std::pair<Fe, Fe>> deltas;      // aligned with declared set
    std::vector<Fe> box_input;                  // empty on the classical path
    std::vector<Fe> box_output;
    std::vector<std::vector<Fe>> decoded_w;     // per instance
    std::vector<std::vector<Fe>> decoded_nu;    // per instance
    std::vector<Fe> recovered_delta1, recovered_delta2;
    std::size_t download_qudits = 0; // N, responsive or not

    Rational achieved_rate() const { return params.achieved_rate(); }

    /// True when every decoded symbol matches the stored message.
    bool decode_matches_store() const {
        for (std::size_t i = 0; i < params.instances(); ++i)
            if (decoded_w[i] != messages.w[theta][i]) return false;
        return true;
    }
};

inline Transcript run_end_to_end(
    const SchemeParams& p, std::size_t theta, std::uint64_t seed,
    const std::vector<std::size_t>& erasure_set,
    const std::optional<std::vector<std::pair<Fe, Fe>>>& deltas_in =
        std::nullopt) {
    if (theta >= p.n_messages)
        throw std::invalid_argument("run_end_to_end: theta out of range");
    auto actual = detail::sorted_unique_servers(erasure_set, p.n_servers,
                                                "run_end_to_end");
    if (actual.size() > p.erasures)
        throw std::invalid_argument(
            "run_end_to_end: more erasures than the scheme tolerates");
    if (deltas_in && deltas_in->size() != erasure_set.size())
        throw std::invalid_argument(
            "run_end_to_end: one delta pair per erased server");

    Rng rng(seed);
    Transcript t{p,  theta, seed, random_messages(p, rng), {}, {}, {},
                 {}, {},    {},   {},   {},  {}, {}, {}, {}, 0};
    t.shares = encode_storage(t.messages, p, rng);
    t.queries = make_queries(theta, p, rng);
    t.answers = server_answers(t.shares, t.queries, p);
    t.actual_erasures = actual;
    t.download_qudits = p.n_servers;

    if (p.quantum()) {
        // align caller-order deltas with the sorted actual set, drawing
        // random values when none were supplied
        std::vector<std::pair<Fe, Fe>> actual_deltas;
        for (std::size_t a : actual) {
            if (deltas_in) {
                const std::size_t at =
                    std::find(erasure_set.begin(), erasure_set.end(), a) -
                    erasure_set.begin();
                actual_deltas.push_back((*deltas_in)[at]);
            } else {
                actual_deltas.emplace_back(rng.element(p.field),
                                           rng.element(p.field));
            }
        }
        t.declared_erasures = pad_erasure_set(p, actual);
        for (std::size_t d : t.declared_erasures) {
            const auto it = std::find(actual.begin(), actual.end(), d);
            t.deltas.push_back(it == actual.end()
                                   ? std::make_pair(p.field.zero(),
                                                    p.field.zero())
                                   : actual_deltas[it - actual.begin()]);
        }
        const GhPair gh = build_gh(p, t.declared_erasures);
        const NSumBoxSpec box = build_box(gh.g, gh.h);
        t.box_input = inject_erasures(stack_answers(t.answers),
                                      t.declared_erasures, t.deltas);
        const QuantumDecoded dec = quantum_decode(box, t.box_input, p);
        t.box_output = dec.y;
        t.decoded_w = dec.w;
        t.decoded_nu = dec.nu_tail;
        t.recovered_delta1 = dec.delta1;
        t.recovered_delta2 = dec.delta2;
    } else {
        // classical path: erased answers are simply lost, no error values
        t.declared_erasures = actual;
        std::vector<std::size_t> responsive;
        for (std::size_t n = 0; n < p.n_servers; ++n)
            if (!std::binary_search(actual.begin(), actual.end(), n))
                responsive.push_back(n);
        const ClassicalDecoded dec =
            classical_decode(t.answers[0], responsive, p, 0);
        t.decoded_w = {dec.w};
        t.decoded_nu = {dec.nu};
    }
    return t;
}

// ---------------------------------------------------------------------------
// Noise-coefficient structure (the algebraic footprint of X-security and
// T-privacy): for any X servers the storage-noise coefficients form an
// invertible Vandermonde in (f_l - alpha_n); likewise for queries with the
// extra factor (f_l - alpha_n).
// ---------------------------------------------------------------------------

inline Mat storage_noise_coefficients(const SchemeParams& p,
                                      std::size_t instance, std::size_t block,
                                      const std::vector<std::size_t>& servers) {
    Mat out(p.field, servers.size(), p.x_secure);
    for (std::size_t r = 0; r < servers.size(); ++r) {
        const Fe b = p.points.f[block] - p.points.alpha[servers[r]];
        for (std::size_t xp = 0; xp < p.x_secure; ++xp)
            out(r, xp) = b.pow(xp);
    }
    (void)instance;
    return out;
}

inline Mat query_noise_coefficients(const SchemeParams& p,
                                    std::size_t instance, std::size_t block,
                                    const std::vector<std::size_t>& servers) {
    const std::size_t t_eff = p.per_instance[instance].t_effective;
    Mat out(p.field, servers.size(), t_eff);
    for (std::size_t r = 0; r < servers.size(); ++r) {
        const Fe b = p.points.f[block] - p.points.alpha[servers[r]];
        for (std::size_t tp = 0; tp < t_eff; ++tp)
            out(r, tp) = b.pow(tp + 1);
    }
    return out;
}

} // namespace qecsa
