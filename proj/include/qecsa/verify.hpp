#pragma once

// Property suites over the protocol: exhaustive correctness sweeps, exact
// share/query distribution checks at tiny scale (integer histogram equality,
// never statistics), scalable rank conditions, the column-span weight
// argument behind the erasure proof, and the GRS duality identities.
//
// Every suite is deterministic given (params, options) and returns a
// VerifyReport whose witnesses carry enough data to replay a failure.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "protocol.hpp"

namespace qecsa {

enum class VerifyMode { exhaustive, sampled, rank_condition };

inline const char* verify_mode_name(VerifyMode m) {
    switch (m) {
        case VerifyMode::exhaustive: return "exhaustive";
        case VerifyMode::sampled: return "sampled";
        case VerifyMode::rank_condition: return "rank_condition";
    }
    return "?";
}

struct VerifyOptions {
    std::uint64_t enum_cap = kDefaultEnumCap;
    std::uint64_t delta_cap = 10'000; // exhaustive deltas while q^(2s) fits
    std::uint64_t sampled_deltas = 100;
    std::uint64_t noise_seeds = 20;
    std::uint64_t base_seed = 1;
    // Negative-control taps. The suites must be able to fail; tests switch
    // these on to prove sensitivity.
    bool tamper_box_basis = false; // aim an erasure column at the wrong server
    bool strip_noise = false;      // encode with all-zero noise
};

struct VerifyReport {
    std::string suite;
    VerifyMode mode = VerifyMode::exhaustive;
    std::uint64_t enumerated = 0; // states / cells examined
    bool pass = true;
    std::vector<nlohmann::json> witnesses;
    nlohmann::json info = nlohmann::json::object();

    void add_witness(nlohmann::json w) {
        witnesses.push_back(std::move(w));
        pass = false;
    }
};

inline void to_json(nlohmann::json& j, const VerifyReport& r) {
    j = nlohmann::json{{"suite", r.suite},
                       {"mode", verify_mode_name(r.mode)},
                       {"enumerated", r.enumerated},
                       {"pass", r.pass},
                       {"witnesses", r.witnesses},
                       {"info", r.info}};
}

namespace detail {

inline std::vector<std::uint64_t> fe_values(const std::vector<Fe>& v) {
    std::vector<std::uint64_t> out;
    out.reserve(v.size());
    for (const Fe& e : v) out.push_back(e.value());
    return out;
}

// Fills storage noise from a flat digit vector, instance-major.
inline StorageNoise storage_noise_from_digits(
    const SchemeParams& p, const std::vector<std::uint64_t>& digits) {
    StorageNoise noise = zero_storage_noise(p);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l)
            for (std::size_t xp = 0; xp < p.x_secure; ++xp)
                for (std::size_t k = 0; k < p.n_messages; ++k)
                    noise.z[i][l](xp, k) = p.field.element(digits[pos++]);
    return noise;
}

inline QueryNoise query_noise_from_digits(
    const SchemeParams& p, const std::vector<std::uint64_t>& digits) {
    QueryNoise noise = zero_query_noise(p);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < p.instances(); ++i)
        for (std::size_t l = 0; l < p.per_instance[i].l_symbols; ++l)
            for (std::size_t tp = 0;
                 tp < p.per_instance[i].t_effective; ++tp)
                for (std::size_t k = 0; k < p.n_messages; ++k)
                    noise.z[i][l](tp, k) = p.field.element(digits[pos++]);
    return noise;
}

inline std::size_t storage_noise_scalars(const SchemeParams& p) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < p.instances(); ++i)
        d += p.per_instance[i].l_symbols * p.x_secure * p.n_messages;
    return d;
}

inline std::size_t query_noise_scalars(const SchemeParams& p) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < p.instances(); ++i)
        d += p.per_instance[i].l_symbols * p.per_instance[i].t_effective *
             p.n_messages;
    return d;
}

// Everything the colluding subset sees of the storage, flattened.
inline std::vector<std::uint64_t> observed_shares(
    const std::vector<ServerShare>& shares,
    const std::vector<std::size_t>& subset) {
    std::vector<std::uint64_t> key;
    for (std::size_t n : subset)
        for (const auto& inst : shares[n].s)
            for (const auto& block : inst)
                for (const Fe& e : block) key.push_back(e.value());
    return key;
}

inline std::vector<std::uint64_t> observed_queries(
    const std::vector<QueryShare>& queries,
    const std::vector<std::size_t>& subset) {
    std::vector<std::uint64_t> key;
    for (std::size_t n : subset)
        for (const auto& inst : queries[n].q)
            for (const auto& block : inst)
                for (const Fe& e : block) key.push_back(e.value());
    return key;
}

using Histogram = std::map<std::vector<std::uint64_t>, std::uint64_t>;

} // namespace detail

// ---------------------------------------------------------------------------
// Correctness
// ---------------------------------------------------------------------------

/// Decode-exactness sweep: every theta, every erasure set of size <= E,
/// exhaustive error values while q^(2s) <= delta_cap (sampled beyond), and
/// noise_seeds independent noise draws. Also checks delta recovery and the
/// rate accounting.
inline VerifyReport verify_correctness(const SchemeParams& p,
                                       const VerifyOptions& opts = {}) {
    VerifyReport report;
    report.suite = "correctness";
    report.mode = VerifyMode::exhaustive;
    report.info["rate"] = p.achieved_rate().str();
    report.info["rate_matches_planner"] =
        rate(p.n_servers, p.x_secure, p.t_private, p.erasures) ==
        p.achieved_rate();
    if (!report.info["rate_matches_planner"].get<bool>())
        report.add_witness({{"what", "rate mismatch"},
                            {"planned", p.achieved_rate().str()}});

    const std::uint64_t q = p.field.modulus();
    bool any_sampled = false;

    for (std::size_t s = 0; s <= p.erasures; ++s) {
        for_each_combination(p.n_servers, s, [&](const std::vector<std::size_t>&
                                                     erased) {
            // one box per declared erasure set on the quantum path
            std::optional<NSumBoxSpec> box;
            std::vector<std::size_t> declared;
            if (p.quantum()) {
                declared = pad_erasure_set(p, erased);
                GhPair gh = build_gh(p, declared);
                if (opts.tamper_box_basis && p.erasures > 0) {
                    // negative control: first basis column points at the
                    // wrong transmitter
                    const std::size_t col = gh.h.cols() - 2 * p.erasures;
                    const std::size_t wrong =
                        (declared.front() + 1) % p.n_servers;
                    for (std::size_t r = 0; r < gh.h.rows(); ++r)
                        gh.h(r, col) = p.field.zero();
                    gh.h(wrong, col) = p.field.one();
                }
                try {
                    box = build_box(gh.g, gh.h);
                } catch (const BoxValidationError& err) {
                    report.add_witness({{"what", "box build failed"},
                                        {"erased", erased},
                                        {"error", err.what()}});
                    return;
                }
            }

            // delta assignments for the actually erased servers
            std::vector<std::vector<std::pair<Fe, Fe>>> delta_choices;
            if (p.quantum()) {
                const auto states = checked_pow(q, 2 * s, opts.delta_cap);
                if (states) {
                    for_each_digit_vector(
                        q, 2 * s,
                        [&](const std::vector<std::uint64_t>& d,
                            const std::vector<std::size_t>&) {
                            std::vector<std::pair<Fe, Fe>> ds;
                            for (std::size_t e = 0; e < s; ++e)
                                ds.emplace_back(p.field.element(d[e]),
                                                p.field.element(d[s + e]));
                            delta_choices.push_back(std::move(ds));
                        });
                } else {
                    any_sampled = true;
                    Rng delta_rng(opts.base_seed ^ 0x5eedu);
                    for (std::uint64_t t = 0; t < opts.sampled_deltas; ++t) {
                        std::vector<std::pair<Fe, Fe>> ds;
                        for (std::size_t e = 0; e < s; ++e)
                            ds.emplace_back(delta_rng.element(p.field),
                                            delta_rng.element(p.field));
                        delta_choices.push_back(std::move(ds));
                    }
                }
            } else {
                delta_choices.emplace_back(); // classical: answers just lost
            }

            for (std::uint64_t seed = opts.base_seed;
                 seed < opts.base_seed + opts.noise_seeds; ++seed) {
                Rng rng(seed);
                const MessageStore store = random_messages(p, rng);
                const auto shares =
                    opts.strip_noise
                        ? encode_storage(store, p, zero_storage_noise(p))
                        : encode_storage(store, p, rng);
                for (std::size_t theta = 0; theta < p.n_messages; ++theta) {
                    const auto queries =
                        opts.strip_noise
                            ? make_queries(theta, p, zero_query_noise(p))
                            : make_queries(theta, p, rng);
                    const auto answers = server_answers(shares, queries, p);

                    for (const auto& deltas : delta_choices) {
                        ++report.enumerated;
                        std::vector<std::vector<Fe>> got;
                        std::vector<Fe> got_d1, got_d2;
                        if (p.quantum()) {
                            const auto x = inject_erasures(
                                stack_answers(answers), erased, deltas);
                            const QuantumDecoded dec =
                                quantum_decode(*box, x, p);
                            got = dec.w;
                            got_d1 = dec.delta1;
                            got_d2 = dec.delta2;
                        } else {
                            std::vector<std::size_t> responsive;
                            for (std::size_t n = 0; n < p.n_servers; ++n)
                                if (std::find(erased.begin(), erased.end(),
                                              n) == erased.end())
                                    responsive.push_back(n);
                            got = {classical_decode(answers[0], responsive,
                                                    p, 0)
                                       .w};
                        }

                        bool ok = true;
                        for (std::size_t i = 0; i < p.instances(); ++i)
                            ok = ok && got[i] == store.w[theta][i];
                        if (ok && p.quantum()) {
                            // recovered deltas must be the injected ones on
                            // actual erasures and zero on padding
                            for (std::size_t d = 0;
                                 d < declared.size() && ok; ++d) {
                                const auto it =
                                    std::find(erased.begin(), erased.end(),
                                              declared[d]);
                                const Fe want1 =
                                    it == erased.end()
                                        ? p.field.zero()
                                        : deltas[it - erased.begin()].first;
                                const Fe want2 =
                                    it == erased.end()
                                        ? p.field.zero()
                                        : deltas[it - erased.begin()].second;
                                ok = got_d1[d] == want1 && got_d2[d] == want2;
                            }
                        }
                        if (!ok) {
                            nlohmann::json w{
                                {"theta", theta},
                                {"seed", seed},
                                {"erased", erased},
                                {"expected", nlohmann::json::array()},
                                {"decoded", nlohmann::json::array()}};
                            for (std::size_t i = 0; i < p.instances(); ++i) {
                                w["expected"].push_back(
                                    detail::fe_values(store.w[theta][i]));
                                w["decoded"].push_back(
                                    detail::fe_values(got[i]));
                            }
                            nlohmann::json dj = nlohmann::json::array();
                            for (const auto& dpair : deltas)
                                dj.push_back({dpair.first.value(),
                                              dpair.second.value()});
                            w["deltas"] = dj;
                            report.add_witness(std::move(w));
                        }
                    }
                }
            }
        });
    }
    if (any_sampled) report.mode = VerifyMode::sampled;
    return report;
}

// ---------------------------------------------------------------------------
// X-security and T-privacy
// ---------------------------------------------------------------------------

/// Exhaustive mode: for every X-subset of servers, the joint distribution of
/// observed shares over all noise realizations must be identical for two
/// different message stores — exact integer histogram equality.
/// Rank-condition mode: the X x X noise coefficient matrix is invertible for
/// every subset and block, which is the algebraic reason the histograms
/// match at any scale.
inline VerifyReport verify_x_security(const SchemeParams& p, VerifyMode mode,
                                      const VerifyOptions& opts = {}) {
    VerifyReport report;
    report.suite = "x_security";
    report.mode = mode;
    if (p.x_secure == 0) {
        report.info["note"] = "X = 0: nothing to check";
        return report;
    }
    if (mode == VerifyMode::sampled)
        throw std::invalid_argument(
            "verify_x_security: sampled mode cannot certify exact "
            "distribution equality; use exhaustive or rank_condition");

    if (mode == VerifyMode::rank_condition) {
        for_each_combination(
            p.n_servers, p.x_secure,
            [&](const std::vector<std::size_t>& subset) {
                for (std::size_t i = 0; i < p.instances(); ++i)
                    for (std::size_t l = 0;
                         l < p.per_instance[i].l_symbols; ++l) {
                        ++report.enumerated;
                        if (!try_inverse(storage_noise_coefficients(
                                             p, i, l, subset))
                                 .has_value())
                            report.add_witness(
                                {{"what", "singular noise coefficients"},
                                 {"subset", subset},
                                 {"instance", i},
                                 {"block", l}});
                    }
            });
        return report;
    }

    const std::size_t digits = detail::storage_noise_scalars(p);
    const auto states =
        checked_pow(p.field.modulus(), digits, opts.enum_cap);
    if (!states)
        throw EnumerationCapExceeded(
            opts.enum_cap, std::to_string(p.field.modulus()) + "^" +
                               std::to_string(digits) + " noise states");

    const MessageStore w0 = constant_messages(p, p.field.zero());
    const MessageStore w1 = constant_messages(p, p.field.one());

    for_each_combination(p.n_servers, p.x_secure,
                         [&](const std::vector<std::size_t>& subset) {
        detail::Histogram h0, h1;
        auto tally = [&](const MessageStore& store, detail::Histogram& h) {
            for_each_digit_vector(
                p.field.modulus(), opts.strip_noise ? 0 : digits,
                [&](const std::vector<std::uint64_t>& d,
                    const std::vector<std::size_t>&) {
                    StorageNoise noise =
                        opts.strip_noise
                            ? zero_storage_noise(p)
                            : detail::storage_noise_from_digits(p, d);
                    const auto shares = encode_storage(store, p, noise);
                    ++h[detail::observed_shares(shares, subset)];
                    ++report.enumerated;
                });
        };
        tally(w0, h0);
        tally(w1, h1);
        if (h0 != h1)
            report.add_witness(
                {{"what", "share distributions differ"},
                 {"subset", subset},
                 {"distinct_keys_w0", h0.size()},
                 {"distinct_keys_w1", h1.size()}});
    });
    return report;
}

/// Same shape as verify_x_security, for query distributions across every
/// desired message index.
inline VerifyReport verify_t_privacy(const SchemeParams& p, VerifyMode mode,
                                     const VerifyOptions& opts = {}) {
    VerifyReport report;
    report.suite = "t_privacy";
    report.mode = mode;
    if (mode == VerifyMode::sampled)
        throw std::invalid_argument(
            "verify_t_privacy: sampled mode cannot certify exact "
            "distribution equality; use exhaustive or rank_condition");

    const std::size_t t_subset = p.t_private;
    if (t_subset == 0) {
        report.info["note"] = "T = 0: nothing to check";
        return report;
    }

    if (mode == VerifyMode::rank_condition) {
        for_each_combination(
            p.n_servers, t_subset,
            [&](const std::vector<std::size_t>& subset) {
                for (std::size_t i = 0; i < p.instances(); ++i)
                    for (std::size_t l = 0;
                         l < p.per_instance[i].l_symbols; ++l) {
                        ++report.enumerated;
                        // any T_i rows: take the subset rows of the
                        // T_i-column coefficient matrix; T <= T_i always
                        Mat coeff = query_noise_coefficients(p, i, l, subset);
                        if (rank(coeff) < subset.size())
                            report.add_witness(
                                {{"what", "rank-deficient query noise"},
                                 {"subset", subset},
                                 {"instance", i},
                                 {"block", l}});
                    }
            });
        return report;
    }

    const std::size_t digits = detail::query_noise_scalars(p);
    const auto states =
        checked_pow(p.field.modulus(), digits, opts.enum_cap);
    if (!states)
        throw EnumerationCapExceeded(
            opts.enum_cap, std::to_string(p.field.modulus()) + "^" +
                               std::to_string(digits) + " noise states");

    for_each_combination(p.n_servers, t_subset,
                         [&](const std::vector<std::size_t>& subset) {
        std::vector<detail::Histogram> hists(p.n_messages);
        for (std::size_t theta = 0; theta < p.n_messages; ++theta) {
            for_each_digit_vector(
                p.field.modulus(), opts.strip_noise ? 0 : digits,
                [&](const std::vector<std::uint64_t>& d,
                    const std::vector<std::size_t>&) {
                    QueryNoise noise =
                        opts.strip_noise
                            ? zero_query_noise(p)
                            : detail::query_noise_from_digits(p, d);
                    const auto queries = make_queries(theta, p, noise);
                    ++hists[theta][detail::observed_queries(queries, subset)];
                    ++report.enumerated;
                });
        }
        for (std::size_t theta = 1; theta < p.n_messages; ++theta)
            if (hists[theta] != hists[0]) {
                report.add_witness(
                    {{"what", "query distributions depend on theta"},
                     {"subset", subset},
                     {"theta", theta}});
                break;
            }
    });
    return report;
}

// ---------------------------------------------------------------------------
// Weight bounds behind erasure recovery
// ---------------------------------------------------------------------------

/// Checks, by exhaustive enumeration, the three facts that make [G H]
/// invertible: (a) the nonzero column span of [G H_left] has symplectic
/// weight at least E+1, (b) the span of the erasure basis block stays within
/// weight E, and (c) rank([G H]) = 2N. This overload takes a prebuilt pair,
/// which is how negative controls feed in corrupted matrices.
inline VerifyReport verify_lemma1(const SchemeParams& p, const GhPair& gh,
                                  const VerifyOptions& opts = {}) {
    VerifyReport report;
    report.suite = "lemma1";
    report.mode = VerifyMode::exhaustive;
    const std::size_t n = p.n_servers;
    const std::size_t e = p.erasures;

    std::vector<std::size_t> left_cols(n - 2 * e), right_cols(2 * e);
    for (std::size_t j = 0; j < left_cols.size(); ++j) left_cols[j] = j;
    for (std::size_t j = 0; j < right_cols.size(); ++j)
        right_cols[j] = n - 2 * e + j;
    const Mat left = hstack({gh.g, take_cols(gh.h, left_cols)});
    const Mat right = take_cols(gh.h, right_cols);

    const std::size_t min_left = min_swt_colspan(left, opts.enum_cap);
    report.enumerated +=
        *checked_pow(p.field.modulus(), left.cols(), opts.enum_cap);
    report.info["min_swt_left"] = min_left;
    if (min_left < e + 1)
        report.add_witness({{"what", "stabilizer/interference span too light"},
                            {"min_swt", min_left},
                            {"required_at_least", e + 1}});

    if (e > 0) {
        const std::size_t max_right = max_swt_colspan(right, opts.enum_cap);
        report.enumerated +=
            *checked_pow(p.field.modulus(), right.cols(), opts.enum_cap);
        report.info["max_swt_right"] = max_right;
        if (max_right > e)
            report.add_witness({{"what", "erasure basis span too heavy"},
                                {"max_swt", max_right},
                                {"allowed_at_most", e}});
    }

    const std::size_t r = rank(hstack({gh.g, gh.h}));
    report.info["rank_gh"] = r;
    if (r != 2 * n)
        report.add_witness(
            {{"what", "[G H] rank deficient"}, {"rank", r}, {"need", 2 * n}});
    return report;
}

inline VerifyReport verify_lemma1(const SchemeParams& p,
                                  const std::vector<std::size_t>& erasure_set,
                                  const VerifyOptions& opts = {}) {
    return verify_lemma1(p, build_gh(p, erasure_set), opts);
}

// ---------------------------------------------------------------------------
// Duality identities
// ---------------------------------------------------------------------------

/// Power sums sum_n u_n v_n alpha_n^m must vanish for m <= N-2 and not for
/// m = N-1; equivalently the leading GRS prefix of u is orthogonal to the
/// trailing prefix of its dual.
inline VerifyReport verify_duality(const std::vector<Fe>& alpha,
                                   const std::vector<Fe>& u) {
    VerifyReport report;
    report.suite = "duality";
    report.mode = VerifyMode::exhaustive;
    const std::size_t n = alpha.size();
    const FieldSpec field = alpha.front().field();
    const std::vector<Fe> v = dual_multipliers(alpha, u);

    for (std::size_t m = 0; m < n; ++m) {
        Fe sum = field.zero();
        for (std::size_t i = 0; i < n; ++i)
            sum += u[i] * v[i] * alpha[i].pow(m);
        ++report.enumerated;
        if (m + 1 < n && !sum.is_zero())
            report.add_witness({{"what", "power sum nonzero"},
                                {"m", m},
                                {"sum", sum.value()}});
        if (m + 1 == n && sum.is_zero())
            report.add_witness(
                {{"what", "top power sum vanished"}, {"m", m}});
    }

    if (n >= 2) {
        const Mat gamma_u = grs_matrix(alpha, u, (n + 1) / 2);
        const Mat gamma_v = grs_matrix(alpha, v, n / 2);
        const Mat gram = transpose(gamma_u) * gamma_v;
        ++report.enumerated;
        if (!gram.is_zero())
            report.add_witness({{"what", "GRS prefixes not orthogonal"}});
    }
    return report;
}

// ---------------------------------------------------------------------------
// Rate table
// ---------------------------------------------------------------------------

struct RateCase {
    std::size_t n, x, t, e;
    Rational expected;
};

inline std::uint64_t next_prime_at_least(std::uint64_t v) {
    while (!detail::is_prime_u64(v)) ++v;
    return v;
}

/// Each case's formula value must match `expected`, and a planned scheme
/// must deliver exactly that many symbols per N downloads.
inline VerifyReport verify_rate_table(const std::vector<RateCase>& cases) {
    VerifyReport report;
    report.suite = "rate_table";
    report.mode = VerifyMode::exhaustive;
    for (const RateCase& c : cases) {
        ++report.enumerated;
        const Rational got = rate(c.n, c.x, c.t, c.e);
        if (got != c.expected) {
            report.add_witness({{"what", "rate formula mismatch"},
                                {"N", c.n},
                                {"X", c.x},
                                {"T", c.t},
                                {"E", c.e},
                                {"got", got.str()},
                                {"expected", c.expected.str()}});
            continue;
        }
        const FieldSpec field(next_prime_at_least(2 * c.n));
        const SchemeParams p = plan_scheme(c.n, 2, c.x, c.t, c.e, field);
        if (p.achieved_rate() != got)
            report.add_witness({{"what", "planner delivers a different rate"},
                                {"N", c.n},
                                {"planned", p.achieved_rate().str()},
                                {"formula", got.str()}});
    }
    return report;
}

/// Sweeps every constructible (N, X, T, E) with N <= n_max and checks the
/// planner against the closed form.
inline VerifyReport verify_rate_sweep(std::size_t n_max) {
    VerifyReport report;
    report.suite = "rate_sweep";
    report.mode = VerifyMode::exhaustive;
    for (std::size_t n = 2; n <= n_max; ++n)
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t t = 0; x + t < n; ++t)
                for (std::size_t e = 0; x + t + e < n; ++e) {
                    ++report.enumerated;
                    const FieldSpec field(next_prime_at_least(2 * n));
                    const SchemeParams p =
                        plan_scheme(n, 2, x, t, e, field);
                    if (p.achieved_rate() != rate(n, x, t, e))
                        report.add_witness({{"what", "planner/formula split"},
                                            {"N", n},
                                            {"X", x},
                                            {"T", t},
                                            {"E", e}});
                }
    return report;
}

} // namespace qecsa
