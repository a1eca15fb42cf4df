#pragma once

// The four-server demonstration instance over F_5 (N=4, K=2, X=T=E=1) with
// its known-good construction frozen in. Running it checks every produced
// value against the fixture, so a regression anywhere in the pipeline shows
// up as a named mismatch.

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "protocol.hpp"

namespace qecsa {

struct ExampleF5Result {
    bool ok = true;
    std::vector<std::string> failures;
    std::optional<SchemeParams> params;
    std::optional<GhPair> gh;
    std::optional<Transcript> transcript;
};

namespace detail {

inline Mat f5_expected_g(const FieldSpec& f5) {
    return Mat::from_rows(f5, {{1, 0, 0, 0},
                               {1, 1, 0, 0},
                               {1, 2, 0, 0},
                               {1, 3, 0, 0},
                               {0, 0, 4, 0},
                               {0, 0, 3, 3},
                               {0, 0, 2, 4},
                               {0, 0, 1, 3}});
}

inline Mat f5_expected_h_left(const FieldSpec& f5) {
    return Mat::from_rows(
        f5, {{4, 0}, {2, 0}, {3, 0}, {1, 0},
             {0, 1}, {0, 1}, {0, 1}, {0, 1}});
}

} // namespace detail

/// Builds and runs the F_5 demonstration instance, checking each produced
/// value against the frozen fixture. `erase_server` is 0-based; the fixture
/// H basis columns are pinned for server index 2 (the third server) and only
/// validated structurally for other choices.
inline ExampleF5Result run_example_f5(
    std::uint64_t seed = 1, std::size_t theta = 0,
    std::size_t erase_server = 2,
    std::optional<std::pair<Fe, Fe>> delta = std::nullopt) {
    ExampleF5Result result;
    auto fail = [&](const std::string& what) {
        result.ok = false;
        result.failures.push_back(what);
    };

    const FieldSpec f5(5);
    const SchemeParams p = plan_scheme(4, 2, 1, 1, 1, f5);
    result.params = p;

    if (p.regime != Regime::r1) fail("regime is not R1");
    if (p.achieved_rate() != Rational(1, 2)) fail("rate is not 1/2");

    const std::vector<Fe> expected_v{f5.element(4), f5.element(3),
                                     f5.element(2), f5.element(1)};
    if (p.mult.v != expected_v) fail("dual multipliers v != [4,3,2,1]");

    const Mat csa = csa_matrix(p.points, 2);
    const std::vector<Fe> expected_cauchy{f5.element(4), f5.element(2),
                                          f5.element(3), f5.element(1)};
    if (csa.col(0) != expected_cauchy)
        fail("Cauchy column != [4,2,3,1]");

    const GhPair gh = build_gh(p, {erase_server});
    result.gh = gh;
    if (gh.g != detail::f5_expected_g(f5)) fail("G deviates from fixture");
    if (take_cols(gh.h, {0, 1}) != detail::f5_expected_h_left(f5))
        fail("H(:,1:2) deviates from fixture");
    if (erase_server == 2) {
        Mat basis(f5, 8, 2);
        basis(2, 0) = f5.one();
        basis(6, 1) = f5.one();
        if (take_cols(gh.h, {2, 3}) != basis)
            fail("H(:,3:4) deviates from fixture");
    }

    try {
        const NSumBoxSpec box = build_box(gh.g, gh.h);
        if (!(box.transfer() * gh.g).is_zero()) fail("M G != 0");
        if (box.transfer() * gh.h != Mat::identity(f5, 4))
            fail("M H != I");
    } catch (const BoxValidationError& err) {
        fail(std::string("box rejected: ") + err.what());
    }

    std::optional<std::vector<std::pair<Fe, Fe>>> deltas;
    if (delta) deltas = std::vector<std::pair<Fe, Fe>>{*delta};
    const Transcript t =
        run_end_to_end(p, theta, seed, {erase_server}, deltas);
    result.transcript = t;

    if (!t.decode_matches_store()) fail("decoded symbols deviate from store");
    if (t.box_output.size() != 4) fail("y should have 4 entries");
    if (t.box_output[0] != t.messages.w[theta][0][0] ||
        t.box_output[1] != t.messages.w[theta][1][0])
        fail("y(1:2) is not [W^1, W^2]");
    if (t.box_output[2] != t.deltas[0].first ||
        t.box_output[3] != t.deltas[0].second)
        fail("y(3:4) is not [delta1, delta2]");
    if (t.download_qudits != 4) fail("download cost should be 4 qudits");
    return result;
}

/// Human-readable rendering used by the command line front end.
inline std::string format_example_f5(const ExampleF5Result& r) {
    std::ostringstream os;
    if (!r.params || !r.gh || !r.transcript) {
        os << "example did not complete\n";
        return os.str();
    }
    const Transcript& t = *r.transcript;
    auto render_vec = [&](const std::vector<Fe>& v) {
        os << "[";
        for (std::size_t i = 0; i < v.size(); ++i)
            os << (i ? " " : "") << v[i];
        os << "]";
    };
    auto render_mat = [&](const Mat& m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            os << "    ";
            for (std::size_t j = 0; j < m.cols(); ++j)
                os << m(i, j) << (j + 1 < m.cols() ? " " : "");
            os << "\n";
        }
    };

    os << "four-server retrieval over F_5 (N=4, K=2, X=T=E=1)\n";
    os << "  alpha = ";
    render_vec(r.params->points.alpha);
    os << ", f = ";
    render_vec(r.params->points.f);
    os << "\n  u = ";
    render_vec(r.params->mult.u);
    os << ", v = ";
    render_vec(r.params->mult.v);
    os << "\n  rate = " << r.params->achieved_rate().str() << "\n";
    os << "  G =\n";
    render_mat(r.gh->g);
    os << "  H =\n";
    render_mat(r.gh->h);
    os << "  theta = " << t.theta + 1 << ", erased server = "
       << t.declared_erasures[0] + 1 << ", deltas = (" << t.deltas[0].first
       << ", " << t.deltas[0].second << ")\n";
    os << "  x = ";
    render_vec(t.box_input);
    os << "\n  y = ";
    render_vec(t.box_output);
    os << "\n  decoded W_theta = (" << t.decoded_w[0][0] << ", "
       << t.decoded_w[1][0] << "), recovered deltas = ("
       << t.recovered_delta1[0] << ", " << t.recovered_delta2[0] << ")\n";
    if (r.ok) {
        os << "  all values match the fixture\n";
    } else {
        os << "  MISMATCHES:\n";
        for (const auto& f : r.failures) os << "    - " << f << "\n";
    }
    return os.str();
}

} // namespace qecsa
