// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cfq/bounds.hpp"
#include "cfq/counterfactual.hpp"
#include "cfq/discriminate.hpp"
#include "cfq/scenarios.hpp"
#include "support/convert.hpp"
#include "support/oracle.hpp"

using namespace cfq;
using testing_support::to_basis;
using testing_support::to_density;
using testing_support::to_state;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
    void near(double got, double want, double tol, const std::string& what) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: got %.15g, want %.15g", what.c_str(), got, want);
        require(std::abs(got - want) <= tol, buf);
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double q(const GainSummary& s, const std::string& key) { return lookup_quantity(s, key).value_or(std::nan("")); }

Check ev_scenario_values() {
    Check c;
    const auto t0 = Clock::now();
    const GainSummary s = ev_scenario(Fraction{1, 3}, 9).report();
    const double elapsed = seconds_since(t0);
    c.near(q(s, "gain"), 2.0 / 9.0, 1e-10, "gain");
    c.near(q(s, "m1.p_m_given_block"), 2.0 / 9.0, 1e-10, "P(m1|X_a)");
    for (int k = 2; k <= 9; ++k) c.near(q(s, "m" + std::to_string(k) + ".p_m_given_block"), 1.0 / 18.0, 1e-10, "P(mi|X_a)");
    c.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
    c.detail = c.ok ? "gain 2/9, P(m1|X_a) 2/9, P(mi|X_a) 1/18; " + std::to_string(elapsed) + " s" : c.detail;
    return c;
}

Check kd_scenario_values() {
    Check c;
    const GainSummary s = kd_scenario().report();
    for (int k = 1; k <= 9; ++k) c.near(q(s, "m" + std::to_string(k) + ".p_m"), 1.0 / 9.0, 1e-10, "P(mi)");
    c.near(q(s, "m1.kd"), -1.0 / 9.0, 1e-10, "kd(a,m1)");
    c.near(q(s, "gain"), 1.0 / 3.0, 1e-10, "gain");
    c.near(q(s, "m1.p_m_given_block"), 4.0 / 9.0, 1e-10, "P(m1|X_a)");
    for (int k = 2; k <= 9; ++k) c.near(q(s, "m" + std::to_string(k) + ".p_m_given_block"), 1.0 / 36.0, 1e-10, "P(mi|X_a)");
    c.near(q(s, "m1.posterior_present"), 0.8, 1e-10, "posterior");
    if (c.ok) c.detail = "P(mi) 1/9, kd -1/9, gain 1/3, P(m1|X_a) 4/9, P(mi|X_a) 1/36, posterior 0.8";
    return c;
}

Check three_path_values() {
    Check c;
    const GainSummary s = three_path_scenario().report();
    const double kd[] = {1.0 / 9.0, 1.0 / 9.0, -1.0 / 9.0};
    const double given[] = {4.0 / 27.0, 4.0 / 27.0, 16.0 / 27.0};
    for (int k = 0; k < 3; ++k) {
        const std::string l = std::to_string(k + 1);
        c.near(q(s, l + ".kd"), kd[k], 1e-10, l + ".kd");
        c.near(q(s, l + ".ev"), 1.0 / 27.0, 1e-10, l + ".ev");
        c.near(q(s, l + ".p_m_given_block"), given[k], 1e-10, l + ".p_m_given_block");
    }
    c.near(q(s, "D2.p_m_given_block"), 2.0 / 27.0, 1e-10, "P(D2|X_F)");
    c.near(q(s, "3.gain_contribution"), 7.0 / 27.0, 1e-10, "output-3 gain");
    c.near(q(s, "3.gain_contribution") / q(s, "D2.gain_contribution"), 3.5, 1e-10, "ratio to D2 gain");
    if (c.ok) c.detail = "kd (1/9,1/9,-1/9), ev 1/27, P(m|X_F) (4/27,4/27,16/27), P(D2|X_F) 2/27, 7/27, ratio 3.5";
    return c;
}

Check bound_curve() {
    Check c;
    c.near(max_gain_bound(1.0 / 3.0), 1.0 / 3.0, 1e-15, "max_gain_bound(1/3)");
    double best = -1.0;
    double at = -1.0;
    for (int k = 0; k <= 10000; ++k) {
        const double p = k / 10000.0;
        if (max_gain_bound(p) > best) best = max_gain_bound(p), at = p;
    }
    c.require(best <= max_gain_bound(1.0 / 3.0) && std::abs(at - 1.0 / 3.0) <= 1e-4, "grid maximum not at 1/3");
    c.near(ev_gain_bound(0.5), 0.25, 1e-15, "ev_gain_bound(1/2)");
    std::string worst;
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8}) {
        const BoundResult r = optimize_gain(p, 9, GainFamily::no_false_positives);
        c.near(r.achieved_value, ev_gain_bound(p), 1e-6, "restricted optimizer at p=" + std::to_string(p));
    }
    if (c.ok) c.detail = "max at 1/3 on 1e-4 grid, ev bound 1/4 at 1/2, restricted optimizer saturates at 0.2, 1/3, 0.5, 0.8";
    return c;
}

Check property_suite() {
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20261016);
    const int cases = 2000;
    int sufficient_fired = 0;
    for (int t = 0; t < cases && c.ok; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t) % 8;
        const oracle::Ensemble e = t % 2 ? oracle::random_mixed(d, rng) : oracle::random_pure(d, rng);
        const oracle::Vec a = oracle::random_vector(d, rng);
        const auto outs = oracle::random_basis(d, rng);
        const DensityMatrix rho = to_density(e);
        const PureState as = to_state(a);
        const GainSummary s = full_report(rho, as, to_basis(outs));
        const std::string at = "case " + std::to_string(t);

        double sum_kd = 0.0, sum_chi = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const auto& o = s.outcomes[k];
            const auto& m = outs[k];
            // Identities, each side recomputed by the oracle.
            c.near(o.p_m_given_block, oracle::p_m_blocked(e, a, m), 1e-12, at + " P(m|X_a) vs oracle");
            c.near(o.p_m_given_block, oracle::p_m(e, m) - 2.0 * oracle::kd(e, a, m) + oracle::ev(e, a, m), 1e-12,
                   at + " P(m|X_a) = P(m) - 2kd + ev");
            c.near(o.p_m_given_block, (o.p_m - o.kd) + o.chi_b / 2.0, 1e-12, at + " P(m|X_a) = (P(m) - kd) + chi/2");
            c.near(o.chi_b, 2.0 * (oracle::ev(e, a, m) - oracle::kd(e, a, m)), 1e-12, at + " chi_B");
            sum_kd += o.kd;
            sum_chi += o.chi_b;
            const KdBoundCheck b = kd_bound_check(rho, as, to_state(m));
            c.require(b.holds, at + " KD bound");
            c.require(std::abs(oracle::kd(e, a, m)) <= std::sqrt(oracle::p_m(e, m) * oracle::ev(e, a, m)) + 1e-12,
                      at + " KD bound (oracle)");
            if (sufficient_gain_condition(rho, as, to_state(m))) {
                ++sufficient_fired;
                c.require(gain_condition(rho, as, to_state(m)), at + " sufficient condition without gain");
            }
        }
        c.near(sum_kd, oracle::p_m(e, a), 1e-12, at + " KD marginal");
        c.near(sum_chi, 0.0, 1e-12, at + " sum chi_B");
        c.require(s.gain <= max_gain_bound(std::min(1.0, s.p_a)) + 1e-9, at + " gain above max_gain_bound");
        c.require(check_identities(s).empty(), at + " report identities");
    }
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
    if (c.ok) {
        c.detail = std::to_string(cases) + " random pure/mixed cases, dims 2-9, 0 violations; sufficient condition hit " +
                   std::to_string(sufficient_fired) + " times; " + std::to_string(elapsed) + " s";
    }
    return c;
}

Check monte_carlo() {
    Check c;
    std::string summary;
    for (const char* name : {"kd9", "three-path", "mixture"}) {
        const Scenario s = make_scenario(name);
        const auto t0 = Clock::now();
        const GameEstimate g = simulate_game(s, 1000000, 2026);
        const double elapsed = seconds_since(t0);
        const GameEstimate again = simulate_game(s, 1000000, 2026);
        const double z = (g.empirical_error - g.analytic_error) / g.std_error;
        c.require(std::abs(z) <= 5.0, std::string(name) + " deviation " + std::to_string(z) + " sigma");
        c.require(g.errors == again.errors, std::string(name) + " not deterministic");
        c.require(elapsed < 10.0, std::string(name) + " runtime " + std::to_string(elapsed) + " s");
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s %+.2f sigma (%.2f s)", name, z, elapsed);
        summary += (summary.empty() ? "" : ", ") + std::string(buf);
    }
    if (c.ok) c.detail = summary + "; reruns identical";
    return c;
}

Check eigenstate_blocking() {
    Check c;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100 && c.ok; ++t) {
        const std::size_t d = 2 + static_cast<std::size_t>(t) % 8;
        const oracle::Vec a = oracle::random_vector(d, rng);
        const double p = u(rng);
        const GainSummary s =
            full_report(to_density(oracle::eigen_blocking(a, p, rng)), to_state(a), to_basis(oracle::random_basis(d, rng)));
        const std::string at = "case " + std::to_string(t);
        c.near(s.gain, 0.0, 1e-10, at + " gain");
        c.near(s.delta_a, s.p_a, 1e-10, at + " delta_a - P(a)");
        c.near(s.p_a, p, 1e-10, at + " P(a)");
        for (const auto& o : s.outcomes) c.near(o.chi_b, 0.0, 1e-10, at + " chi_B");
    }
    if (c.ok) c.detail = "100 constructed cases: gain 0, delta_a = P(a), chi_B 0";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"1 ev scenario", ev_scenario_values},
        {"2 kd scenario", kd_scenario_values},
        {"3 three-path scenario", three_path_values},
        {"4 bound curve and optimizer", bound_curve},
        {"5 property suite", property_suite},
        {"6 monte carlo oracle", monte_carlo},
        {"7 eigenstate blocking", eigenstate_blocking},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check c;
        try {
            c = run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += c.ok ? 0 : 1;
        std::printf("[%s] %s: %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
