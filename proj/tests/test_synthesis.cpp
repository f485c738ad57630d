#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "qstab/errors.hpp"
#include "qstab/stabilizability.hpp"
#include "qstab/synthesis.hpp"
#include "qstab/verifier.hpp"

using namespace qstab;

TEST_CASE("point transfer example: winding, phase and amplitude") {
    const SystemParams params(1.0, 0.1);
    const BlochPoint p0(kHalfPi, 0.0), pf(0.0, 0.0);
    // brute force: smallest k with a positive transfer phase and amplitude within g0
    const double c = kPi / 4;
    int k_ref = 0;
    for (int k = 0; k < 100; ++k) {
        const double phase = 2 * kPi * k + kPi * std::cos(c);
        if (phase > 0 && kPi * std::sin(c) / phase <= 0.1) {
            k_ref = k;
            break;
        }
    }
    CHECK(k_ref == 4);
    const SynthesisResult r = synth_point_hold(p0, pf, params, 0.0);
    REQUIRE(r.design.k_fap);
    CHECK(*r.design.k_fap == k_ref);
    CHECK(*r.design.phi_fap == doctest::Approx(8 * kPi + kPi * std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(*r.design.phi_fap == doctest::Approx(27.354).epsilon(1e-4));
    CHECK(r.design.g == doctest::Approx(0.0812).epsilon(1e-3));
    CHECK(r.design.g <= 0.1);
    CHECK(r.t_f - r.t0 == doctest::Approx(27.354).epsilon(1e-4));
    const oracle::Vec end = run_pulse(r.pulse, 1.0, amplitudes(p0), r.t_f, 1e-3);
    CHECK(overlap(end, amplitudes(pf)) >= 1 - 1e-6);
}

TEST_CASE("hold controls are an equilibrium") {
    const SystemParams params(1.0, 1.0);
    const Controls u = hold_controls(BlochPoint(kPi / 4, 0.0), params);
    CHECK(u.ux == doctest::Approx(1.0));
    CHECK(u.uy == doctest::Approx(0.0));
    CHECK(is_equilibrium(effective_hamiltonian(params, u.ux, u.uy), bloch_to_state(BlochPoint(kPi / 4, 0.0))));
    const Controls v = hold_controls(BlochPoint(kPi / 4, kHalfPi), params);
    CHECK(v.ux == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.uy == doctest::Approx(1.0));
    CHECK_THROWS_AS(synth_point_hold(BlochPoint(1.0, 0.0), BlochPoint(kHalfPi, 0.0), params, 0.0),
                    NotStabilizable);
}

TEST_CASE("point transfer reaches and holds random stabilizable targets (property)") {
    const SystemParams params(1.0, 0.8);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi);
    int done = 0;
    while (done < 25) {
        const BlochPoint p0(th(rng), ph(rng)), pf(th(rng), ph(rng));
        if (!check_point_stabilizable(pf, params)) continue;
        ++done;
        const SynthesisResult r = synth_point_hold(p0, pf, params, 0.5);
        CHECK(std::abs(r.design.g) <= params.g0());
        const oracle::Vec at_tf = run_pulse(r.pulse, 1.0, amplitudes(p0), r.t_f, 2e-3);
        CHECK(overlap(at_tf, amplitudes(pf)) >= 1 - 1e-6);
        const oracle::Vec later = run_pulse(r.pulse, 1.0, amplitudes(p0), r.t_f + 3 * kTwoPi, 2e-3);
        CHECK(overlap(later, amplitudes(pf)) >= 1 - 1e-6);
    }
}

TEST_CASE("identity transfer degenerates to a hold") {
    const SystemParams params(1.0, 1.0);
    const BlochPoint p(0.3, 1.0);
    const SynthesisResult r = synth_point_hold(p, p, params, 2.0);
    CHECK(r.t_f == 2.0);
    CHECK(r.pulse.segments().size() == 1);
}

TEST_CASE("envelope transfer: intermediate state, area and storage drift") {
    const SystemParams params(1.0, 0.5);
    const BlochPoint p0(0.0, 0.0), pf(kPi, 0.0);
    const int n = 10;
    const SynthesisResult r = synth_circle_continuous(p0, pf, params, 0.0, n);
    const double t1 = *r.design.t1;
    CHECK((n / (n + 1.0)) * r.design.g * (r.t_f - t1) == doctest::Approx(5 * kPi).epsilon(1e-13));
    // the envelope area is also the integral of the amplitude profile
    const auto& env = std::get<Envelope>(r.pulse.segments()[r.pulse.segment_index(t1)]);
    const double area = oracle::simpson([&env](double t) { return envelope_amplitude(env, t); }, t1, r.t_f, 200000);
    CHECK(area == doctest::Approx(5 * kPi).epsilon(1e-9));

    const BlochPoint q0(0.9, 2.1), qf(2.2, 4.0);
    const SynthesisResult s = synth_circle_continuous(q0, qf, params, 0.0, minimal_envelope_order(params, false));
    const oracle::Vec at_t1 = run_pulse(s.pulse, 1.0, amplitudes(q0), *s.design.t1, 1e-3);
    oracle::Vec expect(2);
    expect << std::cos(0.45), oracle::C(0.0, std::sin(0.45));
    CHECK(overlap(at_t1, expect) >= 1 - 1e-7);
    const oracle::Vec at_tf = run_pulse(s.pulse, 1.0, amplitudes(q0), s.t_f, 1e-3);
    CHECK(overlap(at_tf, amplitudes(qf)) >= 1 - 1e-6);
    for (double dt : {1.0, 17.0, 10 * kTwoPi}) {
        const oracle::Vec later = run_pulse(s.pulse, 1.0, amplitudes(q0), s.t_f + dt, 1e-3);
        const BlochPoint drifted(2.2, 4.0 - 1.0 * dt);
        CHECK(overlap(later, amplitudes(drifted)) >= 1 - 1e-6);
    }
}

TEST_CASE("envelope order and amplitude bound") {
    const SystemParams params(1.0, 0.5);
    CHECK(minimal_envelope_order(params, false) == 17);
    CHECK(minimal_envelope_order(params, true) == 5);
    CHECK(minimal_envelope_order(SystemParams(1.0, 0.3), false) == 27);
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi);
    for (int k = 0; k < 200; ++k) {
        const BlochPoint p0(th(rng), ph(rng)), pf(th(rng), ph(rng));
        const SynthesisResult r = synth_circle_continuous(p0, pf, params, 0.0, 17);
        CHECK(std::abs(r.design.g) <= params.g0());
        const SynthesisResult b = synth_circle_case_plan(p0, pf, params, 0.0);
        CHECK(std::abs(b.design.g) <= params.g0());
    }
}

TEST_CASE("time bounds") {
    const SystemParams unit(1.0, 1.0);
    CHECK(transition_time_bound(std::nullopt, unit, ControlClass::BoundedContinuous) ==
          doctest::Approx(12 * kPi));
    CHECK(transition_time_bound(std::nullopt, unit, ControlClass::Bounded) == doctest::Approx(9 * kPi));
    CHECK(transition_time_bound(SignPair{false, true}, unit, ControlClass::BoundedContinuous) ==
          doctest::Approx(9 * kPi));
    CHECK(budget_case(SignPair{false, false}) == 1);
    CHECK(budget_case(SignPair{true, true}) == 4);

    const SystemParams params(1.0, 0.5);
    // case 1: phi0 = 0, theta descending
    const BlochPoint a0(kPi, 0.0), af(kHalfPi, 0.0);
    const SynthesisResult a = synth_circle_case_plan(a0, af, params, 0.0);
    CHECK(*a.design.budget_case == 1);
    CHECK(a.t_f - a.t0 <= 4 * kPi / 0.5 + 8 * kPi);
    // case 4 needs phi0 >= pi/2 off the pole
    const BlochPoint b0(1e-3, kPi), bf(kHalfPi, 0.0);
    const SynthesisResult b = synth_circle_case_plan(b0, bf, params, 0.0);
    CHECK(*b.design.budget_case == 4);
    CHECK(b.t_f - b.t0 <= kPi / 0.5 + 6 * kPi);
    const oracle::Vec end = run_pulse(b.pulse, 1.0, amplitudes(b0), b.t_f, 1e-3);
    CHECK(overlap(end, amplitudes(bf)) >= 1 - 1e-6);
    // at the pole the phase is canonically zero, so the same request is case 2
    const SynthesisResult c = synth_circle_case_plan(BlochPoint(0.0, kPi), bf, params, 0.0);
    CHECK(*c.design.budget_case == 2);

    CHECK_THROWS_AS(synth_circle_within_budget(a0, af, params, 0.0, 4 * kPi / 0.5 + 8 * kPi - 1e-9),
                    TimeBudgetInfeasible);
    CHECK_NOTHROW(synth_circle_within_budget(a0, af, params, 0.0, 4 * kPi / 0.5 + 8 * kPi));
}

TEST_CASE("time-energy feasibility example") {
    const SystemParams params(1.0, 1.0);
    const BlochPoint p(0.0, 0.0);
    const auto ks = feasible_k_time_energy(p, p, params, 7 * kPi, kPi);
    CHECK(std::find(ks.begin(), ks.end(), 2) != ks.end());
    const TimeEnergyBounds b = time_energy_bounds(p, p, 1.0, 7 * kPi, kPi);
    CHECK(b.energy_lower == doctest::Approx(-0.5));
    CHECK(b.time_upper == doctest::Approx(3.0));
    CHECK(fap_phase(p, p, 2) == doctest::Approx(5 * kPi));
    const SynthesisResult r = synth_time_energy(p, p, params, 0.0, 7 * kPi, kPi);
    CHECK(pulse_energy(r.pulse, r.t0, r.t_f) <= kPi);
    CHECK(r.t_f - r.t0 <= 7 * kPi);
    CHECK_THROWS_AS(feasible_k_time_energy(p, p, params, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(synth_time_energy(BlochPoint(1.0, 0.0), BlochPoint(2.0, 1.0), params, 0.0, 0.1, 0.1),
                    TimeBudgetInfeasible);
}

TEST_CASE("transfer energy closed form and the energy inequality (property)") {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi), es(0.1, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        const BlochPoint p0(th(rng), ph(rng)), pf(th(rng), ph(rng));
        const double w0 = 1.3;
        const int k = 1 + trial % 4;
        if (!(fap_phase(p0, pf, k) > 0)) continue;
        const Resonant r = resonant_transfer(p0, pf, w0, k, 0.0);
        const double numeric = oracle::simpson(
            [&r](double t) {
                const Controls u = segment_controls(r, t);
                return u.ux * u.ux + u.uy * u.uy;
            },
            r.t_start, r.t_end, 2000);
        CHECK(resonant_transfer_energy(p0, pf, w0, k) == doctest::Approx(numeric).epsilon(1e-10));
        const double budget = es(rng);
        const TimeEnergyBounds b = time_energy_bounds(p0, pf, w0, 1.0, budget);
        const double energy = resonant_transfer_energy(p0, pf, w0, k);
        if (std::abs(energy - budget) > 1e-9 * budget) CHECK((energy <= budget) == (k >= b.energy_lower));
    }
}

TEST_CASE("minimal winding, storage and bound compliance (property)") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, kTwoPi), ratio(0.05, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        const SystemParams params(1.0, ratio(rng));
        const BlochPoint p0(th(rng), ph(rng)), pf(th(rng), ph(rng));
        if (!check_point_stabilizable(pf, params) || p0 == pf) continue;
        const SynthesisResult r = synth_point_hold(p0, pf, params, 0.0);
        const int k = *r.design.k_fap;
        // k - 1 either has a non-positive phase or needs more than g0
        const double c = 0.5 * (p0.theta() + pf.theta());
        const double prev_phase = 2 * kPi * (k - 1) - pf.phi() + p0.phi() + kPi * std::cos(c);
        CHECK((prev_phase <= 0 || kPi * std::sin(c) / prev_phase > params.g0()));
        CHECK(check_bounds(r.pulse, params.g0()).pass);
        const Controls hold = hold_controls(pf, params);
        CHECK(commutator_norm(effective_hamiltonian(params, hold.ux, hold.uy), bloch_to_state(pf)) <= 1e-10);
    }
    const SystemParams params(1.0, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        const BlochPoint p0(th(rng), ph(rng)), pf(th(rng), ph(rng));
        const SynthesisResult r = synth_circle_continuous(p0, pf, params, 0.0, 17);
        CHECK(check_bounds(r.pulse, params.g0()).pass);
        CHECK(check_continuity(r.pulse).pass);
        for (int k = 1; k <= 5; ++k) {
            const oracle::Vec s = run_pulse(r.pulse, 1.0, amplitudes(p0), r.t_f + k * kTwoPi, 2e-3);
            CHECK(overlap(s, amplitudes(pf)) >= 1 - 1e-6);
        }
    }
}
