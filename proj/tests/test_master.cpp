#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cavitycat/fock.hpp"
#include "cavitycat/master.hpp"
#include "cavitycat/protocol.hpp"

using namespace cavitycat;
using std::numbers::pi;

namespace {

// <a'| L_t(|a><b|) |b'> from the truncated Fock integrator, with a' and b' the
// damped labels.
Complex fock_dyad_factor(const CoherentLabel& a, const CoherentLabel& b, double gamma, double t) {
    const int n_max = fock::required_n_max(std::max(std::abs(a.amplitude()), std::abs(b.amplitude())));
    const auto va = fock::coherent_to_fock(a, n_max);
    const auto vb = fock::coherent_to_fock(b, n_max);
    Eigen::VectorXcd xa(n_max + 1), xb(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        xa(n) = va.amplitudes[n];
        xb(n) = vb.amplitudes[n];
    }
    const fock::FockDensity dyad{n_max, xa * xb.adjoint()};
    const double dt = 1e-3 / gamma / (n_max + 1);
    const auto out = fock::lindblad_evolve(dyad, gamma, t, dt);
    const double damp = std::exp(-0.5 * gamma * t);
    const auto da = fock::coherent_to_fock(a.scaled(damp), n_max);
    const auto db = fock::coherent_to_fock(b.scaled(damp), n_max);
    for (int n = 0; n <= n_max; ++n) {
        xa(n) = da.amplitudes[n];
        xb(n) = db.amplitudes[n];
    }
    return (xa.adjoint() * out.matrix * xb)(0, 0);
}

}  // namespace

TEST(MasterParams, RejectsNonPositiveRate) {
    EXPECT_THROW(MasterParams(0.0), std::invalid_argument);
    EXPECT_THROW(MasterParams(-1.0), std::invalid_argument);
}

TEST(MeAmplitude, SpecExamples) {
    const MasterParams p(2.0);
    const CoherentLabel a0(1.5, -0.5);
    EXPECT_EQ(me_amplitude(a0, p, 0.0).amplitude(), a0.amplitude());
    EXPECT_LT(std::abs(me_amplitude(a0, p, std::log(2.0)).amplitude() - 0.5 * a0.amplitude()), 1e-15);
    for (double t : {0.1, 0.7, 3.0}) EXPECT_NEAR(me_amplitude(a0, p, t).norm2(), a0.norm2() * std::exp(-2.0 * t), 1e-14);
    EXPECT_THROW(me_amplitude(a0, p, -0.1), std::invalid_argument);
}

TEST(MeDyadFactor, SpecExamples) {
    const MasterParams p(1.0);
    const CoherentLabel a(1.2, 0.4);
    EXPECT_NEAR(std::abs(me_dyad_factor(a, a, p, 2.0) - 1.0), 0.0, 1e-15);

    const double a0 = std::sqrt(3.3);
    for (double t : {0.0, 0.1, 1.0}) {
        EXPECT_NEAR(me_dyad_factor(CoherentLabel(a0, 0.0), CoherentLabel(-a0, 0.0), p, t).real(),
                    std::exp(-2.0 * 3.3 * (1.0 - std::exp(-t))), 1e-14);
    }

    const CoherentLabel up = CoherentLabel(1.0, 0.0).rotated(pi / 4.0);
    const CoherentLabel down = CoherentLabel(1.0, 0.0).rotated(-pi / 4.0);
    EXPECT_LT(std::abs(me_dyad_factor(up, down, p, 60.0) - std::exp(Complex(-1.0, 1.0))), 1e-15);
}

TEST(MeDyadFactor, MatchesFockLindblad) {
    const CoherentLabel up = CoherentLabel(1.0, 0.0).rotated(pi / 4.0);
    const CoherentLabel down = CoherentLabel(1.0, 0.0).rotated(-pi / 4.0);
    for (double t : {0.5, 3.0}) {
        EXPECT_LT(std::abs(fock_dyad_factor(up, down, 1.0, t) - me_dyad_factor(up, down, MasterParams(1.0), t)), 1e-6);
    }
    const CoherentLabel a(1.1, 0.3), b(-0.4, 0.9);
    EXPECT_LT(std::abs(fock_dyad_factor(a, b, 2.0, 0.4) - me_dyad_factor(a, b, MasterParams(2.0), 0.4)), 1e-6);
}

TEST(MeReduce, SpecExamples) {
    const MasterParams p(1.0);
    const ProtocolParams pa(ProtocolCase::CaseA, CoherentLabel(std::sqrt(3.3), 0.0), pi);
    const auto cat = prepare(pa, Outcome::E);

    const ReducedDensity r0 = me_reduce(cat, p, 0.0);
    const ReducedDensity ref = reduce(cat);
    EXPECT_LT((r0.coeff() - ref.coeff()).cwiseAbs().maxCoeff(), 1e-15);

    const ReducedDensity late = me_reduce(cat, p, 60.0);
    const Spectrum sp = eigenvalues(late);
    EXPECT_NEAR(sp.eigenvalues[0], 1.0, 1e-12);
    EXPECT_NEAR(mean_number(late), 0.0, 1e-12);

    const auto ce = me_reduce(cat, p, 0.1);
    const auto cg = me_reduce(prepare(pa, Outcome::G), p, 0.1);
    EXPECT_NEAR(conditional_probabilities(ce, cg, pa).eta, 0.5336, 1e-4);

    EXPECT_THROW(me_reduce(FieldBathSuperposition({{Complex{1.0, 0.0}, CoherentLabel(1.0, 0.0), {}}}), p, 0.1),
                 ContractViolation);
    EXPECT_THROW(me_reduce(cat, p, -1.0), std::invalid_argument);
}

TEST(MeReduce, TraceAndMeanNumberDecay) {
    const MasterParams p(0.5);
    const ProtocolParams pb(ProtocolCase::CaseB, CoherentLabel(1.3, 0.2), 0.9);
    const auto st = prepare(pb, Outcome::G);
    const double n0 = mean_number(reduce(st));
    for (double t : {0.2, 1.0, 4.0}) {
        const auto rho = me_reduce(st, p, t);
        EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
        EXPECT_NEAR(mean_number(rho), n0 * std::exp(-0.5 * t), 1e-10);
    }
}
