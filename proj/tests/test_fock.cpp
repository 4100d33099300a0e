#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cavitycat/bath.hpp"
#include "cavitycat/fock.hpp"
#include "cavitycat/master.hpp"
#include "cavitycat/protocol.hpp"

using namespace cavitycat;
using std::numbers::pi;

TEST(CoherentToFock, SpecExamples) {
    const auto vac = fock::coherent_to_fock(CoherentLabel{}, 10);
    EXPECT_EQ(vac.amplitudes[0], Complex(1.0, 0.0));
    for (int n = 1; n <= 10; ++n) EXPECT_EQ(vac.amplitudes[n], Complex(0.0, 0.0));

    const int nm = fock::required_n_max(1.5);
    const auto v = fock::coherent_to_fock(CoherentLabel(1.5, 0.0), nm);
    double mean = 0.0;
    for (int n = 0; n <= nm; ++n) mean += n * std::norm(v.amplitudes[n]);
    EXPECT_NEAR(mean, 2.25, 1e-8);

    const CoherentLabel a(0.8, -0.6), b(-0.3, 1.1);
    const int nn = fock::required_n_max(1.2);
    EXPECT_LT(std::abs(fock::inner(fock::coherent_to_fock(a, nn), fock::coherent_to_fock(b, nn)) - overlap(a, b)), 1e-10);

    EXPECT_THROW(fock::coherent_to_fock(CoherentLabel(3.0, 0.0), 20), TruncationError);
    EXPECT_EQ(fock::required_n_max(0.0), 10);
}

TEST(LindbladEvolve, SpecExamples) {
    const int nm = 20;
    const double dt = 1e-3 / (nm + 1);
    const auto vac = fock::projector(fock::coherent_to_fock(CoherentLabel{}, nm));
    const auto still = fock::lindblad_evolve(vac, 1.0, 0.5, dt);
    EXPECT_LT((still.matrix - vac.matrix).cwiseAbs().maxCoeff(), 1e-15);

    const auto coh = fock::projector(fock::coherent_to_fock(CoherentLabel(1.0, 0.0), nm));
    const auto out = fock::lindblad_evolve(coh, 1.0, 0.5, dt);
    EXPECT_GE(fock::fidelity(out, fock::coherent_to_fock(CoherentLabel(std::exp(-0.25), 0.0), nm)), 1.0 - 1e-7);

    EXPECT_THROW(fock::lindblad_evolve(coh, 1.0, 0.5, 0.01), std::invalid_argument);
}

TEST(LindbladEvolve, OddCatCoherenceMatchesClosedForm) {
    const double a0 = std::sqrt(2.0);
    const int nm = fock::required_n_max(a0);
    const double dt = 1e-3 / (nm + 1);
    const auto cat = fock::normalized(
        fock::apply(PhaseOpSum({{Complex{0.5, 0.0}, pi}, {Complex{-0.5, 0.0}, 0.0}}), fock::coherent_to_fock(CoherentLabel(a0, 0.0), nm)));
    const double t = 0.3;
    const auto rho = fock::lindblad_evolve(fock::projector(cat), 1.0, t, dt);
    const double at = a0 * std::exp(-0.5 * t);
    const auto plus = fock::coherent_to_fock(CoherentLabel(at, 0.0), nm);
    const auto minus = fock::coherent_to_fock(CoherentLabel(-at, 0.0), nm);
    Eigen::VectorXcd xp(nm + 1), xm(nm + 1);
    for (int n = 0; n <= nm; ++n) {
        xp(n) = plus.amplitudes[n];
        xm(n) = minus.amplitudes[n];
    }
    // rho = N^2 [|+><+| + |-><-| - c(|+><-| + |-><+|)]; project with the dual pair.
    const double s = std::exp(-2.0 * at * at);
    Eigen::Matrix2cd gram;
    gram << 1.0, s, s, 1.0;
    Eigen::Matrix2cd proj;
    proj << (xp.adjoint() * rho.matrix * xp)(0, 0), (xp.adjoint() * rho.matrix * xm)(0, 0),
        (xm.adjoint() * rho.matrix * xp)(0, 0), (xm.adjoint() * rho.matrix * xm)(0, 0);
    const Eigen::Matrix2cd coeff = gram.inverse() * proj * gram.inverse();
    const double ratio = std::abs(coeff(0, 1) / coeff(0, 0));
    EXPECT_NEAR(ratio, std::exp(-2.0 * a0 * a0 * (1.0 - std::exp(-t))), 1e-6);
}

TEST(HamiltonianEvolve, SpecExamples) {
    const BathSpec one({0.0}, {0.8}, 1.0);
    const int nm = fock::required_n_max(1.0);
    const auto field = fock::coherent_to_fock(CoherentLabel(1.0, 0.0), nm);

    const auto at0 = fock::hamiltonian_evolve(field, one, 0.0, nm);
    EXPECT_NEAR(fock::fidelity(fock::reduce_field(at0), field), 1.0, 1e-14);

    for (double t : {0.4, 1.3}) {
        const auto psi = fock::hamiltonian_evolve(field, one, t, nm);
        const auto target = fock::coherent_to_fock(CoherentLabel(std::cos(0.8 * t), 0.0), nm);
        EXPECT_GE(fock::fidelity(fock::reduce_field(psi), target), 1.0 - 1e-6);
        EXPECT_NEAR(fock::total_number(psi), 1.0, 1e-9);
    }

    EXPECT_THROW(fock::hamiltonian_evolve(field, BathSpec({0.0, 1.0, 2.0}, {0.1, 0.1, 0.1}, 1.0), 0.1, nm),
                 std::invalid_argument);
    EXPECT_THROW(fock::hamiltonian_evolve(field, BathSpec({0.0, 1.0}, {0.1, 0.1}, 1.0), 0.1, 120), CapacityError);
}

TEST(HamiltonianEvolve, OddCatEigenvaluesMatchCoherentEngine) {
    const double a0 = 1.0;
    const ProtocolParams p(ProtocolCase::CaseA, CoherentLabel(a0, 0.0), pi);
    const BathSpec spec({0.3, -0.5}, {0.6, 0.4}, 1.0);
    const int nm = fock::required_n_max(a0);
    const auto cat = fock::normalized(fock::apply(reduced_op(p, Outcome::E), fock::coherent_to_fock(CoherentLabel(a0, 0.0), nm)));
    const double t = 0.9;
    const auto rho = fock::reduce_field(fock::hamiltonian_evolve(cat, spec, t, nm));
    const auto ev = fock::fock_eigenvalues(rho);
    const auto ref = eigenvalues(reduce(evolve(prepare(p, Outcome::E, 2), spec, t))).eigenvalues;
    EXPECT_NEAR(ev[0], ref[0], 1e-6);
    EXPECT_NEAR(ev[1], ref[1], 1e-6);
    EXPECT_LT(std::abs(ev[2]), 1e-8);
    EXPECT_NEAR(fock::fock_purity(rho), purity(reduce(evolve(prepare(p, Outcome::E, 2), spec, t))), 1e-6);
}

TEST(FockMeasure, SpecExamples) {
    const int nm = fock::required_n_max(1.3);
    const PhaseOpSum odd({{Complex{0.5, 0.0}, 0.0}, {Complex{-0.5, 0.0}, pi}});
    const auto cat = fock::normalized(fock::apply(odd, fock::coherent_to_fock(CoherentLabel(1.3, 0.0), nm)));
    const auto rho = fock::projector(cat);
    EXPECT_NEAR(fock::fock_measure(PhaseOpSum::identity(), rho).real(), 1.0, 1e-12);
    EXPECT_NEAR(fock::fock_measure(odd, rho).real(), 1.0, 1e-10);

    const auto evolved = fock::lindblad_evolve(rho, 1.0, 0.2, 1e-3 / (nm + 1));
    const auto ev = fock::fock_eigenvalues(evolved);
    EXPECT_GT(ev[1], 1e-3);
    EXPECT_LT(std::abs(ev[2]), 1e-8);
}
