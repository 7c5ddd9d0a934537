#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "kernsel/family_bounds.hpp"

using namespace kernsel;

namespace {

std::vector<KernelModel> histogram_family(int dmax) {
    std::vector<KernelModel> f;
    for (int d = 1; d <= dmax; ++d) f.push_back(KernelModel::projection(RegularHistogram{d}));
    return f;
}

std::vector<KernelModel> parzen_family(double a, const std::vector<double>& hs) {
    std::vector<KernelModel> f;
    for (double h : hs) f.push_back(KernelModel::parzen(BaseKernel(a), h));
    return f;
}

}  // namespace

TEST_CASE("gamma for histogram families") {
    const auto fam = histogram_family(100);
    const auto rep = gamma_bound(fam, 100);
    CHECK(rep.gamma == 1.0);  // D_max / n = 1
    CHECK(rep.condition_holds);
    CHECK(rep.sup_kernel_bound == 100.0);
    CHECK(rep.sup_theta_bound == 100.0);

    const auto small_n = gamma_bound(fam, 50);
    CHECK(small_n.gamma == Catch::Approx(2.0));
    CHECK(small_n.condition_holds);
}

TEST_CASE("gamma for the Parzen grid") {
    std::vector<double> hs;
    for (int i = 1; i <= 50; ++i) hs.push_back(1.0 / (2.0 * i));
    const auto rep = gamma_bound(parzen_family(0.0, hs), 100);
    CHECK(rep.gamma == 1.0);
    // min h = 0.01 >= |K_0|_inf * |K_0|_1 / n = 0.0039894
    CHECK(rep.condition_holds);

    const auto tight = gamma_bound(parzen_family(0.0, {0.001}), 100);
    CHECK_FALSE(tight.condition_holds);
}

TEST_CASE("gamma for the paired Fourier family") {
    const auto k = KernelModel::weighted_projection(FourierPaired{3, 1.0, {1.0}});
    const std::vector<KernelModel> fam = {k};
    // sup_x sum phi_i^2 = 1 + 2 cos^2 + 2 sin^2 = 3 exactly
    CHECK(gamma_bound(fam, 100).gamma == 1.0);
    CHECK(gamma_bound(fam, 2).gamma == Catch::Approx(1.5));
}

TEST_CASE("mixed families are rejected") {
    std::vector<KernelModel> fam = {KernelModel::projection(RegularHistogram{2}),
                                    KernelModel::parzen(BaseKernel::gaussian(), 0.5)};
    CHECK_THROWS_AS(gamma_bound(fam, 100), ConfigError);
    CHECK_THROWS_AS(gamma_bound(std::vector<KernelModel>{}, 100), ConfigError);
}

TEST_CASE("upsilon for Parzen + standard Gaussian") {
    const auto fam = parzen_family(0.0, {0.5, 0.25});
    const auto rep = upsilon_bound(fam, KnownDensity::std_gaussian(), 100);
    // max( K_0(0)/|K_0|^2 = sqrt(2), 1 + 2/sqrt(2 pi) )
    CHECK(rep.upsilon_lower == Catch::Approx(1.7978845608028654).margin(1e-12));
    CHECK(rep.components.size() == 2);
    CHECK(rep.components[0].second == Catch::Approx(1.4142135623730951).margin(1e-12));
}

TEST_CASE("upsilon for basis families") {
    const auto hist = histogram_family(50);
    const auto rep = upsilon_bound(hist, KnownDensity::triangular2x(), 100);
    CHECK(rep.upsilon_lower == Catch::Approx(3.0));  // Gamma=1, 1 + |s|_inf = 3

    const auto k = KernelModel::weighted_projection(FourierPaired{3, 1.0, {1.0}});
    const std::vector<KernelModel> fam = {k};
    const auto frep = upsilon_bound(fam, KnownDensity::uniform01(), 100);
    CHECK(frep.upsilon_lower == Catch::Approx(2.0));
}

TEST_CASE("condition_holds implies both suprema are dominated by gamma n") {
    const auto families = {histogram_family(40), parzen_family(1.5, {0.5, 0.1, 0.02}),
                           parzen_family(0.0, {0.001})};
    for (const auto& fam : families) {
        for (int n : {10, 100, 2000}) {
            const auto rep = gamma_bound(fam, n);
            CHECK(rep.gamma >= 1.0);
            if (rep.condition_holds) {
                CHECK(rep.sup_kernel_bound <= rep.gamma * n + 1e-9);
                CHECK(rep.sup_theta_bound <= rep.gamma * n + 1e-9);
            }
        }
    }
}

TEST_CASE("upsilon dominates gamma") {
    const auto hist = histogram_family(80);
    for (int n : {10, 100, 1000}) {
        const auto g = gamma_bound(hist, n);
        for (const auto density :
             {KnownDensity::uniform01(), KnownDensity::triangular2x()}) {
            CHECK(upsilon_bound(hist, density, n).upsilon_lower >= g.gamma);
        }
    }
    const auto pf = parzen_family(2.0, {0.5, 0.1});
    CHECK(upsilon_bound(pf, KnownDensity::std_gaussian(), 100).upsilon_lower >=
          gamma_bound(pf, 100).gamma);
}
