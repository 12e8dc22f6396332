#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hrl/kern/kernels.hpp"

using namespace hrl;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b,
                 double tol) {
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        CHECK(std::abs(a[i] - b[i]) / scale <= tol);
    }
}

}  // namespace

TEST_CASE("scalar affine matches a straight loop") {
    const auto& k = kern::scalar_kernels();
    // 2x3 matrix, hand-computed.
    const double W[] = {1, 2, 3, 4, 5, 6};
    const double b[] = {0.5, -0.5};
    const double x[] = {1, 0, -1};
    double y[2];
    k.affine(W, b, x, y, 2, 3);
    CHECK(y[0] == doctest::Approx(1 - 3 + 0.5));
    CHECK(y[1] == doctest::Approx(4 - 6 - 0.5));

    double yt[3];
    const double d[] = {1.0, -2.0};
    k.matvec_t(W, d, yt, 2, 3);
    CHECK(yt[0] == doctest::Approx(1 - 8));
    CHECK(yt[1] == doctest::Approx(2 - 10));
    CHECK(yt[2] == doctest::Approx(3 - 12));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!kern::avx2_supported()) {
        MESSAGE("avx2 not supported on this cpu, skipping");
        return;
    }
    const auto& s = kern::scalar_kernels();
    const auto& a = kern::avx2_kernels();
    std::mt19937_64 rng(11);

    // Sizes hit both the vector body and the remainder loops.
    for (const auto [rows, cols] : {std::pair<int, int>{100, 26},
                                    {100, 100},
                                    {5, 100},
                                    {7, 9},
                                    {1, 3}}) {
        const auto W = random_vec(rows * cols, rng);
        const auto b = random_vec(rows, rng);
        const auto x = random_vec(cols, rng);
        const auto d = random_vec(rows, rng);

        std::vector<double> y1(rows), y2(rows);
        s.affine(W.data(), b.data(), x.data(), y1.data(), rows, cols);
        a.affine(W.data(), b.data(), x.data(), y2.data(), rows, cols);
        check_close(y1, y2, 1e-13);

        std::vector<double> t1(cols), t2(cols);
        s.matvec_t(W.data(), d.data(), t1.data(), rows, cols);
        a.matvec_t(W.data(), d.data(), t2.data(), rows, cols);
        check_close(t1, t2, 1e-13);

        auto g1 = random_vec(rows * cols, rng);
        auto g2 = g1;
        s.outer_acc(g1.data(), d.data(), x.data(), rows, cols);
        a.outer_acc(g2.data(), d.data(), x.data(), rows, cols);
        check_close(g1, g2, 1e-13);
    }

    // Adam elementwise path.
    const std::size_t n = 1003;
    auto p1 = random_vec(n, rng);
    auto p2 = p1;
    const auto g = random_vec(n, rng);
    std::vector<double> m1(n, 0.0), v1(n, 0.0), m2(n, 0.0), v2(n, 0.0);
    kern::AdamParams ap{0.01, 0.9, 0.999, 1e-8, 1.0 - 0.9, 1.0 - 0.999};
    s.adam(p1.data(), g.data(), m1.data(), v1.data(), n, ap);
    a.adam(p2.data(), g.data(), m2.data(), v2.data(), n, ap);
    check_close(p1, p2, 1e-13);
    check_close(m1, m2, 1e-13);
    check_close(v1, v2, 1e-13);
}

TEST_CASE("backend selection") {
    kern::select_backend("scalar");
    CHECK(std::string(kern::active().name) == "scalar");
    if (kern::avx2_supported()) {
        kern::select_backend("avx2");
        CHECK(std::string(kern::active().name) == "avx2");
    }
    CHECK_THROWS(kern::select_backend("sse9"));
    kern::select_backend("scalar");
}
