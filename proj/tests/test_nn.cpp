#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hrl/nn/adam.hpp"
#include "hrl/nn/checkpoint.hpp"
#include "hrl/nn/gradcheck.hpp"
#include "hrl/nn/network.hpp"

using namespace hrl;

namespace {

std::array<double, nn::kInputDim> random_input(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::array<double, nn::kInputDim> x{};
    for (auto& v : x) v = d(rng);
    return x;
}

// Straight-line re-implementation of the three matrix products, independent
// of the kernel-backed forward path.
std::array<double, 5> forward_reference(const nn::QNetwork& net,
                                        const std::array<double, 26>& x) {
    const auto p = net.params();
    auto affine = [&](std::size_t w_off, std::size_t b_off,
                      const std::vector<double>& in, int rows, int cols) {
        std::vector<double> out(rows);
        for (int r = 0; r < rows; ++r) {
            double acc = p[b_off + r];
            for (int c = 0; c < cols; ++c) acc += p[w_off + r * cols + c] * in[c];
            out[r] = acc;
        }
        return out;
    };
    std::vector<double> h0(x.begin(), x.end());
    auto z1 = affine(nn::kLayout.w1, nn::kLayout.b1, h0, 100, 26);
    for (auto& z : z1) z = z >= 0 ? z : std::exp(z) - 1.0;
    auto z2 = affine(nn::kLayout.w2, nn::kLayout.b2, z1, 100, 100);
    for (auto& z : z2) z = z >= 0 ? z : std::exp(z) - 1.0;
    auto q = affine(nn::kLayout.w3, nn::kLayout.b3, z2, 5, 100);
    return {q[0], q[1], q[2], q[3], q[4]};
}

}  // namespace

TEST_CASE("elu definition") {
    CHECK(nn::elu(0.0) == 0.0);
    CHECK(nn::elu(2.0) == 2.0);
    CHECK(nn::elu(-40.0) == doctest::Approx(-1.0));
    CHECK(nn::elu_grad(1.5) == 1.0);
    CHECK(nn::elu_grad(-1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("zero network maps everything to zero") {
    nn::QNetwork net;
    std::mt19937_64 rng(1);
    const auto x = random_input(rng);
    const auto q = net.forward(x);
    for (double v : q) CHECK(v == 0.0);
}

TEST_CASE("parameter count is structural") {
    CHECK(nn::QNetwork::param_count() == 13305);
    CHECK(nn::QNetwork::param_count() ==
          26 * 100 + 100 + 100 * 100 + 100 + 100 * 5 + 5);
}

TEST_CASE("forward matches the straight-line reference") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const auto net = nn::QNetwork::glorot_uniform(100 + trial);
        const auto x = random_input(rng);
        const auto got = net.forward(x);
        const auto want = forward_reference(net, x);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
    }
    std::array<double, 26> bad{};
    bad[0] = std::nan("");
    CHECK_THROWS(nn::QNetwork().forward(bad));
}

TEST_CASE("forward is deterministic") {
    const auto net = nn::QNetwork::glorot_uniform(9);
    std::mt19937_64 rng(2);
    const auto x = random_input(rng);
    const auto a = net.forward(x);
    const auto b = net.forward(x);
    CHECK(a == b);
}

TEST_CASE("backward gradients") {
    SUBCASE("zero upstream gradient yields zero parameter gradient") {
        const auto net = nn::QNetwork::glorot_uniform(3);
        std::mt19937_64 rng(3);
        const auto x = random_input(rng);
        const auto trace = net.forward_trace(x);
        std::vector<double> grad(nn::QNetwork::param_count(), 0.0);
        net.backward(trace, std::array<double, 5>{}, grad);
        for (double g : grad) CHECK(g == 0.0);
    }

    SUBCASE("matches central finite differences") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            const auto net = nn::QNetwork::glorot_uniform(500 + trial);
            const auto x = random_input(rng);
            std::array<double, 5> dLdq{};
            for (auto& v : dLdq) v = d(rng);
            const double err = nn::grad_check(net, x, dLdq, 200, 1e-5, trial);
            CHECK(err < 1e-4);
        }
    }

    SUBCASE("the check catches a corrupted gradient") {
        const auto net = nn::QNetwork::glorot_uniform(42);
        std::mt19937_64 rng(5);
        const auto x = random_input(rng);
        const std::array<double, 5> dLdq{1.0, -0.5, 0.25, 0.7, -1.1};
        std::vector<double> analytic(nn::QNetwork::param_count(), 0.0);
        const auto trace = net.forward_trace(x);
        net.backward(trace, dLdq, analytic);

        // Doubling one analytic coordinate must show up as relative error
        // 0.5 against the finite-difference value.
        const std::size_t idx = nn::kLayout.w3 + 10;
        REQUIRE(analytic[idx] != 0.0);
        auto probe = net;
        const double h = 1e-5;
        probe.params()[idx] += h;
        const auto up = probe.forward(x);
        probe.params()[idx] -= 2 * h;
        const auto down = probe.forward(x);
        double numeric = 0.0;
        for (int j = 0; j < 5; ++j) numeric += dLdq[j] * (up[j] - down[j]);
        numeric /= 2 * h;
        const double bad = 2.0 * analytic[idx];
        const double rel =
            std::abs(bad - numeric) / std::max(std::abs(bad), std::abs(numeric));
        CHECK(rel > 0.4);
    }

    SUBCASE("zero network gradient check is exactly zero") {
        nn::QNetwork net;
        std::mt19937_64 rng(6);
        const auto x = random_input(rng);
        const double err = nn::grad_check(net, x, std::array<double, 5>{}, 50);
        CHECK(err == 0.0);
    }
}

TEST_CASE("adam behavior") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        std::vector<double> p{1.0, -2.0, 3.0};
        std::vector<double> g{0.0, 0.0, 0.0};
        nn::AdamState st(3);
        CHECK(st.step(p, g));
        CHECK(p[0] == 1.0);
        CHECK(p[1] == -2.0);
        CHECK(p[2] == 3.0);
    }

    SUBCASE("first step moves by about -alpha") {
        std::vector<double> p{0.0};
        std::vector<double> g{1.0};
        nn::AdamState st(1);  // alpha 0.01
        CHECK(st.step(p, g));
        CHECK(p[0] == doctest::Approx(-0.01).epsilon(1e-6));
        CHECK(st.steps() == 1);
    }

    SUBCASE("non-finite gradient is rejected") {
        std::vector<double> p{0.0};
        std::vector<double> g{std::nan("")};
        nn::AdamState st(1);
        CHECK_FALSE(st.step(p, g));
        CHECK(p[0] == 0.0);
        CHECK(st.steps() == 0);
    }

    SUBCASE("minimizes a quadratic") {
        std::vector<double> w{1.0};
        nn::AdamState st(1);
        std::vector<double> g(1);
        for (int i = 0; i < 2000; ++i) {
            g[0] = 2.0 * w[0];
            st.step(w, g);
        }
        CHECK(std::abs(w[0]) < 1e-3);
    }

    SUBCASE("first update is odd in the gradient") {
        std::vector<double> p1{0.5}, p2{0.5};
        std::vector<double> g{0.37};
        std::vector<double> gneg{-0.37};
        nn::AdamState s1(1), s2(1);
        s1.step(p1, g);
        s2.step(p2, gneg);
        CHECK(p1[0] - 0.5 == doctest::Approx(-(p2[0] - 0.5)).epsilon(1e-12));
    }
}

TEST_CASE("checkpoint round trip is bit exact") {
    const auto net = nn::QNetwork::glorot_uniform(77);
    nn::Checkpoint ck{net, 12345};
    std::stringstream ss;
    nn::save_checkpoint(ck, ss);
    const auto back = nn::load_checkpoint(ss);
    CHECK(back.adam_steps == 12345);
    const auto a = net.params();
    const auto b = back.net.params();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    std::stringstream bad("highwayrl-checkpoint v1\nlayers 26 100 100 4\n");
    CHECK_THROWS(nn::load_checkpoint(bad));
}
