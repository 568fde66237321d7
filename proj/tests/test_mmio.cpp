#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <sstream>

#include "helpers.hpp"
#include "hyperinv/mmio.hpp"

using namespace hyperinv;
using testutil::Rng;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("dense array round-trip is bit-exact at double") {
    DenseMatrix<double> m{{0.1, -1.0 / 3.0, 1e-300},
                          {5e-324, 1.7976931348623157e308, -0.0},
                          {123456789.123456789, -2.2250738585072014e-308, 42.0}};
    std::ostringstream os;
    mmio::write_dense(os, m);
    std::istringstream is(os.str());
    auto back = mmio::read_dense<double>(is);
    REQUIRE(back.rows() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(bit_equal(back(i, j), m(i, j)));
}

TEST_CASE("random dense round-trips bit-exactly") {
    Rng rng(40);
    for (int trial = 0; trial < 5; ++trial) {
        auto m = testutil::random_matrix(rng, rng.integer(1, 7), rng.integer(1, 7), -1e6, 1e6);
        std::ostringstream os;
        mmio::write_dense(os, m);
        std::istringstream is(os.str());
        auto back = mmio::read_dense<double>(is);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) REQUIRE(bit_equal(back(i, j), m(i, j)));
    }
}

TEST_CASE("sparse coordinate round-trip") {
    auto a = SparseMatrix<double>::from_triplets(
        3, 4, {{0, 1, 0.1}, {1, 3, -2.5e-17}, {2, 0, 7.0}});
    std::ostringstream os;
    mmio::write_sparse(os, a);
    std::istringstream is(os.str());
    auto back = mmio::read_sparse<double>(is);
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 4);
    REQUIRE(back.row_offsets() == a.row_offsets());
    REQUIRE(back.col_indices() == a.col_indices());
    for (std::size_t i = 0; i < a.values().size(); ++i)
        REQUIRE(bit_equal(back.values()[i], a.values()[i]));
}

TEST_CASE("complex values round-trip") {
    using C = std::complex<double>;
    DenseMatrix<C> m{{C(0.1, -0.2)}, {C(-3.0, 4e-200)}};
    std::ostringstream os;
    mmio::write_dense(os, m);
    std::istringstream is(os.str());
    auto back = mmio::read_dense<C>(is);
    REQUIRE(bit_equal(back(0, 0).real(), 0.1));
    REQUIRE(bit_equal(back(0, 0).imag(), -0.2));
    REQUIRE(bit_equal(back(1, 0).imag(), 4e-200));
}

TEST_CASE("symmetric and hermitian storage expands to full") {
    SECTION("symmetric array stores the lower triangle column-major") {
        std::istringstream in(
            "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n");
        auto m = mmio::read_dense<double>(in);
        REQUIRE(m(0, 0) == 1.0);
        REQUIRE(m(1, 0) == 2.0);
        REQUIRE(m(0, 1) == 2.0);
        REQUIRE(m(1, 1) == 3.0);
    }
    SECTION("hermitian coordinate mirrors with conjugation") {
        std::istringstream in(
            "%%MatrixMarket matrix coordinate complex hermitian\n"
            "2 2 2\n1 1 5 0\n2 1 1 -2\n");
        auto m = mmio::read_sparse<std::complex<double>>(in);
        auto d = densify(m);
        REQUIRE(d(1, 0) == std::complex<double>(1, -2));
        REQUIRE(d(0, 1) == std::complex<double>(1, 2));
    }
}

TEST_CASE("vectors are one-column arrays") {
    std::vector<double> v{1.5, -2.25, 1e-30};
    std::ostringstream os;
    mmio::write_vector(os, v);
    std::istringstream is(os.str());
    auto back = mmio::read_vector<double>(is);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(bit_equal(back[i], v[i]));

    std::istringstream not_vec("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
    REQUIRE_THROWS_AS(mmio::read_vector<double>(not_vec), io_error);
}

TEST_CASE("format errors are reported") {
    SECTION("bad banner") {
        std::istringstream in("%%NotMatrixMarket matrix array real general\n1 1\n1\n");
        REQUIRE_THROWS_AS(mmio::read_dense<double>(in), io_error);
    }
    SECTION("pattern field unsupported") {
        std::istringstream in("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n");
        REQUIRE_THROWS_AS(mmio::read_sparse<double>(in), io_error);
    }
    SECTION("skew-symmetric unsupported") {
        std::istringstream in(
            "%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 1.0\n");
        REQUIRE_THROWS_AS(mmio::read_sparse<double>(in), io_error);
    }
    SECTION("complex file needs a complex scalar") {
        std::istringstream in("%%MatrixMarket matrix array complex general\n1 1\n1 2\n");
        REQUIRE_THROWS_AS(mmio::read_dense<double>(in), io_error);
    }
    SECTION("truncated data") {
        std::istringstream in("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
        REQUIRE_THROWS_AS(mmio::read_dense<double>(in), io_error);
    }
    SECTION("real file into a complex reader is fine") {
        std::istringstream in("%%MatrixMarket matrix array real general\n1 1\n2.5\n");
        auto m = mmio::read_dense<std::complex<double>>(in);
        REQUIRE(m(0, 0) == std::complex<double>(2.5, 0.0));
    }
}

TEST_CASE("integer field parses as real") {
    std::istringstream in("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 5\n2 2 -3\n");
    auto m = mmio::read_sparse<double>(in);
    auto d = densify(m);
    REQUIRE(d(0, 0) == 5.0);
    REQUIRE(d(1, 1) == -3.0);
}

TEST_CASE("extended-precision values survive a round-trip") {
    precision_guard guard(60);
    DenseMatrix<mp_real> m{{mp_real(1) / mp_real(3)}};
    std::ostringstream os;
    mmio::write_dense(os, m);
    std::istringstream is(os.str());
    auto back = mmio::read_dense<mp_real>(is);
    REQUIRE(abs(back(0, 0) - m(0, 0)) < mp_real("1e-58"));
}
