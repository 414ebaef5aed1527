#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "perron/core.hpp"
#include "support/test_oracles.hpp"

using namespace perron;

namespace {

ErrorKind kind_of(const std::function<void()> &fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected perron::Error";
    return ErrorKind::DomainError;
}

} // namespace

TEST(ParseMatrix, Csv2x2)
{
    const auto a = parse_matrix("1,2\n3,4", MatrixFormat::csv);
    ASSERT_EQ(a.dim(), 2u);
    EXPECT_EQ(a(0, 0), 1.0);
    EXPECT_EQ(a(0, 1), 2.0);
    EXPECT_EQ(a(1, 0), 3.0);
    EXPECT_EQ(a(1, 1), 4.0);
    EXPECT_EQ(a.row_sums()[0], 3.0);
    EXPECT_EQ(a.row_sums()[1], 7.0);
}

TEST(ParseMatrix, SingleEntry)
{
    const auto a = parse_matrix("5", MatrixFormat::csv);
    ASSERT_EQ(a.dim(), 1u);
    EXPECT_EQ(a(0, 0), 5.0);
    EXPECT_EQ(a.row_sums()[0], 5.0);
}

TEST(ParseMatrix, ToleratesWhitespaceAndTrailingNewlines)
{
    const auto a = parse_matrix(" 1 , 2 \r\n+3,4e0\n\n", MatrixFormat::csv);
    EXPECT_EQ(a(1, 0), 3.0);
    EXPECT_EQ(a(1, 1), 4.0);
}

TEST(ParseMatrix, NonPositiveEntryReportsOneBasedPosition)
{
    try {
        parse_matrix("1,0\n3,4", MatrixFormat::csv);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonPositiveEntry);
        EXPECT_EQ(e.row(), 1u);
        EXPECT_EQ(e.col(), 2u);
        EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { parse_matrix("1,2\n-3,4", MatrixFormat::csv); }), ErrorKind::NonPositiveEntry);
}

TEST(ParseMatrix, Errors)
{
    EXPECT_EQ(kind_of([] { parse_matrix("1,2\n3", MatrixFormat::csv); }), ErrorKind::NonSquare);
    EXPECT_EQ(kind_of([] { parse_matrix("1,2", MatrixFormat::csv); }), ErrorKind::NonSquare);
    EXPECT_EQ(kind_of([] { parse_matrix("1,x\n3,4", MatrixFormat::csv); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_matrix("1,,2\n3,4,5\n1,1,1", MatrixFormat::csv); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_matrix("", MatrixFormat::csv); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_matrix("1,nan\n3,4", MatrixFormat::csv); }), ErrorKind::NonFinite);
    EXPECT_EQ(kind_of([] { parse_matrix("1,inf\n3,4", MatrixFormat::csv); }), ErrorKind::NonFinite);
    EXPECT_EQ(kind_of([] { parse_matrix("1,1e400\n3,4", MatrixFormat::csv); }), ErrorKind::NonFinite);

    EXPECT_EQ(kind_of([] { parse_matrix("{\"rows\": [[1,2],[3]]}", MatrixFormat::json); }), ErrorKind::NonSquare);
    EXPECT_EQ(kind_of([] { parse_matrix("{\"d\": 3, \"rows\": [[1,2],[3,4]]}", MatrixFormat::json); }),
              ErrorKind::NonSquare);
    EXPECT_EQ(kind_of([] { parse_matrix("{\"rows\": [[1,2],[3,", MatrixFormat::json); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_matrix("{\"rows\": [[1,\"2\"],[3,4]]}", MatrixFormat::json); }),
              ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_matrix("[[1]]", MatrixFormat::json); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_matrix("{\"rows\": [[0.0]]}", MatrixFormat::json); }), ErrorKind::NonPositiveEntry);
    EXPECT_EQ(kind_of([] { parse_matrix("1e308,1e308\n1,1", MatrixFormat::csv); }), ErrorKind::NonFinite);
}

TEST(ParseMatrix, AutoDetectsJson)
{
    const auto a = parse_matrix("  {\"d\": 2, \"rows\": [[1,2],[3,4]]}");
    EXPECT_EQ(a(1, 1), 4.0);
    const auto b = parse_matrix("1,2\n3,4");
    EXPECT_EQ(b(1, 1), 4.0);
}

TEST(ParseMatrix, JsonRoundTripIsBitExact)
{
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = test_support::random_positive(1 + trial % 7, gen, 1e-200, 1e200);
        const auto b = parse_matrix(emit_matrix(a), MatrixFormat::json);
        ASSERT_EQ(a.dim(), b.dim());
        for (std::size_t k = 0; k < a.entries().size(); ++k)
            EXPECT_EQ(std::memcmp(&a.entries()[k], &b.entries()[k], sizeof(double)), 0);
    }
}

TEST(RowSums, Examples)
{
    EXPECT_EQ(row_sums(test_support::golden()), (std::vector<double>{3, 7}));
    EXPECT_EQ(row_sums(test_support::ones2()), (std::vector<double>{2, 2}));
    EXPECT_EQ(row_sums(PositiveMatrix::from_rows({{5}})), (std::vector<double>{5}));
}

TEST(RowSums, PairwiseSumAccuracy)
{
    // 1 + n*eps/4 loses every small term under left-to-right summation
    std::vector<double> x(1 << 16, 1e-16);
    x[0] = 1.0;
    const double exact = 1.0 + 1e-16 * static_cast<double>(x.size() - 1);
    EXPECT_NEAR(pairwise_sum(x), exact, 1e-15);
}

TEST(Normalize, Examples)
{
    const auto m = normalize(test_support::golden());
    EXPECT_NEAR(m(0, 0), 1.0 / 3.0, 1e-16);
    EXPECT_NEAR(m(0, 1), 2.0 / 3.0, 1e-16);
    EXPECT_NEAR(m(1, 0), 3.0 / 7.0, 1e-16);
    EXPECT_NEAR(m(1, 1), 4.0 / 7.0, 1e-16);

    const auto u = normalize(test_support::ones2());
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(u(i, j), 0.5);

    const auto s = normalize(test_support::stochastic2());
    EXPECT_EQ(s(0, 0), 0.5);
    EXPECT_EQ(s(0, 1), 0.5);
    EXPECT_EQ(s(1, 0), 0.25);
    EXPECT_EQ(s(1, 1), 0.75);
}

TEST(Normalize, RowsSumToOneAndIdempotent)
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 1 + trial % 20;
        const auto a = test_support::random_positive(d, gen);
        const auto m = normalize(a);
        const auto mm = normalize(m.as_matrix());
        for (std::size_t i = 0; i < d; ++i) {
            EXPECT_NEAR(pairwise_sum(m.row(i)), 1.0, 1e-12);
            for (std::size_t j = 0; j < d; ++j) {
                EXPECT_GT(m(i, j), 0.0);
                EXPECT_NEAR(m(i, j), a(i, j) / a.row_sums()[i], 1e-15 * m(i, j) + 1e-300);
                EXPECT_NEAR(mm(i, j), m(i, j), 1e-15);
            }
        }
    }
}

TEST(Normalize, SamplingFollowsCumulativeTable)
{
    const auto m = normalize(test_support::golden());
    EXPECT_EQ(m.next(0, 0.0), 0u);
    EXPECT_EQ(m.next(0, 0.33), 0u);
    EXPECT_EQ(m.next(0, 0.34), 1u);
    EXPECT_EQ(m.next(1, 0.42), 0u);
    EXPECT_EQ(m.next(1, 0.43), 1u);
    EXPECT_EQ(m.next(1, std::nextafter(1.0, 0.0)), 1u);
}

TEST(PrincipalSubmatrix, Examples)
{
    const auto a = test_support::golden();
    const auto b1 = principal_submatrix(a, 0);
    ASSERT_EQ(b1.dim, 1u);
    EXPECT_EQ(b1(0, 0), 4.0);
    const auto b2 = principal_submatrix(a, 1);
    EXPECT_EQ(b2(0, 0), 1.0);

    const auto c = PositiveMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    const auto b = principal_submatrix(c, 1);
    ASSERT_EQ(b.dim, 2u);
    EXPECT_EQ(b.entries, (std::vector<double>{1, 3, 7, 9}));
    EXPECT_EQ(b.parent_index(1), 2u);

    const auto one = principal_submatrix(PositiveMatrix::from_rows({{5}}), 0);
    EXPECT_EQ(one.dim, 0u);
    EXPECT_TRUE(one.entries.empty());

    EXPECT_EQ(kind_of([&] { principal_submatrix(a, 2); }), ErrorKind::IndexOutOfRange);
}

TEST(PrincipalSubmatrix, InheritsPositivityAndOrdering)
{
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 2 + trial % 8;
        const auto a = test_support::random_positive(d, gen);
        for (std::size_t i = 0; i < d; ++i) {
            const auto b = principal_submatrix(a, i);
            for (std::size_t j = 0; j < b.dim; ++j)
                for (std::size_t k = 0; k < b.dim; ++k) {
                    EXPECT_GT(b(j, k), 0.0);
                    EXPECT_EQ(b(j, k), a(b.parent_index(j), b.parent_index(k)));
                }
        }
    }
}
