#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "citerank/corpus.hpp"
#include "citerank/error.hpp"
#include "support.hpp"

using namespace citerank;
using testing_support::records;

TEST(LoadCorpus, EmptyFileWithHeader) {
    std::istringstream in("id,citations,group\n");
    EXPECT_TRUE(load_corpus(in, {}).empty());
}

TEST(LoadCorpus, ThreeRowsOneGroupMember) {
    std::istringstream in("id,citations,group\na,5,JP\nb,0,\nc,12,\n");
    const auto recs = load_corpus(in, {});
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].citations, 5);
    EXPECT_EQ(recs[2].citations, 12);
    const auto corpus = rank_global(recs);
    EXPECT_EQ(corpus.group("JP").size(), 1u);
    EXPECT_EQ(corpus.group_labels(), std::vector<std::string>{"JP"});
}

TEST(LoadCorpus, NegativeCitationsReportRow) {
    std::istringstream in("id,citations,group\na,5,\nb,-1,\n");
    try {
        load_corpus(in, {});
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(LoadCorpus, FractionalCitationsRejected) {
    std::istringstream in("id,citations,group\na,2.5,\n");
    EXPECT_THROW(load_corpus(in, {}), ParseError);
}

TEST(LoadCorpus, MissingColumnNamed) {
    std::istringstream in("id,cites,group\na,1,\n");
    try {
        load_corpus(in, {});
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("citations"), std::string::npos);
    }
}

TEST(LoadCorpus, DuplicateIdRejected) {
    std::istringstream in("id,citations,group\na,1,\na,2,\n");
    EXPECT_THROW(load_corpus(in, {}), IngestionError);
}

TEST(LoadCorpus, GroupsAreUnionOfColumnsAndSeparatedLabels) {
    CorpusSchema schema;
    schema.id_column = "doc";
    schema.citations_column = "tc";
    schema.group_columns = {"country", "inst"};
    schema.delimiter = '\t';
    std::istringstream in("doc\ttc\tcountry\tinst\nx\t3\tES;FR\tCSIC\ny\t1\t\t\n");
    const auto recs = load_corpus(in, schema);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].groups, (std::vector<std::string>{"CSIC", "ES", "FR"}));
    EXPECT_TRUE(recs[1].groups.empty());
}

TEST(CorpusSchema, CollidingColumnsRejected) {
    CorpusSchema schema;
    schema.group_columns = {"id"};
    EXPECT_THROW(schema.validate(), SchemaError);
}

TEST(RankGlobal, MeanOfTies) {
    const auto c = rank_global(records({9, 5, 5, 1}), RankPolicy::mean_of_ties);
    EXPECT_EQ(std::vector<double>(c.ranks().begin(), c.ranks().end()), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(RankGlobal, MinOfTies) {
    const auto c = rank_global(records({9, 5, 5, 1}), RankPolicy::min_of_ties);
    EXPECT_EQ(std::vector<double>(c.ranks().begin(), c.ranks().end()), (std::vector<double>{1, 2, 2, 4}));
}

TEST(RankGlobal, DistinctCitationsGivePermutation) {
    std::vector<CitationCount> cites(10000);
    std::iota(cites.begin(), cites.end(), 0);
    std::mt19937_64 rng(7);
    std::shuffle(cites.begin(), cites.end(), rng);
    const auto recs = records(cites);
    const auto mean = rank_global(recs, RankPolicy::mean_of_ties);
    const auto min = rank_global(recs, RankPolicy::min_of_ties);
    // independent oracle: a paper with c citations has rank 10000 - c
    for (std::size_t i = 0; i < mean.global_size(); ++i) {
        const auto c = mean.citations()[i];
        ASSERT_EQ(mean.rank(i), static_cast<double>(10000 - c));
        ASSERT_EQ(min.rank(i), mean.rank(i));
    }
}

TEST(RankGlobal, StableAmongEquals) {
    const auto c = rank_global(records({1, 5, 5, 5}));
    EXPECT_EQ(c.paper(0).id, "p1");
    EXPECT_EQ(c.paper(1).id, "p2");
    EXPECT_EQ(c.paper(2).id, "p3");
}

TEST(RankGlobal, EmptyInputIsInsufficient) { EXPECT_THROW(rank_global({}), InsufficientDataError); }

TEST(RankedCorpus, UnsortedInputIsInvariantViolation) {
    EXPECT_THROW(RankedCorpus(records({1, 5}), RankPolicy::mean_of_ties), InvariantError);
}

TEST(RankedCorpus, ReservedLabelRejected) {
    EXPECT_THROW(rank_global(records({3, 2}, {"GLOBAL", ""})), IngestionError);
}

TEST(RankedCorpus, GroupLookup) {
    const auto c = rank_global(records({4, 8, 2}, {"A", "", "A"}));
    const auto a = c.group("A");
    EXPECT_EQ(std::vector<std::size_t>(a.begin(), a.end()), (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(c.group(kGlobal).size(), 3u);
    EXPECT_TRUE(c.has_group(kGlobal));
    EXPECT_THROW(c.group("B"), LookupError);
}

TEST(RankPolicyText, ParseAndPrint) {
    EXPECT_EQ(parse_rank_policy("mean"), RankPolicy::mean_of_ties);
    EXPECT_EQ(parse_rank_policy("min-of-ties"), RankPolicy::min_of_ties);
    EXPECT_EQ(to_string(RankPolicy::min_of_ties), "min");
    EXPECT_THROW(parse_rank_policy("max"), DomainError);
}

TEST(WriteCorpus, RoundTrip) {
    auto recs = records({7, 3, 3, 0}, {"JP", "", "US", ""});
    recs[0].groups.push_back("KR");
    std::ostringstream out;
    write_corpus(out, recs, {});
    std::istringstream in(out.str());
    const auto back = load_corpus(in, {});
    ASSERT_EQ(back.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(back[i].id, recs[i].id);
        EXPECT_EQ(back[i].citations, recs[i].citations);
        EXPECT_EQ(back[i].groups, recs[i].groups);
    }
}
