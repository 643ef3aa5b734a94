#include "panelcast/errors.hpp"
#include "panelcast/panel.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace panelcast;

namespace {

std::string shuffled_rows(const std::string& csv, std::uint64_t seed) {
	std::istringstream in(csv);
	std::string header, line;
	std::getline(in, header);
	std::vector<std::string> rows;
	while (std::getline(in, line))
		rows.push_back(line);
	std::mt19937_64 rng(seed);
	std::shuffle(rows.begin(), rows.end(), rng);
	std::string out = header + "\n";
	for (const auto& r : rows)
		out += r + "\n";
	return out;
}

Panel categories_panel(const std::vector<int>& sizes, int length) {
	std::vector<TimeSeries> all;
	for (std::size_t c = 0; c < sizes.size(); ++c)
		for (int i = 0; i < sizes[c]; ++i)
			all.push_back(testing::series("C" + std::to_string(c) + "_" + std::to_string(i),
										  std::vector<double>(static_cast<std::size_t>(length), 1.0 + i),
										  "cat" + std::to_string(c)));
	return Panel(std::move(all));
}

} // namespace

TEST_CASE("two ids with 24 months each load into two series") {
	std::vector<TimeSeries> s{testing::series("a", std::vector<double>(24, 3.0)),
							  testing::series("b", std::vector<double>(24, 5.0), "B")};
	std::istringstream in(testing::to_csv(s));
	const Panel p = load_panel(in);
	REQUIRE(p.size() == 2);
	CHECK(p.series()[0].size() == 24);
	CHECK(p.series()[1].size() == 24);
	CHECK(p.find("b")->category == "B");
}

TEST_CASE("a missing month is a gap error") {
	std::string csv = "series_id,category,month,value\n";
	for (int m = 1; m <= 6; ++m)
		if (m != 3)
			csv += "x,A,2015-0" + std::to_string(m) + ",1\n";
	std::istringstream in(csv);
	CHECK_THROWS_AS(load_panel(in), GapError);
}

TEST_CASE("malformed rows report their row") {
	std::istringstream bad_value("series_id,category,month,value\nx,A,2015-01,abc\n");
	CHECK_THROWS_AS(load_panel(bad_value), ValueError);
	std::istringstream negative("series_id,category,month,value\nx,A,2015-01,-1\n");
	CHECK_THROWS_AS(load_panel(negative), ValueError);
	std::istringstream bad_month("series_id,category,month,value\nx,A,2015/01,1\n");
	CHECK_THROWS_AS(load_panel(bad_month), ValueError);
	std::istringstream duplicate("series_id,category,month,value\nx,A,2015-01,1\nx,A,2015-01,2\n");
	CHECK_THROWS_AS(load_panel(duplicate), DuplicateError);
	std::istringstream header("id,category,month,value\nx,A,2015-01,1\n");
	CHECK_THROWS_AS(load_panel(header), SchemaError);
	try {
		std::istringstream row3("series_id,category,month,value\nx,A,2015-01,1\nx,A,2015-02,?\n");
		load_panel(row3);
		FAIL("expected ValueError");
	} catch (const ValueError& e) {
		CHECK(std::string(e.what()).find("row 3") != std::string::npos);
	}
}

TEST_CASE("zero counts are legal") {
	std::istringstream in("series_id,category,month,value\nx,A,2015-01,0\nx,A,2015-02,0\n");
	CHECK(load_panel(in).find("x")->values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("a 431-series file spanning Sep 2011 to May 2019 loads completely") {
	std::vector<TimeSeries> all;
	for (int i = 0; i < 431; ++i)
		all.push_back(testing::series("L" + std::to_string(1000 + i), std::vector<double>(93, 1.0 + i % 7)));
	std::istringstream in(testing::to_csv(all));
	const Panel p = load_panel(in);
	CHECK(p.size() == 431);
	CHECK(p.series().front().start == YearMonth{2011, 9});
	CHECK(p.series().front().end() == YearMonth{2019, 5});
}

TEST_CASE("ingestion ignores row order") {
	std::mt19937_64 rng(3);
	std::vector<TimeSeries> s;
	for (int i = 0; i < 5; ++i)
		s.push_back(testing::series("s" + std::to_string(i), testing::random_counts(rng, 30)));
	const std::string csv = testing::to_csv(s);
	std::istringstream a(csv);
	const Panel reference = load_panel(a);
	for (std::uint64_t seed = 0; seed < 5; ++seed) {
		std::istringstream b(shuffled_rows(csv, seed));
		const Panel p = load_panel(b);
		REQUIRE(p.size() == reference.size());
		for (std::size_t i = 0; i < p.size(); ++i) {
			CHECK(p.series()[i].id == reference.series()[i].id);
			CHECK(p.series()[i].start == reference.series()[i].start);
			CHECK(p.series()[i].values == reference.series()[i].values);
		}
	}
}

TEST_CASE("csv values survive a write and read bit-exactly") {
	std::mt19937_64 rng(9);
	std::vector<TimeSeries> s{testing::series("a", testing::random_counts(rng, 20))};
	std::istringstream in(testing::to_csv(s));
	CHECK(load_panel(in).find("a")->values == s[0].values);
}

TEST_CASE("exogenous series must match their target's span") {
	std::vector<TimeSeries> s{testing::series("a", std::vector<double>(24, 3.0))};
	std::vector<TimeSeries> ok{testing::series("a", std::vector<double>(24, 1.0), "ali")};
	CHECK_NOTHROW(Panel(s, ok));
	std::vector<TimeSeries> short_exo{testing::series("a", std::vector<double>(20, 1.0), "ali")};
	CHECK_THROWS(Panel(s, short_exo));
	std::vector<TimeSeries> orphan{testing::series("zz", std::vector<double>(24, 1.0), "ali")};
	CHECK_THROWS(Panel(s, orphan));
}

TEST_CASE("one id may carry several exogenous variables") {
	std::vector<TimeSeries> exo{testing::series("a", std::vector<double>(12, 1.0), "ali"),
								testing::series("a", std::vector<double>(12, 2.0), "rain")};
	std::istringstream in(testing::to_csv(exo));
	const auto read = read_exogenous_csv(in);
	REQUIRE(read.size() == 2);
	const Panel p({testing::series("a", std::vector<double>(12, 4.0))}, read);
	CHECK(p.exogenous_names() == std::vector<std::string>{"ali", "rain"});
	CHECK(p.find_exogenous("rain", "a")->values.front() == 2.0);
}

TEST_CASE("split lengths") {
	SUBCASE("93 months, 12 held out") {
		const Panel p({testing::series("a", std::vector<double>(93, 1.0))});
		const auto parts = split(p, {12, 12});
		CHECK(parts.train.series()[0].size() == 81);
		CHECK(parts.test.series()[0].size() == 12);
		CHECK(parts.test.series()[0].start == YearMonth{2018, 6});
	}
	SUBCASE("42 months, 12 held out") {
		const Panel p({testing::series("a", std::vector<double>(42, 1.0))});
		const auto parts = split(p, {12, 0});
		CHECK(parts.train.series()[0].size() == 30);
		CHECK(parts.test.series()[0].size() == 12);
	}
	SUBCASE("nothing held out is rejected") {
		const Panel p({testing::series("a", std::vector<double>(42, 1.0))});
		CHECK_THROWS_AS(split(p, {0, 0}), ConfigError);
	}
	SUBCASE("too short") {
		const Panel p({testing::series("a", std::vector<double>(36, 1.0))});
		CHECK_THROWS_AS(split(p, {12, 12}), LengthError);
	}
}

TEST_CASE("split then concatenate reproduces every series") {
	std::mt19937_64 rng(11);
	for (int trial = 0; trial < 20; ++trial) {
		std::uniform_int_distribution<int> len(40, 100), test(1, 12);
		std::vector<TimeSeries> s, exo;
		for (int i = 0; i < 4; ++i) {
			const int n = len(rng);
			s.push_back(testing::series("s" + std::to_string(i), testing::random_counts(rng, n)));
			exo.push_back(testing::series("s" + std::to_string(i), testing::random_counts(rng, n), "z"));
		}
		const Panel p(s, exo);
		const int t = test(rng);
		const auto parts = split(p, {t, 12});
		for (const auto& orig : p.series()) {
			auto joined = parts.train.find(orig.id)->values;
			const auto& tail = parts.test.find(orig.id)->values;
			CHECK(tail.size() == static_cast<std::size_t>(t));
			CHECK(parts.test.find(orig.id)->start == parts.train.find(orig.id)->end().plus(1));
			joined.insert(joined.end(), tail.begin(), tail.end());
			CHECK(joined == orig.values);
			auto exo_joined = parts.train.find_exogenous("z", orig.id)->values;
			const auto& exo_tail = parts.test.find_exogenous("z", orig.id)->values;
			exo_joined.insert(exo_joined.end(), exo_tail.begin(), exo_tail.end());
			CHECK(exo_joined == p.find_exogenous("z", orig.id)->values);
		}
	}
}

TEST_CASE("grouping by category") {
	const Panel p = categories_panel({89, 88, 80, 87, 87}, 30);
	const auto cat = group(p, Grouping::category);
	REQUIRE(cat.size() == 5);
	const std::vector<std::size_t> expected{89, 88, 80, 87, 87};
	std::multiset<std::string> ids;
	for (std::size_t c = 0; c < cat.size(); ++c) {
		CHECK(cat[c].size() == expected[c]);
		for (const auto& s : cat[c].series()) {
			CHECK(s.category == "cat" + std::to_string(c));
			ids.insert(s.id);
		}
	}
	const auto all = group(p, Grouping::all);
	REQUIRE(all.size() == 1);
	CHECK(all[0].size() == 431);
	std::multiset<std::string> all_ids;
	for (const auto& s : all[0].series())
		all_ids.insert(s.id);
	CHECK(ids == all_ids);
	CHECK(ids.size() == 431);
}

TEST_CASE("a single category grouped by category is the input") {
	const Panel p = categories_panel({7}, 30);
	const auto cat = group(p, Grouping::category);
	REQUIRE(cat.size() == 1);
	REQUIRE(cat[0].size() == p.size());
	for (std::size_t i = 0; i < p.size(); ++i) {
		CHECK(cat[0].series()[i].id == p.series()[i].id);
		CHECK(cat[0].series()[i].values == p.series()[i].values);
	}
}

TEST_CASE("grouping names parse") {
	CHECK(parse_grouping("all") == Grouping::all);
	CHECK(parse_grouping("category") == Grouping::category);
	CHECK(parse_grouping("cat") == Grouping::category);
	CHECK_THROWS_AS(parse_grouping("region"), ConfigError);
}
