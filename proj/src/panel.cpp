#include "panelcast/panel.hpp"

#include "panelcast/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

namespace panelcast {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
	std::vector<std::string_view> fields;
	std::size_t start = 0;
	while (true) {
		auto comma = line.find(',', start);
		fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	for (auto& f : fields) {
		while (!f.empty() && (f.front() == ' ' || f.front() == '\t'))
			f.remove_prefix(1);
		while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r'))
			f.remove_suffix(1);
	}
	return fields;
}

std::size_t column_index(const std::vector<std::string_view>& header, const std::string& name) {
	auto it = std::find(header.begin(), header.end(), name);
	if (it == header.end())
		throw SchemaError("missing column '" + name + "'");
	return static_cast<std::size_t>(it - header.begin());
}

void check_exogenous(const std::vector<TimeSeries>& series, const std::vector<TimeSeries>& exogenous) {
	std::set<std::pair<std::string, std::string>> seen;
	for (const auto& exo : exogenous) {
		validate_series(exo);
		auto target = std::lower_bound(series.begin(), series.end(), exo.id,
									   [](const TimeSeries& s, const std::string& id) { return s.id < id; });
		if (target == series.end() || target->id != exo.id)
			throw SchemaError("exogenous '" + exo.category + "' refers to unknown series '" + exo.id + "'");
		if (target->start != exo.start || target->size() != exo.size())
			throw SchemaError("exogenous '" + exo.category + "' for '" + exo.id +
							  "' does not cover the calendar span of its target");
		if (!seen.emplace(exo.category, exo.id).second)
			throw DuplicateError("exogenous '" + exo.category + "' given twice for '" + exo.id + "'");
	}
}

} // namespace

void validate_series(const TimeSeries& series) {
	if (series.values.empty())
		throw ValueError("series '" + series.id + "' is empty");
	for (std::size_t i = 0; i < series.values.size(); ++i) {
		double v = series.values[i];
		if (!std::isfinite(v) || v < 0.0)
			throw ValueError("series '" + series.id + "' has invalid value at " + series.month_at(i).str());
	}
}

Panel::Panel(std::vector<TimeSeries> series, std::vector<TimeSeries> exogenous, int frequency)
	: series_(std::move(series)), exogenous_(std::move(exogenous)), frequency_(frequency) {
	if (frequency_ < 2)
		throw ConfigError("seasonal period must be at least 2");
	std::sort(series_.begin(), series_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
	for (std::size_t i = 0; i < series_.size(); ++i) {
		validate_series(series_[i]);
		if (i > 0 && series_[i].id == series_[i - 1].id)
			throw DuplicateError("series id '" + series_[i].id + "' appears twice");
	}
	std::sort(exogenous_.begin(), exogenous_.end(), [](const auto& a, const auto& b) {
		return std::tie(a.category, a.id) < std::tie(b.category, b.id);
	});
	check_exogenous(series_, exogenous_);
}

const TimeSeries* Panel::find(const std::string& id) const {
	auto it = std::lower_bound(series_.begin(), series_.end(), id,
							   [](const TimeSeries& s, const std::string& key) { return s.id < key; });
	return (it != series_.end() && it->id == id) ? &*it : nullptr;
}

const TimeSeries* Panel::find_exogenous(const std::string& name, const std::string& id) const {
	for (const auto& exo : exogenous_)
		if (exo.category == name && exo.id == id)
			return &exo;
	return nullptr;
}

std::vector<std::string> Panel::exogenous_names() const {
	std::set<std::string> names;
	for (const auto& exo : exogenous_)
		names.insert(exo.category);
	return {names.begin(), names.end()};
}

std::vector<std::string> Panel::categories() const {
	std::set<std::string> cats;
	for (const auto& s : series_)
		cats.insert(s.category);
	return {cats.begin(), cats.end()};
}

Panel Panel::with_exogenous(std::vector<TimeSeries> exogenous) const {
	return Panel(series_, std::move(exogenous), frequency_);
}

namespace {

std::vector<TimeSeries> read_rows(std::istream& in, const PanelSchema& schema, bool exogenous) {
	std::string line;
	if (!std::getline(in, line))
		throw SchemaError("empty input, expected a header row");
	// Strip a UTF-8 byte-order mark.
	if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
		line.erase(0, 3);
	const std::string header_line = line;
	auto header = split_fields(header_line);
	const std::size_t id_col = column_index(header, schema.id_column);
	const std::size_t cat_col = column_index(header, schema.category_column);
	const std::size_t month_col = column_index(header, schema.month_column);
	const std::size_t value_col = column_index(header, schema.value_column);
	const std::size_t needed = std::max({id_col, cat_col, month_col, value_col}) + 1;

	struct Row {
		std::string category;
		double value;
	};
	// Exogenous files may carry several variables per target id.
	std::map<std::pair<std::string, std::string>, std::map<YearMonth, Row>> rows;
	std::size_t row_number = 1;
	while (std::getline(in, line)) {
		++row_number;
		if (line.find_first_not_of(" \t\r") == std::string::npos)
			continue;
		auto fields = split_fields(line);
		if (fields.size() < needed)
			throw ValueError("row " + std::to_string(row_number) + ": expected " + std::to_string(needed) +
							 " columns");
		std::string id(fields[id_col]);
		if (id.empty())
			throw ValueError("row " + std::to_string(row_number) + ": empty series id");
		YearMonth month;
		try {
			month = YearMonth::parse(fields[month_col]);
		} catch (const ValueError& e) {
			throw ValueError("row " + std::to_string(row_number) + ": " + e.what());
		}
		double value = 0.0;
		auto text = fields[value_col];
		auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
		if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value) ||
			value < 0.0)
			throw ValueError("row " + std::to_string(row_number) + ": invalid value '" + std::string(text) + "'");
		std::string category(fields[cat_col]);
		auto key = std::make_pair(id, exogenous ? category : std::string());
		auto [it, inserted] = rows[key].emplace(month, Row{std::move(category), value});
		if (!inserted)
			throw DuplicateError("duplicate row for series '" + id + "' at " + month.str());
	}

	std::vector<TimeSeries> out;
	out.reserve(rows.size());
	for (auto& [key, months] : rows) {
		const std::string& id = key.first;
		TimeSeries ts;
		ts.id = id;
		ts.start = months.begin()->first;
		ts.category = months.begin()->second.category;
		YearMonth expected = ts.start;
		for (const auto& [month, row] : months) {
			if (month != expected)
				throw GapError("series '" + id + "' is missing " + expected.str());
			if (row.category != ts.category)
				throw ValueError("series '" + id + "' changes category at " + month.str());
			ts.values.push_back(row.value);
			expected = expected.plus(1);
		}
		out.push_back(std::move(ts));
	}
	return out;
}

} // namespace

std::vector<TimeSeries> read_series_csv(std::istream& in, const PanelSchema& schema) {
	return read_rows(in, schema, false);
}

std::vector<TimeSeries> read_exogenous_csv(std::istream& in, const PanelSchema& schema) {
	return read_rows(in, schema, true);
}

Panel load_panel(std::istream& in, const PanelSchema& schema, int frequency) {
	return Panel(read_series_csv(in, schema), {}, frequency);
}

Panel load_panel_file(const std::string& path, const std::string& exogenous_path, int frequency) {
	std::ifstream in(path);
	if (!in)
		throw SchemaError("cannot open panel file '" + path + "'");
	auto series = read_series_csv(in);
	std::vector<TimeSeries> exogenous;
	if (!exogenous_path.empty()) {
		std::ifstream exo(exogenous_path);
		if (!exo)
			throw SchemaError("cannot open exogenous file '" + exogenous_path + "'");
		exogenous = read_exogenous_csv(exo);
	}
	return Panel(std::move(series), std::move(exogenous), frequency);
}

void write_series_csv(std::ostream& out, const std::vector<TimeSeries>& series) {
	out << "series_id,category,month,value\n";
	for (const auto& s : series) {
		for (std::size_t i = 0; i < s.values.size(); ++i) {
			std::ostringstream value;
			value.precision(17);
			value << s.values[i];
			out << s.id << ',' << s.category << ',' << s.month_at(i).str() << ',' << value.str() << '\n';
		}
	}
}

PanelSplit split(const Panel& panel, const SplitSpec& spec) {
	if (spec.test_length < 1)
		throw ConfigError("test_length must be at least 1");
	if (spec.validation_length < 0)
		throw ConfigError("validation_length must be non-negative");
	const std::size_t minimum =
		static_cast<std::size_t>(spec.test_length + spec.validation_length + panel.frequency());

	auto cut = [&](const TimeSeries& s, TimeSeries& head, TimeSeries& tail) {
		const std::size_t boundary = s.size() - static_cast<std::size_t>(spec.test_length);
		head = TimeSeries{s.id, s.category, s.start, {s.values.begin(), s.values.begin() + boundary}};
		tail = TimeSeries{s.id, s.category, s.month_at(boundary), {s.values.begin() + boundary, s.values.end()}};
	};

	std::vector<TimeSeries> train, test, exo_train, exo_test;
	for (const auto& s : panel.series()) {
		if (s.size() <= minimum)
			throw LengthError("series '" + s.id + "' has " + std::to_string(s.size()) +
							  " months, needs more than " + std::to_string(minimum));
		cut(s, train.emplace_back(), test.emplace_back());
	}
	for (const auto& e : panel.exogenous())
		cut(e, exo_train.emplace_back(), exo_test.emplace_back());
	return {Panel(std::move(train), std::move(exo_train), panel.frequency()),
			Panel(std::move(test), std::move(exo_test), panel.frequency())};
}

Grouping parse_grouping(const std::string& text) {
	if (text == "cat" || text == "CAT" || text == "category")
		return Grouping::category;
	if (text == "all" || text == "ALL")
		return Grouping::all;
	throw ConfigError("unknown grouping '" + text + "' (expected cat or all)");
}

std::string to_string(Grouping grouping) {
	return grouping == Grouping::category ? "cat" : "all";
}

std::vector<Panel> group(const Panel& panel, Grouping mode) {
	if (mode == Grouping::all)
		return {panel};
	std::map<std::string, std::vector<TimeSeries>> by_category;
	std::map<std::string, std::vector<TimeSeries>> exo_by_category;
	for (const auto& s : panel.series())
		by_category[s.category].push_back(s);
	for (const auto& e : panel.exogenous())
		exo_by_category[panel.find(e.id)->category].push_back(e);
	std::vector<Panel> out;
	for (auto& [category, members] : by_category)
		out.emplace_back(std::move(members), std::move(exo_by_category[category]), panel.frequency());
	return out;
}

} // namespace panelcast
