#pragma once

#include "panelcast/calendar.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace panelcast {

/// One monthly count series. Values are consecutive months starting at `start`.
struct TimeSeries {
	std::string id;
	std::string category;
	YearMonth start;
	std::vector<double> values;

	std::size_t size() const { return values.size(); }
	/// Last observed month.
	YearMonth end() const { return start.plus(static_cast<int>(values.size()) - 1); }
	YearMonth month_at(std::size_t index) const { return start.plus(static_cast<int>(index)); }
};

/// Throws ValueError unless the series is non-empty with finite, non-negative values.
void validate_series(const TimeSeries& series);

/// A keyed, immutable collection of target series plus optional exogenous series.
///
/// Exogenous entries reuse TimeSeries: `id` names the target they accompany and
/// `category` names the exogenous variable. Each must cover exactly the calendar
/// span of its target. Series are held sorted by id.
class Panel {
public:
	Panel() = default;
	Panel(std::vector<TimeSeries> series, std::vector<TimeSeries> exogenous = {}, int frequency = 12);

	const std::vector<TimeSeries>& series() const { return series_; }
	const std::vector<TimeSeries>& exogenous() const { return exogenous_; }
	int frequency() const { return frequency_; }
	std::size_t size() const { return series_.size(); }
	bool empty() const { return series_.empty(); }

	const TimeSeries* find(const std::string& id) const;
	const TimeSeries* find_exogenous(const std::string& name, const std::string& id) const;
	/// Distinct exogenous variable names, sorted.
	std::vector<std::string> exogenous_names() const;
	/// Distinct categories, sorted.
	std::vector<std::string> categories() const;

	/// Same series with a replacement exogenous set (validated).
	Panel with_exogenous(std::vector<TimeSeries> exogenous) const;

private:
	std::vector<TimeSeries> series_;
	std::vector<TimeSeries> exogenous_;
	int frequency_ = 12;
};

/// Column mapping for the long-format CSV (`series_id,category,month,value`).
struct PanelSchema {
	std::string id_column = "series_id";
	std::string category_column = "category";
	std::string month_column = "month";
	std::string value_column = "value";
};

/// Reads long-format rows into series. Rows may arrive in any order.
/// Throws SchemaError, ValueError(row), DuplicateError, GapError(id, month).
std::vector<TimeSeries> read_series_csv(std::istream& in, const PanelSchema& schema = {});
/// Same format; the category column names the exogenous variable, so one id may
/// carry several variables.
std::vector<TimeSeries> read_exogenous_csv(std::istream& in, const PanelSchema& schema = {});
Panel load_panel(std::istream& in, const PanelSchema& schema = {}, int frequency = 12);
Panel load_panel_file(const std::string& path, const std::string& exogenous_path = {},
					  int frequency = 12);

void write_series_csv(std::ostream& out, const std::vector<TimeSeries>& series);

struct SplitSpec {
	int test_length = 12;
	int validation_length = 12;
};

struct PanelSplit {
	Panel train;
	Panel test;
};

/// Holds out the last `test_length` months of every series (and exogenous series).
/// Throws ConfigError for test_length < 1 and LengthError(id) when a series has
/// length <= test_length + validation_length + S.
PanelSplit split(const Panel& panel, const SplitSpec& spec);

enum class Grouping { category, all };

Grouping parse_grouping(const std::string& text);
std::string to_string(Grouping grouping);

/// CAT: one sub-panel per category (sorted by category). ALL: the whole panel.
std::vector<Panel> group(const Panel& panel, Grouping mode);

} // namespace panelcast
