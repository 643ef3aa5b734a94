#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace panelcast {

/// A calendar month. Ordering is chronological.
struct YearMonth {
	int year = 2000;
	int month = 1; // 1..12

	auto operator<=>(const YearMonth&) const = default;

	/// Month index since year 0, convenient for arithmetic.
	int ordinal() const { return year * 12 + (month - 1); }
	static YearMonth from_ordinal(int ordinal);

	YearMonth plus(int months) const { return from_ordinal(ordinal() + months); }
	/// Number of months from `other` to `*this`.
	int minus(const YearMonth& other) const { return ordinal() - other.ordinal(); }

	/// Parses `YYYY-MM`. Throws ValueError on anything else.
	static YearMonth parse(std::string_view text);
	std::string str() const;
};

} // namespace panelcast
