#include "panelcast/calendar.hpp"

#include "panelcast/errors.hpp"

#include <charconv>
#include <cstdio>

namespace panelcast {

YearMonth YearMonth::from_ordinal(int ordinal) {
	YearMonth ym;
	ym.year = ordinal / 12;
	ym.month = ordinal % 12 + 1;
	return ym;
}

YearMonth YearMonth::parse(std::string_view text) {
	auto fail = [&]() -> YearMonth {
		throw ValueError("invalid month '" + std::string(text) + "', expected YYYY-MM");
	};
	if (text.size() != 7 || text[4] != '-')
		return fail();
	YearMonth ym;
	auto [p1, e1] = std::from_chars(text.data(), text.data() + 4, ym.year);
	auto [p2, e2] = std::from_chars(text.data() + 5, text.data() + 7, ym.month);
	if (e1 != std::errc{} || e2 != std::errc{} || p1 != text.data() + 4 || p2 != text.data() + 7)
		return fail();
	if (ym.month < 1 || ym.month > 12 || ym.year < 0)
		return fail();
	return ym;
}

std::string YearMonth::str() const {
	char buf[16];
	std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
	return buf;
}

} // namespace panelcast
