#pragma once

#include "panelcast/panel.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

inline panelcast::TimeSeries series(std::string id, std::vector<double> values, std::string category = "A",
									panelcast::YearMonth start = {2011, 9}) {
	return {std::move(id), std::move(category), start, std::move(values)};
}

inline std::vector<double> random_counts(std::mt19937_64& rng, int n, double lo = 1.0, double hi = 500.0) {
	std::uniform_real_distribution<double> u(lo, hi);
	std::vector<double> out(static_cast<std::size_t>(n));
	for (auto& v : out)
		v = u(rng);
	return out;
}

inline std::string to_csv(const std::vector<panelcast::TimeSeries>& s) {
	std::ostringstream out;
	panelcast::write_series_csv(out, s);
	return out.str();
}

inline double relative_error(double a, double b) {
	return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
	const double n = static_cast<double>(a.size());
	double ma = 0, mb = 0;
	for (std::size_t i = 0; i < a.size(); ++i) {
		ma += a[i] / n;
		mb += b[i] / n;
	}
	double sab = 0, saa = 0, sbb = 0;
	for (std::size_t i = 0; i < a.size(); ++i) {
		sab += (a[i] - ma) * (b[i] - mb);
		saa += (a[i] - ma) * (a[i] - ma);
		sbb += (b[i] - mb) * (b[i] - mb);
	}
	return sab / std::sqrt(saa * sbb);
}

/// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
public:
	explicit TempDir(const std::string& tag) {
		std::random_device rd;
		path_ = std::filesystem::temp_directory_path() / ("panelcast_" + tag + "_" + std::to_string(rd()));
		std::filesystem::remove_all(path_);
		std::filesystem::create_directories(path_);
	}
	~TempDir() {
		std::error_code ec;
		std::filesystem::remove_all(path_, ec);
	}
	TempDir(const TempDir&) = delete;
	TempDir& operator=(const TempDir&) = delete;
	const std::filesystem::path& path() const { return path_; }
	std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
	std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
	std::ifstream in(path, std::ios::binary);
	std::ostringstream out;
	out << in.rdbuf();
	return out.str();
}

} // namespace testing
