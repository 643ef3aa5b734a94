#pragma once

#include "panelcast/model_io.hpp"

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace panelcast {

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

/// What a CLI run consumed and produced. Rerunning the recorded arguments on
/// inputs with the recorded digests reproduces the artifacts.
struct RunManifest {
	std::string command;
	std::vector<std::string> arguments;
	Json config;
	std::map<std::string, std::string> inputs;    // path -> sha256
	std::map<std::string, std::string> artifacts; // path -> sha256
	std::uint64_t master_seed = 0;
	double seconds = 0.0;
	int threads = 1;

	void add_input(const std::filesystem::path& path);
	void add_artifact(const std::filesystem::path& path);
	Json to_json() const;
};

/// Runs one command line (without the program name). Prints a one-line summary
/// to `out` and returns 0, or prints `error code=<Code> message="..."` to `err`
/// and returns nonzero (2 for usage errors, 1 otherwise).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace panelcast
