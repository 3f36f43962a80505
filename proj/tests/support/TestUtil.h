// Shared helpers for the test binaries: fixture loading, temp files, and
// subprocess capture for CLI checks.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sirtail/TextIO.h"

namespace sirtail::test {

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path &path,
                       const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out.flush())
    throw std::runtime_error("cannot write " + path.string());
}

inline std::filesystem::path fixture_dir() {
#ifdef SIRTAIL_FIXTURE_DIR
  return SIRTAIL_FIXTURE_DIR;
#else
  return "tests/fixtures";
#endif
}

inline ModuleUnit load_fixture(const std::string &name) {
  ParseResult parsed = parse_module(read_file(fixture_dir() / name));
  if (!parsed.ok()) {
    std::string message = "fixture " + name + " failed to parse:";
    for (const Diagnostic &d : parsed.diagnostics)
      message += "\n  " + format_diagnostic(d);
    throw std::runtime_error(message);
  }
  return std::move(*parsed.module);
}

class TempDir {
public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "sirtail-XXXXXX").string();
    if (!mkdtemp(pattern.data()))
      throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

  std::filesystem::path file(const std::string &name,
                             const std::string &content) const {
    std::filesystem::path p = path_ / name;
    write_file(p, content);
    return p;
  }

private:
  std::filesystem::path path_;
};

struct ProcResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `command` under /bin/sh with stdout and stderr captured in files.
inline ProcResult run_process(const std::string &command) {
  TempDir capture;
  std::filesystem::path out_path = capture.path() / "out";
  std::filesystem::path err_path = capture.path() / "err";
  std::string full =
      command + " >" + out_path.string() + " 2>" + err_path.string();
  int status = std::system(full.c_str());
  ProcResult result;
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

inline std::string cli_path() {
#ifdef SIRTAIL_CLI_PATH
  return SIRTAIL_CLI_PATH;
#else
  throw std::runtime_error("SIRTAIL_CLI_PATH not configured");
#endif
}

} // namespace sirtail::test
