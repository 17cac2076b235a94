#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace symdist {

inline constexpr const char* kVersion = "1.0.0";

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised where a computation divides by the strongest-peak size of a
// distribution that has none.
class PeaklessError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ArchiveError : public std::runtime_error {
public:
    enum class Code { kFormat, kVersion, kChecksum, kTruncated };

    ArchiveError(Code code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

// "crc32:xxxxxxxx" over the raw file bytes.
std::string file_digest(const std::string& path);

// Shortest round-trip-ish decimal with at most `sig` significant digits.
std::string format_sig(double value, int sig = 6);

// Runs fn(i) for i in [0, n); at most `threads` workers, static chunking.
// Exceptions from workers are rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace symdist
