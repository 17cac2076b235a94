#include "symdist/common.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>
#include <vector>

namespace symdist {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file for digest: " + path);
    }
    uLong crc = crc32(0L, Z_NULL, 0);
    std::vector<char> buf(1 << 20);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        std::streamsize got = in.gcount();
        if (got > 0) {
            crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()),
                        static_cast<uInt>(got));
        }
    }
    char out[24];
    std::snprintf(out, sizeof(out), "crc32:%08lx", static_cast<unsigned long>(crc));
    return out;
}

std::string format_sig(double value, int sig) {
    if (std::isnan(value)) {
        return "NA";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, value);
    return buf;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads < 1) {
        threads = 1;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += workers) {
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace symdist
