#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "symdist/common.hpp"
#include "symdist/distances.hpp"

namespace symdist {

namespace {

constexpr char kMagic[4] = {'S', 'Y', 'M', 'D'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_string(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

class PayloadReader {
public:
    explicit PayloadReader(const std::string& buf) : buf_(buf) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) {
            v = (v << 8) | static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)]);
        }
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) {
            v = (v << 8) | static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)]);
        }
        pos_ += 8;
        return v;
    }

    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool exhausted() const { return pos_ == buf_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size()) {
            throw ArchiveError(ArchiveError::Code::kTruncated,
                               "archive payload ends unexpectedly");
        }
    }

    const std::string& buf_;
    std::size_t pos_ = 0;
};

// Streams the payload through deflate to the file so neither the raw nor
// the compressed image is ever held whole in memory.
class DeflateFileWriter {
public:
    explicit DeflateFileWriter(std::ofstream& out) : out_(out) {
        std::memset(&strm_, 0, sizeof(strm_));
        if (deflateInit(&strm_, Z_DEFAULT_COMPRESSION) != Z_OK) {
            throw IoError("deflate initialization failed");
        }
    }

    ~DeflateFileWriter() { deflateEnd(&strm_); }

    void feed(const char* data, std::size_t n) {
        if (n == 0) {
            return;
        }
        crc_ = crc32(crc_, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(n));
        raw_size_ += n;
        pump(data, n, Z_NO_FLUSH);
    }

    void feed(const std::string& s) { feed(s.data(), s.size()); }

    void finish() { pump(nullptr, 0, Z_FINISH); }

    std::uint64_t raw_size() const { return raw_size_; }
    std::uint64_t compressed_size() const { return compressed_size_; }
    std::uint32_t crc() const { return static_cast<std::uint32_t>(crc_); }

private:
    void pump(const char* data, std::size_t n, int flush) {
        strm_.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data));
        strm_.avail_in = static_cast<uInt>(n);
        do {
            strm_.next_out = reinterpret_cast<Bytef*>(chunk_.data());
            strm_.avail_out = static_cast<uInt>(chunk_.size());
            const int rc = deflate(&strm_, flush);
            if (rc == Z_STREAM_ERROR) {
                throw IoError("deflate stream error while writing archive");
            }
            const std::size_t produced = chunk_.size() - strm_.avail_out;
            if (produced > 0) {
                out_.write(chunk_.data(), static_cast<std::streamsize>(produced));
                compressed_size_ += produced;
            }
        } while (strm_.avail_out == 0);
    }

    std::ofstream& out_;
    z_stream strm_;
    std::array<char, 1 << 20> chunk_{};
    uLong crc_ = crc32(0L, Z_NULL, 0);
    std::uint64_t raw_size_ = 0;
    std::uint64_t compressed_size_ = 0;
};

void serialize_payload(const CountArchive& a, DeflateFileWriter& w) {
    std::string head;
    put_u32(head, static_cast<std::uint32_t>(a.k));
    put_u32(head, a.d_max);
    put_u32(head, static_cast<std::uint32_t>(a.sources.size()));
    for (const SourceInfo& s : a.sources) {
        put_string(head, s.path);
        put_string(head, s.digest);
    }
    put_u32(head, static_cast<std::uint32_t>(a.chromosomes.size()));
    for (const ChromosomeSummary& c : a.chromosomes) {
        put_string(head, c.id);
        put_u64(head, c.length);
        put_u64(head, c.segments);
    }
    w.feed(head);

    const std::uint64_t n_words = word_space_size(a.k);
    std::string buf;
    for (const HistogramTable& table : a.per_chromosome) {
        buf.clear();
        std::uint64_t rows = 0;
        for (std::uint64_t word = 0; word < n_words; ++word) {
            if (!table.entries(static_cast<word_code_t>(word)).empty()) {
                ++rows;
            }
        }
        put_u64(buf, rows);
        for (std::uint64_t word = 0; word < n_words; ++word) {
            auto span = table.entries(static_cast<word_code_t>(word));
            if (span.empty()) {
                continue;
            }
            put_u32(buf, static_cast<word_code_t>(word));
            put_u32(buf, static_cast<std::uint32_t>(span.size()));
            for (const HistogramEntry& e : span) {
                put_u32(buf, e.distance);
                put_u64(buf, e.count);
            }
            if (buf.size() >= (1 << 20)) {
                w.feed(buf);
                buf.clear();
            }
        }
        w.feed(buf);
    }
}

std::string header_bytes(std::uint32_t version, std::uint64_t payload_size,
                         std::uint32_t payload_crc, std::uint64_t compressed_size) {
    std::string h(kMagic, sizeof(kMagic));
    put_u32(h, version);
    put_u64(h, payload_size);
    put_u32(h, payload_crc);
    put_u64(h, compressed_size);
    return h;
}

CountArchive parse_payload(const std::string& payload) {
    PayloadReader r(payload);
    CountArchive a;
    a.k = static_cast<int>(r.u32());
    if (!valid_word_length(a.k)) {
        throw ArchiveError(ArchiveError::Code::kFormat,
                           "archive word length out of range: " + std::to_string(a.k));
    }
    a.d_max = r.u32();
    const std::uint32_t n_sources = r.u32();
    for (std::uint32_t i = 0; i < n_sources; ++i) {
        SourceInfo s;
        s.path = r.str();
        s.digest = r.str();
        a.sources.push_back(std::move(s));
    }
    const std::uint32_t n_chrom = r.u32();
    for (std::uint32_t i = 0; i < n_chrom; ++i) {
        ChromosomeSummary c;
        c.id = r.str();
        c.length = r.u64();
        c.segments = r.u64();
        a.chromosomes.push_back(std::move(c));
    }
    for (std::uint32_t c = 0; c < n_chrom; ++c) {
        const std::uint64_t rows = r.u64();
        std::vector<HistogramEntry> entries;
        std::vector<word_code_t> row_words;
        std::vector<std::uint32_t> row_sizes;
        row_words.reserve(rows);
        row_sizes.reserve(rows);
        for (std::uint64_t i = 0; i < rows; ++i) {
            const word_code_t word = r.u32();
            const std::uint32_t n = r.u32();
            row_words.push_back(word);
            row_sizes.push_back(n);
            for (std::uint32_t j = 0; j < n; ++j) {
                const std::uint32_t distance = r.u32();
                const std::uint64_t count = r.u64();
                entries.push_back({distance, count});
            }
        }
        try {
            a.per_chromosome.push_back(HistogramTable::from_sorted(
                a.k, std::move(entries), std::move(row_words), std::move(row_sizes)));
        } catch (const std::invalid_argument& e) {
            throw ArchiveError(ArchiveError::Code::kFormat, e.what());
        }
    }
    if (!r.exhausted()) {
        throw ArchiveError(ArchiveError::Code::kFormat, "trailing bytes in archive payload");
    }
    if (a.per_chromosome.empty()) {
        a.aggregate = HistogramTable(a.k);
    } else {
        a.aggregate = HistogramTable::merge(a.per_chromosome);
    }
    return a;
}

void save_archive_binary(const CountArchive& a, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open archive for writing: " + path);
    }
    const std::string placeholder = header_bytes(kFormatVersion, 0, 0, 0);
    out.write(placeholder.data(), static_cast<std::streamsize>(placeholder.size()));

    DeflateFileWriter w(out);
    serialize_payload(a, w);
    w.finish();

    const std::string header =
        header_bytes(kFormatVersion, w.raw_size(), w.crc(), w.compressed_size());
    out.seekp(0);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    out.flush();
    if (!out) {
        throw IoError("failed writing archive: " + path);
    }
}

CountArchive load_archive_binary(std::ifstream& in, const std::string& path) {
    constexpr std::streamsize kHeaderSize = 28;
    std::string header(kHeaderSize, '\0');
    in.read(header.data(), kHeaderSize);
    if (in.gcount() != kHeaderSize) {
        throw ArchiveError(ArchiveError::Code::kTruncated, "archive header truncated: " + path);
    }
    if (std::memcmp(header.data(), kMagic, sizeof(kMagic)) != 0) {
        throw ArchiveError(ArchiveError::Code::kFormat, "bad archive magic: " + path);
    }
    auto read_u32 = [&header](std::size_t at) {
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) {
            v = (v << 8) | static_cast<unsigned char>(header[at + static_cast<std::size_t>(i)]);
        }
        return v;
    };
    auto read_u64 = [&header](std::size_t at) {
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) {
            v = (v << 8) | static_cast<unsigned char>(header[at + static_cast<std::size_t>(i)]);
        }
        return v;
    };
    const std::uint32_t version = read_u32(4);
    if (version != kFormatVersion) {
        throw ArchiveError(ArchiveError::Code::kVersion,
                           "unsupported archive version " + std::to_string(version));
    }
    const std::uint64_t payload_size = read_u64(8);
    const std::uint32_t payload_crc = read_u32(16);
    const std::uint64_t compressed_size = read_u64(20);
    std::string compressed(compressed_size, '\0');
    in.read(compressed.data(), static_cast<std::streamsize>(compressed_size));
    if (static_cast<std::uint64_t>(in.gcount()) != compressed_size) {
        throw ArchiveError(ArchiveError::Code::kTruncated,
                           "archive data truncated: " + path);
    }

    std::string payload(payload_size, '\0');
    z_stream strm;
    std::memset(&strm, 0, sizeof(strm));
    if (inflateInit(&strm) != Z_OK) {
        throw IoError("inflate initialization failed");
    }
    strm.next_in = reinterpret_cast<Bytef*>(compressed.data());
    strm.avail_in = static_cast<uInt>(compressed.size());
    strm.next_out = reinterpret_cast<Bytef*>(payload.data());
    strm.avail_out = static_cast<uInt>(payload.size());
    const int rc = inflate(&strm, Z_FINISH);
    const std::uint64_t produced = payload_size - strm.avail_out;
    inflateEnd(&strm);
    if (rc != Z_STREAM_END || produced != payload_size) {
        throw ArchiveError(ArchiveError::Code::kTruncated,
                           "archive payload does not decompress cleanly: " + path);
    }
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(payload.data()),
                            static_cast<uInt>(payload.size()));
    if (static_cast<std::uint32_t>(crc) != payload_crc) {
        throw ArchiveError(ArchiveError::Code::kChecksum, "archive checksum mismatch: " + path);
    }
    return parse_payload(payload);
}

std::uint64_t parse_u64_field(std::string_view text, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ArchiveError(ArchiveError::Code::kFormat,
                           std::string("bad ") + what + " field: " + std::string(text));
    }
    return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

}  // namespace

void write_archive_tsv(const CountArchive& a, std::ostream& out) {
    out << "#symdist-archive\t" << kFormatVersion << '\n';
    out << "#k\t" << a.k << '\n';
    out << "#dmax\t" << a.d_max << '\n';
    for (const SourceInfo& s : a.sources) {
        out << "#source\t" << s.path << '\t' << s.digest << '\n';
    }
    for (const ChromosomeSummary& c : a.chromosomes) {
        out << "#chromosome\t" << c.id << '\t' << c.length << '\t' << c.segments << '\n';
    }
    out << "#word\tchromosome\tdistance\tcount\n";
    const std::uint64_t n_words = word_space_size(a.k);
    for (std::size_t c = 0; c < a.per_chromosome.size(); ++c) {
        const HistogramTable& table = a.per_chromosome[c];
        for (std::uint64_t word = 0; word < n_words; ++word) {
            auto span = table.entries(static_cast<word_code_t>(word));
            if (span.empty()) {
                continue;
            }
            const std::string text = decode_word(static_cast<word_code_t>(word), a.k);
            for (const HistogramEntry& e : span) {
                out << text << '\t' << a.chromosomes[c].id << '\t' << e.distance << '\t'
                    << e.count << '\n';
            }
        }
    }
}

CountArchive read_archive_tsv(std::istream& in) {
    CountArchive a;
    a.k = -1;
    bool have_dmax = false;
    std::unordered_map<std::string, std::size_t> chrom_index;
    struct Row {
        word_code_t word;
        std::uint32_t distance;
        std::uint64_t count;
    };
    std::vector<std::vector<Row>> rows;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto fields = split_tabs(line);
        if (line[0] == '#') {
            const std::string_view tag = fields[0];
            if (tag == "#k" && fields.size() == 2) {
                a.k = static_cast<int>(parse_u64_field(fields[1], "k"));
            } else if (tag == "#dmax" && fields.size() == 2) {
                a.d_max = static_cast<std::uint32_t>(parse_u64_field(fields[1], "dmax"));
                have_dmax = true;
            } else if (tag == "#source" && fields.size() == 3) {
                a.sources.push_back({std::string(fields[1]), std::string(fields[2])});
            } else if (tag == "#chromosome" && fields.size() == 4) {
                ChromosomeSummary c;
                c.id = std::string(fields[1]);
                c.length = parse_u64_field(fields[2], "chromosome length");
                c.segments = parse_u64_field(fields[3], "chromosome segments");
                if (!chrom_index.try_emplace(c.id, a.chromosomes.size()).second) {
                    throw ArchiveError(ArchiveError::Code::kFormat,
                                       "duplicate chromosome in archive: " + c.id);
                }
                a.chromosomes.push_back(std::move(c));
                rows.emplace_back();
            }
            continue;
        }
        if (a.k < 0 || !have_dmax) {
            throw ArchiveError(ArchiveError::Code::kFormat,
                               "archive TSV data precedes #k/#dmax metadata");
        }
        if (fields.size() != 4) {
            throw ArchiveError(ArchiveError::Code::kFormat,
                               "archive TSV line " + std::to_string(lineno) +
                                   " does not have 4 fields");
        }
        word_code_t word = 0;
        try {
            if (static_cast<int>(fields[0].size()) != a.k) {
                throw std::invalid_argument("word length does not match k");
            }
            word = encode_word(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw ArchiveError(ArchiveError::Code::kFormat,
                               "archive TSV line " + std::to_string(lineno) + ": " + e.what());
        }
        auto it = chrom_index.find(std::string(fields[1]));
        if (it == chrom_index.end()) {
            throw ArchiveError(ArchiveError::Code::kFormat,
                               "archive TSV row names unknown chromosome: " +
                                   std::string(fields[1]));
        }
        const auto distance =
            static_cast<std::uint32_t>(parse_u64_field(fields[2], "distance"));
        const std::uint64_t count = parse_u64_field(fields[3], "count");
        if (distance < 1 || distance > a.d_max || count < 1) {
            throw ArchiveError(ArchiveError::Code::kFormat,
                               "archive TSV line " + std::to_string(lineno) +
                                   " outside valid distance/count range");
        }
        rows[it->second].push_back({word, distance, count});
    }
    if (a.k < 0 || !have_dmax) {
        throw ArchiveError(ArchiveError::Code::kFormat, "archive TSV missing #k/#dmax metadata");
    }

    for (std::size_t c = 0; c < rows.size(); ++c) {
        auto& rs = rows[c];
        std::sort(rs.begin(), rs.end(), [](const Row& x, const Row& y) {
            return x.word != y.word ? x.word < y.word : x.distance < y.distance;
        });
        std::vector<HistogramEntry> entries;
        std::vector<word_code_t> row_words;
        std::vector<std::uint32_t> row_sizes;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (i > 0 && rs[i].word == rs[i - 1].word && rs[i].distance == rs[i - 1].distance) {
                throw ArchiveError(ArchiveError::Code::kFormat,
                                   "duplicate archive TSV row for word " +
                                       decode_word(rs[i].word, a.k));
            }
            if (row_words.empty() || row_words.back() != rs[i].word) {
                row_words.push_back(rs[i].word);
                row_sizes.push_back(0);
            }
            entries.push_back({rs[i].distance, rs[i].count});
            ++row_sizes.back();
        }
        a.per_chromosome.push_back(HistogramTable::from_sorted(
            a.k, std::move(entries), std::move(row_words), std::move(row_sizes)));
    }
    if (a.per_chromosome.empty()) {
        a.aggregate = HistogramTable(a.k);
    } else {
        a.aggregate = HistogramTable::merge(a.per_chromosome);
    }
    return a;
}

void save_archive(const CountArchive& archive, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot open archive for writing: " + path);
        }
        write_archive_tsv(archive, out);
        out.flush();
        if (!out) {
            throw IoError("failed writing archive: " + path);
        }
        return;
    }
    save_archive_binary(archive, path);
}

CountArchive load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open archive: " + path);
    }
    const int first = in.peek();
    if (first == '#') {
        return read_archive_tsv(in);
    }
    return load_archive_binary(in, path);
}

}  // namespace symdist
