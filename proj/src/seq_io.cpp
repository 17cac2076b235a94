#include "symdist/seq_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <unordered_set>

#include "symdist/common.hpp"
#include "symdist/words.hpp"

namespace symdist {

namespace {

class ByteSource {
public:
    virtual ~ByteSource() = default;
    virtual std::size_t read(char* buf, std::size_t n) = 0;
};

class GzByteSource final : public ByteSource {
public:
    explicit GzByteSource(const std::string& path) : path_(path) {
        // gzopen reads plain files transparently when the gzip magic is absent.
        file_ = gzopen(path.c_str(), "rb");
        if (file_ == nullptr) {
            throw IoError("cannot open FASTA file: " + path);
        }
        gzbuffer(file_, 1 << 20);
    }

    ~GzByteSource() override {
        if (file_ != nullptr) {
            gzclose(file_);
        }
    }

    std::size_t read(char* buf, std::size_t n) override {
        int got = gzread(file_, buf, static_cast<unsigned>(n));
        if (got < 0) {
            int errnum = 0;
            const char* msg = gzerror(file_, &errnum);
            throw IoError("error reading " + path_ + ": " + (msg != nullptr ? msg : "?"));
        }
        return static_cast<std::size_t>(got);
    }

private:
    std::string path_;
    gzFile file_ = nullptr;
};

class MemoryByteSource final : public ByteSource {
public:
    explicit MemoryByteSource(std::string_view text) : text_(text) {}

    std::size_t read(char* buf, std::size_t n) override {
        std::size_t take = std::min(n, text_.size() - pos_);
        std::memcpy(buf, text_.data() + pos_, take);
        pos_ += take;
        return take;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

// Streaming FASTA state machine. Sequence symbols are counted into the
// record offset; '\n' and '\r' are line structure, not symbols.
class FastaScanner {
public:
    FastaScanner(ByteSource& src, SegmentSink& sink) : src_(src), sink_(sink) {}

    void run() {
        std::vector<char> buf(1 << 18);
        std::size_t got = 0;
        while ((got = src_.read(buf.data(), buf.size())) > 0) {
            consume(std::string_view(buf.data(), got));
        }
        finish();
    }

private:
    enum class State { kLineStart, kHeader, kHeaderSkip, kSequence };

    void consume(std::string_view chunk) {
        for (char c : chunk) {
            if (c == '\n') {
                end_of_line();
                continue;
            }
            if (c == '\r') {
                continue;
            }
            switch (state_) {
                case State::kLineStart:
                    if (c == '>') {
                        close_chromosome();
                        header_id_.clear();
                        state_ = State::kHeader;
                    } else {
                        if (!have_chromosome_) {
                            throw FormatError("malformed FASTA: sequence data before first header");
                        }
                        state_ = State::kSequence;
                        sequence_byte(c);
                    }
                    break;
                case State::kHeader:
                    if (c == ' ' || c == '\t') {
                        state_ = State::kHeaderSkip;
                    } else {
                        header_id_.push_back(c);
                    }
                    break;
                case State::kHeaderSkip:
                    break;
                case State::kSequence:
                    sequence_byte(c);
                    break;
            }
        }
        flush_bases();
    }

    void end_of_line() {
        if (state_ == State::kHeader || state_ == State::kHeaderSkip) {
            open_chromosome();
        }
        state_ = State::kLineStart;
    }

    void open_chromosome() {
        if (!seen_ids_.insert(header_id_).second) {
            throw FormatError("duplicate FASTA record id: " + header_id_);
        }
        sink_.begin_chromosome(header_id_);
        have_chromosome_ = true;
        offset_ = 0;
        in_segment_ = false;
    }

    void close_chromosome() {
        if (!have_chromosome_) {
            return;
        }
        close_segment();
        sink_.end_chromosome(offset_);
        have_chromosome_ = false;
    }

    void sequence_byte(char c) {
        int b = base_code(c);
        if (b >= 0) {
            if (!in_segment_) {
                sink_.begin_segment(offset_);
                in_segment_ = true;
            }
            out_.push_back(base_char(b));
            if (out_.size() >= kFlushSize) {
                flush_bases();
            }
        } else {
            close_segment();
        }
        ++offset_;
    }

    void close_segment() {
        if (in_segment_) {
            flush_bases();
            sink_.end_segment();
            in_segment_ = false;
        }
    }

    void flush_bases() {
        if (!out_.empty()) {
            sink_.bases(std::string_view(out_.data(), out_.size()));
            out_.clear();
        }
    }

    void finish() {
        if (state_ == State::kHeader || state_ == State::kHeaderSkip) {
            open_chromosome();  // header line without trailing newline
        }
        close_chromosome();
    }

    static constexpr std::size_t kFlushSize = 1 << 16;

    ByteSource& src_;
    SegmentSink& sink_;
    State state_ = State::kLineStart;
    std::string header_id_;
    std::unordered_set<std::string> seen_ids_;
    bool have_chromosome_ = false;
    bool in_segment_ = false;
    std::uint64_t offset_ = 0;
    std::string out_;
};

class CollectSink final : public SegmentSink {
public:
    explicit CollectSink(std::vector<SequenceSegment>& out) : out_(out) {}

    void begin_chromosome(std::string_view id) override {
        chromosome_.assign(id);
        index_ = 0;
    }
    void begin_segment(std::uint64_t start_offset) override {
        current_ = SequenceSegment{chromosome_, index_++, start_offset, {}};
    }
    void bases(std::string_view chunk) override { current_.bases.append(chunk); }
    void end_segment() override { out_.push_back(std::move(current_)); }

private:
    std::vector<SequenceSegment>& out_;
    std::string chromosome_;
    std::uint64_t index_ = 0;
    SequenceSegment current_;
};

class SummarySink final : public SegmentSink {
public:
    explicit SummarySink(std::vector<ChromosomeSummary>& out) : out_(out) {}

    void begin_chromosome(std::string_view id) override {
        out_.push_back({std::string(id), 0, 0});
    }
    void begin_segment(std::uint64_t) override { ++out_.back().segments; }
    void bases(std::string_view) override {}
    void end_chromosome(std::uint64_t length) override { out_.back().length = length; }

private:
    std::vector<ChromosomeSummary>& out_;
};

}  // namespace

void scan_fasta(const std::string& path, SegmentSink& sink) {
    GzByteSource src(path);
    FastaScanner(src, sink).run();
}

void scan_fasta_text(std::string_view text, SegmentSink& sink) {
    MemoryByteSource src(text);
    FastaScanner(src, sink).run();
}

std::vector<SequenceSegment> read_fasta_segments(const std::string& path) {
    std::vector<SequenceSegment> out;
    CollectSink sink(out);
    scan_fasta(path, sink);
    return out;
}

std::vector<SequenceSegment> read_fasta_segments_text(std::string_view text) {
    std::vector<SequenceSegment> out;
    CollectSink sink(out);
    scan_fasta_text(text, sink);
    return out;
}

GenomeSource scan_summary(const std::string& path) {
    GenomeSource source;
    source.path = path;
    source.digest = file_digest(path);
    SummarySink sink(source.records);
    scan_fasta(path, sink);
    return source;
}

GenomeSource scan_summary_text(std::string_view text) {
    GenomeSource source;
    SummarySink sink(source.records);
    scan_fasta_text(text, sink);
    return source;
}

void replay_segments(std::span<const SequenceSegment> segments, SegmentSink& sink) {
    std::size_t i = 0;
    while (i < segments.size()) {
        const std::string& chrom = segments[i].chromosome;
        sink.begin_chromosome(chrom);
        std::uint64_t extent = 0;
        for (; i < segments.size() && segments[i].chromosome == chrom; ++i) {
            const SequenceSegment& seg = segments[i];
            sink.begin_segment(seg.start_offset);
            sink.bases(seg.bases);
            sink.end_segment();
            extent = std::max(extent, seg.start_offset + seg.bases.size());
        }
        sink.end_chromosome(extent);
    }
}

}  // namespace symdist
