#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dqmotion/bvh.hpp"
#include "dqmotion/error.hpp"

namespace dqm {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

struct Token {
    std::string_view text;
    std::size_t line = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::optional<Token> next() {
        skip_space();
        if (pos_ >= text_.size()) return std::nullopt;
        const std::size_t start = pos_;
        // Braces are tokens even when glued to a neighbour.
        if (text_[pos_] == '{' || text_[pos_] == '}') {
            ++pos_;
        } else {
            while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '{' && text_[pos_] != '}') {
                ++pos_;
            }
        }
        return Token{text_.substr(start, pos_ - start), line_};
    }

    Token expect_any(std::string_view what) {
        auto t = next();
        if (!t) throw Error(ErrorCode::SyntaxError, "unexpected end of file, expected " + std::string(what), line_);
        return *t;
    }

    void expect(std::string_view word) {
        const Token t = expect_any(word);
        if (t.text != word) {
            throw Error(ErrorCode::SyntaxError,
                        "expected '" + std::string(word) + "', found '" + std::string(t.text) + "'", t.line);
        }
    }

    // Rest of the current line after the last token, for line-oriented rows.
    std::optional<std::pair<std::string_view, std::size_t>> next_line() {
        while (pos_ < text_.size()) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            std::string_view line = text_.substr(start, pos_ - start);
            const std::size_t number = line_;
            if (pos_ < text_.size()) {
                ++pos_;
                ++line_;
            }
            bool blank = true;
            for (char c : line) blank = blank && is_space(c);
            if (!blank) return std::make_pair(line, number);
        }
        return std::nullopt;
    }

    // Moves past the newline that ends the current line.
    void finish_line() {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
            if (!is_space(text_[pos_])) return;
            ++pos_;
        }
        if (pos_ < text_.size()) {
            ++pos_;
            ++line_;
        }
    }

    std::size_t line() const { return line_; }

private:
    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

double parse_double(const Token& t) {
    double v = 0.0;
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::SyntaxError, "invalid number '" + std::string(t.text) + "'", t.line);
    }
    return v;
}

std::size_t parse_count(const Token& t) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
        throw Error(ErrorCode::SyntaxError, "invalid count '" + std::string(t.text) + "'", t.line);
    }
    return v;
}

class HierarchyParser {
public:
    explicit HierarchyParser(Lexer& lex) : lex_(lex) {}

    Skeleton parse() {
        lex_.expect("HIERARCHY");
        lex_.expect("ROOT");
        const Token name = lex_.expect_any("root name");
        parse_joint(std::string(name.text), std::nullopt, false, name.line);
        try {
            return Skeleton(std::move(joints_));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SyntaxError) throw Error(e.code(), e.what(), lex_.line());
            throw;
        }
    }

private:
    void parse_joint(std::string name, std::optional<std::size_t> parent, bool end_site, std::size_t line) {
        const std::size_t index = joints_.size();
        joints_.push_back(JointSpec{std::move(name), parent, {}, {}, end_site});
        lex_.expect("{");
        bool have_offset = false;
        for (;;) {
            const Token t = lex_.expect_any("joint body");
            if (t.text == "}") break;
            if (t.text == "OFFSET") {
                const double x = parse_double(lex_.expect_any("offset x"));
                const double y = parse_double(lex_.expect_any("offset y"));
                const double z = parse_double(lex_.expect_any("offset z"));
                joints_[index].offset = {x, y, z};
                have_offset = true;
            } else if (t.text == "CHANNELS") {
                if (end_site) throw Error(ErrorCode::SyntaxError, "End Site cannot declare channels", t.line);
                const std::size_t n = parse_count(lex_.expect_any("channel count"));
                if (n > 6) throw Error(ErrorCode::SyntaxError, "more than six channels", t.line);
                for (std::size_t k = 0; k < n; ++k) {
                    const Token c = lex_.expect_any("channel name");
                    const auto channel = channel_from_string(c.text);
                    if (!channel) {
                        throw Error(ErrorCode::UnsupportedChannel,
                                    "unknown channel '" + std::string(c.text) + "'",
                                    c.line);
                    }
                    joints_[index].channels.push_back(*channel);
                }
            } else if (t.text == "JOINT" && !end_site) {
                const Token n = lex_.expect_any("joint name");
                parse_joint(std::string(n.text), index, false, n.line);
            } else if (t.text == "End" && !end_site) {
                lex_.expect("Site");
                parse_joint(unique_end_name(joints_[index].name), index, true, t.line);
            } else {
                throw Error(ErrorCode::SyntaxError, "unexpected token '" + std::string(t.text) + "'", t.line);
            }
        }
        if (!have_offset) throw Error(ErrorCode::SyntaxError, "joint without OFFSET", line);
    }

    std::string unique_end_name(const std::string& parent) {
        std::string base = parent + "_end";
        std::string candidate = base;
        for (int k = 2; taken(candidate); ++k) candidate = base + std::to_string(k);
        return candidate;
    }

    bool taken(const std::string& name) const {
        for (const auto& j : joints_) {
            if (j.name == name) return true;
        }
        return false;
    }

    Lexer& lex_;
    std::vector<JointSpec> joints_;
};

}  // namespace

Skeleton bvh_parse_hierarchy(std::string_view text) {
    Lexer lex(text);
    Skeleton s = HierarchyParser(lex).parse();
    if (auto t = lex.next()) {
        throw Error(ErrorCode::SyntaxError, "trailing content after hierarchy", t->line);
    }
    return s;
}

MotionClip bvh_parse(std::string_view text) {
    Lexer lex(text);
    MotionClip clip;
    clip.skeleton = HierarchyParser(lex).parse();

    lex.expect("MOTION");
    lex.expect("Frames:");
    const Token frames_token = lex.expect_any("frame count");
    clip.frame_count = parse_count(frames_token);
    if (clip.frame_count == 0) throw Error(ErrorCode::SyntaxError, "clip has no frames", frames_token.line);
    lex.expect("Frame");
    lex.expect("Time:");
    const Token time_token = lex.expect_any("frame time");
    clip.frame_time = parse_double(time_token);
    if (!(clip.frame_time > 0.0)) throw Error(ErrorCode::SyntaxError, "frame time must be positive", time_token.line);
    lex.finish_line();

    const std::size_t width = clip.skeleton.channel_count();
    clip.values.reserve(clip.frame_count * width);
    for (std::size_t f = 0; f < clip.frame_count; ++f) {
        const auto row = lex.next_line();
        if (!row) {
            throw Error(ErrorCode::SyntaxError,
                        "expected " + std::to_string(clip.frame_count) + " frames, found " + std::to_string(f),
                        lex.line());
        }
        Lexer cells(row->first);
        std::size_t count = 0;
        while (auto cell = cells.next()) {
            if (count < width) clip.values.push_back(parse_double(Token{cell->text, row->second}));
            ++count;
        }
        if (count != width) {
            throw Error(ErrorCode::ChannelMismatch,
                        "frame row has " + std::to_string(count) + " values, expected " + std::to_string(width),
                        row->second);
        }
    }
    if (const auto extra = lex.next_line()) {
        throw Error(ErrorCode::SyntaxError, "more frame rows than declared", extra->second);
    }
    return clip;
}

MotionClip bvh_read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return bvh_parse(buffer.str());
}

}  // namespace dqm
