#include "noiselab/set_literal.hpp"
#include "noiselab/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace noiselab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool done() {
        skip_space();
        return pos >= text.size();
    }
    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw MalformedInterval("set literal: " + what + " at position " +
                                std::to_string(pos));
    }
    void expect_open() {
        const char c = peek();
        if (c != '(' && c != '[') fail("expected '(' or '['");
        ++pos;
    }
    void expect_comma() {
        const char c = peek();
        if (c != ',') fail("expected ','");
        ++pos;
    }
    void expect_close() {
        const char c = peek();
        if (c != ')' && c != ']') fail("expected ')' or ']'");
        ++pos;
    }
    double endpoint() {
        skip_space();
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ')' &&
               text[pos] != ']')
            ++pos;
        std::string tok = text.substr(start, pos - start);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back())))
            tok.pop_back();
        if (tok.empty()) {
            pos = start;
            fail("expected endpoint");
        }
        if (tok == "inf" || tok == "+inf") return kInf;
        if (tok == "-inf") return -kInf;
        std::string_view sv = tok;
        if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
        double v = 0.0;
        const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size()) {
            pos = start;
            fail("bad endpoint '" + tok + "'");
        }
        return v;
    }
};

} // namespace

IntervalUnion parse_set_literal(const std::string& text) {
    Cursor c{text};
    if (c.done()) c.fail("expected a set literal");
    c.skip_space();
    if (text.compare(c.pos, 5, "empty") == 0) {
        c.pos += 5;
        if (!c.done()) c.fail("trailing characters after 'empty'");
        return IntervalUnion::empty_set();
    }
    std::vector<Interval> raw;
    for (;;) {
        c.expect_open();
        const std::size_t lo_pos = c.pos;
        const double lo = c.endpoint();
        c.expect_comma();
        const double hi = c.endpoint();
        c.expect_close();
        if (lo > hi) {
            c.pos = lo_pos;
            c.fail("interval has lo > hi");
        }
        raw.push_back({lo, hi});
        if (c.done()) break;
        const char j = c.peek();
        if (j != 'U' && j != 'u') c.fail("expected 'U' between intervals");
        ++c.pos;
    }
    return IntervalUnion::canonicalize(std::move(raw));
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_set_literal(const IntervalUnion& a) {
    if (a.is_empty()) return "empty";
    std::string out;
    bool first = true;
    for (const auto& iv : a.intervals()) {
        if (!first) out += 'U';
        first = false;
        out += std::isinf(iv.lo) ? "(-inf," : "[" + format_double(iv.lo) + ",";
        out += std::isinf(iv.hi) ? "inf)" : format_double(iv.hi) + "]";
    }
    return out;
}

} // namespace noiselab
