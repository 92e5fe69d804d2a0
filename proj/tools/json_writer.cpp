#include "json_writer.hpp"

#include <cmath>
#include <cstdio>

#include "noiselab/errors.hpp"
#include "noiselab/set_literal.hpp"

namespace noiselab {

void JsonWriter::indent() {
    for (std::size_t i = 0; i < stack_.size(); ++i) out_ << "  ";
}

void JsonWriter::before_item() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (stack_.empty()) return;
    Level& top = stack_.back();
    if (top.count > 0) out_ << ',';
    ++top.count;
    out_ << '\n';
    indent();
}

JsonWriter& JsonWriter::begin_object() {
    before_item();
    out_ << '{';
    stack_.push_back(Level{false, 0});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    if (stack_.empty() || stack_.back().is_array)
        throw Error("json writer: mismatched end_object");
    const bool had_items = stack_.back().count > 0;
    stack_.pop_back();
    if (had_items) {
        out_ << '\n';
        indent();
    }
    out_ << '}';
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    before_item();
    out_ << '[';
    stack_.push_back(Level{true, 0});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    if (stack_.empty() || !stack_.back().is_array)
        throw Error("json writer: mismatched end_array");
    const bool had_items = stack_.back().count > 0;
    stack_.pop_back();
    if (had_items) {
        out_ << '\n';
        indent();
    }
    out_ << ']';
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    if (stack_.empty() || stack_.back().is_array)
        throw Error("json writer: key outside object");
    before_item();
    out_ << '"';
    write_escaped(k);
    out_ << "\": ";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    if (!std::isfinite(v)) return null_value();
    before_item();
    out_ << format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    before_item();
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(unsigned long v) {
    before_item();
    out_ << v;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    before_item();
    out_ << (v ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
    before_item();
    out_ << '"';
    write_escaped(s);
    out_ << '"';
    return *this;
}

JsonWriter& JsonWriter::null_value() {
    before_item();
    out_ << "null";
    return *this;
}

void JsonWriter::write_escaped(const std::string& s) {
    for (unsigned char c : s) {
        switch (c) {
            case '"': out_ << "\\\""; break;
            case '\\': out_ << "\\\\"; break;
            case '\n': out_ << "\\n"; break;
            case '\r': out_ << "\\r"; break;
            case '\t': out_ << "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out_ << buf;
                } else {
                    out_ << static_cast<char>(c);
                }
        }
    }
}

void JsonWriter::finish() {
    if (!stack_.empty()) throw Error("json writer: unclosed container");
    out_ << '\n';
}

}  // namespace noiselab
