#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace noiselab {

// Streaming JSON emitter with caller-controlled key order, 2-space
// indentation, and 17-significant-digit numbers. Non-finite doubles are
// emitted as null (JSON has no inf/nan). Used for all machine-readable tool
// output so payloads are byte-stable across runs.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();

    JsonWriter& key(const std::string& k);

    JsonWriter& value(double v);
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(long v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(unsigned long v);
    JsonWriter& value(long long v);
    JsonWriter& value(bool v);
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value(const std::string& s);
    JsonWriter& null_value();

    template <typename T>
    JsonWriter& field(const std::string& k, const T& v) {
        key(k);
        return value(v);
    }

    JsonWriter& null_field(const std::string& k) {
        key(k);
        return null_value();
    }

    // Emits the final newline; all containers must be closed.
    void finish();

private:
    struct Level {
        bool is_array;
        long count;
    };

    void before_item();
    void indent();
    void write_escaped(const std::string& s);

    std::ostream& out_;
    std::vector<Level> stack_;
    bool pending_key_ = false;
};

}  // namespace noiselab
