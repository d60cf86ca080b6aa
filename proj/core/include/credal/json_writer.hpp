#pragma once

// Minimal streaming JSON emitter. Doubles are written with 17 significant
// digits ("%.17g") so that every value round-trips bit-exactly; non-finite
// values are written as the strings "-inf", "inf" and "nan".

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace credal {

std::string format_double(double v);

class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();
  JsonWriter& array(std::span<const double> values);
  JsonWriter& array(std::span<const std::size_t> values);

  template <typename T>
  JsonWriter& field(std::string_view k, const T& v) {
    key(k);
    return value(v);
  }

  const std::string& str() const noexcept { return out_; }

 private:
  void separator();

  std::string out_;
  // One entry per open container: true once it has a first element.
  std::vector<bool> has_items_;
  bool after_key_ = false;
};

std::string json_escape(std::string_view s);

}  // namespace credal
