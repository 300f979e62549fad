#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace netweight {

// Real formatted with 12 significant digits, locale-independent ('.' decimal
// separator always).  Used for every number the artifact emits.
std::string format_real(double v);

std::string json_escape(std::string_view s);

// Minimal streaming JSON writer.  Key order is the call order, output has no
// whitespace surprises, so emitted documents are byte-stable.
class JsonWriter {
 public:
  JsonWriter& begin_obj();
  JsonWriter& end_obj();
  JsonWriter& begin_arr();
  JsonWriter& end_arr();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  // keeps string literals away from the bool overload
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& raw(std::string_view text);

  const std::string& str() const { return out_; }

 private:
  void separate();
  std::string out_;
  std::vector<bool> need_comma_;
  bool pending_key_ = false;
};

}  // namespace netweight
