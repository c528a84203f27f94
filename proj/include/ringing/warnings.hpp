#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ringing {

// Non-fatal diagnostics (truncated pulses, pole patches, coarse steps).
// Each thread routes warnings to its innermost active WarningCapture, or to
// stderr when none is installed.
void warn(const std::string& message);

class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(const std::string& fragment) const;

 private:
  friend void warn(const std::string& message);
  std::vector<std::string> messages_;
  WarningCapture* previous_;
};

}  // namespace ringing
