#include "ringing/warnings.hpp"

#include <iostream>

namespace ringing {

namespace {
thread_local WarningCapture* active_capture = nullptr;
}

WarningCapture::WarningCapture() : previous_(active_capture) { active_capture = this; }

WarningCapture::~WarningCapture() { active_capture = previous_; }

bool WarningCapture::contains(const std::string& fragment) const {
  for (const auto& m : messages_) {
    if (m.find(fragment) != std::string::npos) return true;
  }
  return false;
}

void warn(const std::string& message) {
  if (active_capture != nullptr) {
    active_capture->messages_.push_back(message);
    return;
  }
  std::cerr << "warning: " << message << "\n";
}

}  // namespace ringing
