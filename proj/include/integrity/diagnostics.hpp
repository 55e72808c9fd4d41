#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace integrity {

// Warnings go to stderr unless a sink is installed. The sink is process-wide;
// install it before spawning worker threads.
using WarningSink = std::function<void(std::string_view)>;

void warn(std::string_view message);
WarningSink set_warning_sink(WarningSink sink);

// RAII capture used by tests and by the CLI to collect warnings.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
  WarningSink previous_;
};

}  // namespace integrity
