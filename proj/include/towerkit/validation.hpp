#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace towerkit {

struct ValidationIssue {
  std::string code;     // short machine-readable tag, e.g. "rev-fixed-point"
  std::string message;  // human-readable description naming the cells involved
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::vector<ValidationIssue> notes;  // informational, does not affect ok()

  bool ok() const { return issues.empty(); }
  void add(const std::string& code, const std::string& message) {
    issues.push_back({code, message});
  }
  void note(const std::string& code, const std::string& message) {
    notes.push_back({code, message});
  }
  bool has_note(const std::string& code) const {
    for (const auto& n : notes)
      if (n.code == code) return true;
    return false;
  }
  void merge(const ValidationReport& other) {
    issues.insert(issues.end(), other.issues.begin(), other.issues.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
  std::string to_string() const {
    if (issues.empty() && notes.empty()) return "valid";
    std::ostringstream os;
    for (const auto& i : issues) os << "[" << i.code << "] " << i.message << "\n";
    for (const auto& n : notes) os << "(note) [" << n.code << "] " << n.message << "\n";
    return os.str();
  }
};

}  // namespace towerkit
