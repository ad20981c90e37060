#pragma once

#include <stdexcept>
#include <string>

namespace bordify {

/// Shared error taxonomy.  The CLI maps each class onto a process exit code;
/// library users can catch the base class and inspect kind().
class error : public std::runtime_error {
public:
  enum class kind_t {
    usage,            // malformed input or violated precondition
    horizon,          // window/horizon too small, or an undecided limit
    window_escape,    // a computation left the generated window
    internal,         // broken invariant; always a bug, never user error
  };

  error(kind_t k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  kind_t kind() const { return kind_; }

private:
  kind_t kind_;
};

struct usage_error : error {
  explicit usage_error(const std::string& msg) : error(kind_t::usage, msg) {}
};

/// Raised when a window or horizon is provably too small for the requested
/// answer, or when a limit stays undecided at the given horizon.  Results are
/// never silently truncated.
struct horizon_error : error {
  explicit horizon_error(const std::string& msg) : error(kind_t::horizon, msg) {}
};

struct window_escape_error : error {
  explicit window_escape_error(const std::string& msg)
      : error(kind_t::window_escape, msg) {}
};

struct internal_error : error {
  explicit internal_error(const std::string& msg) : error(kind_t::internal, msg) {}
};

inline void internal_check(bool ok, const std::string& msg) {
  if (!ok) throw internal_error(msg);
}

}  // namespace bordify
