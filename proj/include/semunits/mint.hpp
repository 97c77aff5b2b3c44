#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

namespace su {

// Issues UPRIs under a namespace. Seeded minters produce a reproducible
// sequence; `stream` separates sequences that share one seed.
class UpriMinter {
 public:
  explicit UpriMinter(std::string ns, std::optional<std::uint64_t> seed = std::nullopt,
                      const std::string& stream = "");

  std::string mint();
  const std::string& ns() const { return ns_; }
  bool seeded() const { return seeded_; }

 private:
  std::string ns_;
  bool seeded_;
  std::uint64_t state_;
  std::uint64_t salt_;
  std::uint64_t counter_ = 0;
  std::mutex mu_;
};

std::string mint_upri(const std::string& ns, std::optional<std::uint64_t> seed = std::nullopt);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace su
