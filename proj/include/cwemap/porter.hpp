#pragma once

#include <string>

namespace cwemap {

/// Classic suffix-stripping stemmer for lowercase English words, matching
/// the reference implementation's published behavior rule for rule
/// (including its treatment of one- and two-letter words, which are
/// returned unchanged). Input containing anything but a-z is returned
/// unchanged.
std::string porter_stem(const std::string& token);

}  // namespace cwemap
