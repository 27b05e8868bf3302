#ifndef MILSTACK_VERSION_HPP
#define MILSTACK_VERSION_HPP

namespace milstack {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "milstack";

}  // namespace milstack

#endif
