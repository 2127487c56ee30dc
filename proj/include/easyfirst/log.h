#ifndef EASYFIRST_LOG_H_
#define EASYFIRST_LOG_H_

namespace easyfirst {

// Configures the default spdlog logger on stderr. The level comes from the
// EASYFIRST_LOG environment variable (trace, debug, info, warn, error, off);
// default is info.
void InitLogging();

}  // namespace easyfirst

#endif  // EASYFIRST_LOG_H_
