#include "easyfirst/log.h"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace easyfirst {

void InitLogging() {
  auto logger = spdlog::get("easyfirst");
  if (!logger) logger = spdlog::stderr_color_mt("easyfirst");
  logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("EASYFIRST_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace easyfirst
