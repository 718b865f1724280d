#include "topicnet/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace topicnet {

void init_logging() {
  auto logger = spdlog::stderr_color_mt("topicnet");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("TOPICNET_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace topicnet
