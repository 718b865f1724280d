#pragma once

namespace topicnet {

/// Log level from TOPICNET_LOG (trace, debug, info, warn, error, off);
/// defaults to info. Logs go to stderr.
void init_logging();

}  // namespace topicnet
