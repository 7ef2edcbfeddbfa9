#pragma once

#include <map>
#include <string>

#include "smellhunter/expected.hpp"

namespace smellhunter::cli {

struct HttpReply {
    int status = 0;
    std::string body;
};

// Thin blocking HTTP client for the gateway. Errors are transport failures only;
// non-2xx statuses come back as replies.
class GatewayClient {
public:
    explicit GatewayClient(std::string server_url);

    Expected<HttpReply, std::string> post_analysis(const std::map<std::string, std::string>& parts) const;
    Expected<HttpReply, std::string> get(const std::string& path,
                                         const std::multimap<std::string, std::string>& params = {}) const;

    const std::string& url() const { return url_; }

private:
    std::string url_;
};

}  // namespace smellhunter::cli
